#pragma once

#include <string>

#include "blochlat/census.hpp"
#include "blochlat/lattice.hpp"

namespace blochlat {

/// FitReport serialization. The JSON form round-trips; the CSV forms mirror
/// the published volume-span and linear-combination table layouts.
std::string fit_report_to_json(const FitReport& report, const PrecisionContext& ctx,
                               const std::string& field_selector = "");
FitReport fit_report_from_json(const std::string& text, const PrecisionContext& ctx);

/// CSV: field key, basis names, basis volumes, fit ratio.
std::string fit_report_span_csv(const FitReport& report, const PrecisionContext& ctx,
                                const std::string& field_selector = "");

/// CSV: manifold, volume, kind, coefficient list.
std::string fit_report_lincomb_csv(const FitReport& report, const PrecisionContext& ctx);

/// CSV: kind,x,y,label rows for lattice_grid output.
std::string grid_to_csv(const std::vector<GridPoint>& points, const PrecisionContext& ctx);

/// Stats rows as CSV and JSON.
std::string stats_rows_to_csv(const std::vector<FieldStatsRow>& rows);
std::string stats_rows_to_json(const std::vector<FieldStatsRow>& rows);

std::string kind_name(VolumeSample::Kind kind);
VolumeSample::Kind kind_from_name(const std::string& name);

} // namespace blochlat

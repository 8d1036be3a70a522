#include "blochlat/report.hpp"

#include <json.hpp>
#include <sstream>

namespace blochlat {

using nlohmann::json;

std::string kind_name(VolumeSample::Kind kind) {
    return kind == VolumeSample::Kind::GEOMETRIC ? "geometric" : "exotic";
}

VolumeSample::Kind kind_from_name(const std::string& name) {
    if (name == "geometric")
        return VolumeSample::Kind::GEOMETRIC;
    if (name == "exotic")
        return VolumeSample::Kind::EXOTIC;
    throw FormatError("unknown kind '" + name + "'");
}

namespace {

json sample_to_json(const VolumeSample& s, const PrecisionContext& ctx) {
    return json{{"name", s.manifold_name},
                {"volume", format_real(s.volume, ctx)},
                {"kind", kind_name(s.kind)}};
}

VolumeSample sample_from_json(const json& j, const PrecisionContext& ctx) {
    return VolumeSample(j.at("name").get<std::string>(),
                        parse_real(j.at("volume").get<std::string>(), ctx),
                        kind_from_name(j.at("kind").get<std::string>()));
}

json coords_to_json(const std::vector<Rational>& coords) {
    json arr = json::array();
    for (const auto& c : coords)
        arr.push_back(format_rational(c));
    return arr;
}

std::vector<Rational> coords_from_json(const json& arr) {
    std::vector<Rational> out;
    for (const auto& c : arr)
        out.push_back(parse_rational(c.get<std::string>()));
    return out;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"')
            q += '"';
        q += c;
    }
    return q + "\"";
}

} // namespace

std::string fit_report_to_json(const FitReport& report, const PrecisionContext& ctx,
                               const std::string& field_selector) {
    json j;
    if (!field_selector.empty())
        j["field"] = field_selector;
    j["dimension"] = report.fit.dimension;
    j["fit_ratio"] = format_rational(report.fit.fit_ratio);
    j["fit_ratio_integral"] = report.fit.fit_ratio_integral;
    j["best_det"] = format_rational(report.fit.best_det);
    j["det_gcd"] = format_rational(report.fit.det_gcd);
    j["underdetermined"] = report.diagnostics.underdetermined;
    j["basis"] = json::array();
    for (const auto& b : report.fit.basis)
        j["basis"].push_back(sample_to_json(b, ctx));
    j["entries"] = json::array();
    for (const auto& e : report.fit.all_entries) {
        json je = sample_to_json(e.sample, ctx);
        je["coords"] = coords_to_json(e.coords);
        j["entries"].push_back(std::move(je));
    }
    j["expressions"] = json::array();
    for (const auto& ex : report.expressions) {
        json je = sample_to_json(ex.sample, ctx);
        je["coords"] = coords_to_json(ex.coords);
        je["lattice_violation"] = ex.lattice_violation;
        if (!ex.note.empty())
            je["note"] = ex.note;
        j["expressions"].push_back(std::move(je));
    }
    return j.dump(2);
}

FitReport fit_report_from_json(const std::string& text, const PrecisionContext& ctx) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw FormatError(std::string("fit report JSON: ") + e.what());
    }
    FitReport report;
    report.fit.dimension = j.at("dimension").get<int>();
    report.fit.fit_ratio = parse_rational(j.at("fit_ratio").get<std::string>());
    report.fit.fit_ratio_integral = j.value("fit_ratio_integral", true);
    report.fit.best_det = parse_rational(j.at("best_det").get<std::string>());
    report.fit.det_gcd = parse_rational(j.at("det_gcd").get<std::string>());
    report.diagnostics.underdetermined = j.value("underdetermined", false);
    for (const auto& b : j.at("basis"))
        report.fit.basis.push_back(sample_from_json(b, ctx));
    for (const auto& e : j.value("entries", json::array())) {
        RationalVecEntry entry;
        entry.sample = sample_from_json(e, ctx);
        entry.coords = coords_from_json(e.at("coords"));
        report.fit.all_entries.push_back(std::move(entry));
    }
    for (const auto& e : j.value("expressions", json::array())) {
        FitReport::Expression ex;
        ex.sample = sample_from_json(e, ctx);
        ex.coords = coords_from_json(e.at("coords"));
        ex.lattice_violation = e.value("lattice_violation", false);
        ex.note = e.value("note", "");
        report.expressions.push_back(std::move(ex));
    }
    return report;
}

std::string fit_report_span_csv(const FitReport& report, const PrecisionContext& ctx,
                                const std::string& field_selector) {
    std::ostringstream os;
    os << "field,basis_names,basis_volumes,fit_ratio\n";
    std::string names, vols;
    for (std::size_t i = 0; i < report.fit.basis.size(); ++i) {
        if (i) {
            names += ' ';
            vols += ' ';
        }
        names += report.fit.basis[i].manifold_name;
        vols += format_real(report.fit.basis[i].volume, ctx);
    }
    os << csv_quote(field_selector) << ',' << csv_quote(names) << ',' << csv_quote(vols) << ','
       << format_rational(report.fit.fit_ratio) << "\n";
    return os.str();
}

std::string fit_report_lincomb_csv(const FitReport& report, const PrecisionContext& ctx) {
    std::ostringstream os;
    os << "manifold,volume,kind,coefficients\n";
    for (const auto& ex : report.expressions) {
        std::string coeffs;
        for (std::size_t i = 0; i < ex.coords.size(); ++i) {
            if (i)
                coeffs += ' ';
            coeffs += format_rational(ex.coords[i]);
        }
        if (ex.lattice_violation)
            coeffs = coeffs.empty() ? "violation" : coeffs + " violation";
        os << csv_quote(ex.sample.manifold_name) << ',' << format_real(ex.sample.volume, ctx)
           << ',' << kind_name(ex.sample.kind) << ',' << csv_quote(coeffs) << "\n";
    }
    return os.str();
}

std::string grid_to_csv(const std::vector<GridPoint>& points, const PrecisionContext& ctx) {
    std::ostringstream os;
    os << "kind,x,y,label\n";
    for (const auto& p : points) {
        const char* kind = p.kind == GridPoint::Kind::LATTICE
                               ? "lattice"
                               : (p.kind == GridPoint::Kind::GEOMETRIC ? "geometric" : "exotic");
        os << kind << ',' << format_real(p.x, ctx) << ',' << format_real(p.y, ctx) << ','
           << csv_quote(p.label) << "\n";
    }
    return os.str();
}

std::string stats_rows_to_csv(const std::vector<FieldStatsRow>& rows) {
    std::ostringstream os;
    os << "degree,disc_bound,r2,found,total,percentage\n";
    for (const auto& r : rows)
        os << r.degree << ',' << r.discriminant_bound << ',' << r.r2 << ',' << r.found << ','
           << r.total << ',' << r.percentage_text() << "\n";
    return os.str();
}

std::string stats_rows_to_json(const std::vector<FieldStatsRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        json j;
        j["degree"] = r.degree;
        j["disc_bound"] = r.discriminant_bound;
        j["r2"] = r.r2;
        j["found"] = r.found;
        j["total"] = r.total;
        j["percentage"] = r.percentage_defined ? json(r.percentage_text()) : json(nullptr);
        arr.push_back(std::move(j));
    }
    return arr.dump(2);
}

} // namespace blochlat

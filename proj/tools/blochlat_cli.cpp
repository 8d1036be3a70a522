#include <CLI11.hpp>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "blochlat/census.hpp"
#include "blochlat/dilog.hpp"
#include "blochlat/report.hpp"
#include "blochlat/triangulation.hpp"

using namespace blochlat;

namespace {

struct GlobalConfig {
    unsigned precision = 64;
    long coeff_bound = 0; // 0: context default
    std::string format = "csv";
    bool allow_low_precision = false;
    int jobs = 1;

    PrecisionContext context() const {
        if (allow_low_precision)
            return PrecisionContext::low_precision(precision);
        return PrecisionContext::standard(precision);
    }
};

int exit_code_for(const Error& e) {
    // parse/domain errors are usage errors (2); computation failures are 1
    if (dynamic_cast<const FormatError*>(&e) || dynamic_cast<const DomainError*>(&e))
        return 2;
    return 1;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw FormatError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Field selector "<ascending coeffs>:<root index>", e.g. "4,0,-3,0,1:2".
std::pair<IntPolynomial, int> parse_field_selector(const std::string& text) {
    auto colon = text.rfind(':');
    if (colon == std::string::npos)
        throw FormatError("field selector must be '<coeffs>:<root index>'");
    std::vector<Integer> coeffs;
    std::string coeff_text = text.substr(0, colon);
    std::string tok;
    std::istringstream is(coeff_text);
    while (std::getline(is, tok, ','))
        coeffs.emplace_back(tok);
    int idx = std::stoi(text.substr(colon + 1));
    return {IntPolynomial(std::move(coeffs)).canonical(), idx};
}

void emit_quarantine(const GroupedCensus& grouped) {
    for (const auto& q : grouped.quarantined)
        std::cerr << "quarantined record " << q.line << ": " << q.message << "\n";
}

FitReport fit_one_group(const std::vector<VolumeSample>& samples, const PrecisionContext& ctx,
                        long coeff_bound, int r2) {
    return fit_field(samples, r2, ctx, coeff_bound);
}

int run_fit(const GlobalConfig& cfg, const std::string& census_path,
            const std::string& field_sel, bool all_fields, const std::string& out_path) {
    auto ctx = cfg.context();
    CensusParseResult parsed = parse_census_csv_file(census_path, ctx);
    for (const auto& e : parsed.errors)
        std::cerr << "bad row " << e.line << ": " << e.message << "\n";
    GroupedCensus grouped = group_by_field(parsed.records, ctx);
    emit_quarantine(grouped);

    std::vector<std::pair<FieldKey, std::vector<VolumeSample>>> targets;
    if (all_fields) {
        for (auto& [key, samples] : grouped.groups)
            targets.emplace_back(key, samples);
    } else {
        auto [poly, idx] = parse_field_selector(field_sel);
        FieldKey key{poly, idx};
        auto it = grouped.groups.find(key);
        if (it == grouped.groups.end())
            throw FormatError("no census records for field " + key.to_string());
        targets.emplace_back(it->first, it->second);
    }

    std::vector<std::string> outputs(targets.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        ScopedPrecision guard(ctx);
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= targets.size())
                break;
            const auto& [key, samples] = targets[i];
            int r2 = count_complex_places(key.polynomial, ctx);
            std::ostringstream os;
            try {
                FitReport report = fit_one_group(samples, ctx, cfg.coeff_bound, std::max(r2, 1));
                if (cfg.format == "json")
                    os << fit_report_to_json(report, ctx, key.to_string());
                else
                    os << fit_report_span_csv(report, ctx, key.to_string());
                if (report.diagnostics.underdetermined)
                    os << (cfg.format == "json" ? "" : "# UNDERDETERMINED\n");
            } catch (const Error& e) {
                os << "# field " << key.to_string() << " failed: " << e.what() << "\n";
            }
            outputs[i] = os.str();
        }
    };
    int jobs = std::max(1, cfg.jobs);
    std::vector<std::thread> pool;
    for (int i = 1; i < jobs; ++i)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        out = &file;
    }
    for (const auto& s : outputs)
        *out << s;
    return grouped.quarantined.empty() && parsed.errors.empty() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hyperbolic volume lattice toolkit"};
    app.require_subcommand(1);

    GlobalConfig cfg;
    if (const char* env = std::getenv("BLOCH_LATTICE_PRECISION"))
        cfg.precision = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
    app.add_option("--precision", cfg.precision, "decimal digits of working precision");
    app.add_option("--coeff-bound", cfg.coeff_bound, "integer-relation coefficient bound");
    app.add_option("--format", cfg.format, "output format: csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--jobs", cfg.jobs, "parallel workers for --all");
    app.add_flag("--allow-low-precision", cfg.allow_low_precision,
                 "permit contexts down to 6 digits (coefficient bound shrinks to 64)");

    // dilog
    std::string z_text;
    auto* cmd_dilog = app.add_subcommand("dilog", "ideal-tetrahedron volume D(z)");
    cmd_dilog->add_option("--z", z_text, "cross-ratio, e.g. '0.5+0.866025i'")->required();

    // volume
    std::string shapes_path;
    auto* cmd_volume = app.add_subcommand("volume", "sum of D over a shapes file");
    cmd_volume->add_option("shapes", shapes_path, "shapes JSON")->required();

    // solve
    std::string tri_path, seed_path;
    auto* cmd_solve = app.add_subcommand("solve", "solve the gluing equations by Newton iteration");
    cmd_solve->add_option("triangulation", tri_path, "triangulation JSON")->required();
    cmd_solve->add_option("--seed-shapes", seed_path, "initial shapes JSON")->required();

    // lindep
    std::vector<std::string> value_texts;
    auto* cmd_lindep = app.add_subcommand("lindep", "integer relation detection");
    cmd_lindep->add_option("values", value_texts, "decimal values")->required()->expected(-1);

    // fit
    std::string census_path, field_sel, out_path;
    bool all_fields = false;
    auto* cmd_fit = app.add_subcommand("fit", "best-fit volume lattice for a field");
    cmd_fit->add_option("census", census_path, "census CSV")->required();
    cmd_fit->add_option("--field", field_sel, "selector '<coeffs>:<root index>'");
    cmd_fit->add_flag("--all", all_fields, "fit every field in the census");
    cmd_fit->add_option("--output", out_path, "write the report here instead of stdout");

    // lincomb
    std::string lin_census, lin_report;
    auto* cmd_lincomb = app.add_subcommand("lincomb", "express census volumes over a fitted basis");
    cmd_lincomb->add_option("census", lin_census, "census CSV")->required();
    cmd_lincomb->add_option("fitreport", lin_report, "fit report JSON")->required();

    // grid
    std::string grid_report;
    std::vector<double> x_range, y_range;
    auto* cmd_grid = app.add_subcommand("grid", "plot-ready lattice grid CSV");
    cmd_grid->add_option("fitreport", grid_report, "fit report JSON")->required();
    cmd_grid->add_option("--x", x_range, "x range lo,hi")->expected(2)->delimiter(',');
    cmd_grid->add_option("--y", y_range, "y range lo,hi")->expected(2)->delimiter(',');

    // stats
    std::string obs_path, complete_path;
    int stat_degree = 0, stat_r2 = 0;
    long stat_bound = 0;
    std::string stat_mode = "concrete";
    auto* cmd_stats = app.add_subcommand("stats", "observed-field percentages");
    cmd_stats->add_option("observed", obs_path, "observed census CSV")->required();
    cmd_stats->add_option("complete", complete_path, "complete field census CSV")->required();
    cmd_stats->add_option("--degree", stat_degree, "polynomial degree")->required();
    cmd_stats->add_option("--disc-bound", stat_bound, "|D|^(1/n) cutoff")->required();
    cmd_stats->add_option("--r2", stat_r2, "complex places")->required();
    cmd_stats->add_option("--mode", stat_mode, "concrete|abstract")
        ->check(CLI::IsMember({"concrete", "abstract"}));

    // check-weeks
    std::string weeks_census;
    auto* cmd_weeks = app.add_subcommand("check-weeks",
                                         "minimal-volume diagnostics for one-place fields");
    cmd_weeks->add_option("census", weeks_census, "census CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        auto ctx = cfg.context();
        if (*cmd_dilog) {
            BigComplex z = parse_complex(z_text, ctx);
            std::cout << format_real(dilog_D(z, ctx), ctx) << "\n";
            return 0;
        }
        if (*cmd_volume) {
            ShapeAssignment s = load_shapes_json(shapes_path, ctx);
            std::cout << format_real(triangulation_volume(s, ctx), ctx) << "\n";
            return 0;
        }
        if (*cmd_solve) {
            Triangulation t = load_triangulation_json(tri_path, ctx);
            ShapeAssignment seed = load_shapes_json(seed_path, ctx);
            SolveResult result = solve_shapes_newton(t, seed, ctx);
            Real volume = triangulation_volume(result.shapes, ctx);
            if (cfg.format == "json") {
                std::ostringstream os;
                os << "{\n  \"shapes\": [";
                for (std::size_t i = 0; i < result.shapes.shapes.size(); ++i)
                    os << (i ? ", " : "") << '"'
                       << format_complex(result.shapes.shapes[i], ctx) << '"';
                os << "],\n  \"volume\": \"" << format_real(volume, ctx) << "\",\n"
                   << "  \"geometric\": " << (result.geometric ? "true" : "false") << ",\n"
                   << "  \"iterations\": " << result.iterations << "\n}\n";
                std::cout << os.str();
            } else {
                for (const auto& z : result.shapes.shapes)
                    std::cout << format_complex(z, ctx) << "\n";
                std::cout << "volume," << format_real(volume, ctx) << "\n"
                          << "geometric," << (result.geometric ? "true" : "false") << "\n";
            }
            return 0;
        }
        if (*cmd_lindep) {
            std::vector<Real> values;
            for (const auto& t : value_texts)
                values.push_back(parse_real(t, ctx));
            RelationResult dep = lindep(values, ctx, cfg.coeff_bound);
            if (!dep.is_relation()) {
                std::cout << "independent\n";
            } else {
                for (std::size_t i = 0; i < dep.coefficients.size(); ++i)
                    std::cout << (i ? " " : "") << dep.coefficients[i].str();
                std::cout << "\n";
            }
            return 0;
        }
        if (*cmd_fit)
            return run_fit(cfg, census_path, field_sel, all_fields, out_path);
        if (*cmd_lincomb) {
            CensusParseResult parsed = parse_census_csv_file(lin_census, ctx);
            FitReport base = fit_report_from_json(read_file(lin_report), ctx);
            std::vector<VolumeSample> samples;
            for (const auto& r : parsed.records)
                samples.push_back(r.to_sample());
            FitReport combined = fit_with_basis(samples, base.fit.basis, ctx, cfg.coeff_bound);
            // violations relative to the base report's fit ratio
            for (auto& ex : combined.expressions) {
                for (const auto& c : ex.coords)
                    if (denominator_of(c * base.fit.fit_ratio) != 1) {
                        ex.lattice_violation = true;
                        ex.note = "denominator exceeds fit ratio " +
                                  format_rational(base.fit.fit_ratio);
                    }
            }
            if (cfg.format == "json")
                std::cout << fit_report_to_json(combined, ctx);
            else
                std::cout << fit_report_lincomb_csv(combined, ctx);
            return 0;
        }
        if (*cmd_grid) {
            FitReport report = fit_report_from_json(read_file(grid_report), ctx);
            ScopedPrecision guard(ctx);
            Real x0 = x_range.size() == 2 ? Real(x_range[0]) : Real(0);
            Real x1 = x_range.size() == 2 ? Real(x_range[1]) : Real(1);
            Real y0 = y_range.size() == 2 ? Real(y_range[0]) : Real(0);
            Real y1 = y_range.size() == 2 ? Real(y_range[1]) : Real(1);
            auto points = lattice_grid(report, x0, x1, y0, y1, ctx);
            std::cout << grid_to_csv(points, ctx);
            return 0;
        }
        if (*cmd_stats) {
            CensusParseResult parsed = parse_census_csv_file(obs_path, ctx);
            GroupedCensus grouped = group_by_field(parsed.records, ctx);
            emit_quarantine(grouped);
            std::vector<FieldKey> observed;
            for (const auto& [key, _] : grouped.groups)
                observed.push_back(key);
            auto complete = parse_complete_census_csv_file(complete_path);
            StatsMode mode = stat_mode == "abstract" ? StatsMode::ABSTRACT : StatsMode::CONCRETE;
            FieldStatsRow row = field_statistics(observed, complete, mode, stat_degree,
                                                 stat_bound, stat_r2, ctx);
            if (cfg.format == "json")
                std::cout << stats_rows_to_json({row});
            else
                std::cout << stats_rows_to_csv({row});
            return grouped.quarantined.empty() && parsed.errors.empty() ? 0 : 1;
        }
        if (*cmd_weeks) {
            CensusParseResult parsed = parse_census_csv_file(weeks_census, ctx);
            GroupedCensus grouped = group_by_field(parsed.records, ctx);
            emit_quarantine(grouped);
            bool any_violation = false;
            for (const auto& [key, samples] : grouped.groups) {
                int r2 = count_complex_places(key.polynomial, ctx);
                if (r2 != 1)
                    continue;
                try {
                    auto clean = dedupe_volumes(samples, ctx);
                    auto entries = build_rational_vectors(clean, 1, ctx, cfg.coeff_bound);
                    LatticeFit fit = best_fit_basis(entries, 1);
                    WeeksDiagnostic diag = check_weeks_bound(fit, ctx);
                    std::cout << key.to_string() << ","
                              << (diag.violated ? "STRENGTHENED-CONJECTURE-VIOLATION" : "ok")
                              << "," << format_real(diag.implied_generator, 6) << ","
                              << diag.message << "\n";
                    any_violation = any_violation || diag.violated;
                } catch (const Error& e) {
                    std::cout << key.to_string() << ",error,," << e.what() << "\n";
                }
            }
            (void)any_violation;
            return grouped.quarantined.empty() ? 0 : 1;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

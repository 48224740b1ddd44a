#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "thompson/analysis.hpp"
#include "thompson/approx.hpp"
#include "thompson/errors.hpp"
#include "thompson/funcspec.hpp"
#include "thompson/io.hpp"
#include "thompson/plmap.hpp"

namespace {

using namespace thompson;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitCertification = 3;

DiffeoSpec build_spec(const std::string& expr, const std::string& family,
                      const std::string& space_name) {
    if (expr.empty() == family.empty()) {
        throw CLI::ValidationError("exactly one of --f and --family is required");
    }
    DiffeoSpec spec = family.empty() ? DiffeoSpec::from_expression(expr, Space::interval)
                                     : DiffeoSpec::family(family);
    if (!space_name.empty()) {
        spec = spec.with_space(space_name == "circle" ? Space::circle_lift : Space::interval);
    }
    return spec;
}

FuncValidation validate_spec(const DiffeoSpec& spec) {
    return spec.space() == Space::interval ? validate_interval_diffeo(spec, 4096)
                                           : validate_circle_lift(spec, 4096);
}

void print_violations(const FuncValidation& v) {
    for (const auto& viol : v.violations) {
        std::cerr << "validation: " << viol.what << " (at x = " << viol.x << ")\n";
    }
}

double ms_between(std::chrono::steady_clock::time_point a,
                  std::chrono::steady_clock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
}

int run_approximate(const std::string& expr, const std::string& family,
                    const std::string& space_name, double epsilon, std::optional<double> S,
                    std::optional<long long> grid, const std::string& out_path,
                    const std::string& report_path) {
    const DiffeoSpec spec = build_spec(expr, family, space_name);
    const FuncValidation fv = validate_spec(spec);
    if (!fv.ok()) {
        print_violations(fv);
        return kExitValidation;
    }

    const auto t0 = std::chrono::steady_clock::now();
    const ApproxResult res = approximate(spec, epsilon, S);
    const auto t1 = std::chrono::steady_clock::now();

    const long long grid_size =
        grid.value_or(std::max<long long>(4096, 4 * static_cast<long long>(res.g.segment_count())));
    const Certificate cert = certified_sup_distance(spec, res.g, grid_size);
    const auto t2 = std::chrono::steady_clock::now();
    const ThompsonValidation tv = validate_thompson(res.g);

    write_element(out_path, res.g);

    if (!report_path.empty()) {
        nlohmann::json report;
        report["f"] = spec.label();
        report["space"] = spec.space() == Space::interval ? "interval" : "circle";
        report["epsilon"] = res.params.epsilon;
        report["S"] = res.params.S;
        report["Delta"] = res.params.Delta;
        report["n"] = res.params.n;
        report["delta"] = res.params.delta;
        report["pieces"] = res.g.segment_count();
        report["certificate"] = {{"kind", "sup-distance"},
                                 {"lower", cert.lower},
                                 {"upper", cert.upper},
                                 {"grid", cert.grid_size},
                                 {"witness_x", cert.witness_x}};
        nlohmann::json viols = nlohmann::json::array();
        for (const auto& viol : tv.violations) {
            viols.push_back(viol.detail);
        }
        report["validation"] = {{"ok", tv.ok()}, {"violations", viols}};
        report["timing_ms"] = {{"construct", ms_between(t0, t1)}, {"certify", ms_between(t1, t2)}};
        std::ofstream out(report_path);
        if (!out) {
            throw Error("cannot open " + report_path + " for writing");
        }
        out << report.dump(2) << '\n';
    }

    std::cout << std::setprecision(17);
    std::cout << "f " << spec.label() << "\n"
              << "pieces " << res.g.segment_count() << "\n"
              << "certificate lower " << cert.lower << " upper " << cert.upper << " grid "
              << cert.grid_size << "\n"
              << "wrote " << out_path << "\n";

    if (!tv.ok()) {
        for (const auto& viol : tv.violations) {
            std::cerr << "thompson: " << viol.detail << "\n";
        }
        return kExitValidation;
    }
    if (!(cert.upper < epsilon)) {
        std::cerr << "certification failed: upper " << cert.upper << " >= epsilon " << epsilon
                  << "\n";
        return kExitCertification;
    }
    return kExitOk;
}

int run_compose(const std::string& a_path, const std::string& b_path,
                const std::string& out_path) {
    const PLMap a = read_element(a_path);
    const PLMap b = read_element(b_path);
    write_element(out_path, compose(a, b));
    std::cout << "wrote " << out_path << "\n";
    return kExitOk;
}

int run_invert(const std::string& a_path, const std::string& out_path) {
    const PLMap a = read_element(a_path);
    const ThompsonValidation tv = validate_thompson(a);
    if (!tv.ok()) {
        for (const auto& viol : tv.violations) {
            std::cerr << "thompson: " << viol.detail << "\n";
        }
        return kExitValidation;
    }
    write_element(out_path, invert(a));
    std::cout << "wrote " << out_path << "\n";
    return kExitOk;
}

int run_validate(const std::string& path) {
    const PLMap g = read_element(path);
    std::cout << "space " << to_string(g.space()) << "\n"
              << "pieces " << g.segment_count() << "\n";
    std::cout << "slopes [";
    for (std::size_t i = 0; i < g.segment_count(); ++i) {
        std::cout << (i ? ", " : "") << g.segment_slope_string(i);
    }
    std::cout << "]\n";
    const ThompsonValidation tv = validate_thompson(g);
    for (const auto& viol : tv.violations) {
        std::cout << "violation (segment " << viol.segment << "): " << viol.detail << "\n";
    }
    std::cout << (tv.ok() ? "ok" : "not a Thompson element") << "\n";
    return tv.ok() ? kExitOk : kExitValidation;
}

int run_sample(const std::string& path, long long n_points, const std::string& f_expr,
               const std::string& csv_path) {
    const PLMap g = read_element(path);
    std::optional<DiffeoSpec> f;
    if (!f_expr.empty()) {
        f = DiffeoSpec::from_expression(f_expr, g.space());
    }
    std::ofstream csv(csv_path);
    if (!csv) {
        throw Error("cannot open " + csv_path + " for writing");
    }
    csv << std::setprecision(17);
    csv << (f ? "x,g,f,diff\n" : "x,g\n");
    for (long long i = 0; i <= n_points; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(n_points);
        const double gv = g.eval_real(x);
        if (f) {
            const double fv = f->eval(x);
            csv << x << ',' << gv << ',' << fv << ',' << fv - gv << '\n';
        } else {
            csv << x << ',' << gv << '\n';
        }
    }
    if (!csv) {
        throw Error("failed writing " + csv_path);
    }
    std::cout << "wrote " << csv_path << "\n";
    return kExitOk;
}

int run_gap(const std::string& expr, const std::string& family, const std::string& space_name,
            long long grid) {
    const DiffeoSpec spec = build_spec(expr, family, space_name);
    const FuncValidation fv = validate_spec(spec);
    if (!fv.ok()) {
        print_violations(fv);
        return kExitValidation;
    }
    const GapPoint gp = discreteness_floor(spec, grid);
    std::cout << std::setprecision(17);
    std::cout << "x_star " << gp.x_star << "\n"
              << "mu " << gp.mu << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Thompson group F/T approximation of interval and circle diffeomorphisms"};
    app.require_subcommand(1);
    int rc = kExitOk;

    std::string f_expr, family, space_name, out_path, report_path, csv_path;
    std::string a_path, b_path;
    double epsilon = 0.0;
    std::optional<double> S;
    std::optional<long long> grid;
    long long gap_grid = 4096;
    long long n_points = 0;

    auto* ap = app.add_subcommand("approximate",
                                  "Construct an element of F or T within epsilon of f");
    ap->add_option("--f", f_expr, "expression for f(x), e.g. \"x + 0.3*x*(1-x)\"");
    ap->add_option("--family", family, "built-in family, e.g. bump:0.3, rot:0.25, sine:0.2");
    ap->add_option("--space", space_name, "interval or circle (default: the family's space)")
        ->check(CLI::IsMember({"interval", "circle"}));
    ap->add_option("--epsilon", epsilon, "target sup-norm accuracy, in (0,1)")->required();
    ap->add_option("--S", S, "explicit bound on max f' (default: estimated)");
    ap->add_option("--grid", grid, "certification grid size (default: max(4096, 4*pieces))");
    ap->add_option("--out", out_path, "output element file")->required();
    ap->add_option("--report", report_path, "JSON run report");
    ap->callback([&] {
        rc = run_approximate(f_expr, family, space_name, epsilon, S, grid, out_path,
                             report_path);
    });

    auto* comp = app.add_subcommand("compose", "Compose two elements: out(x) = A(B(x))");
    comp->add_option("A", a_path, "element file")->required();
    comp->add_option("B", b_path, "element file")->required();
    comp->add_option("--out", out_path, "output element file")->required();
    comp->callback([&] { rc = run_compose(a_path, b_path, out_path); });

    auto* inv = app.add_subcommand("invert", "Invert an element");
    inv->add_option("A", a_path, "element file")->required();
    inv->add_option("--out", out_path, "output element file")->required();
    inv->callback([&] { rc = run_invert(a_path, out_path); });

    auto* val = app.add_subcommand("validate", "Check Thompson membership, print slopes");
    val->add_option("FILE", a_path, "element file")->required();
    val->callback([&] { rc = run_validate(a_path); });

    auto* samp = app.add_subcommand("sample", "Sample an element to CSV");
    samp->add_option("FILE", a_path, "element file")->required();
    samp->add_option("--points", n_points, "number of uniform steps (>= 2)")
        ->required()
        ->check(CLI::Range(2LL, 100'000'000LL));
    samp->add_option("--f", f_expr, "co-sample this expression and emit a diff column");
    samp->add_option("--csv", csv_path, "output CSV file")->required();
    samp->callback([&] { rc = run_sample(a_path, n_points, f_expr, csv_path); });

    auto* gap = app.add_subcommand("gap", "Largest power-of-2 gap of f' (discreteness floor)");
    gap->add_option("--f", f_expr, "expression for f(x)");
    gap->add_option("--family", family, "built-in family");
    gap->add_option("--space", space_name, "interval or circle")
        ->check(CLI::IsMember({"interval", "circle"}));
    gap->add_option("--grid", gap_grid, "sampling grid (default 4096)");
    gap->callback([&] { rc = run_gap(f_expr, family, space_name, gap_grid); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const RotationInput& e) {
        std::cerr << "rotation: " << e.what() << "\n";
        return kExitValidation;
    } catch (const InvalidDiffeo& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const SpaceMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ConstructionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCertification;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return rc;
}

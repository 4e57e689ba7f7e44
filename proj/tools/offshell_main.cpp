// offshell: batch driver for the off-shell radiation-reaction model.
//
//   offshell run         --config FILE [--out DIR] [--precision BITS] [--form scalar|vector]
//   offshell eigen-trace --config FILE [--out DIR] [--precision BITS] [--form scalar|vector]
//   offshell sweep       --config FILE [--d-values 0.5,1,2] [--out DIR] [--precision BITS]
//   offshell fixed-point --eps E --rho R [--D D] [--precision BITS]
//   offshell regdemo     [--seed N] [--precision BITS]
//   offshell k-grid      [--eps-range a:b:n] [--deps-range a:b:n] [--ddeps V] [--rho V] [--D D] [--out FILE]
//
// Exit status: 0 ok (a diverged run is a result), 2 configuration error,
// 3 numerical failure.

#include "offshell/dynamics.hpp"
#include "offshell/errors.hpp"
#include "offshell/scenario.hpp"
#include "offshell/stability.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

using namespace offshell;

namespace {

struct Common {
    std::string config;
    std::string out = ".";
    std::optional<int> precision;
    std::string form;
};

std::optional<Form> form_flag(const std::string& f) {
    if (f.empty()) return std::nullopt;
    if (f == "scalar") return Form::scalar;
    if (f == "vector") return Form::vector;
    throw ConfigError("--form must be scalar or vector");
}

// Installs the run precision before anything real-valued is parsed.
struct Loaded {
    nlohmann::json doc;
    std::unique_ptr<PrecisionScope> scope;
};

Loaded load(const Common& c) {
    Loaded l;
    l.doc = load_json_file(c.config);
    l.scope = std::make_unique<PrecisionScope>(resolve_precision_bits(l.doc, c.precision));
    return l;
}

std::unique_ptr<PrecisionScope> bare_precision(const std::optional<int>& flag) {
    return std::make_unique<PrecisionScope>(resolve_precision_bits(nlohmann::json::object(), flag));
}

int cmd_run(const Common& c, bool eigen) {
    Loaded l = load(c);
    Scenario s = parse_scenario(l.doc, form_flag(c.form));
    if (eigen) s.emit.eigenvalues = true;
    const RunReport r = run_scenario(s);
    const std::string stem = eigen ? s.name + ".eigen" : s.name;
    write_run_files(c.out, stem, s, r);

    const auto& t = r.trajectory;
    std::cout << s.name << ": " << to_string(t.outcome.kind) << " at tau = "
              << to_decimal(t.tau_end, 12);
    if (r.blowup_fit) std::cout << " (pole fit " << to_decimal(*r.blowup_fit, 12) << ")";
    std::cout << ", " << t.samples.size() << " samples -> "
              << (std::filesystem::path(c.out) / (stem + ".csv")).string() << '\n';
    return exit_status(t.outcome.kind);
}

int cmd_sweep(const Common& c, const std::string& d_text) {
    Loaded l = load(c);
    const Scenario s = parse_scenario(l.doc, form_flag(c.form));
    const std::vector<Real> ds = d_text.empty() ? s.d_values : parse_real_list(d_text);
    if (ds.empty()) throw ConfigError("sweep: give --d-values or d_values in the config");
    const auto rows = run_sweep(s, ds, c.out);
    int status = kExitOk;
    for (const auto& r : rows) {
        std::cout << "D = " << to_decimal(r.D, 8) << ": " << to_string(r.outcome);
        if (r.blowup_tau) std::cout << " at tau = " << to_decimal(*r.blowup_tau, 10);
        if (!r.error.empty()) std::cout << " (" << r.error << ")";
        std::cout << '\n';
        status = std::max(status, exit_status(r.outcome));
    }
    std::cout << "summary -> "
              << (std::filesystem::path(c.out) / (s.name + ".sweep.csv")).string() << '\n';
    return status;
}

int cmd_fixed_point(const std::string& eps_t, const std::string& rho_t, const std::string& d_t,
                    const std::optional<int>& precision) {
    auto scope = bare_precision(precision);
    ModelParams p;
    p.D = parse_real(d_t);
    p.precision_bits = scope->bits();
    if (!(p.D > 0)) throw ConfigError("D must be positive");
    ScalarState s;
    try {
        s = constant_eps_fixed_point(parse_real(eps_t), parse_real(rho_t), p);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    const auto f = scalar_rhs(s, p);
    Real residual(0);
    for (const auto& v : f) residual = std::max(residual, abs(v));
    const EigenSpectrum spec = eigenvalues(jacobian(s, p));
    const Real tol = pow2(-(scope->bits() / 2));

    const int digits = 30;
    std::cout << "fixed point (eps, deps, ddeps, rho, drho, eta):\n";
    for (const auto& v : s.to_array()) std::cout << "  " << to_decimal(v, digits) << '\n';
    std::cout << "max |f(x*)| = " << to_decimal(residual, 6) << '\n';
    std::cout << "eigenvalues (re, im):\n";
    for (const auto& z : spec.values) {
        std::cout << "  " << to_decimal(z.re, 20) << "  " << to_decimal(z.im, 20) << '\n';
    }
    std::cout << "positive real parts: " << spec.count_positive_real(tol) << '\n';
    std::cout << "classification (tol " << to_decimal(tol, 3)
              << "): " << to_string(classify_local(spec, tol)) << '\n';
    const Real bound = scope->bits() >= 256 ? Real("1e-30") : pow2(-(scope->bits() - 8));
    if (residual > bound) {
        std::cerr << "residual exceeds " << to_decimal(bound, 3) << '\n';
        return kExitNumeric;
    }
    return kExitOk;
}

int cmd_regdemo(unsigned seed, const std::optional<int>& precision) {
    auto scope = bare_precision(precision);
    std::cout << "regularization identities, seed " << seed << ", " << scope->bits()
              << " bits\n";
    bool all = true;
    for (const auto& c : regularization_checks(seed)) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << "  [tol " << c.tolerance
                  << "; " << c.detail << "]\n";
        all = all && c.passed;
    }
    return all ? kExitOk : kExitNumeric;
}

void parse_range(const std::string& text, Real& lo, Real& hi, int& n) {
    const auto a = text.find(':');
    const auto b = text.rfind(':');
    if (a == std::string::npos || a == b) throw ConfigError("range must look like lo:hi:n");
    lo = parse_real(text.substr(0, a));
    hi = parse_real(text.substr(a + 1, b - a - 1));
    try {
        n = std::stoi(text.substr(b + 1));
    } catch (const std::exception&) {
        throw ConfigError("range point count is not an integer: " + text);
    }
}

int cmd_k_grid(const std::string& eps_r, const std::string& deps_r, const std::string& ddeps,
               const std::string& rho, const std::string& d, const std::string& out,
               const std::optional<int>& precision) {
    auto scope = bare_precision(precision);
    KGridSpec g;
    if (!eps_r.empty()) parse_range(eps_r, g.eps_min, g.eps_max, g.eps_points);
    if (!deps_r.empty()) parse_range(deps_r, g.deps_min, g.deps_max, g.deps_points);
    g.ddeps = parse_real(ddeps);
    g.rho = parse_real(rho);
    g.D = parse_real(d);
    if (out.empty() || out == "-") {
        write_k_grid_csv(std::cout, g, scope->bits());
    } else {
        std::ofstream f(out);
        if (!f) throw ConfigError("cannot write " + out);
        write_k_grid_csv(f, g, scope->bits());
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Off-shell radiation-reaction integrator"};
    app.require_subcommand(1);

    Common run_opts, eigen_opts, sweep_opts;
    std::string d_values;
    auto add_common = [](CLI::App* sub, Common& c) {
        sub->add_option("--config", c.config, "Scenario JSON file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", c.out, "Output directory");
        sub->add_option("--precision", c.precision, "Mantissa bits (>= 53)");
        sub->add_option("--form", c.form, "Override the formulation")
            ->check(CLI::IsMember({"scalar", "vector"}));
    };
    auto* run = app.add_subcommand("run", "Integrate one scenario");
    add_common(run, run_opts);
    auto* eigen = app.add_subcommand("eigen-trace", "Run with eigenvalue columns");
    add_common(eigen, eigen_opts);
    auto* sweep = app.add_subcommand("sweep", "Repeat a scenario over several D");
    add_common(sweep, sweep_opts);
    sweep->add_option("--d-values", d_values, "Comma-separated D list");

    std::string fp_eps, fp_rho = "0", fp_d = "1";
    std::optional<int> fp_precision;
    auto* fixed = app.add_subcommand("fixed-point", "Constant-eps solution and its spectrum");
    fixed->add_option("--eps", fp_eps)->required();
    fixed->add_option("--rho", fp_rho);
    fixed->add_option("--D", fp_d);
    fixed->add_option("--precision", fp_precision);

    unsigned seed = 1;
    std::optional<int> rd_precision;
    auto* regdemo = app.add_subcommand("regdemo", "Check the regularization identities");
    regdemo->add_option("--seed", seed);
    regdemo->add_option("--precision", rd_precision);

    std::string kg_eps, kg_deps, kg_ddeps = "0", kg_rho = "0", kg_d = "1", kg_out;
    std::optional<int> kg_precision;
    auto* kgrid = app.add_subcommand("k-grid", "K-potential values on an (eps, deps) grid");
    kgrid->add_option("--eps-range", kg_eps, "lo:hi:n");
    kgrid->add_option("--deps-range", kg_deps, "lo:hi:n");
    kgrid->add_option("--ddeps", kg_ddeps);
    kgrid->add_option("--rho", kg_rho);
    kgrid->add_option("--D", kg_d);
    kgrid->add_option("--out", kg_out, "CSV file (default stdout)");
    kgrid->add_option("--precision", kg_precision);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*run) return cmd_run(run_opts, false);
        if (*eigen) return cmd_run(eigen_opts, true);
        if (*sweep) return cmd_sweep(sweep_opts, d_values);
        if (*fixed) return cmd_fixed_point(fp_eps, fp_rho, fp_d, fp_precision);
        if (*regdemo) return cmd_regdemo(seed, rd_precision);
        if (*kgrid) return cmd_k_grid(kg_eps, kg_deps, kg_ddeps, kg_rho, kg_d, kg_out, kg_precision);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DomainError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ConvergenceError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitOk;
}

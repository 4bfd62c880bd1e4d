// sobosvd: experiment driver.
//
//   sobosvd <svd-report|bounds|poisson|expsum|pathology|hosvd3> [--config FILE] [flags]
//
// Exit codes: 0 success, 1 usage or config error, 2 bound violation,
// 3 numerical failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <sobosvd/experiments.hpp>

namespace {

using sobosvd::ExperimentConfig;

struct Overrides {
    std::optional<std::string> function, expression, out;
    std::optional<int> n, q, rmax;
    std::optional<double> delta;
    std::optional<std::vector<int>> ns;
    bool plot = false, d3 = false;
};

ExperimentConfig load_config(const std::string& path) {
    ExperimentConfig cfg;
    if (path.empty()) return cfg;
    std::ifstream in(path);
    if (!in) throw sobosvd::InvalidArgument("cannot open config file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw sobosvd::InvalidArgument("config " + path + ": " + e.what());
    }
    static const std::vector<std::string> known{"function", "expression", "n", "q", "rmax", "delta", "ns", "d3", "plot", "out"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw sobosvd::InvalidArgument("config " + path + ": unknown key '" + it.key() + "'");
    try {
        cfg.function = j.value("function", cfg.function);
        cfg.expression = j.value("expression", cfg.expression);
        cfg.n = j.value("n", cfg.n);
        cfg.q = j.value("q", cfg.q);
        cfg.rmax = j.value("rmax", cfg.rmax);
        cfg.delta = j.value("delta", cfg.delta);
        cfg.ns = j.value("ns", cfg.ns);
        cfg.d3 = j.value("d3", cfg.d3);
        cfg.plot = j.value("plot", cfg.plot);
        cfg.out = j.value("out", cfg.out);
    } catch (const nlohmann::json::exception& e) {
        throw sobosvd::InvalidArgument("config " + path + ": " + e.what());
    }
    return cfg;
}

void apply(ExperimentConfig& cfg, const Overrides& o) {
    if (o.function) cfg.function = *o.function;
    if (o.expression) {
        cfg.expression = *o.expression;
        if (!o.function) cfg.function = "custom";
    }
    if (o.out) cfg.out = *o.out;
    if (o.n) cfg.n = *o.n;
    if (o.q) cfg.q = *o.q;
    if (o.rmax) cfg.rmax = *o.rmax;
    if (o.delta) cfg.delta = *o.delta;
    if (o.ns) cfg.ns = *o.ns;
    cfg.plot = cfg.plot || o.plot;
    cfg.d3 = cfg.d3 || o.d3;
}

int run(const std::string& cmd, const ExperimentConfig& cfg) {
    std::filesystem::create_directories(cfg.out);
    if (cmd == "svd-report") {
        sobosvd::write_table(sobosvd::run_svd_report(cfg), cfg, "svd_report");
    } else if (cmd == "bounds") {
        const auto rep = sobosvd::run_bounds(cfg);
        sobosvd::write_table(sobosvd::bound_table(rep), cfg, "bounds");
        if (!rep.all_satisfied()) {
            for (const auto& r : rep.rows)
                if (!r.satisfied)
                    std::cerr << "violated: " << r.bound << " r=" << r.r << " lower=" << r.lower << " actual=" << r.actual
                              << " upper=" << r.upper << " residual=" << r.residual << '\n';
            return 2;
        }
    } else if (cmd == "poisson") {
        sobosvd::write_table(sobosvd::run_poisson(cfg), cfg, "poisson");
    } else if (cmd == "expsum") {
        sobosvd::write_table(sobosvd::run_expsum(cfg), cfg, "expsum");
    } else if (cmd == "pathology") {
        sobosvd::write_table(sobosvd::run_pathology(sobosvd::default_pathology_ns()), cfg, "pathology");
    } else if (cmd == "hosvd3") {
        sobosvd::write_table(sobosvd::run_hosvd3(cfg), cfg, "hosvd3");
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sobolev-norm SVDs of bivariate and trivariate functions"};
    app.require_subcommand(1);
    std::string config_path;
    Overrides o;

    const std::vector<std::pair<std::string, std::string>> subs{
        {"svd-report", "singular values and truncation errors versus rank"},
        {"bounds", "evaluate the singular-value relations and H1 error bounds"},
        {"poisson", "Galerkin solutions and guaranteed rank truncation"},
        {"expsum", "exponential sums and separable representations"},
        {"pathology", "unbounded projections on H^1_0(0,1)"},
        {"hosvd3", "mode singular values of a 3-D function"},
    };
    for (const auto& [name, help] : subs) {
        auto* sc = app.add_subcommand(name, help);
        sc->add_option("--config", config_path, "JSON config file");
        sc->add_option("--function", o.function, "r06, absdiag, expcos, ring, coscos or custom");
        sc->add_option("--expression", o.expression, "expression in x, y (and z) for the custom function");
        sc->add_option("--n", o.n, "maximal frequency");
        sc->add_option("--q", o.q, "quadrature oversampling factor");
        sc->add_option("--rmax", o.rmax, "largest rank");
        sc->add_option("--delta", o.delta, "exponential-sum accuracy");
        sc->add_option("--ns", o.ns, "list of sizes for the Poisson experiment")->delimiter(',');
        sc->add_option("--out", o.out, "output directory");
        sc->add_flag("--plot", o.plot, "also write an SVG plot");
        sc->add_flag("--d3", o.d3, "include the 3-D bounds");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        ExperimentConfig cfg = load_config(config_path);
        apply(cfg, o);
        cfg.validate();
        return run(app.get_subcommands().front()->get_name(), cfg);
    } catch (const sobosvd::InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const sobosvd::ConvergenceError& e) {
        std::cerr << "numerical failure: " << e.what() << " (residual " << e.residual() << ")\n";
        return 3;
    } catch (const sobosvd::NonFiniteError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

#pragma once
//
// Experiment drivers producing tables (CSV) and optional SVG line plots.
//
// Thm-2.2-style identity checks are evaluated in quad precision, so this
// header needs Boost.Multiprecision and libquadmath.
//

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/float128.hpp>

#include "bounds.hpp"
#include "expression.hpp"
#include "expsum.hpp"
#include "pathology.hpp"
#include "poisson.hpp"
#include "test_functions.hpp"

namespace sobosvd {

using Quad = boost::multiprecision::float128;

struct ExperimentConfig {
    std::string function = "r06";
    std::string expression;  // used when function == "custom"
    int n = 16;
    int q = 4;
    int rmax = 8;
    double delta = 1e-6;
    std::vector<int> ns{8, 16, 32, 64};
    bool d3 = false;
    bool plot = false;
    std::string out = ".";

    void validate() const {
        if (n < 1) throw InvalidArgument("config: n must be >= 1");
        if (q < 2) throw InvalidArgument("config: q must be >= 2");
        if (rmax < 0 || rmax > 2 * n + 1) throw InvalidArgument("config: rmax must lie in [0, 2n+1]");
        if (function == "custom" && expression.empty()) throw InvalidArgument("config: custom function needs an expression");
        if (function != "custom") function_by_tag(function);
        for (int m : ns)
            if (m < 1) throw InvalidArgument("config: entries of ns must be >= 1");
    }

    Function2D function2d() const {
        if (function == "custom") {
            Expression e(expression);
            return [e](double x, double y) { return e(x, y); };
        }
        return function_by_tag(function);
    }

    Function3D function3d() const {
        if (function == "custom") {
            Expression e(expression);
            return [e](double x, double y, double z) { return e(x, y, z); };
        }
        return function3d_by_tag(function);
    }
};

// ---------------------------------------------------------------------------
// Tables
// ---------------------------------------------------------------------------

inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    explicit Table(std::vector<std::string> cols = {}) : columns(std::move(cols)) {}

    class RowBuilder {
    public:
        explicit RowBuilder(Table& t) : t_(t) {}
        RowBuilder& operator<<(double v) { cells_.push_back(format_number(v)); return *this; }
        RowBuilder& operator<<(Index v) { cells_.push_back(std::to_string(v)); return *this; }
        RowBuilder& operator<<(int v) { cells_.push_back(std::to_string(v)); return *this; }
        RowBuilder& operator<<(bool v) { cells_.push_back(v ? "1" : "0"); return *this; }
        RowBuilder& operator<<(const std::string& v) { cells_.push_back(v); return *this; }
        RowBuilder& operator<<(const char* v) { cells_.push_back(v); return *this; }
        ~RowBuilder() noexcept(false) {
            if (cells_.size() != t_.columns.size())
                throw InvalidArgument("Table: row has " + std::to_string(cells_.size()) + " cells, expected " +
                                      std::to_string(t_.columns.size()));
            t_.rows.push_back(std::move(cells_));
        }

    private:
        Table& t_;
        std::vector<std::string> cells_;
    };

    RowBuilder row() { return RowBuilder(*this); }

    std::string to_csv() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
        os << '\n';
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
            os << '\n';
        }
        return os.str();
    }
};

/// Log-scale line plot of every numeric column against the first one.
inline std::string to_svg(const Table& t, const std::string& title) {
    const double W = 720, H = 480, ml = 70, mr = 170, mt = 40, mb = 50;
    auto numeric = [](const std::string& s, double& v) {
        char* end = nullptr;
        v = std::strtod(s.c_str(), &end);
        return end != s.c_str() && *end == '\0' && std::isfinite(v);
    };
    struct Series {
        std::string name;
        std::vector<std::pair<double, double>> pts;
    };
    std::vector<Series> series;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (std::size_t c = 1; c < t.columns.size(); ++c) {
        Series s{t.columns[c], {}};
        for (const auto& r : t.rows) {
            double x, y;
            if (!numeric(r[0], x) || !numeric(r[c], y) || y <= 0) continue;
            s.pts.emplace_back(x, std::log10(y));
            xmin = std::min(xmin, x); xmax = std::max(xmax, x);
            ymin = std::min(ymin, std::log10(y)); ymax = std::max(ymax, std::log10(y));
        }
        if (!s.pts.empty()) series.push_back(std::move(s));
    }
    if (xmax <= xmin) xmax = xmin + 1;
    if (ymax <= ymin) ymax = ymin + 1;
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto py = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };
    static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                   "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    std::ostringstream os;
    char buf[128];
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << ml << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
    std::snprintf(buf, sizeof buf, "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" stroke=\"black\"/>\n",
                  ml, mt, W - ml - mr, H - mt - mb);
    os << buf;
    for (int e = int(std::ceil(ymin)); e <= int(std::floor(ymax)); ++e) {
        std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">1e%d</text>\n",
                      ml - 6, py(e) + 4, e);
        os << buf;
    }
    std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"12\">%s</text>\n",
                  (W - mr + ml) / 2, H - 15, t.columns.empty() ? "" : t.columns[0].c_str());
    os << buf;
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* col = colors[s % 10];
        os << "<polyline fill=\"none\" stroke=\"" << col << "\" points=\"";
        for (std::size_t i = 0; i < series[s].pts.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", i ? " " : "", px(series[s].pts[i].first), py(series[s].pts[i].second));
            os << buf;
        }
        os << "\"/>\n";
        std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"11\" fill=\"%s\">",
                      W - mr + 10, mt + 14.0 * (s + 1), col);
        os << buf << series[s].name << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

inline void write_table(const Table& t, const ExperimentConfig& cfg, const std::string& stem) {
    const std::string base = cfg.out + "/" + stem;
    std::ofstream csv(base + ".csv", std::ios::binary);
    if (!csv) throw InvalidArgument("cannot write " + base + ".csv");
    csv << t.to_csv();
    if (cfg.plot) {
        std::ofstream svg(base + ".svg", std::ios::binary);
        if (!svg) throw InvalidArgument("cannot write " + base + ".svg");
        svg << to_svg(t, stem);
    }
}

// ---------------------------------------------------------------------------
// Drivers
// ---------------------------------------------------------------------------

inline Table run_svd_report(const ExperimentConfig& cfg) {
    cfg.validate();
    const Coeffs2D c = analyze(cfg.function2d(), cfg.n, cfg.q);
    const auto rep = errors_vs_rank(c, c.size());
    Table t({"r", "sigma00", "sigma10", "sigma01", "l2_err_l2svd", "h1_err_l2svd", "h1_err_tensorproj",
             "h1_err_optimal", "estimator_e"});
    for (const auto& r : rep.rows)
        t.row() << r.r << r.sigma00 << r.sigma10 << r.sigma01 << r.l2_err_l2svd << r.h1_err_l2svd << r.h1_err_tensorproj
                << r.h1_err_optimal << r.estimator;
    return t;
}

inline Table bound_table(const BoundReport& rep) {
    Table t({"bound", "r", "lower", "actual", "upper", "residual", "satisfied"});
    for (const auto& b : rep.rows)
        t.row() << b.bound << b.r << b.lower << b.actual << b.upper << b.residual << b.satisfied;
    return t;
}

inline BoundReport run_bounds(const ExperimentConfig& cfg) {
    cfg.validate();
    BoundReport rep;
    const Coeffs2D c = analyze(cfg.function2d(), cfg.n, cfg.q);
    const SvdTriple svd(c);
    rep.append(check_prop21(svd.s00, svd.s10, svd.s01, cfg.rmax));

    const auto q00 = weighted_svd<Quad>(c, SvdVariant::L2L2);
    const auto q10 = weighted_svd<Quad>(c, SvdVariant::H1L2);
    const auto q01 = weighted_svd<Quad>(c, SvdVariant::L2H1);
    for (Index r = 1; r <= cfg.rmax; ++r) rep.append(check_thm22(q00, q10, q01, r));

    for (Index r = 0; r <= cfg.rmax; ++r) rep.rows.push_back(check_thm24(c, svd.s10, svd.s01, r));
    const auto smix = weighted_svd(c, SvdVariant::Mix);
    for (Index r = 0; r <= cfg.rmax; ++r) rep.rows.push_back(check_prop33(c, smix, r));

    if (cfg.d3) {
        const Coeffs3D t = analyze(cfg.function3d(), cfg.n, cfg.q);
        for (Index r = 1; r <= cfg.rmax; ++r) {
            rep.append(check_thm25(t, r));
            rep.append(check_prop32(t, r));
        }
    }
    return rep;
}

inline Table run_poisson(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto runs = convergence_experiment(cfg.function2d(), cfg.function, cfg.ns, cfg.q);
    Table t({"n", "reference_error", "final_error", "ratio", "rank", "truncation_error", "estimator_e", "fallback",
             "galerkin_residual"});
    for (const auto& r : runs)
        t.row() << r.n << r.reference_error << r.final_error
                << (r.reference_error > 0 ? r.final_error / r.reference_error : 1.0) << r.rank << r.truncation_error
                << r.estimate << r.fallback << r.residual;
    return t;
}

inline Table run_expsum(const ExperimentConfig& cfg) {
    cfg.validate();
    const double t_max = 1.0 + 2.0 * double(cfg.n) * cfg.n;
    const ExpSum e = build_expsum(t_max, cfg.delta);
    const double scan = scan_scaling_error(e, cfg.n);
    const Coeffs2D c = analyze(cfg.function2d(), cfg.n, cfg.q);
    const double cn = h1_norm(c);
    Table t({"r", "p", "delta_target", "delta_achieved", "scan_error", "h1_error", "budget", "term_count", "rn2p"});
    for (Index r = 0; r <= cfg.rmax; ++r) {
        const auto rep = separable_representation(c, e, r);
        const double err = h1_norm(Coeffs2D(Matrix(c.c - rep.reconstruct().c)));
        t.row() << r << e.size() << cfg.delta << e.delta << scan << err << rep.budget(cn) << rep.term_count()
                << Index(r * cfg.n * 2 * e.size());
    }
    return t;
}

inline std::vector<int> default_pathology_ns() {
    std::vector<int> ns;
    for (int n = 1; n <= 1024; n *= 2) ns.push_back(n);
    return ns;
}

inline Table run_pathology(const std::vector<int>& ns) {
    Table t({"n", "v_l2", "v_l2_bound", "pv_h1", "pv_l2", "ratio", "w_l2_sq", "w_h1_sq", "vw_h1", "vw_h1_bound",
             "pid_01", "pid_01_claim", "claim_holds"});
    for (const auto& r : demo_unbounded(ns))
        t.row() << r.n << r.v_l2 << r.v_l2_bound << r.pv_h1 << r.pv_l2 << r.ratio << r.w_l2_sq << r.w_h1_sq << r.vw_h1
                << r.vw_h1_bound << r.pid_01 << r.pid_01_claim << r.claim_holds;
    return t;
}

inline Table run_hosvd3(const ExperimentConfig& cfg) {
    cfg.validate();
    const Coeffs3D t = analyze(cfg.function3d(), cfg.n, cfg.q);
    const auto plain = hosvd3(t, HosvdFamily::PlainH1);
    const auto mixed = hosvd3(t, HosvdFamily::MixJ);
    Table tab({"k", "sigma_h1j_1", "sigma_h1j_2", "sigma_h1j_3", "sigma_mixj_1", "sigma_mixj_2", "sigma_mixj_3"});
    for (Index k = 1; k <= t.size(); ++k)
        tab.row() << k << plain[0].value(k) << plain[1].value(k) << plain[2].value(k) << mixed[0].value(k)
                  << mixed[1].value(k) << mixed[2].value(k);
    return tab;
}

} // namespace sobosvd

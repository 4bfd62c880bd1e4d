#pragma once
//
// Closed-form functions in H^1_0(0,1) showing that the H1-orthogonal
// projection onto the span of a point-evaluation representer is unbounded
// in L2, and that P (x) id is unbounded on H1 of the square.
//

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "error.hpp"

namespace sobosvd {

/// Continuous piecewise-linear function on [0,1], zero at both ends.
class PiecewiseLinear {
public:
    PiecewiseLinear(std::vector<double> nodes, std::vector<double> values)
        : x_(std::move(nodes)), v_(std::move(values)) {
        if (x_.size() != v_.size() || x_.size() < 2)
            throw InvalidArgument("PiecewiseLinear: need matching nodes and values, at least two");
        if (x_.front() != 0.0 || x_.back() != 1.0) throw InvalidArgument("PiecewiseLinear: nodes must span [0,1]");
        for (std::size_t i = 1; i < x_.size(); ++i)
            if (!(x_[i] > x_[i - 1])) throw InvalidArgument("PiecewiseLinear: nodes must be strictly increasing");
        if (v_.front() != 0.0 || v_.back() != 0.0) throw InvalidArgument("PiecewiseLinear: must vanish at 0 and 1");
    }

    const std::vector<double>& nodes() const noexcept { return x_; }
    const std::vector<double>& values() const noexcept { return v_; }

    double operator()(double x) const {
        if (x <= 0.0 || x >= 1.0) return 0.0;
        const auto it = std::upper_bound(x_.begin(), x_.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
        const double t = (x - x_[i]) / (x_[i + 1] - x_[i]);
        return v_[i] + t * (v_[i + 1] - v_[i]);
    }

    double derivative(double x) const {
        const auto it = std::upper_bound(x_.begin(), x_.end(), x);
        std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - x_.begin() - 1, 0));
        i = std::min(i, x_.size() - 2);
        return (v_[i + 1] - v_[i]) / (x_[i + 1] - x_[i]);
    }

    double l2_norm_squared() const {
        double s = 0.0;
        for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
            const double a = v_[i], b = v_[i + 1];
            s += (x_[i + 1] - x_[i]) * (a * a + a * b + b * b) / 3.0;
        }
        return s;
    }

    double seminorm_squared() const {
        double s = 0.0;
        for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
            const double d = v_[i + 1] - v_[i];
            s += d * d / (x_[i + 1] - x_[i]);
        }
        return s;
    }

    double h1_norm_squared() const { return l2_norm_squared() + seminorm_squared(); }

private:
    std::vector<double> x_, v_;
};

/// g with <f, g>_1 = f(t0) on H^1_0(0,1): A sinh(x) left of t0, B sinh(1-x) right of it.
class RieszRepresenter {
public:
    explicit RieszRepresenter(double t0) : t0_(t0) {
        if (!(t0 > 0.0 && t0 < 1.0)) throw InvalidArgument("RieszRepresenter: evaluation point must lie in (0,1)");
        // Continuity A sinh t0 = B sinh(1-t0) and derivative jump A cosh t0 + B cosh(1-t0) = 1.
        const double s0 = std::sinh(t0), s1 = std::sinh(1.0 - t0);
        const double c0 = std::cosh(t0), c1 = std::cosh(1.0 - t0);
        a_ = s1 / (c0 * s1 + c1 * s0);
        b_ = s0 / (c0 * s1 + c1 * s0);
    }

    double t0() const noexcept { return t0_; }
    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }

    double operator()(double x) const {
        if (x <= 0.0 || x >= 1.0) return 0.0;
        return x < t0_ ? a_ * std::sinh(x) : b_ * std::sinh(1.0 - x);
    }

    double derivative(double x) const { return x < t0_ ? a_ * std::cosh(x) : -b_ * std::cosh(1.0 - x); }

    /// On each side g = p e^x + q e^{-x}.
    struct Piece {
        double lo, hi, p, q;
    };

    std::array<Piece, 2> pieces() const {
        return {Piece{0.0, t0_, 0.5 * a_, -0.5 * a_}, Piece{t0_, 1.0, -0.5 * b_ * std::exp(-1.0), 0.5 * b_ * std::exp(1.0)}};
    }

    double l2_norm_squared() const {
        double s = 0.0;
        for (const auto& pc : pieces()) {
            auto F = [&](double x) {
                return pc.p * pc.p * std::exp(2 * x) / 2 - pc.q * pc.q * std::exp(-2 * x) / 2 + 2 * pc.p * pc.q * x;
            };
            s += F(pc.hi) - F(pc.lo);
        }
        return s;
    }

    double seminorm_squared() const {
        double s = 0.0;
        for (const auto& pc : pieces()) {
            auto F = [&](double x) {
                return pc.p * pc.p * std::exp(2 * x) / 2 - pc.q * pc.q * std::exp(-2 * x) / 2 - 2 * pc.p * pc.q * x;
            };
            s += F(pc.hi) - F(pc.lo);
        }
        return s;
    }

    double h1_norm_squared() const { return l2_norm_squared() + seminorm_squared(); }

private:
    double t0_;
    double a_ = 0, b_ = 0;
};

inline RieszRepresenter riesz_point_representer(double t0) { return RieszRepresenter(t0); }

/// <f, g>_1 = int f g + f' g', integrated exactly on every common segment.
inline double h1_inner(const PiecewiseLinear& f, const RieszRepresenter& g) {
    double s = 0.0;
    const auto& x = f.nodes();
    const auto& v = f.values();
    for (const auto& pc : g.pieces()) {
        for (std::size_t i = 0; i + 1 < x.size(); ++i) {
            const double lo = std::max(x[i], pc.lo), hi = std::min(x[i + 1], pc.hi);
            if (!(hi > lo)) continue;
            // f = c0 + c1 x on the segment.
            const double c1 = (v[i + 1] - v[i]) / (x[i + 1] - x[i]);
            const double c0 = v[i] - c1 * x[i];
            // int (c0+c1 x) e^x = e^x (c0 + c1 x - c1); int (c0+c1 x) e^{-x} = -e^{-x}(c0 + c1 x + c1);
            // int c1 g' = c1 g.
            auto F = [&](double t) {
                const double ep = std::exp(t), em = std::exp(-t);
                return pc.p * ep * (c0 + c1 * t - c1) - pc.q * em * (c0 + c1 * t + c1) + c1 * (pc.p * ep + pc.q * em);
            };
            s += F(hi) - F(lo);
        }
    }
    return s;
}

/// v_n: hat of height 1 at 0.5 with half-width 1/(n+1);
/// w_n: hat of height (n+1)^{-1/2} at 0.5 with slope (n+1)^{1/2}, hence also half-width 1/(n+1).
inline std::pair<PiecewiseLinear, PiecewiseLinear> spike_sequences(int n) {
    if (n < 1) throw InvalidArgument("spike_sequences: n must be >= 1");
    const double h = 1.0 / (n + 1.0);
    const double peak_w = 1.0 / std::sqrt(n + 1.0);
    // For n = 1 the support is all of [0,1].
    if (n == 1) return {PiecewiseLinear({0.0, 0.5, 1.0}, {0.0, 1.0, 0.0}), PiecewiseLinear({0.0, 0.5, 1.0}, {0.0, peak_w, 0.0})};
    const std::vector<double> nodes{0.0, 0.5 - h, 0.5, 0.5 + h, 1.0};
    return {PiecewiseLinear(nodes, {0.0, 0.0, 1.0, 0.0, 0.0}), PiecewiseLinear(nodes, {0.0, 0.0, peak_w, 0.0, 0.0})};
}

struct PathologyRow {
    int n = 0;
    double v_l2 = 0, v_l2_bound = 0;
    double pv_h1 = 0, pv_l2 = 0;
    double ratio = 0;  ///< ||P v_n||_1 / ||v_n||_0
    double w_l2_sq = 0, w_h1_sq = 0;
    double vw_h1 = 0, vw_h1_bound = 0;
    double pid_01 = 0;        ///< ||(P (x) id)(v_n (x) w_n)||_(0,1)
    double pid_01_claim = 0;  ///< 2 ||P v_1||_0
    bool claim_holds = false;
};

/// Norms of v_n, P v_n, w_n and v_n (x) w_n for every n.
inline std::vector<PathologyRow> demo_unbounded(const std::vector<int>& ns, double t0 = 0.5) {
    const RieszRepresenter g(t0);
    const double g1sq = g.h1_norm_squared();
    const double g0 = std::sqrt(g.l2_norm_squared());
    // P v = <v, g>_1 / ||g||_1^2 g.
    auto project = [&](const PiecewiseLinear& v) { return h1_inner(v, g) / g1sq; };
    const double pv1_l2 = std::abs(project(spike_sequences(1).first)) * g0;

    std::vector<PathologyRow> rows;
    for (int n : ns) {
        const auto [v, w] = spike_sequences(n);
        PathologyRow row;
        row.n = n;
        const double np1 = n + 1.0;
        const double v0sq = v.l2_norm_squared();
        row.v_l2 = std::sqrt(v0sq);
        row.v_l2_bound = std::sqrt(2.0 / np1);
        const double coef = project(v);
        row.pv_h1 = std::abs(coef) * std::sqrt(g1sq);
        row.pv_l2 = std::abs(coef) * g0;
        row.ratio = row.pv_h1 / row.v_l2;
        row.w_l2_sq = w.l2_norm_squared();
        row.w_h1_sq = w.h1_norm_squared();
        // ||a (x) b||_1^2 = |a|_1^2 ||b||_0^2 + ||a||_0^2 |b|_1^2 + ||a||_0^2 ||b||_0^2.
        row.vw_h1 = std::sqrt(v.seminorm_squared() * row.w_l2_sq + v0sq * w.seminorm_squared() + v0sq * row.w_l2_sq);
        row.vw_h1_bound = std::sqrt(8.0 / (np1 * np1 * np1) + 8.0 / np1);
        row.pid_01 = row.pv_l2 * std::sqrt(row.w_h1_sq);
        row.pid_01_claim = 2.0 * pv1_l2;
        row.claim_holds = row.pid_01 >= row.pid_01_claim;
        rows.push_back(row);
    }
    return rows;
}

} // namespace sobosvd

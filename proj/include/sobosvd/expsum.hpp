#pragma once
//
// Exponential sums for t^{-1/2} and the separable representation of a
// coefficient array obtained from the SVD of its H1-scaled entries.
//
// 1/sqrt(t) = (2/sqrt(pi)) int_R exp(-t e^{2x}) e^x dx is discretized by
// the trapezoid rule with nodes x = nu h, giving weights
// omega = (2/sqrt(pi)) h e^{x} and exponents alpha = e^{2x}.
//

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "svd_engine.hpp"

namespace sobosvd {

struct ExpTerm {
    double omega;
    double alpha;
};

struct ExpSum {
    std::vector<ExpTerm> terms;
    double t_max = 1.0;
    /// Largest relative error found on the validation scan.
    double delta = 0.0;
    double step = 0.0;

    Index size() const noexcept { return static_cast<Index>(terms.size()); }

    double operator()(double t) const {
        double s = 0.0;
        for (auto it = terms.rbegin(); it != terms.rend(); ++it) s += it->omega * std::exp(-it->alpha * t);
        return s;
    }

    /// sqrt(omega_nu) exp(-alpha_nu (k^2 + 1/2)).
    double factor(int k, Index nu) const {
        const auto& t = terms[nu];
        return std::sqrt(t.omega) * std::exp(-t.alpha * (double(k) * k + 0.5));
    }
};

inline constexpr int expsum_max_terms = 200;
inline constexpr int expsum_scan_points = 10000;

namespace detail {

inline double relative_error(const ExpSum& e, double t) { return std::abs(e(t) * std::sqrt(t) - 1.0); }

inline double scan_interval(const ExpSum& e, double t_max) {
    if (t_max <= 1.0) return relative_error(e, 1.0);
    const double lt = std::log(t_max);
    double worst = 0.0;
    for (int i = 0; i < expsum_scan_points; ++i) {
        const double t = std::exp(lt * double(i) / double(expsum_scan_points - 1));
        worst = std::max(worst, relative_error(e, t));
    }
    return worst;
}

inline ExpSum make_sum(double h, int lo, int hi, double t_max) {
    ExpSum e;
    e.t_max = t_max;
    e.step = h;
    for (int nu = lo; nu <= hi; ++nu) {
        const double x = nu * h;
        e.terms.push_back({2.0 / std::sqrt(pi) * h * std::exp(x), std::exp(2.0 * x)});
    }
    return e;
}

} // namespace detail

/// Sum of p terms with max_{t in [1, t_max]} |sqrt(t) E(t) - 1| <= delta.
///
/// The step is set from the strip of analyticity of the integrand, both
/// truncation indices are then reduced by bisection as long as the
/// scan still meets delta.
inline ExpSum build_expsum(double t_max, double delta) {
    if (!(t_max >= 1.0) || !std::isfinite(t_max)) throw InvalidArgument("build_expsum: T_max must be >= 1");
    if (!(delta > 1e-12 && delta < 1e-1)) throw InvalidArgument("build_expsum: delta must lie in (1e-12, 1e-1)");

    double best = std::numeric_limits<double>::infinity();
    for (double margin = 4.0; margin <= 4.0e4; margin *= 10.0) {
        const double h = pi * pi / (2.0 * std::log(margin / delta));
        // Generous initial window: left tail ~ e^x sqrt(T), right tail ~ exp(-e^{2x}).
        const double x_lo = std::log(delta * std::sqrt(pi) / (8.0 * std::sqrt(t_max)));
        const double x_hi = 0.5 * std::log(std::log(8.0 / delta) + 4.0);
        int lo = static_cast<int>(std::floor(x_lo / h)) - 2;
        int hi = static_cast<int>(std::ceil(x_hi / h)) + 2;

        auto ok = [&](int a, int b) { return detail::scan_interval(detail::make_sum(h, a, b, t_max), t_max) <= delta; };
        const double err = detail::scan_interval(detail::make_sum(h, lo, hi, t_max), t_max);
        best = std::min(best, err);
        if (err > delta) continue;

        // Largest admissible lower index, then smallest admissible upper index.
        int a = lo, b = hi;
        while (b - a > 1) {
            const int mid = a + (b - a) / 2;
            (ok(mid, hi) ? a : b) = mid;
        }
        lo = a;
        a = lo;
        b = hi;
        while (b - a > 1) {
            const int mid = a + (b - a) / 2;
            (ok(lo, mid) ? b : a) = mid;
        }
        if (ok(lo, b)) hi = b;

        if (hi - lo + 1 > expsum_max_terms) continue;
        ExpSum e = detail::make_sum(h, lo, hi, t_max);
        e.delta = detail::scan_interval(e, t_max);
        return e;
    }
    throw ConvergenceError("build_expsum: target accuracy not reached within " + std::to_string(expsum_max_terms) +
                               " terms; best relative error " + std::to_string(best),
                           best);
}

/// max |sqrt(t) E(t) - 1| over t = 1 + k^2 + m^2, 0 <= k, m <= n.
inline double scan_scaling_error(const ExpSum& e, int n) {
    if (n < 0) throw InvalidArgument("scan_scaling_error: negative frequency");
    if (1.0 + 2.0 * double(n) * n > e.t_max)
        throw InvalidArgument("scan_scaling_error: 1+2n^2 exceeds the validity interval of the sum");
    double worst = 0.0;
    for (int k = 0; k <= n; ++k)
        for (int m = k; m <= n; ++m) worst = std::max(worst, detail::relative_error(e, 1.0 + double(k) * k + double(m) * m));
    return worst;
}

/// Entrywise factor sqrt(1+k^2+m^2).
inline Matrix h1_scaling(int n) {
    const Index N = basis_size(n);
    Matrix d(N, N);
    for (Index j = 0; j < N; ++j)
        for (Index i = 0; i < N; ++i) {
            const double k = frequency(i), m = frequency(j);
            d(i, j) = std::sqrt(1.0 + k * k + m * m);
        }
    return d;
}

/// Plain SVD of the array c_km sqrt(1+k^2+m^2); the squared singular
/// values sum to ||u||_1^2.
inline SingularSystem<double> scaled_svd(const Coeffs2D& c, const JacobiOptions& opt = {}) {
    const Index N = c.size();
    const Matrix s = c.c.cwiseProduct(h1_scaling(c.n()));
    return weighted_svd<double>(s, Vector::Ones(N), Vector::Ones(N), SvdVariant::Scaled, opt);
}

/// u ~ sum_{l<=r} sigma_l sum_nu (psi_l E(.,nu)) (x) (phi_l E(.,nu)).
struct SeparableRep {
    int n = 0;
    Index rank = 0;
    Index terms_per_rank = 0;
    Vector sigma;
    /// x_factors[l * p + nu] and y_factors[l * p + nu] are coefficient vectors.
    std::vector<Vector> x_factors;
    std::vector<Vector> y_factors;
    /// Scaled-SVD tail (sum_{l>r} sigma_l^2)^{1/2}.
    double scaled_tail = 0.0;
    /// Relative scaling error of the sum on the grid actually used.
    double scaling_error = 0.0;

    Index term_count() const noexcept { return rank * terms_per_rank; }

    Coeffs2D reconstruct() const {
        const Index N = basis_size(n);
        Matrix c = Matrix::Zero(N, N);
        for (Index l = 0; l < rank; ++l) {
            Matrix block = Matrix::Zero(N, N);
            for (Index nu = 0; nu < terms_per_rank; ++nu)
                block.noalias() += x_factors[l * terms_per_rank + nu] * y_factors[l * terms_per_rank + nu].transpose();
            c += sigma[l] * block;
        }
        return Coeffs2D(std::move(c));
    }

    /// e_scaled(r) + delta ||C||_1 (1 + eps), the guaranteed H1 error.
    double budget(double h1_norm_of_c) const {
        return scaled_tail + scaling_error * h1_norm_of_c * (1.0 + 1e-12) + 1e-14 * h1_norm_of_c;
    }
};

inline SeparableRep separable_representation(const Coeffs2D& c, const ExpSum& e, Index r) {
    const int n = c.n();
    if (1.0 + 2.0 * double(n) * n > e.t_max)
        throw InvalidArgument("separable_representation: exponential sum valid up to " + std::to_string(e.t_max) +
                              " but 1+2n^2 = " + std::to_string(1 + 2 * n * n));
    if (r < 0) throw InvalidArgument("separable_representation: negative rank");
    const auto s = scaled_svd(c);
    SeparableRep rep;
    rep.n = n;
    rep.rank = std::min(r, s.rank());
    rep.terms_per_rank = e.size();
    rep.sigma = s.sigma.head(rep.rank);
    rep.scaled_tail = std::sqrt(s.tail_squared(rep.rank));
    rep.scaling_error = scan_scaling_error(e, n);

    const Index N = c.size();
    Matrix ef(N, e.size());
    for (Index nu = 0; nu < e.size(); ++nu)
        for (Index i = 0; i < N; ++i) ef(i, nu) = e.factor(frequency(i), nu);
    for (Index l = 0; l < rep.rank; ++l)
        for (Index nu = 0; nu < e.size(); ++nu) {
            rep.x_factors.push_back(s.left.col(l).cwiseProduct(ef.col(nu)));
            rep.y_factors.push_back(s.right.col(l).cwiseProduct(ef.col(nu)));
        }
    return rep;
}

} // namespace sobosvd

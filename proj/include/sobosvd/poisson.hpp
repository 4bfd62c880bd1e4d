#pragma once
//
// Spectral Galerkin solution of -Laplace(u) = f on the 2-torus and rank
// truncation of the discrete solution driven by the (1,0)/(0,1) estimator.
//

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "projections.hpp"

namespace sobosvd {

/// (k^2 + m^2) c_km, i.e. the coefficients of -Laplace(u).
inline Coeffs2D apply_negative_laplacian(const Coeffs2D& u) {
    Coeffs2D f = u;
    for (Index j = 0; j < u.size(); ++j)
        for (Index i = 0; i < u.size(); ++i) {
            const double k = frequency(i), m = frequency(j);
            f.c(i, j) *= k * k + m * m;
        }
    return f;
}

/// Coefficients of f = -Laplace(u_ref) via analyze(u_ref); f(0,0) is exactly 0.
template <class F>
Coeffs2D manufacture_rhs(F&& u_ref, int n, int q = 4) {
    return apply_negative_laplacian(analyze(std::forward<F>(u_ref), n, q));
}

/// Solution coefficient f_km / (k^2+m^2), constant fixed to `mean`.
inline Coeffs2D galerkin_solve(const Coeffs2D& f, double mean) {
    const double scale = std::max(1.0, f.c.cwiseAbs().maxCoeff());
    if (std::abs(f.c(0, 0)) > 1e-12 * scale)
        throw InvalidArgument("galerkin_solve: right-hand side must have zero mean, got coefficient " +
                              std::to_string(f.c(0, 0)));
    if (!std::isfinite(mean)) throw NonFiniteError("galerkin_solve: non-finite mean");
    Coeffs2D u = f;
    for (Index j = 0; j < f.size(); ++j)
        for (Index i = 0; i < f.size(); ++i) {
            if (i == 0 && j == 0) continue;
            const double k = frequency(i), m = frequency(j);
            u.c(i, j) /= k * k + m * m;
        }
    u.c(0, 0) = 2.0 * pi * mean;
    return u;
}

/// max over basis functions v of |<grad u, grad v> - <f, v>|.
inline double galerkin_residual(const Coeffs2D& u, const Coeffs2D& f) {
    return (apply_negative_laplacian(u).c - f.c).cwiseAbs().maxCoeff();
}

/// Embeds coefficients of frequency <= n into a larger array.
inline Coeffs2D pad(const Coeffs2D& c, int n_big) {
    if (n_big < c.n()) throw InvalidArgument("pad: target is smaller than the source");
    Coeffs2D out(n_big);
    out.c.topLeftCorner(c.size(), c.size()) = c.c;
    return out;
}

struct GuaranteedTruncation {
    Coeffs2D approx;
    Index rank = 0;
    double estimate = 0.0;  ///< e(rank)
    /// No rank met the threshold; the full-rank projection was returned.
    bool fallback = false;
};

/// Smallest r with e(r) <= E_n, then (P_r (x) Q_r) u_n. At r = 0 the
/// error ||u_n||_1 is known exactly and is used instead of e(0).
inline GuaranteedTruncation truncate_with_guarantee(const Coeffs2D& u_n, double e_n) {
    if (!(e_n > 0.0)) throw InvalidArgument("truncate_with_guarantee: E_n must be positive");
    const SvdTriple svd(u_n);
    const Index full = std::max(svd.s10.rank(), svd.s01.rank());
    GuaranteedTruncation out;
    out.rank = full;
    out.fallback = true;
    for (Index r = 0; r <= full; ++r) {
        const double e = r == 0 ? h1_norm(u_n) : error_estimator(svd.s10, svd.s01, r);
        if (e <= e_n) {
            out.rank = r;
            out.fallback = false;
            break;
        }
    }
    out.estimate = out.rank == 0 ? h1_norm(u_n) : error_estimator(svd.s10, svd.s01, out.rank);
    out.approx = h1_tensor_truncation(u_n, svd, out.rank);
    return out;
}

struct GalerkinRun {
    int n = 0;
    std::string tag;
    Coeffs2D u_n;
    double reference_error = 0.0;  ///< E_n = ||u - u_n||_1
    Coeffs2D truncated;
    Index rank = 0;
    double final_error = 0.0;      ///< ||u - u~_n||_1
    double truncation_error = 0.0; ///< ||u_n - u~_n||_1
    double estimate = 0.0;         ///< e(rank)
    bool fallback = false;
    double residual = 0.0;
};

/// Galerkin runs for every n against one reference expansion at
/// n_ref = 4 max(ns). The load is resolved once on the reference grid and
/// restricted to each n, so u_n carries no coarse-grid aliasing.
template <class F>
std::vector<GalerkinRun> convergence_experiment(F&& u_ref, const std::string& tag, const std::vector<int>& ns,
                                                int q = 4) {
    if (ns.empty()) throw InvalidArgument("convergence_experiment: empty list of sizes");
    for (int n : ns)
        if (n < 1) throw InvalidArgument("convergence_experiment: sizes must be >= 1");
    const int n_ref = 4 * *std::max_element(ns.begin(), ns.end());
    const Coeffs2D ref = analyze(u_ref, n_ref, q);
    const double mean = ref.c(0, 0) / (2.0 * pi);
    const Coeffs2D f_ref = apply_negative_laplacian(ref);

    std::vector<GalerkinRun> runs;
    for (int n : ns) {
        GalerkinRun run;
        run.n = n;
        run.tag = tag;
        const Index N = basis_size(n);
        const Coeffs2D f(Matrix(f_ref.c.topLeftCorner(N, N)));
        run.u_n = galerkin_solve(f, mean);
        run.residual = galerkin_residual(run.u_n, f);
        run.reference_error = h1_norm(Coeffs2D(Matrix(ref.c - pad(run.u_n, n_ref).c)));

        const double threshold = run.reference_error > 0.0 ? run.reference_error : 1e-300;
        auto t = truncate_with_guarantee(run.u_n, threshold);
        run.truncated = std::move(t.approx);
        run.rank = t.rank;
        run.estimate = t.estimate;
        run.fallback = t.fallback;
        run.truncation_error = h1_norm(Coeffs2D(Matrix(run.u_n.c - run.truncated.c)));
        run.final_error = h1_norm(Coeffs2D(Matrix(ref.c - pad(run.truncated, n_ref).c)));
        runs.push_back(std::move(run));
    }
    return runs;
}

} // namespace sobosvd

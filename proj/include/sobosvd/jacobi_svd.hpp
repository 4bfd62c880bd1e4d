#pragma once
//
// One-sided (Hestenes) Jacobi SVD.
//
// Columns of the working matrix are rotated pairwise until mutually
// orthogonal; the column norms are then the singular values. Relative
// accuracy of small singular values is preserved for matrices of the form
// B*D with B well conditioned, which is what the Sobolev scalings produce.
//

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"

namespace sobosvd {

template <class Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

struct JacobiOptions {
    /// Off-diagonal mass ||offdiag(A^T A)||_F / ||A||_F^2 that must be reached.
    double tolerance = 1e-12;
    int max_sweeps = 60;
    /// sigma_k < rank_threshold * sigma_1 is treated as zero and dropped.
    double rank_threshold = 1e-12;
};

/// Thin SVD a = u * diag(s) * v^T restricted to the numerical rank.
template <class Scalar>
struct ThinSvd {
    MatrixX<Scalar> u;
    VectorX<Scalar> s;
    MatrixX<Scalar> v;
    int sweeps = 0;
    double off_diagonal = 0.0;
};

namespace detail {

/// Rotates columns of `a` in place; accumulates the rotations in `v`.
template <class Scalar>
std::pair<int, double> hestenes(MatrixX<Scalar>& a, MatrixX<Scalar>& v, const JacobiOptions& opt) {
    using std::abs;
    using std::sqrt;
    const Eigen::Index n = a.cols();
    const Scalar eps = std::numeric_limits<Scalar>::epsilon();
    // Rotate while the cosine between two columns exceeds this; much tighter
    // than opt.tolerance so that singular vectors are accurate to roundoff.
    const Scalar rotate_tol = eps * Scalar(std::max<Eigen::Index>(a.rows(), 1));

    std::vector<Scalar> norms(n);
    for (Eigen::Index j = 0; j < n; ++j) norms[j] = a.col(j).squaredNorm();

    int sweep = 0;
    for (; sweep < opt.max_sweeps; ++sweep) {
        bool rotated = false;
        for (Eigen::Index p = 0; p + 1 < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const Scalar alpha = norms[p], beta = norms[q];
                if (alpha == Scalar(0) || beta == Scalar(0)) continue;
                const Scalar gamma = a.col(p).dot(a.col(q));
                if (abs(gamma) <= rotate_tol * sqrt(alpha) * sqrt(beta)) continue;
                rotated = true;
                const Scalar zeta = (beta - alpha) / (Scalar(2) * gamma);
                const Scalar t = (zeta >= Scalar(0) ? Scalar(1) : Scalar(-1)) / (abs(zeta) + sqrt(Scalar(1) + zeta * zeta));
                const Scalar c = Scalar(1) / sqrt(Scalar(1) + t * t);
                const Scalar s = c * t;
                for (Eigen::Index i = 0; i < a.rows(); ++i) {
                    const Scalar ap = a(i, p), aq = a(i, q);
                    a(i, p) = c * ap - s * aq;
                    a(i, q) = s * ap + c * aq;
                }
                for (Eigen::Index i = 0; i < v.rows(); ++i) {
                    const Scalar vp = v(i, p), vq = v(i, q);
                    v(i, p) = c * vp - s * vq;
                    v(i, q) = s * vp + c * vq;
                }
                norms[p] = a.col(p).squaredNorm();
                norms[q] = a.col(q).squaredNorm();
            }
        if (!rotated) break;
    }

    // Off-diagonal mass of the final Gram matrix, relative to ||A||_F^2.
    Scalar total = Scalar(0), off = Scalar(0);
    for (Eigen::Index p = 0; p < n; ++p) total += norms[p];
    for (Eigen::Index p = 0; p + 1 < n; ++p)
        for (Eigen::Index q = p + 1; q < n; ++q) {
            const Scalar g = a.col(p).dot(a.col(q));
            off += Scalar(2) * g * g;
        }
    const double rel = total > Scalar(0) ? double(sqrt(off) / total) : 0.0;
    return {sweep, rel};
}

} // namespace detail

/// SVD of an arbitrary real matrix by one-sided Jacobi.
///
/// Singular triplets below the rank threshold are dropped; the first
/// nonnegligible entry of every left vector is made positive.
template <class Scalar>
ThinSvd<Scalar> jacobi_svd(const MatrixX<Scalar>& m, const JacobiOptions& opt = {}) {
    if (!m.allFinite()) throw NonFiniteError("jacobi_svd: non-finite matrix entry");
    const bool transposed = m.rows() < m.cols();
    MatrixX<Scalar> a = transposed ? MatrixX<Scalar>(m.transpose()) : m;
    MatrixX<Scalar> v = MatrixX<Scalar>::Identity(a.cols(), a.cols());

    ThinSvd<Scalar> out;
    const auto [sweeps, off] = detail::hestenes(a, v, opt);
    out.sweeps = sweeps;
    out.off_diagonal = off;
    if (off > opt.tolerance)
        throw ConvergenceError("jacobi_svd: no convergence after " + std::to_string(sweeps) + " sweeps", off);

    const Eigen::Index n = a.cols();
    VectorX<Scalar> sv(n);
    for (Eigen::Index j = 0; j < n; ++j) sv[j] = a.col(j).norm();
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), Eigen::Index(0));
    std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return sv[i] > sv[j]; });

    const Scalar smax = n > 0 ? sv[order[0]] : Scalar(0);
    Eigen::Index rank = 0;
    while (rank < n && smax > Scalar(0) && sv[order[rank]] >= Scalar(opt.rank_threshold) * smax) ++rank;

    MatrixX<Scalar> u(a.rows(), rank), vv(v.rows(), rank);
    out.s.resize(rank);
    for (Eigen::Index k = 0; k < rank; ++k) {
        const auto j = order[k];
        out.s[k] = sv[j];
        u.col(k) = a.col(j) / sv[j];
        vv.col(k) = v.col(j);
    }

    if (transposed) std::swap(u, vv);

    // Sign convention on the left vectors.
    for (Eigen::Index k = 0; k < rank; ++k) {
        const Scalar big = u.col(k).cwiseAbs().maxCoeff();
        for (Eigen::Index i = 0; i < u.rows(); ++i) {
            using std::abs;
            if (abs(u(i, k)) > Scalar(1e-8) * big) {
                if (u(i, k) < Scalar(0)) {
                    u.col(k) = -u.col(k);
                    vv.col(k) = -vv.col(k);
                }
                break;
            }
        }
    }
    out.u = std::move(u);
    out.v = std::move(vv);
    return out;
}

} // namespace sobosvd

#pragma once
//
// Subspaces spanned by singular vectors, H1-orthogonal projections onto
// them, rank truncations and the tail-sum error estimator.
//

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "svd_engine.hpp"

namespace sobosvd {

enum class BasisLabel {
    B1,     ///< left (1,0) vectors psi^1
    B2,     ///< right (0,1) vectors phi^1
    W1,     ///< left (0,1) vectors psi^0
    W2,     ///< right (1,0) vectors phi^0
    Bj,     ///< left vectors of the mode-j H1/L2 unfolding
    Mj,     ///< left vectors of the mode-j mixed unfolding
    Other,
};

enum class Side { Left, Right };

/// Columns orthonormal in the diagonal inner product `weight`.
struct SubspaceBasis {
    Matrix columns;
    Vector weight;
    BasisLabel label = BasisLabel::Other;

    Index dim() const noexcept { return columns.cols(); }
    Index ambient() const noexcept { return weight.size(); }

    /// columns^T diag(weight) columns.
    Matrix gram() const { return columns.transpose() * weight.asDiagonal() * columns; }
};

inline BasisLabel label_for(SvdVariant v, Side side) {
    switch (v) {
    case SvdVariant::H1L2: return side == Side::Left ? BasisLabel::B1 : BasisLabel::W2;
    case SvdVariant::L2H1: return side == Side::Left ? BasisLabel::W1 : BasisLabel::B2;
    case SvdVariant::ModeH1: return side == Side::Left ? BasisLabel::Bj : BasisLabel::Other;
    case SvdVariant::ModeMix: return side == Side::Left ? BasisLabel::Mj : BasisLabel::Other;
    default: return BasisLabel::Other;
    }
}

/// First r singular vectors of one side, with that side's weight.
inline SubspaceBasis subspace_from_svd(const SingularSystem<double>& s, Side side, Index r) {
    if (r < 0) throw InvalidArgument("subspace_from_svd: negative rank");
    if (r > s.rank())
        throw InvalidArgument("subspace_from_svd: requested rank " + std::to_string(r) + " but only " +
                              std::to_string(s.rank()) + " positive singular values are available");
    const Matrix& m = side == Side::Left ? s.left : s.right;
    return {m.leftCols(r), side == Side::Left ? s.row_weight : s.col_weight, label_for(s.variant, side)};
}

/// Orthogonal projector Psi Psi^T W in coefficient space.
inline Matrix projector(const SubspaceBasis& b) {
    return b.columns * (b.columns.transpose() * b.weight.asDiagonal());
}

enum class Axis { Rows, Cols };

/// (P (x) id) C for Axis::Rows, (id (x) Q) C for Axis::Cols.
inline Coeffs2D project_onesided(const Coeffs2D& c, const SubspaceBasis& b, Axis axis) {
    const Index dim = axis == Axis::Rows ? c.c.rows() : c.c.cols();
    if (b.ambient() != dim || b.columns.rows() != dim)
        throw InvalidArgument("project_onesided: basis of length " + std::to_string(b.ambient()) +
                              " does not match coefficient dimension " + std::to_string(dim));
    if (axis == Axis::Rows)
        return Coeffs2D(Matrix(b.columns * (b.columns.transpose() * (b.weight.asDiagonal() * c.c))));
    return Coeffs2D(Matrix(((c.c * b.weight.asDiagonal()) * b.columns) * b.columns.transpose()));
}

/// (P (x) Q) C, the composition of both one-sided projections.
inline Coeffs2D tensor_project(const Coeffs2D& c, const SubspaceBasis& rows, const SubspaceBasis& cols) {
    return project_onesided(project_onesided(c, rows, Axis::Rows), cols, Axis::Cols);
}

/// Best rank-r approximation in L2 (truncated "00" SVD).
inline Coeffs2D truncate(const SingularSystem<double>& s, Index r) {
    if (r < 0) throw InvalidArgument("truncate: negative rank");
    const Index k = std::min(r, s.rank());
    return Coeffs2D(Matrix(s.left.leftCols(k) * s.sigma.head(k).asDiagonal() * s.right.leftCols(k).transpose()));
}

inline Coeffs2D truncate_l2(const Coeffs2D& c, Index r) {
    return truncate(weighted_svd(c, SvdVariant::L2L2), r);
}

/// e(r) = (sum_{k>r} (sigma^10_k)^2 + (sigma^01_k)^2)^{1/2}.
inline double error_estimator(const SingularSystem<double>& s10, const SingularSystem<double>& s01, Index r) {
    if (s10.variant != SvdVariant::H1L2 || s01.variant != SvdVariant::L2H1)
        throw InvalidArgument("error_estimator: expected \"10\" and \"01\" systems");
    if (r < 0) throw InvalidArgument("error_estimator: negative rank");
    return std::sqrt(s10.tail_squared(r) + s01.tail_squared(r));
}

// ---------------------------------------------------------------------------
// H1-optimal projection onto products of pooled candidate functions
// ---------------------------------------------------------------------------

struct OptimalProjection {
    Coeffs2D approx;
    Index dim_x = 0;  ///< dimension of the pooled x-span actually used
    Index dim_y = 0;
    /// Candidates were linearly dependent and the span was reduced.
    bool dependent = false;
};

namespace detail {

/// L2-orthonormal basis of span(candidates); dependent directions dropped.
inline Matrix orthonormal_span(const Matrix& candidates, bool& dependent) {
    Matrix m = candidates;
    Index kept = 0;
    for (Index j = 0; j < m.cols(); ++j) {
        const double nrm = m.col(j).norm();
        if (nrm > 0) m.col(kept++) = m.col(j) / nrm;
    }
    m.conservativeResize(Eigen::NoChange, kept);
    if (kept == 0) {
        dependent = candidates.cols() > 0;
        return Matrix(candidates.rows(), 0);
    }
    JacobiOptions opt;
    opt.rank_threshold = 1e-10;
    auto svd = jacobi_svd<double>(m, opt);
    if (svd.s.size() < candidates.cols()) dependent = true;
    return svd.u;
}

} // namespace detail

/// H1(Omega)-orthogonal projection of c onto span{x_i (x) y_j}.
///
/// Each candidate span is orthonormalized in L2 and then diagonalized
/// against the H1 Gram matrix, which makes the product Gram matrix
/// diagonal with entries lambda_i + mu_j - 1 >= 1.
inline OptimalProjection optimal_h1_projection(const Coeffs2D& c, const Matrix& x_candidates,
                                               const Matrix& y_candidates) {
    const int n = c.n();
    if (x_candidates.rows() != c.size() || y_candidates.rows() != c.size())
        throw InvalidArgument("optimal_h1_projection: candidate length does not match the coefficient array");
    if (!x_candidates.allFinite() || !y_candidates.allFinite())
        throw NonFiniteError("optimal_h1_projection: non-finite candidate");

    OptimalProjection out;
    const Matrix ux = detail::orthonormal_span(x_candidates, out.dependent);
    const Matrix uy = detail::orthonormal_span(y_candidates, out.dependent);
    out.dim_x = ux.cols();
    out.dim_y = uy.cols();
    if (ux.cols() == 0 || uy.cols() == 0) {
        out.approx = Coeffs2D(n);
        return out;
    }

    const Vector w1 = weight_vector(n, FactorKind::H1);
    Eigen::SelfAdjointEigenSolver<Matrix> ex(ux.transpose() * w1.asDiagonal() * ux);
    Eigen::SelfAdjointEigenSolver<Matrix> ey(uy.transpose() * w1.asDiagonal() * uy);
    const Matrix bx = ux * ex.eigenvectors();
    const Matrix by = uy * ey.eigenvectors();

    // <c, bx_i (x) by_j>_1 with weight (1+k^2) + (1+m^2) - 1.
    const Matrix h1c = w1.asDiagonal() * c.c + c.c * w1.asDiagonal() - c.c;
    Matrix z = bx.transpose() * h1c * by;
    for (Index j = 0; j < z.cols(); ++j)
        for (Index i = 0; i < z.rows(); ++i) z(i, j) /= ex.eigenvalues()[i] + ey.eigenvalues()[j] - 1.0;
    out.approx = Coeffs2D(Matrix(bx * z * by.transpose()));
    return out;
}

/// x-candidates psi_k, psi^1_k, psi^0_k and y-candidates phi_k, phi^1_k,
/// phi^0_k for k <= r, pooled from the three 2-D SVDs.
inline std::pair<Matrix, Matrix> pooled_candidates(const SingularSystem<double>& s00, const SingularSystem<double>& s10,
                                                   const SingularSystem<double>& s01, Index r) {
    const Index a = std::min(r, s00.rank()), b = std::min(r, s10.rank()), d = std::min(r, s01.rank());
    const Index N = s00.row_weight.size();
    Matrix x(N, a + b + d), y(N, a + b + d);
    x << s00.left.leftCols(a), s10.left.leftCols(b), s01.left.leftCols(d);
    y << s00.right.leftCols(a), s01.right.leftCols(d), s10.right.leftCols(b);
    return {x, y};
}

// ---------------------------------------------------------------------------
// Error tables
// ---------------------------------------------------------------------------

struct ErrorRow {
    Index r = 0;
    double sigma00 = 0, sigma10 = 0, sigma01 = 0;
    double l2_err_l2svd = 0;
    double h1_err_l2svd = 0;
    double h1_err_tensorproj = 0;
    double err10_tensorproj = 0;  ///< ||.||_(1,0) error of (P_r (x) Q_r)
    double err01_tensorproj = 0;
    double h1_err_optimal = 0;
    double estimator = 0;
    bool optimal_dependent = false;
};

struct ErrorReport {
    std::vector<ErrorRow> rows;
};

struct SvdTriple {
    SingularSystem<double> s00, s10, s01;

    explicit SvdTriple(const Coeffs2D& c)
        : s00(weighted_svd(c, SvdVariant::L2L2)),
          s10(weighted_svd(c, SvdVariant::H1L2)),
          s01(weighted_svd(c, SvdVariant::L2H1)) {}
};

/// (P_r (x) Q_r) c with the (1,0)/(0,1) bases, rank clamped to the available one.
inline Coeffs2D h1_tensor_truncation(const Coeffs2D& c, const SvdTriple& svd, Index r) {
    const auto b1 = subspace_from_svd(svd.s10, Side::Left, std::min(r, svd.s10.rank()));
    const auto b2 = subspace_from_svd(svd.s01, Side::Right, std::min(r, svd.s01.rank()));
    return tensor_project(c, b1, b2);
}

inline ErrorReport errors_vs_rank(const Coeffs2D& c, Index r_max) {
    if (r_max < 0 || r_max > c.size())
        throw InvalidArgument("errors_vs_rank: r_max must lie in [0, " + std::to_string(c.size()) + "]");
    const SvdTriple svd(c);
    const auto h10 = SobolevWeight::h10(), h01 = SobolevWeight::h01();
    const auto l2 = SobolevWeight::l2(2), h1 = SobolevWeight::full_h1(2);

    ErrorReport rep;
    for (Index r = 1; r <= r_max; ++r) {
        ErrorRow row;
        row.r = r;
        row.sigma00 = svd.s00.value(r);
        row.sigma10 = svd.s10.value(r);
        row.sigma01 = svd.s01.value(r);

        const Coeffs2D dl2(Matrix(c.c - truncate(svd.s00, r).c));
        row.l2_err_l2svd = norm(dl2, l2);
        row.h1_err_l2svd = norm(dl2, h1);

        const Coeffs2D dtp(Matrix(c.c - h1_tensor_truncation(c, svd, r).c));
        row.h1_err_tensorproj = norm(dtp, h1);
        row.err10_tensorproj = norm(dtp, h10);
        row.err01_tensorproj = norm(dtp, h01);

        const auto [xc, yc] = pooled_candidates(svd.s00, svd.s10, svd.s01, r);
        const auto opt = optimal_h1_projection(c, xc, yc);
        row.h1_err_optimal = norm(Coeffs2D(Matrix(c.c - opt.approx.c)), h1);
        row.optimal_dependent = opt.dependent;

        row.estimator = error_estimator(svd.s10, svd.s01, r);
        rep.rows.push_back(row);
    }
    return rep;
}

} // namespace sobosvd

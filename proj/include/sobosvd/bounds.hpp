#pragma once
//
// Numerical evaluation of the singular-value relations and H1 error
// bounds for the Sobolev SVD variants, each checked against the exact
// coefficient-space error.
//

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "projections.hpp"

namespace sobosvd {

/// One bound evaluation: lower <= actual <= upper is expected.
struct BoundRow {
    std::string bound;
    Index r = 0;
    double lower = 0;
    double actual = 0;
    double upper = 0;
    /// Relative residual of an identity, NaN where not applicable.
    double residual = std::numeric_limits<double>::quiet_NaN();
    double residual_tolerance = std::numeric_limits<double>::quiet_NaN();
    bool satisfied = true;
    std::string note;

    double slack_lower() const { return lower > 0 ? actual / lower : std::numeric_limits<double>::infinity(); }
    double slack_upper() const { return actual > 0 ? upper / actual : std::numeric_limits<double>::infinity(); }
};

inline constexpr double bound_tolerance = 1e-9;

inline BoundRow make_bound_row(std::string name, Index r, double lower, double actual, double upper) {
    BoundRow row;
    row.bound = std::move(name);
    row.r = r;
    row.lower = lower;
    row.actual = actual;
    row.upper = upper;
    const double tol = bound_tolerance * (1.0 + std::abs(upper));
    row.satisfied = lower - tol <= actual && actual <= upper + tol;
    return row;
}

struct BoundReport {
    std::vector<BoundRow> rows;

    bool all_satisfied() const {
        return std::all_of(rows.begin(), rows.end(), [](const BoundRow& r) { return r.satisfied; });
    }
    void append(const BoundReport& other) { rows.insert(rows.end(), other.rows.begin(), other.rows.end()); }
};

// ---------------------------------------------------------------------------
// Regularity factors
// ---------------------------------------------------------------------------

/// sup over span(B) of ||v||_num / ||v||_den.
inline double regularity_factor(const SubspaceBasis& b, FactorKind num, FactorKind den) {
    if (b.dim() == 0) throw InvalidArgument("regularity_factor: basis is empty");
    const int n = max_frequency_for(b.columns.rows());
    const Matrix gn = b.columns.transpose() * weight_vector(n, num).asDiagonal() * b.columns;
    const Matrix gd = b.columns.transpose() * weight_vector(n, den).asDiagonal() * b.columns;
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(gn, gd, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw ConvergenceError("regularity_factor: generalized eigensolver failed", 0.0);
    return std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
}

/// L1 = sup ||v||_1/||v||_0, L2 = sup ||v||_2/||v||_1, product = L1*L2.
struct RegularityFactors {
    double h1_over_l2 = 0;
    double h2_over_h1 = 0;
    double product() const { return h1_over_l2 * h2_over_h1; }
};

inline RegularityFactors regularity_factors(const SubspaceBasis& b) {
    return {regularity_factor(b, FactorKind::H1, FactorKind::L2), regularity_factor(b, FactorKind::H2, FactorKind::H1)};
}

/// Operator bound sqrt(2) (sum_k ||psi_k||_0^2 + ||psi_k''||_0^2)^{1/2} on
/// ||P v||_1 / ||v||_0 for the H1-orthogonal projector onto span(B).
inline double lemma23_operator_bound(const SubspaceBasis& b) {
    const int n = max_frequency_for(b.ambient());
    const Vector h1 = weight_vector(n, FactorKind::H1);
    if ((b.weight - h1).cwiseAbs().maxCoeff() > 1e-12 * h1.maxCoeff())
        throw InvalidArgument("lemma23_operator_bound: basis must be orthonormal in the H1 weight");
    double s = 0.0;
    for (Index k = 0; k < b.dim(); ++k)
        for (Index i = 0; i < b.ambient(); ++i) {
            const double f = frequency(i);
            s += (1.0 + f * f * f * f) * b.columns(i, k) * b.columns(i, k);
        }
    return std::sqrt(2.0 * s);
}

// ---------------------------------------------------------------------------
// d = 2
// ---------------------------------------------------------------------------

namespace detail {

inline double weighted_sq(const Vector& v, const Vector& w) { return v.dot(w.cwiseProduct(v)); }

/// sum_{k>r} sigma_k^2 ||vec_k||_w^2, smallest terms first.
inline double scaled_tail(const SingularSystem<double>& s, const Matrix& vecs, const Vector& w, Index r) {
    double acc = 0.0;
    for (Index k = s.rank(); k > r; --k) acc += s.sigma[k - 1] * s.sigma[k - 1] * weighted_sq(vecs.col(k - 1), w);
    return acc;
}

} // namespace detail

/// Tail inequalities between the L2 and the (1,0)/(0,1) singular values,
/// in squared form, for r = 0..r_max.
inline BoundReport check_prop21(const SingularSystem<double>& s00, const SingularSystem<double>& s10,
                                const SingularSystem<double>& s01, Index r_max) {
    const int n = max_frequency_for(s00.row_weight.size());
    const Vector w1 = weight_vector(n, FactorKind::H1);
    BoundReport rep;
    for (Index r = 0; r <= r_max; ++r) {
        rep.rows.push_back(make_bound_row("prop21_10", r, s00.tail_squared(r), s10.tail_squared(r),
                                          detail::scaled_tail(s00, s00.left, w1, r)));
        rep.rows.push_back(make_bound_row("prop21_01", r, s00.tail_squared(r), s01.tail_squared(r),
                                          detail::scaled_tail(s00, s00.right, w1, r)));
    }
    return rep;
}

/// Identity sigma_r^10 = ||psi_r^1||_0^{-1/2} (sum_k (sigma_k^00)^4 <psi_r^1, psi_k>_1^2)^{1/4}
/// and the lower bound sigma_r^10 >= sigma_r^00 (|<psi_r^1, psi_r>_1| / ||psi_r^1||_0)^{1/2};
/// likewise for (0,1) with the right vectors.
///
/// The identity is ill-conditioned for small sigma_r (errors of order
/// (sigma_1/sigma_r)^4 eps^2), so callers verifying it far down the
/// spectrum should supply systems computed in extended precision.
template <class Scalar>
BoundReport check_thm22(const SingularSystem<Scalar>& s00, const SingularSystem<Scalar>& s10,
                        const SingularSystem<Scalar>& s01, Index r, double residual_tolerance = 1e-8) {
    using std::abs;
    using std::pow;
    using std::sqrt;
    BoundReport rep;
    if (r < 1) throw InvalidArgument("check_thm22: rank index starts at 1");
    const int n = max_frequency_for(s00.row_weight.size());
    const VectorX<Scalar> w1 = weight_vector(n, FactorKind::H1).cast<Scalar>();

    auto one = [&](const char* name, const SingularSystem<Scalar>& sv, const MatrixX<Scalar>& h1vecs,
                   const MatrixX<Scalar>& l2vecs) {
        if (r > sv.rank() || r > s00.rank()) {
            BoundRow row;
            row.bound = name;
            row.r = r;
            row.note = "skipped: sigma_r = 0";
            rep.rows.push_back(row);
            return;
        }
        const VectorX<Scalar> v1 = h1vecs.col(r - 1);
        const VectorX<Scalar> wv1 = w1.cwiseProduct(v1);
        Scalar sum(0);
        for (Index k = s00.rank(); k >= 1; --k) {
            const Scalar ip = wv1.dot(l2vecs.col(k - 1));
            const Scalar s2 = s00.sigma[k - 1] * s00.sigma[k - 1];
            sum += s2 * s2 * ip * ip;
        }
        const Scalar l2n = v1.norm();
        const Scalar identity = sqrt(sqrt(sum)) / sqrt(l2n);
        const Scalar own = abs(wv1.dot(l2vecs.col(r - 1)));
        const Scalar lower = s00.sigma[r - 1] * sqrt(own / l2n);
        const Scalar sigma = sv.sigma[r - 1];
        BoundRow row = make_bound_row(name, r, double(lower), double(sigma), double(identity) * (1.0 + residual_tolerance));
        row.residual = double(abs(identity - sigma) / sigma);
        row.residual_tolerance = residual_tolerance;
        row.satisfied = row.satisfied && row.residual < residual_tolerance;
        rep.rows.push_back(row);
    };
    one("thm22_10", s10, s10.left, s00.left);
    one("thm22_01", s01, s01.right, s00.right);
    return rep;
}

/// Two-sided H1 bound for (P_r (x) Q_r) in terms of the (1,0)/(0,1) tails
/// and the regularity constants L(r), R(r) of B^1_r and B^2_r.
inline BoundRow check_thm24(const Coeffs2D& c, const SingularSystem<double>& s10, const SingularSystem<double>& s01,
                            Index r) {
    if (r < 0) throw InvalidArgument("check_thm24: negative rank");
    const auto b1 = subspace_from_svd(s10, Side::Left, std::min(r, s10.rank()));
    const auto b2 = subspace_from_svd(s01, Side::Right, std::min(r, s01.rank()));
    const double L = b1.dim() > 0 ? regularity_factors(b1).product() : 0.0;
    const double R = b2.dim() > 0 ? regularity_factors(b2).product() : 0.0;
    const double t10 = s10.tail_squared(r), t01 = s01.tail_squared(r);
    const double rr = double(r) * double(r);
    const double upper = std::sqrt((1.0 + 2.0 * rr * R * R) * t10 + (1.0 + 2.0 * rr * L * L) * t01);
    const double lower = std::sqrt(t10 + t01) / std::sqrt(2.0);
    const double actual = h1_norm(Coeffs2D(Matrix(c.c - tensor_project(c, b1, b2).c)));
    return make_bound_row("thm24", r, lower, actual, upper);
}

/// Bounds of the H1 error of the H1_mix truncation, squared:
/// (1/2) S <= ||u - u_r||_1^2 <= S, S = sum_{k>r} sigma_k^2 (||phi_k||_0^2 + ||psi_k||_0^2).
inline BoundRow check_prop33(const Coeffs2D& c, const SingularSystem<double>& smix, Index r) {
    if (smix.variant != SvdVariant::Mix) throw InvalidArgument("check_prop33: expected an H1_mix system");
    if (r < 0) throw InvalidArgument("check_prop33: negative rank");
    const Vector ones = Vector::Ones(smix.row_weight.size());
    double s = 0.0;
    for (Index k = smix.rank(); k > r; --k)
        s += smix.sigma[k - 1] * smix.sigma[k - 1] *
             (smix.left.col(k - 1).squaredNorm() + smix.right.col(k - 1).squaredNorm());
    const double actual = norm_squared(Coeffs2D(Matrix(c.c - truncate(smix, r).c)), SobolevWeight::full_h1(2));
    return make_bound_row("prop33", r, 0.5 * s, actual, s);
}

inline BoundRow check_prop33(const Coeffs2D& c, Index r) {
    return check_prop33(c, weighted_svd(c, SvdVariant::Mix), r);
}

// ---------------------------------------------------------------------------
// d = 3
// ---------------------------------------------------------------------------

/// Permutation of the modes; determines the nested index sets used when
/// peeling projectors off one at a time.
struct PeelOrder {
    std::array<int, 3> perm{0, 1, 2};

    PeelOrder() = default;
    explicit PeelOrder(std::array<int, 3> p) : perm(p) {
        std::array<int, 3> s = p;
        std::sort(s.begin(), s.end());
        if (s != std::array<int, 3>{0, 1, 2}) throw InvalidArgument("PeelOrder: not a permutation of (0,1,2)");
    }

    /// I_i^j (i = 1..3): the first i-1 modes of the permutation other than j.
    std::vector<int> set(int j, int i) const {
        std::vector<int> s;
        for (int m : perm) {
            if (static_cast<int>(s.size()) >= i - 1) break;
            if (m != j) s.push_back(m);
        }
        return s;
    }

    std::string label() const {
        return std::to_string(perm[0] + 1) + std::to_string(perm[1] + 1) + std::to_string(perm[2] + 1);
    }

    static std::vector<PeelOrder> all() {
        std::vector<PeelOrder> out;
        std::array<int, 3> p{0, 1, 2};
        do out.emplace_back(p);
        while (std::next_permutation(p.begin(), p.end()));
        return out;
    }
};

namespace detail {

inline Coeffs3D compose_mode_projections(const Coeffs3D& t, const std::array<SubspaceBasis, 3>& bases) {
    Coeffs3D out = t;
    for (int mode = 0; mode < 3; ++mode) out = mode_multiply(out, projector(bases[mode]), mode);
    return out;
}

inline std::array<SubspaceBasis, 3> leading_bases(const std::array<SingularSystem<double>, 3>& sys, Index r) {
    std::array<SubspaceBasis, 3> b;
    for (int j = 0; j < 3; ++j) b[j] = subspace_from_svd(sys[j], Side::Left, std::min(r, sys[j].rank()));
    return b;
}

} // namespace detail

/// H1 error of the composed mode-wise H1 projections onto B^j_r versus the
/// peeling bound, for one or all peel orders. The last row ("thm25_min")
/// carries the smallest bound.
inline BoundReport check_thm25(const Coeffs3D& t, Index r, std::optional<PeelOrder> order = std::nullopt) {
    if (r < 0) throw InvalidArgument("check_thm25: negative rank");
    const auto sys = hosvd3(t, HosvdFamily::PlainH1);
    const auto bases = detail::leading_bases(sys, r);
    std::array<double, 3> cfac{}, tail{};
    for (int j = 0; j < 3; ++j) {
        cfac[j] = bases[j].dim() > 0 ? regularity_factors(bases[j]).product() : 0.0;
        tail[j] = sys[j].tail_squared(r);
    }
    const double actual = h1_norm(t - detail::compose_mode_projections(t, bases));

    const auto orders = order ? std::vector<PeelOrder>{*order} : PeelOrder::all();
    BoundReport rep;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& o : orders) {
        double s = 0.0;
        for (int j = 0; j < 3; ++j) {
            double bracket = 0.0;
            for (int i = 1; i <= 3; ++i) {
                double term = std::pow(2.0 * double(r) * double(r), i - 1);
                for (int l : o.set(j, i)) term *= cfac[l] * cfac[l];
                bracket += term;
            }
            s += tail[j] * bracket;
        }
        const double bound = std::sqrt(s);
        best = std::min(best, bound);
        rep.rows.push_back(make_bound_row("thm25[" + o.label() + "]", r, 0.0, actual, bound));
    }
    rep.rows.push_back(make_bound_row("thm25_min", r, 0.0, actual, best));
    return rep;
}

/// H1 error of the composed H1 projections onto M^j_r (mixed-norm mode
/// SVDs) versus 2 r^{1/2} min_J sum_j [max_i prod D_k] tail_{J(j)}^{1/2}.
/// Requires r >= 1.
inline BoundReport check_prop32(const Coeffs3D& t, Index r) {
    if (r < 1) throw InvalidArgument("check_prop32: rank must be at least 1");
    const auto sys = hosvd3(t, HosvdFamily::MixJ);
    const auto bases = detail::leading_bases(sys, r);
    std::array<double, 3> dfac{}, tail{};
    for (int j = 0; j < 3; ++j) {
        dfac[j] = bases[j].dim() > 0 ? regularity_factor(bases[j], FactorKind::H2, FactorKind::H1) : 0.0;
        tail[j] = sys[j].tail_squared(r);
    }
    const double actual = h1_norm(t - detail::compose_mode_projections(t, bases));
    const double d = 3.0;
    const double prefactor = 2.0 * std::pow(double(r), (d - 2.0) / 2.0);

    BoundReport rep;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& o : PeelOrder::all()) {
        double s = 0.0;
        for (int j = 0; j < 3; ++j) {
            double worst = 0.0;
            for (int i = 0; i < 3; ++i) {
                if (i == o.perm[j]) continue;
                double prod = 1.0;
                for (int k = 0; k < j; ++k)
                    if (o.perm[k] != i) prod *= dfac[o.perm[k]];
                worst = std::max(worst, prod);
            }
            s += worst * std::sqrt(tail[o.perm[j]]);
        }
        const double bound = prefactor * s;
        best = std::min(best, bound);
        rep.rows.push_back(make_bound_row("prop32[" + o.label() + "]", r, 0.0, actual, bound));
    }
    rep.rows.push_back(make_bound_row("prop32_min", r, 0.0, actual, best));
    return rep;
}

} // namespace sobosvd

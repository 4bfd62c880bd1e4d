#pragma once
//
// SVDs of coefficient arrays under pairs of diagonal Sobolev weights.
//
// For row weight R and column weight S the SVD of u viewed as an element
// of the corresponding tensor space is obtained from the plain SVD of
// R^{1/2} C S^{1/2}, de-scaled so that left vectors are R-orthonormal and
// right vectors S-orthonormal.
//

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "fourier.hpp"
#include "jacobi_svd.hpp"

namespace sobosvd {

/// Which pair of inner products the SVD is taken in.
enum class SvdVariant {
    L2L2,     ///< "00": plain L2-SVD
    H1L2,     ///< "10": H^(1,0)
    L2H1,     ///< "01": H^(0,1)
    Mix,      ///< "mix": H1_mix
    ModeH1,   ///< "h1j": mode j in H1, complement in L2 (3-D)
    ModeMix,  ///< "mixj": mode j in H1, complement in full H1 (3-D)
    Scaled,   ///< plain SVD of the entrywise H1-scaled array
};

constexpr std::string_view variant_tag(SvdVariant v) noexcept {
    switch (v) {
    case SvdVariant::L2L2: return "00";
    case SvdVariant::H1L2: return "10";
    case SvdVariant::L2H1: return "01";
    case SvdVariant::Mix: return "mix";
    case SvdVariant::ModeH1: return "h1j";
    case SvdVariant::ModeMix: return "mixj";
    case SvdVariant::Scaled: return "scaled";
    }
    return "?";
}

/// Row/column factor kinds of the 2-D variants.
inline std::pair<FactorKind, FactorKind> variant_factors(SvdVariant v) {
    switch (v) {
    case SvdVariant::L2L2: return {FactorKind::L2, FactorKind::L2};
    case SvdVariant::H1L2: return {FactorKind::H1, FactorKind::L2};
    case SvdVariant::L2H1: return {FactorKind::L2, FactorKind::H1};
    case SvdVariant::Mix: return {FactorKind::H1, FactorKind::H1};
    default: break;
    }
    throw InvalidArgument("variant " + std::string(variant_tag(v)) + " is not a two-dimensional product variant");
}

/// sigma, left and right vectors; left^T diag(row_weight) left = I and
/// likewise for the right side. Only the numerically nonzero part is kept.
template <class Scalar = double>
struct SingularSystem {
    SvdVariant variant = SvdVariant::L2L2;
    int mode = 0;  // 3-D variants only
    VectorX<Scalar> sigma;
    MatrixX<Scalar> left;
    MatrixX<Scalar> right;
    VectorX<Scalar> row_weight;
    VectorX<Scalar> col_weight;

    Index rank() const noexcept { return sigma.size(); }

    /// sigma_k (1-based), zero beyond the rank.
    Scalar value(Index k) const { return k >= 1 && k <= rank() ? sigma[k - 1] : Scalar(0); }

    /// sum_{k>r} sigma_k^2, accumulated from the smallest term up.
    Scalar tail_squared(Index r) const {
        Scalar s(0);
        for (Index k = rank(); k > r; --k) s += sigma[k - 1] * sigma[k - 1];
        return s;
    }
};

/// SVD of diag(rw)^{1/2} c diag(cw)^{1/2}, de-scaled.
template <class Scalar = double>
SingularSystem<Scalar> weighted_svd(const MatrixX<Scalar>& c, const VectorX<Scalar>& rw, const VectorX<Scalar>& cw,
                                    SvdVariant variant, const JacobiOptions& opt = {}) {
    using std::sqrt;
    if (rw.size() != c.rows() || cw.size() != c.cols())
        throw InvalidArgument("weighted_svd: weight length does not match the coefficient array");
    if ((rw.array() <= Scalar(0)).any() || (cw.array() <= Scalar(0)).any())
        throw InvalidArgument("weighted_svd: weights must be positive");
    const VectorX<Scalar> rs = rw.cwiseSqrt(), cs = cw.cwiseSqrt();
    const MatrixX<Scalar> scaled = rs.asDiagonal() * c * cs.asDiagonal();
    auto svd = jacobi_svd<Scalar>(scaled, opt);

    SingularSystem<Scalar> out;
    out.variant = variant;
    out.sigma = std::move(svd.s);
    out.left = rs.cwiseInverse().asDiagonal() * svd.u;
    out.right = cs.cwiseInverse().asDiagonal() * svd.v;
    out.row_weight = rw;
    out.col_weight = cw;
    return out;
}

/// The L2-, H^(1,0)-, H^(0,1)- or H1_mix-SVD of a 2-D coefficient array.
template <class Scalar = double>
SingularSystem<Scalar> weighted_svd(const Coeffs2D& c, SvdVariant variant, const JacobiOptions& opt = {}) {
    const auto [rk, ck] = variant_factors(variant);
    const int n = c.n();
    return weighted_svd<Scalar>(c.c.cast<Scalar>(), weight_vector(n, rk).cast<Scalar>(),
                                weight_vector(n, ck).cast<Scalar>(), variant, opt);
}

// ---------------------------------------------------------------------------
// d = 3
// ---------------------------------------------------------------------------

enum class HosvdFamily {
    PlainH1,  ///< mode j in H1, complement in L2
    MixJ,     ///< mode j in H1, complement in full H1
};

/// Column weights of the mode-j unfolding for the chosen family.
inline Vector complement_weight(int n, int mode, HosvdFamily family) {
    const Index N = basis_size(n);
    Coeffs3D::complement(mode);
    Vector w(N * N);
    for (Index b = 0; b < N; ++b)
        for (Index a = 0; a < N; ++a) {
            const double ka = frequency(a), kb = frequency(b);
            w[a + N * b] = family == HosvdFamily::PlainH1 ? 1.0 : 1.0 + ka * ka + kb * kb;
        }
    return w;
}

/// One weighted SVD per mode unfolding.
template <class Scalar = double>
std::array<SingularSystem<Scalar>, 3> hosvd3(const Coeffs3D& t, HosvdFamily family, const JacobiOptions& opt = {}) {
    if (!t.all_finite()) throw NonFiniteError("hosvd3: non-finite coefficient");
    const int n = t.n();
    std::array<SingularSystem<Scalar>, 3> out;
    const auto variant = family == HosvdFamily::PlainH1 ? SvdVariant::ModeH1 : SvdVariant::ModeMix;
    for (int mode = 0; mode < 3; ++mode) {
        out[mode] = weighted_svd<Scalar>(t.matricize(mode).cast<Scalar>(), weight_vector(n, FactorKind::H1).cast<Scalar>(),
                                         complement_weight(n, mode, family).cast<Scalar>(), variant, opt);
        out[mode].mode = mode;
    }
    return out;
}

// ---------------------------------------------------------------------------
// H_2D spectrum
// ---------------------------------------------------------------------------

struct MergedEntry {
    double value;
    SvdVariant source;  // H1L2 or L2H1
    Index index;        // 1-based index in the source system
};

struct MergedSpectrum {
    std::vector<MergedEntry> entries;

    std::vector<double> values() const {
        std::vector<double> v;
        v.reserve(entries.size());
        for (const auto& e : entries) v.push_back(e.value);
        return v;
    }
};

/// Sorted union of the (1,0) and (0,1) singular values with provenance.
/// Ties go to the (1,0) system first, then by source index.
template <class Scalar>
MergedSpectrum h2d_union(const SingularSystem<Scalar>& s10, const SingularSystem<Scalar>& s01) {
    if (s10.variant != SvdVariant::H1L2 || s01.variant != SvdVariant::L2H1)
        throw InvalidArgument("h2d_union: expected a \"10\" and a \"01\" system, got \"" +
                              std::string(variant_tag(s10.variant)) + "\" and \"" +
                              std::string(variant_tag(s01.variant)) + "\"");
    MergedSpectrum m;
    m.entries.reserve(s10.rank() + s01.rank());
    Index i = 0, j = 0;
    while (i < s10.rank() || j < s01.rank()) {
        const bool take10 = j >= s01.rank() || (i < s10.rank() && s10.sigma[i] >= s01.sigma[j]);
        if (take10) {
            m.entries.push_back({double(s10.sigma[i]), SvdVariant::H1L2, i + 1});
            ++i;
        } else {
            m.entries.push_back({double(s01.sigma[j]), SvdVariant::L2H1, j + 1});
            ++j;
        }
    }
    return m;
}

} // namespace sobosvd

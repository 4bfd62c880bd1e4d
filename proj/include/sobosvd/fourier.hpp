#pragma once
//
// Real trigonometric basis on [-pi,pi]^d and coefficient arrays.
//
// Basis index i of a 1-D factor with maximum frequency n (size 2n+1):
//   0 -> 1/sqrt(2 pi),  2k-1 -> cos(k x)/sqrt(pi),  2k -> sin(k x)/sqrt(pi).
// The basis is L2-orthonormal and orthogonal in every Sobolev inner product
// used here, so all norms are diagonal-weighted sums over coefficients.
//

#include <array>
#include <cmath>
#include <concepts>
#include <initializer_list>
#include <numbers>
#include <span>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"

namespace sobosvd {

using Index  = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double pi = std::numbers::pi;

/// Frequency carried by basis index i.
constexpr int frequency(Index i) noexcept { return static_cast<int>((i + 1) / 2); }

constexpr Index basis_size(int n) noexcept { return 2 * static_cast<Index>(n) + 1; }

inline double basis_value(Index i, double x) {
    if (i == 0)
        return 1.0 / std::sqrt(2.0 * pi);
    const double k = frequency(i);
    return (i % 2 == 1 ? std::cos(k * x) : std::sin(k * x)) / std::sqrt(pi);
}

// ---------------------------------------------------------------------------
// Sobolev weights
// ---------------------------------------------------------------------------

/// Per-factor Sobolev norm: L2 -> 1, H1 -> 1+k^2, H2 -> 1+k^2+k^4.
enum class FactorKind { L2, H1, H2 };

constexpr double factor_weight(FactorKind kind, int k) noexcept {
    const double k2 = double(k) * double(k);
    switch (kind) {
    case FactorKind::L2: return 1.0;
    case FactorKind::H1: return 1.0 + k2;
    case FactorKind::H2: return 1.0 + k2 + k2 * k2;
    }
    return 1.0;
}

/// Diagonal of the Gram matrix of one factor's basis in the given norm.
inline Vector weight_vector(int n, FactorKind kind) {
    Vector w(basis_size(n));
    for (Index i = 0; i < w.size(); ++i)
        w[i] = factor_weight(kind, frequency(i));
    return w;
}

/// Rule mapping a frequency tuple to a positive weight.
///
/// Product weights cover L2, the crossnorms (1,0)/(0,1) and H1_mix;
/// FullH1 is 1 + sum k_i^2; MixJ(j) is (1+k_j^2)(1 + sum_{i!=j} k_i^2).
class SobolevWeight {
public:
    enum class Kind { Product, FullH1, MixJ };

    static SobolevWeight product(std::initializer_list<FactorKind> factors) {
        SobolevWeight w(Kind::Product, static_cast<int>(factors.size()));
        if (w.dims_ < 1 || w.dims_ > 3)
            throw InvalidArgument("SobolevWeight: 1 to 3 factors supported");
        int d = 0;
        for (auto f : factors) w.factors_[d++] = f;
        return w;
    }
    static SobolevWeight l2(int dims) {
        check_dims(dims);
        SobolevWeight w(Kind::Product, dims);
        return w;
    }
    static SobolevWeight full_h1(int dims) {
        check_dims(dims);
        return SobolevWeight(Kind::FullH1, dims);
    }
    static SobolevWeight h10() { return product({FactorKind::H1, FactorKind::L2}); }
    static SobolevWeight h01() { return product({FactorKind::L2, FactorKind::H1}); }
    static SobolevWeight mix2d() { return product({FactorKind::H1, FactorKind::H1}); }
    /// Mixed norm of V_j in three variables, mode in {0,1,2}.
    static SobolevWeight mixj(int mode) {
        if (mode < 0 || mode > 2) throw InvalidArgument("SobolevWeight::mixj: mode must be 0, 1 or 2");
        SobolevWeight w(Kind::MixJ, 3);
        w.mode_ = mode;
        return w;
    }

    Kind kind() const noexcept { return kind_; }
    int dims() const noexcept { return dims_; }
    int mode() const noexcept { return mode_; }

    double operator()(std::span<const int> k) const {
        if (static_cast<int>(k.size()) != dims_)
            throw InvalidArgument("SobolevWeight: frequency tuple has wrong dimension");
        switch (kind_) {
        case Kind::Product: {
            double w = 1.0;
            for (int d = 0; d < dims_; ++d) w *= factor_weight(factors_[d], k[d]);
            return w;
        }
        case Kind::FullH1: {
            double w = 1.0;
            for (int d = 0; d < dims_; ++d) w += double(k[d]) * k[d];
            return w;
        }
        case Kind::MixJ: {
            double rest = 1.0;
            for (int d = 0; d < dims_; ++d)
                if (d != mode_) rest += double(k[d]) * k[d];
            return (1.0 + double(k[mode_]) * k[mode_]) * rest;
        }
        }
        return 1.0;
    }
    double operator()(int k, int m) const {
        const std::array<int, 2> f{k, m};
        return (*this)(f);
    }
    double operator()(int k, int m, int l) const {
        const std::array<int, 3> f{k, m, l};
        return (*this)(f);
    }

private:
    SobolevWeight(Kind kind, int dims) : kind_(kind), dims_(dims) { factors_.fill(FactorKind::L2); }

    static void check_dims(int dims) {
        if (dims < 1 || dims > 3) throw InvalidArgument("SobolevWeight: dimension must be 1, 2 or 3");
    }

    Kind kind_;
    int dims_;
    int mode_ = 0;
    std::array<FactorKind, 3> factors_{};
};

// ---------------------------------------------------------------------------
// Coefficient arrays
// ---------------------------------------------------------------------------

inline int max_frequency_for(Index size) {
    if (size < 1 || size % 2 == 0)
        throw InvalidArgument("coefficient dimension must be odd and positive, got " + std::to_string(size));
    return static_cast<int>((size - 1) / 2);
}

/// Coefficients c(i,j) of basis_i(x) basis_j(y).
struct Coeffs2D {
    Matrix c;

    Coeffs2D() = default;
    explicit Coeffs2D(int n) : c(Matrix::Zero(basis_size(n), basis_size(n))) {}
    explicit Coeffs2D(Matrix m) : c(std::move(m)) {
        if (c.rows() != c.cols())
            throw InvalidArgument("Coeffs2D: coefficient array must be square");
        max_frequency_for(c.rows());
        if (!c.allFinite()) throw NonFiniteError("Coeffs2D: non-finite coefficient");
    }

    int n() const { return max_frequency_for(c.rows()); }
    Index size() const noexcept { return c.rows(); }
};

/// Coefficients of basis_i(x) basis_j(y) basis_l(z), i fastest.
class Coeffs3D {
public:
    Coeffs3D() = default;
    explicit Coeffs3D(int n) : size_(basis_size(n)), data_(size_ * size_ * size_, 0.0) {}

    int n() const { return max_frequency_for(size_); }
    Index size() const noexcept { return size_; }

    double& operator()(Index i, Index j, Index l) { return data_[i + size_ * (j + size_ * l)]; }
    double operator()(Index i, Index j, Index l) const { return data_[i + size_ * (j + size_ * l)]; }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    /// The two modes complementary to `mode`, in increasing order.
    static std::array<int, 2> complement(int mode) {
        switch (mode) {
        case 0: return {1, 2};
        case 1: return {0, 2};
        case 2: return {0, 1};
        }
        throw InvalidArgument("Coeffs3D: mode must be 0, 1 or 2");
    }

    /// Mode-j unfolding: rows indexed by mode j, column a + N*b over the
    /// complementary modes (a the lower-numbered one).
    Matrix matricize(int mode) const {
        complement(mode);
        Matrix m(size_, size_ * size_);
        for (Index l = 0; l < size_; ++l)
            for (Index j = 0; j < size_; ++j)
                for (Index i = 0; i < size_; ++i) {
                    const std::array<Index, 3> idx{i, j, l};
                    const auto [a, b] = complement(mode);
                    m(idx[mode], idx[a] + size_ * idx[b]) = (*this)(i, j, l);
                }
        return m;
    }

    static Coeffs3D from_matricization(const Matrix& m, int mode) {
        const Index N = m.rows();
        if (m.cols() != N * N) throw InvalidArgument("Coeffs3D: unfolding has wrong shape");
        Coeffs3D t;
        t.size_ = N;
        t.data_.assign(N * N * N, 0.0);
        const auto [a, b] = complement(mode);
        for (Index l = 0; l < N; ++l)
            for (Index j = 0; j < N; ++j)
                for (Index i = 0; i < N; ++i) {
                    const std::array<Index, 3> idx{i, j, l};
                    t(i, j, l) = m(idx[mode], idx[a] + N * idx[b]);
                }
        return t;
    }

    bool all_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

private:
    Index size_ = 0;
    std::vector<double> data_;
};

inline Coeffs3D operator-(const Coeffs3D& a, const Coeffs3D& b) {
    if (a.size() != b.size()) throw InvalidArgument("Coeffs3D: size mismatch");
    Coeffs3D r = a;
    auto rd = r.data();
    auto bd = b.data();
    for (std::size_t i = 0; i < rd.size(); ++i) rd[i] -= bd[i];
    return r;
}

/// Applies a linear map on the mode-`mode` coefficient index: T x_mode op.
inline Coeffs3D mode_multiply(const Coeffs3D& t, const Matrix& op, int mode) {
    if (op.rows() != t.size() || op.cols() != t.size())
        throw InvalidArgument("mode_multiply: operator size mismatch");
    return Coeffs3D::from_matricization(op * t.matricize(mode), mode);
}

// ---------------------------------------------------------------------------
// Weighted norms
// ---------------------------------------------------------------------------

/// Weight matrix W(i,j) = w(freq i, freq j) for a 2-D weight.
inline Matrix weight_matrix(int n, const SobolevWeight& w) {
    if (w.dims() != 2) throw InvalidArgument("weight_matrix: weight is not two-dimensional");
    const Index N = basis_size(n);
    Matrix m(N, N);
    for (Index j = 0; j < N; ++j)
        for (Index i = 0; i < N; ++i) m(i, j) = w(frequency(i), frequency(j));
    return m;
}

/// sum w(freqs) c^2, the squared Sobolev norm by Parseval.
inline double norm_squared(const Coeffs2D& c, const SobolevWeight& w) {
    if (w.dims() != 2)
        throw InvalidArgument("norm: weight dimension " + std::to_string(w.dims()) + " does not match 2-D coefficients");
    double s = 0.0;
    for (Index j = 0; j < c.c.cols(); ++j)
        for (Index i = 0; i < c.c.rows(); ++i) s += w(frequency(i), frequency(j)) * c.c(i, j) * c.c(i, j);
    return s;
}

inline double norm_squared(const Coeffs3D& c, const SobolevWeight& w) {
    if (w.dims() != 3)
        throw InvalidArgument("norm: weight dimension " + std::to_string(w.dims()) + " does not match 3-D coefficients");
    const Index N = c.size();
    double s = 0.0;
    for (Index l = 0; l < N; ++l)
        for (Index j = 0; j < N; ++j)
            for (Index i = 0; i < N; ++i) {
                const double v = c(i, j, l);
                s += w(frequency(i), frequency(j), frequency(l)) * v * v;
            }
    return s;
}

template <class C>
double norm(const C& c, const SobolevWeight& w) {
    return std::sqrt(norm_squared(c, w));
}

inline double h1_norm(const Coeffs2D& c) { return norm(c, SobolevWeight::full_h1(2)); }
inline double h1_norm(const Coeffs3D& c) { return norm(c, SobolevWeight::full_h1(3)); }

// ---------------------------------------------------------------------------
// Analysis and synthesis
// ---------------------------------------------------------------------------

namespace detail {

/// Rows: basis functions; columns: trapezoid nodes, pre-multiplied by the node weight.
inline Matrix quadrature_basis(int n, Index nodes) {
    const Index N = basis_size(n);
    const double h = 2.0 * pi / double(nodes);
    Matrix phi(N, nodes);
    for (Index p = 0; p < nodes; ++p) {
        const double x = -pi + h * double(p);
        for (Index i = 0; i < N; ++i) phi(i, p) = h * basis_value(i, x);
    }
    return phi;
}

inline double node(Index p, Index nodes) { return -pi + 2.0 * pi * double(p) / double(nodes); }

[[noreturn]] inline void throw_non_finite(std::initializer_list<double> point) {
    std::ostringstream os;
    os.precision(17);
    os << "analyze: non-finite sample at (";
    bool first = true;
    for (double v : point) {
        os << (first ? "" : ", ") << v;
        first = false;
    }
    os << ")";
    throw NonFiniteError(os.str());
}

inline void check_analysis_args(int n, int q) {
    if (n < 0) throw InvalidArgument("analyze: maximum frequency must be nonnegative");
    if (q < 2) throw InvalidArgument("analyze: oversampling factor must be at least 2");
}

} // namespace detail

/// Trapezoid-rule projection onto the basis, q(2n+1) nodes per direction.
template <class F>
    requires std::invocable<F&, double, double>
Coeffs2D analyze(F&& f, int n, int q = 4) {
    detail::check_analysis_args(n, q);
    const Index M = q * basis_size(n);
    const Matrix phi = detail::quadrature_basis(n, M);
    // h(p, :) = phi * f(x_p, .)
    Matrix h(M, phi.rows());
    Vector row(M);
    for (Index p = 0; p < M; ++p) {
        const double x = detail::node(p, M);
        for (Index s = 0; s < M; ++s) {
            const double y = detail::node(s, M);
            const double v = f(x, y);
            if (!std::isfinite(v)) detail::throw_non_finite({x, y});
            row[s] = v;
        }
        h.row(p) = (phi * row).transpose();
    }
    return Coeffs2D(Matrix(phi * h));
}

template <class F>
    requires std::invocable<F&, double, double, double>
Coeffs3D analyze(F&& f, int n, int q = 4) {
    detail::check_analysis_args(n, q);
    const Index N = basis_size(n);
    const Index M = q * N;
    const Matrix phi = detail::quadrature_basis(n, M);
    // Contract z, then y, then x.
    std::vector<double> stage1(M * M * N);  // (p, s, l)
    Vector fiber(M);
    for (Index s = 0; s < M; ++s)
        for (Index p = 0; p < M; ++p) {
            const double x = detail::node(p, M), y = detail::node(s, M);
            for (Index t = 0; t < M; ++t) {
                const double z = detail::node(t, M);
                const double v = f(x, y, z);
                if (!std::isfinite(v)) detail::throw_non_finite({x, y, z});
                fiber[t] = v;
            }
            const Vector r = phi * fiber;
            for (Index l = 0; l < N; ++l) stage1[p + M * (s + M * l)] = r[l];
        }
    std::vector<double> stage2(M * N * N);  // (p, j, l)
    Vector ys(M);
    for (Index l = 0; l < N; ++l)
        for (Index p = 0; p < M; ++p) {
            for (Index s = 0; s < M; ++s) ys[s] = stage1[p + M * (s + M * l)];
            const Vector r = phi * ys;
            for (Index j = 0; j < N; ++j) stage2[p + M * (j + N * l)] = r[j];
        }
    Coeffs3D out(n);
    Vector xs(M);
    for (Index l = 0; l < N; ++l)
        for (Index j = 0; j < N; ++j) {
            for (Index p = 0; p < M; ++p) xs[p] = stage2[p + M * (j + N * l)];
            const Vector r = phi * xs;
            for (Index i = 0; i < N; ++i) out(i, j, l) = r[i];
        }
    return out;
}

inline Vector basis_values(int n, double x) {
    Vector v(basis_size(n));
    for (Index i = 0; i < v.size(); ++i) v[i] = basis_value(i, x);
    return v;
}

/// Pointwise evaluation of the expansion.
inline std::vector<double> synthesize(const Coeffs2D& c, std::span<const std::array<double, 2>> points) {
    const int n = c.n();
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& [x, y] : points) {
        if (!std::isfinite(x) || !std::isfinite(y)) throw NonFiniteError("synthesize: non-finite point");
        out.push_back(basis_values(n, x).dot(c.c * basis_values(n, y)));
    }
    return out;
}

inline std::vector<double> synthesize(const Coeffs3D& c, std::span<const std::array<double, 3>> points) {
    const int n = c.n();
    const Index N = c.size();
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& [x, y, z] : points) {
        if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z))
            throw NonFiniteError("synthesize: non-finite point");
        const Vector bx = basis_values(n, x), by = basis_values(n, y), bz = basis_values(n, z);
        double s = 0.0;
        for (Index l = 0; l < N; ++l)
            for (Index j = 0; j < N; ++j) {
                const double w = by[j] * bz[l];
                for (Index i = 0; i < N; ++i) s += c(i, j, l) * bx[i] * w;
            }
        out.push_back(s);
    }
    return out;
}

} // namespace sobosvd

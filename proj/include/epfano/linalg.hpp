#pragma once

// Small dense complex linear algebra: fixed-size matrices up to 4x4,
// polynomial roots (Aberth-Ehrlich), closed-form 2x2 and adjugate-based 4x4
// eigen-decompositions with biorthonormal left/right vectors.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "epfano/errors.hpp"

namespace epfano {

using cplx = std::complex<double>;

template <std::size_t R, std::size_t C>
struct Matrix {
    std::array<cplx, R * C> data{};

    static constexpr std::size_t rows = R;
    static constexpr std::size_t cols = C;

    cplx& operator()(std::size_t i, std::size_t j) { return data[i * C + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data[i * C + j]; }

    static Matrix identity() requires(R == C)
    {
        Matrix m;
        for (std::size_t i = 0; i < R; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix diagonal(std::span<const cplx> d) requires(R == C)
    {
        Matrix m;
        for (std::size_t i = 0; i < R && i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    Matrix& operator+=(const Matrix& o)
    {
        for (std::size_t k = 0; k < R * C; ++k) data[k] += o.data[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o)
    {
        for (std::size_t k = 0; k < R * C; ++k) data[k] -= o.data[k];
        return *this;
    }
    Matrix& operator*=(cplx s)
    {
        for (auto& x : data) x *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, cplx s) { return a *= s; }
    friend Matrix operator*(cplx s, Matrix a) { return a *= s; }
    friend Matrix operator-(Matrix a)
    {
        for (auto& x : a.data) x = -x;
        return a;
    }

    Matrix<C, R> transpose() const
    {
        Matrix<C, R> t;
        for (std::size_t i = 0; i < R; ++i)
            for (std::size_t j = 0; j < C; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    cplx trace() const requires(R == C)
    {
        cplx s = 0.0;
        for (std::size_t i = 0; i < R; ++i) s += (*this)(i, i);
        return s;
    }
};

template <std::size_t R, std::size_t K, std::size_t C>
Matrix<R, C> operator*(const Matrix<R, K>& a, const Matrix<K, C>& b)
{
    Matrix<R, C> out;
    for (std::size_t i = 0; i < R; ++i)
        for (std::size_t k = 0; k < K; ++k) {
            const cplx aik = a(i, k);
            for (std::size_t j = 0; j < C; ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

template <std::size_t N>
using Vector = std::array<cplx, N>;

template <std::size_t R, std::size_t C>
Vector<R> operator*(const Matrix<R, C>& a, const Vector<C>& x)
{
    Vector<R> y{};
    for (std::size_t i = 0; i < R; ++i)
        for (std::size_t j = 0; j < C; ++j) y[i] += a(i, j) * x[j];
    return y;
}

using Mat2 = Matrix<2, 2>;
using Mat4 = Matrix<4, 4>;
using Vec4 = Vector<4>;

/// Frobenius norm.
template <std::size_t R, std::size_t C>
double norm(const Matrix<R, C>& m)
{
    double s = 0.0;
    for (const auto& x : m.data) s += std::norm(x);
    return std::sqrt(s);
}

template <std::size_t N>
double norm(const Vector<N>& v)
{
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

template <std::size_t R, std::size_t C>
double max_abs(const Matrix<R, C>& m)
{
    double s = 0.0;
    for (const auto& x : m.data) s = std::max(s, std::abs(x));
    return s;
}

/// Dense polynomial with complex coefficients stored in ascending order:
/// p(x) = c[0] + c[1] x + ... + c[n] x^n.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<cplx> ascending) : c_(std::move(ascending)) {}

    /// Monic polynomial with the given roots.
    static Polynomial from_roots(std::span<const cplx> roots);

    std::size_t degree() const { return c_.empty() ? 0 : c_.size() - 1; }
    const std::vector<cplx>& coefficients() const { return c_; }
    cplx operator[](std::size_t k) const { return k < c_.size() ? c_[k] : cplx{}; }

    cplx operator()(cplx x) const;
    /// Value and first derivative in one Horner pass.
    std::pair<cplx, cplx> eval_with_derivative(cplx x) const;
    Polynomial derivative() const;

    double max_coefficient() const;

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(cplx s, const Polynomial& a);

private:
    std::vector<cplx> c_;
};

/// All roots with multiplicity, by Aberth-Ehrlich simultaneous iteration.
/// Throws ParameterError for degree 0, a zero leading coefficient, or degree > 8.
std::vector<cplx> poly_roots(const Polynomial& p);

/// Determinant by partial-pivot LU.
template <std::size_t N>
cplx determinant(Matrix<N, N> m);

/// Inverse by Gauss-Jordan with partial pivoting; throws SingularityError.
template <std::size_t N>
Matrix<N, N> invert(const Matrix<N, N>& m);

/// Solves m x = b; throws SingularityError.
template <std::size_t N>
Vector<N> solve(Matrix<N, N> m, Vector<N> b);

/// Characteristic polynomial det(x I - m) via the Faddeev-LeVerrier recurrence.
template <std::size_t N>
Polynomial characteristic_polynomial(const Matrix<N, N>& m);

template <std::size_t N>
struct EigenSystem {
    std::array<cplx, N> values{};
    Matrix<N, N> right;  ///< columns are right eigenvectors
    Matrix<N, N> left;   ///< rows are left eigenvectors, left.row(i) . right.col(j) = delta_ij
    double min_separation = 0.0;
    bool ill_conditioned = false;
};

/// Eigen-decomposition of a 4x4 complex matrix. Eigenvalues are the roots of
/// the characteristic polynomial; eigenvectors come from the adjugate of
/// (m - lambda I), whose columns span the right and whose rows span the left
/// null space. Pairs closer than 1e-6 * |m| set `ill_conditioned`; their
/// vectors are then not biorthonormal.
EigenSystem<4> eig_4x4(const Mat4& m);

struct Eigen2 {
    cplx lambda1;
    cplx lambda2;
    cplx discriminant;  ///< (h11 - h22)^2 + 4 h12 h21
};

Eigen2 eigen_2x2(const Mat2& h);

extern template cplx determinant<2>(Matrix<2, 2>);
extern template cplx determinant<3>(Matrix<3, 3>);
extern template cplx determinant<4>(Matrix<4, 4>);
extern template Matrix<1, 1> invert<1>(const Matrix<1, 1>&);
extern template Matrix<2, 2> invert<2>(const Matrix<2, 2>&);
extern template Matrix<3, 3> invert<3>(const Matrix<3, 3>&);
extern template Matrix<4, 4> invert<4>(const Matrix<4, 4>&);
extern template Vector<2> solve<2>(Matrix<2, 2>, Vector<2>);
extern template Vector<4> solve<4>(Matrix<4, 4>, Vector<4>);
extern template Polynomial characteristic_polynomial<2>(const Matrix<2, 2>&);
extern template Polynomial characteristic_polynomial<4>(const Matrix<4, 4>&);

}  // namespace epfano

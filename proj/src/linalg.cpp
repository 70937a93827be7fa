#include "epfano/linalg.hpp"

#include <limits>
#include <numbers>

namespace epfano {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

}  // namespace

// ---------------------------------------------------------------------------
// Polynomial

Polynomial Polynomial::from_roots(std::span<const cplx> roots)
{
    std::vector<cplx> c{1.0};
    for (const cplx r : roots) {
        std::vector<cplx> next(c.size() + 1, 0.0);
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += c[k];
            next[k] -= r * c[k];
        }
        c = std::move(next);
    }
    return Polynomial(std::move(c));
}

cplx Polynomial::operator()(cplx x) const
{
    cplx acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::pair<cplx, cplx> Polynomial::eval_with_derivative(cplx x) const
{
    cplx p = 0.0;
    cplx dp = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        dp = dp * x + p;
        p = p * x + *it;
    }
    return {p, dp};
}

Polynomial Polynomial::derivative() const
{
    if (c_.size() <= 1) return Polynomial({0.0});
    std::vector<cplx> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
    return Polynomial(std::move(d));
}

double Polynomial::max_coefficient() const
{
    double m = 0.0;
    for (const auto& x : c_) m = std::max(m, std::abs(x));
    return m;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b)
{
    std::vector<cplx> c(std::max(a.c_.size(), b.c_.size()), 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = a[k] + b[k];
    return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b)
{
    return a + cplx{-1.0} * b;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b)
{
    if (a.c_.empty() || b.c_.empty()) return Polynomial{};
    std::vector<cplx> c(a.c_.size() + b.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(c));
}

Polynomial operator*(cplx s, const Polynomial& a)
{
    std::vector<cplx> c = a.c_;
    for (auto& x : c) x *= s;
    return Polynomial(std::move(c));
}

// ---------------------------------------------------------------------------
// Roots

std::vector<cplx> poly_roots(const Polynomial& p)
{
    const std::size_t n = p.degree();
    if (p.coefficients().empty() || n == 0) throw ParameterError("poly_roots: degree 0 polynomial has no roots");
    if (n > 8) throw ParameterError("poly_roots: degree above 8 is not supported");
    const cplx lead = p[n];
    if (lead == cplx{0.0}) throw ParameterError("poly_roots: leading coefficient is zero");

    if (n == 1) return {-p[0] / lead};

    // Cauchy bound on the root moduli.
    double bound = 0.0;
    for (std::size_t k = 0; k < n; ++k) bound = std::max(bound, std::abs(p[k] / lead));
    bound += 1.0;

    // Start on a circle of radius ~ geometric-mean root modulus, capped by the
    // Cauchy bound; the offset angle avoids symmetric stalls on real polynomials.
    double radius = std::pow(std::abs(p[0] / lead), 1.0 / static_cast<double>(n));
    if (!(radius > 0.0) || !std::isfinite(radius)) radius = 1.0;
    radius = std::min(radius, bound);

    std::vector<cplx> z(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) + 0.4;
        z[k] = std::polar(radius, angle);
    }

    std::vector<bool> done(n, false);
    constexpr int kMaxIter = 500;
    for (int iter = 0; iter < kMaxIter; ++iter) {
        bool all_done = true;
        for (std::size_t k = 0; k < n; ++k) {
            if (done[k]) continue;
            const auto [val, der] = p.eval_with_derivative(z[k]);
            if (val == cplx{0.0}) {
                done[k] = true;
                continue;
            }
            const cplx ratio = val / der;
            cplx repulsion = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != k) repulsion += 1.0 / (z[k] - z[j]);
            cplx step = ratio / (1.0 - ratio * repulsion);
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) step = ratio;
            z[k] -= step;
            if (std::abs(step) <= 4.0 * kEps * std::max(1.0, std::abs(z[k])))
                done[k] = true;
            else
                all_done = false;
        }
        if (all_done) break;
    }
    return z;
}

// ---------------------------------------------------------------------------
// Dense kernels

template <std::size_t N>
cplx determinant(Matrix<N, N> m)
{
    cplx det = 1.0;
    for (std::size_t col = 0; col < N; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < N; ++r)
            if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
        if (m(piv, col) == cplx{0.0}) return 0.0;
        if (piv != col) {
            for (std::size_t j = 0; j < N; ++j) std::swap(m(piv, j), m(col, j));
            det = -det;
        }
        det *= m(col, col);
        for (std::size_t r = col + 1; r < N; ++r) {
            const cplx factor = m(r, col) / m(col, col);
            for (std::size_t j = col; j < N; ++j) m(r, j) -= factor * m(col, j);
        }
    }
    return det;
}

template <std::size_t N>
Matrix<N, N> invert(const Matrix<N, N>& m)
{
    const double scale = max_abs(m);
    if (scale == 0.0) throw SingularityError("invert: zero matrix");
    Matrix<N, N> a = m;
    Matrix<N, N> inv = Matrix<N, N>::identity();
    for (std::size_t col = 0; col < N; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < N; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        if (std::abs(a(piv, col)) <= 1e-13 * scale) throw SingularityError("invert: matrix is numerically singular");
        if (piv != col)
            for (std::size_t j = 0; j < N; ++j) {
                std::swap(a(piv, j), a(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
        const cplx d = 1.0 / a(col, col);
        for (std::size_t j = 0; j < N; ++j) {
            a(col, j) *= d;
            inv(col, j) *= d;
        }
        for (std::size_t r = 0; r < N; ++r) {
            if (r == col) continue;
            const cplx factor = a(r, col);
            if (factor == cplx{0.0}) continue;
            for (std::size_t j = 0; j < N; ++j) {
                a(r, j) -= factor * a(col, j);
                inv(r, j) -= factor * inv(col, j);
            }
        }
    }
    return inv;
}

template <std::size_t N>
Vector<N> solve(Matrix<N, N> m, Vector<N> b)
{
    const double scale = max_abs(m);
    if (scale == 0.0) throw SingularityError("solve: zero matrix");
    for (std::size_t col = 0; col < N; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < N; ++r)
            if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
        if (std::abs(m(piv, col)) <= 1e-13 * scale) throw SingularityError("solve: matrix is numerically singular");
        if (piv != col) {
            for (std::size_t j = 0; j < N; ++j) std::swap(m(piv, j), m(col, j));
            std::swap(b[piv], b[col]);
        }
        for (std::size_t r = col + 1; r < N; ++r) {
            const cplx factor = m(r, col) / m(col, col);
            for (std::size_t j = col; j < N; ++j) m(r, j) -= factor * m(col, j);
            b[r] -= factor * b[col];
        }
    }
    Vector<N> x{};
    for (std::size_t i = N; i-- > 0;) {
        cplx s = b[i];
        for (std::size_t j = i + 1; j < N; ++j) s -= m(i, j) * x[j];
        x[i] = s / m(i, i);
    }
    return x;
}

template <std::size_t N>
Polynomial characteristic_polynomial(const Matrix<N, N>& a)
{
    std::vector<cplx> c(N + 1, 0.0);
    c[N] = 1.0;
    Matrix<N, N> mk;  // M_0 = 0
    const auto id = Matrix<N, N>::identity();
    for (std::size_t k = 1; k <= N; ++k) {
        mk = a * mk + c[N - k + 1] * id;
        c[N - k] = -(a * mk).trace() / static_cast<double>(k);
    }
    return Polynomial(std::move(c));
}

template cplx determinant<2>(Matrix<2, 2>);
template cplx determinant<3>(Matrix<3, 3>);
template cplx determinant<4>(Matrix<4, 4>);
template Matrix<1, 1> invert<1>(const Matrix<1, 1>&);
template Matrix<2, 2> invert<2>(const Matrix<2, 2>&);
template Matrix<3, 3> invert<3>(const Matrix<3, 3>&);
template Matrix<4, 4> invert<4>(const Matrix<4, 4>&);
template Vector<2> solve<2>(Matrix<2, 2>, Vector<2>);
template Vector<4> solve<4>(Matrix<4, 4>, Vector<4>);
template Polynomial characteristic_polynomial<2>(const Matrix<2, 2>&);
template Polynomial characteristic_polynomial<4>(const Matrix<4, 4>&);

// ---------------------------------------------------------------------------
// Eigen-decompositions

namespace {

Mat4 adjugate(const Mat4& b)
{
    Mat4 adj;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            Matrix<3, 3> minor;
            std::size_t r = 0;
            for (std::size_t ii = 0; ii < 4; ++ii) {
                if (ii == i) continue;
                std::size_t c = 0;
                for (std::size_t jj = 0; jj < 4; ++jj) {
                    if (jj == j) continue;
                    minor(r, c++) = b(ii, jj);
                }
                ++r;
            }
            const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            adj(j, i) = sign * determinant(minor);  // transpose of cofactors
        }
    return adj;
}

}  // namespace

EigenSystem<4> eig_4x4(const Mat4& m)
{
    EigenSystem<4> es;
    const auto roots = poly_roots(characteristic_polynomial(m));
    std::copy(roots.begin(), roots.end(), es.values.begin());

    double sep = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) sep = std::min(sep, std::abs(es.values[i] - es.values[j]));
    es.min_separation = sep;
    const double scale = std::max(norm(m), std::numeric_limits<double>::min());
    es.ill_conditioned = sep < 1e-6 * scale;

    const auto id = Mat4::identity();
    for (std::size_t k = 0; k < 4; ++k) {
        const Mat4 adj = adjugate(m - es.values[k] * id);
        // adj(m - lambda) = r l^T up to scale: its largest column spans the
        // right null space, its largest row the left null space.
        std::size_t best_col = 0;
        std::size_t best_row = 0;
        double col_norm = -1.0;
        double row_norm = -1.0;
        for (std::size_t j = 0; j < 4; ++j) {
            double cn = 0.0;
            double rn = 0.0;
            for (std::size_t i = 0; i < 4; ++i) {
                cn += std::norm(adj(i, j));
                rn += std::norm(adj(j, i));
            }
            if (cn > col_norm) {
                col_norm = cn;
                best_col = j;
            }
            if (rn > row_norm) {
                row_norm = rn;
                best_row = j;
            }
        }
        Vec4 r{};
        Vec4 l{};
        for (std::size_t i = 0; i < 4; ++i) {
            r[i] = adj(i, best_col);
            l[i] = adj(best_row, i);
        }
        const double rn = norm(r);
        const double ln = norm(l);
        if (rn == 0.0 || ln == 0.0) {
            // Fully degenerate (diagonalizable with repeated value): fall back
            // to a coordinate vector that is still an eigenvector.
            r = {};
            l = {};
            r[k] = 1.0;
            l[k] = 1.0;
        } else {
            for (auto& x : r) x /= rn;
            for (auto& x : l) x /= ln;
        }
        cplx overlap = 0.0;
        for (std::size_t i = 0; i < 4; ++i) overlap += l[i] * r[i];
        if (std::abs(overlap) < 1e-300) overlap = 1.0;
        for (std::size_t i = 0; i < 4; ++i) {
            es.right(i, k) = r[i];
            es.left(k, i) = l[i] / overlap;
        }
    }
    return es;
}

Eigen2 eigen_2x2(const Mat2& h)
{
    const cplx tr = h(0, 0) + h(1, 1);
    const cplx det = h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0);
    const cplx diff = h(0, 0) - h(1, 1);
    const cplx disc = diff * diff + 4.0 * h(0, 1) * h(1, 0);
    const cplx root = std::sqrt(disc);
    // Pick the sign that avoids cancellation, then recover the partner from
    // the determinant.
    const cplx plus = 0.5 * (tr + root);
    const cplx minus = 0.5 * (tr - root);
    const cplx l1 = std::abs(plus) >= std::abs(minus) ? plus : minus;
    const cplx l2 = std::abs(l1) > 0.0 ? det / l1 : tr - l1;
    return {l1, l2, disc};
}

}  // namespace epfano

#pragma once

// Shared fixtures and independent oracles for the unit and acceptance tests.

#include <complex>
#include <random>
#include <vector>

#include "epfano/epfinder.hpp"
#include "epfano/reduction.hpp"

namespace epfano::testing {

// Oscillator pair of the reference line-shape study.
inline OscillatorParams reference_params()
{
    OscillatorParams p;
    p.omega1 = 2.8;
    p.omega2 = 3.0;
    p.g = 0.1;
    p.f = 0.02;
    p.c1 = 1.0;
    return p;
}

inline const ExceptionalPoint& reference_ep()
{
    static const ExceptionalPoint ep = locate_physical_ep(reference_params());
    return ep;
}

inline const EffectiveModel& reference_model(Gauge gauge = Gauge::SymmetricDelta)
{
    static const EffectiveModel sym = reduce_secular(reference_params(), reference_ep(), Gauge::SymmetricDelta);
    static const EffectiveModel raw = reduce_secular(reference_params(), reference_ep(), Gauge::AsProjected);
    return gauge == Gauge::SymmetricDelta ? sym : raw;
}

// Textbook Gaussian elimination with partial pivoting on a dense copy; kept
// separate from the library so it can serve as an oracle.
inline std::vector<std::complex<double>> naive_solve(std::vector<std::vector<std::complex<double>>> a,
                                                     std::vector<std::complex<double>> b)
{
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const auto m = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= m * a[col][c];
            b[r] -= m * b[col];
        }
    }
    std::vector<std::complex<double>> x(n);
    for (std::size_t i = n; i-- > 0;) {
        auto s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
        x[i] = s / a[i][i];
    }
    return x;
}

template <std::size_t N>
Matrix<N, N> naive_inverse(const Matrix<N, N>& m)
{
    Matrix<N, N> out;
    for (std::size_t j = 0; j < N; ++j) {
        std::vector<std::vector<std::complex<double>>> a(N, std::vector<std::complex<double>>(N));
        std::vector<std::complex<double>> b(N);
        for (std::size_t r = 0; r < N; ++r) {
            for (std::size_t c = 0; c < N; ++c) a[r][c] = m(r, c);
            b[r] = r == j ? 1.0 : 0.0;
        }
        const auto x = naive_solve(a, b);
        for (std::size_t r = 0; r < N; ++r) out(r, j) = x[r];
    }
    return out;
}

// Cofactor expansion, independent of the LU path.
inline std::complex<double> cofactor_det4(const Mat4& m)
{
    auto det3 = [&](std::size_t skip_col) {
        std::size_t c[3];
        for (std::size_t k = 0, j = 0; j < 4; ++j)
            if (j != skip_col) c[k++] = j;
        return m(1, c[0]) * (m(2, c[1]) * m(3, c[2]) - m(2, c[2]) * m(3, c[1])) -
               m(1, c[1]) * (m(2, c[0]) * m(3, c[2]) - m(2, c[2]) * m(3, c[0])) +
               m(1, c[2]) * (m(2, c[0]) * m(3, c[1]) - m(2, c[1]) * m(3, c[0]));
    };
    std::complex<double> d = 0.0;
    for (std::size_t j = 0; j < 4; ++j) d += (j % 2 == 0 ? 1.0 : -1.0) * m(0, j) * det3(j);
    return d;
}

inline std::mt19937_64& rng()
{
    static std::mt19937_64 gen(20260419);
    return gen;
}

inline double uniform(double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline std::complex<double> random_cplx(double r)
{
    return {uniform(-r, r), uniform(-r, r)};
}

// Matches two small root sets greedily; returns the largest pair distance.
inline double multiset_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b)
{
    double worst = 0.0;
    for (const auto& x : a) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < b.size(); ++k)
            if (std::abs(b[k] - x) < std::abs(b[best] - x)) best = k;
        worst = std::max(worst, std::abs(b[best] - x));
        b.erase(b.begin() + static_cast<std::ptrdiff_t>(best));
    }
    return worst;
}

}  // namespace epfano::testing

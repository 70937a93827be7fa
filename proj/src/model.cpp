#include "epfano/model.hpp"

#include <cmath>

namespace epfano {

namespace {

constexpr cplx kI{0.0, 1.0};

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void OscillatorParams::validate() const
{
    if (!finite(omega1) || !finite(omega2) || omega1 <= 0.0 || omega2 <= 0.0)
        throw ParameterError("omega1 and omega2 must be finite and positive");
    if (!finite(k1) || !finite(k2) || !finite(g) || !finite(f))
        throw ParameterError("k1, k2, g and f must be finite");
    if (k1 < 0.0 || k2 < 0.0) throw ParameterError("k1 and k2 must be nonnegative");
    if (k1 >= omega1 || k2 >= omega2) throw ParameterError("k_j must be below omega_j for a real damped frequency");
    if (!finite(c1.real()) || !finite(c1.imag()) || !finite(c2.real()) || !finite(c2.imag()))
        throw ParameterError("drive amplitudes must be finite");
}

SystemMatrices build_system_matrices(const OscillatorParams& params)
{
    params.validate();
    const double w1sq = params.omega1 * params.omega1;
    const double w2sq = params.omega2 * params.omega2;
    const double g = params.g;

    SystemMatrices s;
    s.m0(0, 0) = -2.0 * g - 2.0 * params.k1;
    s.m0(0, 1) = 2.0 * g;
    s.m0(0, 2) = -w1sq;
    s.m0(1, 0) = 2.0 * g;
    s.m0(1, 1) = -2.0 * g - 2.0 * params.k2;
    s.m0(1, 3) = -w2sq;
    s.m0(2, 0) = 1.0;
    s.m0(3, 1) = 1.0;

    s.m1(0, 2) = -1.0;
    s.m1(0, 3) = 1.0;
    s.m1(1, 2) = 1.0;
    s.m1(1, 3) = -1.0;
    return s;
}

Mat4 system_matrix(const OscillatorParams& params)
{
    return build_system_matrices(params).at(params.f);
}

Polynomial char_poly(const OscillatorParams& params, double f, double g)
{
    const Mat4 m = system_matrix(params.with_coupling(f, g));
    return characteristic_polynomial(kI * m);
}

cplx secular_det(const OscillatorParams& params, double f, double g, cplx omega)
{
    const Mat4 m = system_matrix(params.with_coupling(f, g));
    return determinant(omega * Mat4::identity() - kI * m);
}

cplx det_derivative(const OscillatorParams& params, double f, double g, cplx omega)
{
    return char_poly(params, f, g).derivative()(omega);
}

StateVector stationary_solution(const OscillatorParams& params, double omega_drive)
{
    const Mat4 m = system_matrix(params);
    const Vec4 drive{params.c1, params.c2, 0.0, 0.0};
    if (params.c1 == cplx{0.0} && params.c2 == cplx{0.0}) return {};
    const Mat4 a = (kI * omega_drive) * Mat4::identity() - m;
    return StateVector::from_array(solve(a, drive));
}

std::array<cplx, 4> resonance_energies(const OscillatorParams& params, double f, double g)
{
    const auto roots = poly_roots(char_poly(params, f, g));
    std::array<cplx, 4> out{};
    std::copy(roots.begin(), roots.end(), out.begin());
    return out;
}

}  // namespace epfano

#include "epfano/timedomain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "epfano/constants.hpp"
#include "epfano/io.hpp"

namespace epfano {

namespace {

constexpr cplx kI{0.0, 1.0};

double inf_norm(const Mat4& m)
{
    double best = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < 4; ++j) row += std::abs(m(i, j));
        best = std::max(best, row);
    }
    return best;
}

Vec4 axpy(const Vec4& x, cplx a, const Vec4& y)
{
    Vec4 out;
    for (std::size_t i = 0; i < 4; ++i) out[i] = x[i] + a * y[i];
    return out;
}

// Slowest amplitude decay rate min |Im E|; throws unless every mode decays.
double slowest_decay(const OscillatorParams& params)
{
    const auto energies = resonance_energies(params, params.f, params.g);
    double slowest = std::numeric_limits<double>::infinity();
    for (const cplx e : energies) {
        // lambda = -i E, so Re lambda = Im E.
        if (e.imag() >= 0.0) throw PreconditionError("system has a non-decaying mode (Re lambda >= 0)");
        slowest = std::min(slowest, -e.imag());
    }
    return slowest;
}

class Stepper {
public:
    Stepper(const OscillatorParams& params, double omega) : m_(system_matrix(params)), omega_(omega)
    {
        c_ = {params.c1, params.c2, 0.0, 0.0};
    }

    double norm_inf() const { return inf_norm(m_); }

    Vec4 rhs(double t, const Vec4& x) const
    {
        Vec4 y = m_ * x;
        const cplx drive = std::exp(kI * (omega_ * t));
        for (std::size_t i = 0; i < 4; ++i) y[i] += c_[i] * drive;
        return y;
    }

    Vec4 step(double t, const Vec4& x, double h) const
    {
        const Vec4 k1 = rhs(t, x);
        const Vec4 k2 = rhs(t + 0.5 * h, axpy(x, 0.5 * h, k1));
        const Vec4 k3 = rhs(t + 0.5 * h, axpy(x, 0.5 * h, k2));
        const Vec4 k4 = rhs(t + h, axpy(x, h, k3));
        Vec4 out;
        for (std::size_t i = 0; i < 4; ++i) out[i] = x[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        return out;
    }

private:
    Mat4 m_;
    Vec4 c_;
    double omega_;
};

std::size_t step_count(double t_end, double dt)
{
    return static_cast<std::size_t>(std::max(1.0, std::ceil(t_end / dt - 1e-9)));
}

void check_step(const Stepper& s, double t_end, double dt)
{
    if (!(dt > 0.0) || !std::isfinite(dt)) throw StepSizeError("dt must be positive and finite");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ParameterError("t_end must be positive and finite");
    if (dt * s.norm_inf() >= constants::kStabilityGuard)
        throw StepSizeError("dt * |M|_inf = " + format_number(dt * s.norm_inf()) + " violates the stability guard 0.1");
}

}  // namespace

IntegrationResult integrate(const OscillatorParams& params, double omega_drive, double t_end, double dt,
                            const StateVector& initial, int record_stride)
{
    params.validate();
    if (record_stride < 1) throw ParameterError("record stride must be >= 1");
    const Stepper s(params, omega_drive);
    check_step(s, t_end, dt);

    const std::size_t n = step_count(t_end, dt);
    const double h = t_end / static_cast<double>(n);
    IntegrationResult out;
    out.omega_drive = omega_drive;
    Vec4 x = initial.as_array();
    out.times.push_back(0.0);
    out.states.push_back(initial);
    for (std::size_t k = 0; k < n; ++k) {
        x = s.step(h * static_cast<double>(k), x, h);
        if ((k + 1) % static_cast<std::size_t>(record_stride) == 0 || k + 1 == n) {
            out.times.push_back(h * static_cast<double>(k + 1));
            out.states.push_back(StateVector::from_array(x));
        }
    }
    return out;
}

double default_settle_time(const OscillatorParams& params)
{
    params.validate();
    return constants::kSettleEfoldings / slowest_decay(params);
}

double stationary_residual(const OscillatorParams& params, double omega_drive, double t_settle, double dt,
                           const StateVector& initial)
{
    params.validate();
    slowest_decay(params);
    if (!(omega_drive > 0.0)) throw ParameterError("drive frequency must be positive");
    const Stepper s(params, omega_drive);
    check_step(s, t_settle, dt);

    const Vec4 xs = stationary_solution(params, omega_drive).as_array();
    const double scale = norm(xs);

    // Settle, then compare over one period on the same step.
    const std::size_t n_settle = step_count(t_settle, dt);
    const double h = t_settle / static_cast<double>(n_settle);
    Vec4 x = initial.as_array();
    double t = 0.0;
    for (std::size_t k = 0; k < n_settle; ++k) {
        x = s.step(t, x, h);
        t = h * static_cast<double>(k + 1);
    }
    const double period = 2.0 * std::numbers::pi / omega_drive;
    const std::size_t n_period = step_count(period, h);
    double worst = 0.0;
    auto compare = [&](double time) {
        const cplx phase = std::exp(kI * (omega_drive * time));
        Vec4 diff;
        for (std::size_t i = 0; i < 4; ++i) diff[i] = x[i] - xs[i] * phase;
        worst = std::max(worst, scale > 0.0 ? norm(diff) / scale : norm(diff));
    };
    compare(t);
    for (std::size_t k = 0; k < n_period; ++k) {
        x = s.step(t, x, h);
        t = t_settle + h * static_cast<double>(k + 1);
        compare(t);
    }
    return worst;
}

std::string integration_csv(const IntegrationResult& result)
{
    std::string out = "t,re_p1,im_p1,re_p2,im_p2,re_q1,im_q1,re_q2,im_q2\n";
    for (std::size_t k = 0; k < result.times.size(); ++k) {
        out += format_number(result.times[k]);
        for (const cplx z : result.states[k].as_array()) {
            out += ',';
            out += format_number(z.real());
            out += ',';
            out += format_number(z.imag());
        }
        out += '\n';
    }
    return out;
}

}  // namespace epfano

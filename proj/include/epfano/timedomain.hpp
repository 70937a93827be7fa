#pragma once

// Direct RK4 integration of dx/dt = M x + c exp(i w t), the independent
// check on the stationary solution.

#include <string>
#include <vector>

#include "epfano/model.hpp"

namespace epfano {

struct IntegrationResult {
    std::vector<double> times;
    std::vector<StateVector> states;
    double omega_drive = 0.0;
};

/// Classical RK4 from t = 0 to t_end. The step is shrunk to t_end / ceil(t_end / dt)
/// so the last sample lands on t_end. Every `record_stride`-th step is kept
/// (plus both endpoints). Throws StepSizeError unless dt * |M|_inf < 0.1.
IntegrationResult integrate(const OscillatorParams& params, double omega_drive, double t_end, double dt,
                            const StateVector& initial, int record_stride = 1);

/// 40 e-folding times of the slowest decaying mode. Throws PreconditionError
/// for a non-decaying system.
double default_settle_time(const OscillatorParams& params);

/// Integrates from `initial` to t_settle, then over one drive period, and
/// returns the max of |x_numeric - x_stationary| / |x_stationary|. For zero
/// drive the absolute norm is returned. Throws PreconditionError when some
/// eigenvalue of M has Re >= 0.
double stationary_residual(const OscillatorParams& params, double omega_drive, double t_settle, double dt,
                           const StateVector& initial = {});

/// t, then re/im of p1, p2, q1, q2.
std::string integration_csv(const IntegrationResult& result);

}  // namespace epfano

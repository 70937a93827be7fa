#pragma once

// Exceptional points of the oscillator pair: simultaneous zeros of the
// secular function D(E; f, g) and its E-derivative, with f and g real.

#include <optional>
#include <utility>
#include <vector>

#include "epfano/model.hpp"

namespace epfano {

struct ExceptionalPoint {
    cplx omega = 0.0;  ///< resonance energy of the coalescing pair
    double f = 0.0;
    double g = 0.0;
    double residual = 0.0;  ///< max(|D|, |D'|) / max coefficient of D
    int iterations = 0;
    bool physical = false;  ///< Im omega < 0
};

struct EpSeed {
    cplx omega = 0.0;
    double f = 0.0;
    double g = 0.0;
};

struct EpSolverOptions {
    int max_iter = 100;
    double tol = 1e-10;
    int max_halvings = 20;
};

/// Raised when Newton does not reach the tolerance; carries the last iterate.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, ExceptionalPoint last)
        : Error("convergence", what), last_(last) {}
    const ExceptionalPoint& last_iterate() const { return last_; }

private:
    ExceptionalPoint last_;
};

/// Damped Newton on F(Re E, Im E, f, g) = (Re D, Im D, Re D', Im D').
/// The E-columns of the Jacobian are analytic; the f and g columns use
/// central differences. Steps are Levenberg-Marquardt with adaptive damping,
/// which turns into plain Newton in the basin and stays well behaved on a
/// continuous EP family (rank-deficient Jacobian); step halving is the last
/// resort before giving up.
ExceptionalPoint find_ep(const OscillatorParams& params, const EpSeed& seed, const EpSolverOptions& opts = {});

/// Grid search over (f, g): nodes where the closest pair of resonance
/// energies is a local minimum of the pair separation seed find_ep. Returns
/// converged EPs inside the ranges, deduplicated (radius 1e-6) and sorted by
/// preference (see `prefer`).
std::vector<ExceptionalPoint> scan_seeds(const OscillatorParams& params,
                                         std::pair<double, double> f_range,
                                         std::pair<double, double> g_range,
                                         int grid_n,
                                         const EpSolverOptions& opts = {});

/// Ordering used to pick the EP: Im omega < 0 first, then Re omega > 0, then
/// smallest |f|.
bool prefer(const ExceptionalPoint& a, const ExceptionalPoint& b);

/// Most preferred EP among those with Im omega < 0.
std::optional<ExceptionalPoint> select_physical(const std::vector<ExceptionalPoint>& eps);

/// Distance between the two closest roots of D(E; f, g).
double closest_root_pair_separation(const OscillatorParams& params, double f, double g);

/// Scan ranges and seeds tuned for a parameter file: default (f, g) box plus
/// the file's own (f, g) as an extra seed. Throws ConvergenceError if nothing
/// converges.
ExceptionalPoint locate_physical_ep(const OscillatorParams& params);

}  // namespace epfano

#pragma once

// Effective two-level model h(f) = h0 + f v near an exceptional point, its
// EP formula, the nilpotent part at the EP, and eigenfrequency trajectories.

#include <string>
#include <string_view>
#include <vector>

#include "epfano/epfinder.hpp"
#include "epfano/model.hpp"

namespace epfano {

enum class Gauge { SymmetricDelta, AsProjected };
enum class ReductionMethod { SecularMatched, Projection };

std::string_view to_string(Gauge g);
std::string_view to_string(ReductionMethod m);
Gauge parse_gauge(std::string_view s);
ReductionMethod parse_method(std::string_view s);

struct EffectiveModel {
    Mat2 h0;
    Mat2 v;
    double f_ref = 0.0;  ///< coupling at which the model reproduces the full spectrum
    Gauge gauge = Gauge::SymmetricDelta;
    ReductionMethod method = ReductionMethod::SecularMatched;

    Mat2 at(cplx f) const { return h0 + f * v; }
};

/// Two-level model whose secular function matches the physical factor of the
/// full quartic.
///
/// With M1 of rank one, the full secular function is linear in f:
/// D(E; f) = P0(E) + f P1(E) with P1 quadratic, P1 = c (E - E_inf)(E - E_neg),
/// where E_inf (Re > 0) is the f -> infinity limit of the physical branch.
/// Dividing by c (E - E_neg) gives Q(E) + f (E - E_inf). The model replaces Q
/// by its second-order Taylor polynomial at `center`, so that
///
///   det(E - h0 - f v) = [q(E) + f (E - E_inf)] / (Q''(center) / 2).
///
/// When `center` is the EP energy at the params' g, the model's EP coincides
/// with the full one (value and first derivative of Q agree there) and the
/// zero of v G v sits at E_inf. h0 = diag(Omega1, Omega2) with Re Omega1 <=
/// Re Omega2; v has rank one like M1.
EffectiveModel reduce_secular(const OscillatorParams& params, cplx center, Gauge gauge = Gauge::SymmetricDelta);

/// reduce_secular at the EP, with g taken from the EP.
EffectiveModel reduce_secular(const OscillatorParams& params, const ExceptionalPoint& ep,
                              Gauge gauge = Gauge::SymmetricDelta);

/// Biorthogonal projection of M0 and M1 onto the two eigenvectors of M(f_ref)
/// with Re E > 0: h0 = i L M0 R, v = i L M1 R. Exact at f_ref. Throws
/// IllConditionedError when the selected pair is (nearly) degenerate.
EffectiveModel reduce_projection(const OscillatorParams& params, double f_ref, Gauge gauge = Gauge::SymmetricDelta);

/// Re-expresses a model in the requested gauge (a diagonal similarity).
EffectiveModel regauge(EffectiveModel model, Gauge gauge);

/// Limit E_inf of the physical branch for f -> infinity (root of P1 with Re > 0).
cplx infinite_coupling_limit(const OscillatorParams& params);

struct EffectiveEp {
    cplx f;
    cplx omega;
    bool diabolic = false;  ///< double root of the discriminant
};

/// Roots in f of the discriminant (h11 - h22)^2 + 4 h12 h21 of h0 + f v.
/// Throws DegenerateFamilyError when the discriminant vanishes identically.
std::vector<EffectiveEp> ep_of_effective(const EffectiveModel& model);

/// Closed form for diagonal h0: f = -i(O1 - O2) / (i(e1 - e2) +- 2 sqrt(d1 d2)).
/// Throws ParameterError when h0 is not diagonal.
std::vector<cplx> ep_closed_form(const EffectiveModel& model);

struct NilpotentPart {
    cplx omega;  ///< trace(h(f_ep)) / 2
    Mat2 n;      ///< h(f_ep) - omega I
    double ratio = 0.0;  ///< |n^2| / |n|^2
};

/// Throws NotAnEpError when |n^2| >= 1e-8 |n|^2.
NilpotentPart nilpotent_at_ep(const EffectiveModel& model, cplx f_ep);

/// Second-order residue in the closed form i s f [[1, i r], [i/r, -1]] with
/// s = +-sqrt(d1 d2) on the EP's branch and r = -d1 / s (so r^2 = d1/d2).
/// Requires diagonal h0.
Mat2 second_order_residue_closed_form(const EffectiveModel& model, cplx f_ep);

enum class TrajectorySource { Full4x4, Reduced2x2 };
std::string_view to_string(TrajectorySource s);

struct Trajectory {
    std::vector<double> f_values;
    std::vector<cplx> branch_a;
    std::vector<cplx> branch_b;
    TrajectorySource source = TrajectorySource::Full4x4;
};

/// Physical pair (Re E > 0) of the full problem at the params' g.
Trajectory eigen_trajectory(const OscillatorParams& params, double f_min, double f_max, int n_points);

/// Eigenvalues of h0 + f v.
Trajectory eigen_trajectory(const EffectiveModel& model, double f_min, double f_max, int n_points);

/// Max over the grid of the pointwise branch distance, after matching the
/// reduced branches to the full ones at each point.
double max_branch_deviation(const Trajectory& full, const Trajectory& reduced);

/// Trajectory CSV: f, re_omega_a, im_omega_a, re_omega_b, im_omega_b, source.
std::string trajectory_csv_header();
void append_trajectory_csv(std::string& out, const Trajectory& t);

}  // namespace epfano

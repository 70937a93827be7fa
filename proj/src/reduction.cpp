#include "epfano/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "epfano/constants.hpp"
#include "epfano/io.hpp"

namespace epfano {

namespace {

constexpr cplx kI{0.0, 1.0};

bool is_diagonal(const Mat2& m)
{
    const double scale = std::max(max_abs(m), std::numeric_limits<double>::min());
    return std::abs(m(0, 1)) <= 1e-14 * scale && std::abs(m(1, 0)) <= 1e-14 * scale;
}

// Quadratic roots of a x^2 + b x + c without cancellation.
std::pair<cplx, cplx> quadratic_roots(cplx a, cplx b, cplx c)
{
    const cplx disc = std::sqrt(b * b - 4.0 * a * c);
    const cplx q = -0.5 * (std::real(std::conj(b) * disc) >= 0.0 ? b + disc : b - disc);
    const cplx r1 = q / a;
    const cplx r2 = q != cplx{0.0} ? c / q : -b / a - r1;
    return {r1, r2};
}

// P0 and P1 of D(E; f) = P0(E) + f P1(E).
std::pair<Polynomial, Polynomial> split_in_f(const OscillatorParams& params)
{
    Polynomial p0 = char_poly(params, 0.0, params.g);
    Polynomial p1 = char_poly(params, 1.0, params.g) - p0;
    // M1 has rank one, so P1 has degree 2; drop round-off above that.
    std::vector<cplx> c = p1.coefficients();
    c.resize(3);
    return {p0, Polynomial(std::move(c))};
}

}  // namespace

std::string_view to_string(Gauge g)
{
    return g == Gauge::SymmetricDelta ? "symmetric-delta" : "as-projected";
}

std::string_view to_string(ReductionMethod m)
{
    return m == ReductionMethod::SecularMatched ? "secular" : "projection";
}

std::string_view to_string(TrajectorySource s)
{
    return s == TrajectorySource::Full4x4 ? "full-4x4" : "reduced-2x2";
}

Gauge parse_gauge(std::string_view s)
{
    if (s == "symmetric-delta") return Gauge::SymmetricDelta;
    if (s == "as-projected") return Gauge::AsProjected;
    throw ParameterError("unknown gauge '" + std::string(s) + "'");
}

ReductionMethod parse_method(std::string_view s)
{
    if (s == "secular") return ReductionMethod::SecularMatched;
    if (s == "projection") return ReductionMethod::Projection;
    throw ParameterError("unknown reduction method '" + std::string(s) + "'");
}

EffectiveModel regauge(EffectiveModel model, Gauge gauge)
{
    model.gauge = gauge;
    if (gauge == Gauge::AsProjected) return model;
    const cplx d12 = model.v(0, 1);
    const cplx d21 = model.v(1, 0);
    if (d12 == cplx{0.0} || d21 == cplx{0.0}) return model;  // nothing to balance
    // D = diag(1, s / d12) maps v12 -> s and v21 -> s with s = sqrt(d12 d21).
    const cplx s = std::sqrt(d12 * d21);
    const cplx d = s / d12;
    auto apply = [&](Mat2& m) {
        m(0, 1) *= d;
        m(1, 0) /= d;
    };
    apply(model.h0);
    apply(model.v);
    model.v(0, 1) = s;
    model.v(1, 0) = s;
    return model;
}

cplx infinite_coupling_limit(const OscillatorParams& params)
{
    params.validate();
    const auto [p0, p1] = split_in_f(params);
    if (std::abs(p1[2]) == 0.0) throw DegenerateFamilyError("coupling does not enter the secular function");
    const auto [r1, r2] = quadratic_roots(p1[2], p1[1], p1[0]);
    return r1.real() >= r2.real() ? r1 : r2;
}

EffectiveModel reduce_secular(const OscillatorParams& params, cplx center, Gauge gauge)
{
    params.validate();
    const auto [p0, p1] = split_in_f(params);
    const cplx c = p1[2];
    if (std::abs(c) == 0.0) throw DegenerateFamilyError("coupling does not enter the secular function");
    const auto [r1, r2] = quadratic_roots(c, p1[1], p1[0]);
    const cplx e_inf = r1.real() >= r2.real() ? r1 : r2;
    const cplx e_neg = r1.real() >= r2.real() ? r2 : r1;

    // Q = P0 / L with L = c (E - e_neg); Taylor data of Q at the center from
    // P0 = Q L differentiated twice.
    const cplx l0 = c * (center - e_neg);
    if (std::abs(l0) == 0.0) throw IllConditionedError("expansion center coincides with the mirror limit");
    const Polynomial dp0 = p0.derivative();
    const cplx p0v = p0(center);
    const cplx p0d = dp0(center);
    const cplx p0dd = dp0.derivative()(center);
    const cplx q0 = p0v / l0;
    const cplx q1 = (p0d - q0 * c) / l0;
    const cplx q2 = (p0dd - 2.0 * q1 * c) / l0;
    if (std::abs(q2) == 0.0) throw IllConditionedError("secular function has no curvature at the center");

    // q(E)/(q2/2) = E^2 + b E + d  with x = E - center.
    const cplx half = 0.5 * q2;
    const cplx b = (q1 - q2 * center) / half;
    const cplx d = (q0 - q1 * center + half * center * center) / half;
    auto [om1, om2] = quadratic_roots(1.0, b, d);
    if (om1.real() > om2.real()) std::swap(om1, om2);
    if (std::abs(om1 - om2) <= 1e-12 * std::max(1.0, std::abs(om1)))
        throw IllConditionedError("degenerate unperturbed pair; choose another expansion center");

    // det(E - h0 - f v) = det(E - h0) - f n(E) with n(E) = e1 (E - O2) + e2 (E - O1)
    // = -(E - e_inf) / half.
    const cplx tau = -1.0 / half;
    const cplx e1 = tau * (e_inf - om1) / (om2 - om1);
    const cplx e2 = tau * (om2 - e_inf) / (om2 - om1);

    EffectiveModel model;
    model.method = ReductionMethod::SecularMatched;
    model.h0(0, 0) = om1;
    model.h0(1, 1) = om2;
    // Rank-one v = (e1, e2)^T (1, 1).
    model.v(0, 0) = e1;
    model.v(0, 1) = e1;
    model.v(1, 0) = e2;
    model.v(1, 1) = e2;
    model.gauge = Gauge::AsProjected;
    model.f_ref = (-q0 / (center - e_inf)).real();
    return regauge(model, gauge);
}

EffectiveModel reduce_secular(const OscillatorParams& params, const ExceptionalPoint& ep, Gauge gauge)
{
    EffectiveModel m = reduce_secular(params.with_coupling(ep.f, ep.g), ep.omega, gauge);
    m.f_ref = ep.f;
    return m;
}

EffectiveModel reduce_projection(const OscillatorParams& params, double f_ref, Gauge gauge)
{
    params.validate();
    const SystemMatrices sm = build_system_matrices(params);
    const Mat4 m = sm.at(f_ref);
    const EigenSystem<4> es = eig_4x4(m);

    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < 4; ++k)
        if ((kI * es.values[k]).real() > 0.0) idx.push_back(k);
    if (idx.size() != 2) throw IllConditionedError("expected two eigenfrequencies with Re E > 0");
    if ((kI * es.values[idx[0]]).real() > (kI * es.values[idx[1]]).real()) std::swap(idx[0], idx[1]);
    const double sep = std::abs(es.values[idx[0]] - es.values[idx[1]]);
    if (sep <= constants::kIllConditionedSeparation * std::max(1.0, norm(m)))
        throw IllConditionedError("physical pair is degenerate at f_ref; choose f_ref away from the EP");

    Matrix<2, 4> left;
    Matrix<4, 2> right;
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t i = 0; i < 4; ++i) {
            left(a, i) = es.left(idx[a], i);
            right(i, a) = es.right(i, idx[a]);
        }

    EffectiveModel model;
    model.method = ReductionMethod::Projection;
    model.h0 = kI * (left * sm.m0 * right);
    model.v = kI * (left * sm.m1 * right);
    model.f_ref = f_ref;
    model.gauge = Gauge::AsProjected;
    return regauge(model, gauge);
}

std::vector<EffectiveEp> ep_of_effective(const EffectiveModel& model)
{
    const Mat2& h = model.h0;
    const Mat2& v = model.v;
    const cplx a = h(0, 0) - h(1, 1);
    const cplx b = v(0, 0) - v(1, 1);
    const cplx qa = b * b + 4.0 * v(0, 1) * v(1, 0);
    const cplx qb = 2.0 * a * b + 4.0 * (h(0, 1) * v(1, 0) + v(0, 1) * h(1, 0));
    const cplx qc = a * a + 4.0 * h(0, 1) * h(1, 0);

    const double scale = std::pow(max_abs(h) + max_abs(v), 2);
    const double tiny = 1e-14 * std::max(scale, std::numeric_limits<double>::min());
    if (std::abs(qa) <= tiny && std::abs(qb) <= tiny && std::abs(qc) <= tiny)
        throw DegenerateFamilyError("discriminant vanishes for every f");

    auto make = [&](cplx f, bool diabolic) {
        return EffectiveEp{f, 0.5 * model.at(f).trace(), diabolic};
    };
    if (std::abs(qa) <= tiny) {
        if (std::abs(qb) <= tiny) return {};
        return {make(-qc / qb, false)};
    }
    const cplx disc = qb * qb - 4.0 * qa * qc;
    if (std::abs(disc) <= 1e-12 * std::max(std::norm(qb), std::abs(4.0 * qa * qc)))
        return {make(-qb / (2.0 * qa), true)};
    const auto [r1, r2] = quadratic_roots(qa, qb, qc);
    return {make(r1, false), make(r2, false)};
}

std::vector<cplx> ep_closed_form(const EffectiveModel& model)
{
    if (!is_diagonal(model.h0)) throw ParameterError("closed-form EP needs a diagonal h0");
    const cplx dom = model.h0(0, 0) - model.h0(1, 1);
    const cplx deps = model.v(0, 0) - model.v(1, 1);
    const cplx s = std::sqrt(model.v(0, 1) * model.v(1, 0));
    std::vector<cplx> out;
    for (const double sign : {1.0, -1.0}) {
        const cplx den = kI * deps + sign * 2.0 * s;
        if (std::abs(den) > 0.0) out.push_back(-kI * dom / den);
    }
    return out;
}

NilpotentPart nilpotent_at_ep(const EffectiveModel& model, cplx f_ep)
{
    const Mat2 h = model.at(f_ep);
    NilpotentPart out;
    out.omega = 0.5 * h.trace();
    out.n = h - out.omega * Mat2::identity();
    const double nn = norm(out.n);
    if (nn <= 1e-14 * std::max(norm(h), std::numeric_limits<double>::min())) {
        out.ratio = 0.0;
        return out;
    }
    out.ratio = norm(out.n * out.n) / (nn * nn);
    if (out.ratio >= constants::kNilpotencyTol) throw NotAnEpError("h(f) - omega I is not nilpotent at this f");
    return out;
}

Mat2 second_order_residue_closed_form(const EffectiveModel& model, cplx f_ep)
{
    if (!is_diagonal(model.h0)) throw ParameterError("closed-form residue needs a diagonal h0");
    const cplx d1 = model.v(0, 1);
    const cplx d2 = model.v(1, 0);
    const cplx s0 = std::sqrt(d1 * d2);
    if (std::abs(s0) == 0.0) throw ParameterError("closed-form residue needs nonzero off-diagonal coupling");
    // The EP branch fixes the sign: N11 = i s f.
    const cplx n11 = 0.5 * (model.h0(0, 0) - model.h0(1, 1) + f_ep * (model.v(0, 0) - model.v(1, 1)));
    const cplx s = std::abs(n11 - kI * s0 * f_ep) <= std::abs(n11 + kI * s0 * f_ep) ? s0 : -s0;
    const cplx r = -d1 / s;
    Mat2 out;
    out(0, 0) = 1.0;
    out(0, 1) = kI * r;
    out(1, 0) = kI / r;
    out(1, 1) = -1.0;
    return (kI * s * f_ep) * out;
}

// ---------------------------------------------------------------------------
// Trajectories

namespace {

std::vector<double> grid(double f_min, double f_max, int n_points)
{
    if (f_min == f_max) return {f_min};
    if (n_points < 2) throw ParameterError("trajectory needs at least 2 points");
    std::vector<double> f(static_cast<std::size_t>(n_points));
    for (int k = 0; k < n_points; ++k)
        f[static_cast<std::size_t>(k)] = f_min + (f_max - f_min) * k / static_cast<double>(n_points - 1);
    return f;
}

// Continuity tracking. Outside the EP zone the prediction is the previous
// point; inside it, quadratic extrapolation from the three previous points
// carries each branch through the close approach.
void track(Trajectory& t, const std::vector<std::pair<cplx, cplx>>& raw)
{
    const std::size_t n = raw.size();
    t.branch_a.resize(n);
    t.branch_b.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        auto [u, w] = raw[k];
        if (k == 0) {
            if (u.real() > w.real()) std::swap(u, w);
            t.branch_a[0] = u;
            t.branch_b[0] = w;
            continue;
        }
        cplx pa = t.branch_a[k - 1];
        cplx pb = t.branch_b[k - 1];
        if (k >= 3 && std::abs(pa - pb) < constants::kTrajectoryEpZone) {
            pa = 3.0 * t.branch_a[k - 1] - 3.0 * t.branch_a[k - 2] + t.branch_a[k - 3];
            pb = 3.0 * t.branch_b[k - 1] - 3.0 * t.branch_b[k - 2] + t.branch_b[k - 3];
        }
        const double keep = std::abs(u - pa) + std::abs(w - pb);
        const double swap = std::abs(u - pb) + std::abs(w - pa);
        if (swap < keep) std::swap(u, w);
        t.branch_a[k] = u;
        t.branch_b[k] = w;
    }
}

std::pair<cplx, cplx> physical_pair(const OscillatorParams& params, double f)
{
    auto e = resonance_energies(params, f, params.g);
    std::sort(e.begin(), e.end(), [](cplx a, cplx b) { return a.real() > b.real(); });
    return {e[0], e[1]};
}

}  // namespace

Trajectory eigen_trajectory(const OscillatorParams& params, double f_min, double f_max, int n_points)
{
    params.validate();
    Trajectory t;
    t.source = TrajectorySource::Full4x4;
    t.f_values = grid(f_min, f_max, n_points);
    std::vector<std::pair<cplx, cplx>> raw(t.f_values.size());
    for (std::size_t k = 0; k < raw.size(); ++k) raw[k] = physical_pair(params, t.f_values[k]);
    track(t, raw);
    return t;
}

Trajectory eigen_trajectory(const EffectiveModel& model, double f_min, double f_max, int n_points)
{
    Trajectory t;
    t.source = TrajectorySource::Reduced2x2;
    t.f_values = grid(f_min, f_max, n_points);
    std::vector<std::pair<cplx, cplx>> raw(t.f_values.size());
    for (std::size_t k = 0; k < raw.size(); ++k) {
        const Eigen2 e = eigen_2x2(model.at(t.f_values[k]));
        raw[k] = {e.lambda1, e.lambda2};
    }
    track(t, raw);
    return t;
}

double max_branch_deviation(const Trajectory& full, const Trajectory& reduced)
{
    if (full.f_values.size() != reduced.f_values.size()) throw ParameterError("trajectories use different grids");
    double worst = 0.0;
    for (std::size_t k = 0; k < full.f_values.size(); ++k) {
        const double keep = std::max(std::abs(full.branch_a[k] - reduced.branch_a[k]),
                                     std::abs(full.branch_b[k] - reduced.branch_b[k]));
        const double swap = std::max(std::abs(full.branch_a[k] - reduced.branch_b[k]),
                                     std::abs(full.branch_b[k] - reduced.branch_a[k]));
        worst = std::max(worst, std::min(keep, swap));
    }
    return worst;
}

std::string trajectory_csv_header()
{
    return "f,re_omega_a,im_omega_a,re_omega_b,im_omega_b,source\n";
}

void append_trajectory_csv(std::string& out, const Trajectory& t)
{
    const std::string_view src = to_string(t.source);
    for (std::size_t k = 0; k < t.f_values.size(); ++k) {
        out += format_number(t.f_values[k]);
        out += ',';
        out += format_number(t.branch_a[k].real());
        out += ',';
        out += format_number(t.branch_a[k].imag());
        out += ',';
        out += format_number(t.branch_b[k].real());
        out += ',';
        out += format_number(t.branch_b[k].imag());
        out += ',';
        out += src;
        out += '\n';
    }
}

}  // namespace epfano

#include "epfano/epfinder.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "epfano/constants.hpp"

namespace epfano {

namespace {

using Vec = std::array<double, 4>;
using Jac = std::array<std::array<double, 4>, 4>;

struct Evaluation {
    Vec value{};      // scaled (Re D, Im D, Re D', Im D')
    double scale = 1.0;
    cplx d1 = 0.0;    // D'
    cplx d2 = 0.0;    // D''
};

Evaluation evaluate(const OscillatorParams& params, const Vec& x)
{
    const cplx e{x[0], x[1]};
    const Polynomial p = char_poly(params, x[2], x[3]);
    const Polynomial dp = p.derivative();
    const auto [d0, d1] = p.eval_with_derivative(e);
    const auto [d1b, d2] = dp.eval_with_derivative(e);
    Evaluation ev;
    ev.scale = std::max(p.max_coefficient(), std::numeric_limits<double>::min());
    ev.value = {d0.real() / ev.scale, d0.imag() / ev.scale, d1.real() / ev.scale, d1.imag() / ev.scale};
    ev.d1 = d1b / ev.scale;
    ev.d2 = d2 / ev.scale;
    return ev;
}

double max_norm(const Vec& v)
{
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double two_norm(const Vec& v)
{
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// Gaussian elimination on a real 4x4; false if a pivot is negligible.
bool solve_real(Jac a, Vec b, Vec& x)
{
    double scale = 0.0;
    for (const auto& row : a)
        for (double v : row) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return false;
    for (std::size_t c = 0; c < 4; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < 4; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        if (std::abs(a[piv][c]) < 1e-12 * scale) return false;
        std::swap(a[piv], a[c]);
        std::swap(b[piv], b[c]);
        for (std::size_t r = c + 1; r < 4; ++r) {
            const double m = a[r][c] / a[c][c];
            for (std::size_t j = c; j < 4; ++j) a[r][j] -= m * a[c][j];
            b[r] -= m * b[c];
        }
    }
    for (std::size_t i = 4; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < 4; ++j) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return true;
}

// Minimum-norm-ish step for a rank-deficient Jacobian.
Vec regularized_step(const Jac& j, const Vec& rhs, double damping)
{
    Jac jtj{};
    Vec jtr{};
    double tr = 0.0;
    for (std::size_t a = 0; a < 4; ++a) {
        for (std::size_t b = 0; b < 4; ++b)
            for (std::size_t k = 0; k < 4; ++k) jtj[a][b] += j[k][a] * j[k][b];
        for (std::size_t k = 0; k < 4; ++k) jtr[a] += j[k][a] * rhs[k];
        tr += jtj[a][a];
    }
    const double mu = damping * std::max(tr, 1e-300);
    for (std::size_t a = 0; a < 4; ++a) jtj[a][a] += mu;
    Vec x{};
    if (!solve_real(jtj, jtr, x)) x = {};
    return x;
}

ExceptionalPoint to_ep(const Vec& x, double residual, int iterations)
{
    ExceptionalPoint ep;
    ep.omega = {x[0], x[1]};
    ep.f = x[2];
    ep.g = x[3];
    ep.residual = residual;
    ep.iterations = iterations;
    ep.physical = x[1] < 0.0;
    return ep;
}

}  // namespace

ExceptionalPoint find_ep(const OscillatorParams& params, const EpSeed& seed, const EpSolverOptions& opts)
{
    params.validate();
    Vec x{seed.omega.real(), seed.omega.imag(), seed.f, seed.g};
    for (double v : x)
        if (!std::isfinite(v)) throw ParameterError("find_ep: seed must be finite");

    Evaluation ev = evaluate(params, x);
    double residual = max_norm(ev.value);
    int converged_at = -1;
    double lm = 1e-3;

    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        Jac jac{};
        // dD/dRe E = D', dD/dIm E = i D'; same for D' with D''.
        const cplx col_re[2] = {ev.d1, ev.d2};
        const cplx col_im[2] = {cplx{0, 1} * ev.d1, cplx{0, 1} * ev.d2};
        for (int k = 0; k < 2; ++k) {
            jac[2 * k][0] = col_re[k].real();
            jac[2 * k + 1][0] = col_re[k].imag();
            jac[2 * k][1] = col_im[k].real();
            jac[2 * k + 1][1] = col_im[k].imag();
        }
        for (std::size_t c = 2; c < 4; ++c) {
            const double h = constants::kFdRelStep * std::max(1.0, std::abs(x[c]));
            Vec xp = x;
            Vec xm = x;
            xp[c] += h;
            xm[c] -= h;
            // Keep the same normalization as the current iterate.
            Evaluation ep = evaluate(params, xp);
            Evaluation em = evaluate(params, xm);
            for (std::size_t r = 0; r < 4; ++r)
                jac[r][c] = (ep.value[r] * ep.scale - em.value[r] * em.scale) / (2.0 * h * ev.scale);
        }

        Vec rhs{};
        for (std::size_t r = 0; r < 4; ++r) rhs[r] = -ev.value[r];
        // Levenberg-Marquardt: the damping shrinks after every success, so
        // steps become Newton steps once the iterate is in the basin; on a
        // continuous EP family (rank-deficient Jacobian) the damped step stays
        // short and heads for the nearest point of the family. Step halving
        // is the last resort.
        const double current = two_norm(ev.value);
        Vec trial = x;
        Evaluation trial_ev = ev;
        bool accepted = false;
        auto try_step = [&](const Vec& step, double t) {
            for (std::size_t c = 0; c < 4; ++c) trial[c] = x[c] + t * step[c];
            trial_ev = evaluate(params, trial);
            // Compare on the current iterate's scale so the merit function
            // cannot drop just because the coefficients grew.
            return two_norm(trial_ev.value) * trial_ev.scale < current * ev.scale;
        };
        while (!accepted && lm <= 1e6) {
            Vec step{};
            if (lm < 1e-14 && solve_real(jac, rhs, step)) {
                accepted = try_step(step, 1.0);
            } else {
                accepted = try_step(regularized_step(jac, rhs, std::max(lm, 1e-14)), 1.0);
            }
            lm = accepted ? lm * 0.1 : std::max(lm * 10.0, 1e-12);
        }
        if (!accepted) {
            lm = 1e-3;
            Vec step = regularized_step(jac, rhs, 1e-10);
            double t = 0.5;
            for (int h = 1; h <= opts.max_halvings && !accepted; ++h, t *= 0.5) accepted = try_step(step, t);
        }
        if (!accepted) {
            if (residual < opts.tol) break;  // stalled at round-off
            throw ConvergenceError("find_ep: line search failed to reduce the residual", to_ep(x, residual, iter));
        }
        x = trial;
        ev = trial_ev;
        residual = max_norm(ev.value);

        if (residual < opts.tol) {
            if (converged_at < 0) converged_at = iter;
            // A few extra steps polish the double root down to round-off.
            if (iter - converged_at >= 3) break;
        }
    }
    if (residual >= opts.tol)
        throw ConvergenceError("find_ep: no convergence within max_iter", to_ep(x, residual, opts.max_iter));
    return to_ep(x, residual, converged_at < 0 ? opts.max_iter : converged_at);
}

bool prefer(const ExceptionalPoint& a, const ExceptionalPoint& b)
{
    const bool a_decay = a.omega.imag() < 0.0;
    const bool b_decay = b.omega.imag() < 0.0;
    if (a_decay != b_decay) return a_decay;
    const bool a_pos = a.omega.real() > 0.0;
    const bool b_pos = b.omega.real() > 0.0;
    if (a_pos != b_pos) return a_pos;
    return std::abs(a.f) < std::abs(b.f);
}

std::optional<ExceptionalPoint> select_physical(const std::vector<ExceptionalPoint>& eps)
{
    std::optional<ExceptionalPoint> best;
    for (const auto& ep : eps)
        if (ep.physical && (!best || prefer(ep, *best))) best = ep;
    return best;
}

namespace {

struct ClosestPair {
    double separation = std::numeric_limits<double>::infinity();
    cplx midpoint = 0.0;
};

ClosestPair closest_pair(const OscillatorParams& params, double f, double g)
{
    const auto roots = resonance_energies(params, f, g);
    ClosestPair best;
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = i + 1; j < roots.size(); ++j) {
            const double s = std::abs(roots[i] - roots[j]);
            const cplx mid = 0.5 * (roots[i] + roots[j]);
            const bool tie = std::abs(s - best.separation) <= 1e-12 * std::max(1.0, s);
            if (s < best.separation && !tie) {
                best = {s, mid};
            } else if (tie && mid.real() > best.midpoint.real()) {
                best = {std::min(s, best.separation), mid};
            }
        }
    return best;
}

double distance(const ExceptionalPoint& a, const ExceptionalPoint& b)
{
    return std::sqrt(std::norm(a.omega - b.omega) + (a.f - b.f) * (a.f - b.f) + (a.g - b.g) * (a.g - b.g));
}

void insert_unique(std::vector<ExceptionalPoint>& out, const ExceptionalPoint& ep)
{
    for (const auto& e : out)
        if (distance(e, ep) < constants::kEpDedupRadius) return;
    out.push_back(ep);
}

}  // namespace

double closest_root_pair_separation(const OscillatorParams& params, double f, double g)
{
    return closest_pair(params, f, g).separation;
}

std::vector<ExceptionalPoint> scan_seeds(const OscillatorParams& params,
                                         std::pair<double, double> f_range,
                                         std::pair<double, double> g_range,
                                         int grid_n,
                                         const EpSolverOptions& opts)
{
    params.validate();
    if (grid_n < 2) throw ParameterError("scan_seeds: grid_n must be at least 2");
    for (double v : {f_range.first, f_range.second, g_range.first, g_range.second})
        if (!std::isfinite(v)) throw ParameterError("scan_seeds: ranges must be finite");
    const auto [f_lo, f_hi] = std::minmax(f_range.first, f_range.second);
    const auto [g_lo, g_hi] = std::minmax(g_range.first, g_range.second);

    const auto n = static_cast<std::size_t>(grid_n);
    const double df = (f_hi - f_lo) / static_cast<double>(n - 1);
    const double dg = (g_hi - g_lo) / static_cast<double>(n - 1);
    std::vector<ClosestPair> grid(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            grid[i * n + j] = closest_pair(params, f_lo + df * static_cast<double>(i), g_lo + dg * static_cast<double>(j));

    std::vector<ExceptionalPoint> found;
    const double tol_f = 1e-9 * std::max(1.0, std::abs(f_hi - f_lo));
    const double tol_g = 1e-9 * std::max(1.0, std::abs(g_hi - g_lo));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double s = grid[i * n + j].separation;
            bool local_min = true;
            for (int di = -1; di <= 1 && local_min; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    const auto ii = static_cast<long>(i) + di;
                    const auto jj = static_cast<long>(j) + dj;
                    if (ii < 0 || jj < 0 || ii >= static_cast<long>(n) || jj >= static_cast<long>(n)) continue;
                    if (grid[static_cast<std::size_t>(ii) * n + static_cast<std::size_t>(jj)].separation < s) {
                        local_min = false;
                        break;
                    }
                }
            if (!local_min) continue;
            const EpSeed seed{grid[i * n + j].midpoint, f_lo + df * static_cast<double>(i),
                              g_lo + dg * static_cast<double>(j)};
            try {
                const ExceptionalPoint ep = find_ep(params, seed, opts);
                if (ep.f < f_lo - tol_f || ep.f > f_hi + tol_f || ep.g < g_lo - tol_g || ep.g > g_hi + tol_g) continue;
                insert_unique(found, ep);
            } catch (const ConvergenceError&) {
            }
        }
    std::sort(found.begin(), found.end(), prefer);
    return found;
}

ExceptionalPoint locate_physical_ep(const OscillatorParams& params)
{
    params.validate();
    auto eps = scan_seeds(params, {constants::kScanFMin, constants::kScanFMax},
                          {constants::kScanGMin, std::max(constants::kScanGMax, 2.0 * params.g)}, constants::kScanGrid);
    const ClosestPair own = closest_pair(params, params.f, params.g);
    try {
        insert_unique(eps, find_ep(params, {own.midpoint, params.f, params.g}));
    } catch (const ConvergenceError&) {
    }
    const auto best = select_physical(eps);
    if (!best) throw ConvergenceError("no exceptional point found in the default search box", {});
    return *best;
}

}  // namespace epfano

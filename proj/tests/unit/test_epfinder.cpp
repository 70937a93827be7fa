#include "doctest.h"

#include <chrono>

#include "epfano/constants.hpp"
#include "epfano/epfinder.hpp"
#include "support.hpp"

using namespace epfano;
using namespace epfano::testing;

namespace {

// Closest pair among the resonance energies with Re E > 0, computed from the
// eigenvalues of M rather than from the secular polynomial.
double physical_pair_gap(const OscillatorParams& p, double f, double g)
{
    const auto es = eig_4x4(system_matrix(p.with_coupling(f, g)));
    std::vector<cplx> e;
    for (const cplx l : es.values)
        if ((cplx(0.0, 1.0) * l).real() > 0.0) e.push_back(cplx(0.0, 1.0) * l);
    if (e.size() != 2) return 1e9;
    return std::abs(e[0] - e[1]);
}

// Dense grid, then successive zooms around the best node.
std::pair<double, double> grid_oracle(const OscillatorParams& p, double f0, double f1, double g0, double g1)
{
    double bf = f0, bg = g0, best = 1e300;
    int n = 200;
    for (int level = 0; level < 8; ++level) {
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j) {
                const double f = f0 + (f1 - f0) * i / n, g = g0 + (g1 - g0) * j / n;
                const double gap = physical_pair_gap(p, f, g);
                if (gap < best) {
                    best = gap;
                    bf = f;
                    bg = g;
                }
            }
        const double wf = 4.0 * (f1 - f0) / n, wg = 4.0 * (g1 - g0) / n;
        f0 = bf - wf;
        f1 = bf + wf;
        g0 = std::max(0.0, bg - wg);
        g1 = bg + wg;
        n = 40;
    }
    return {bf, bg};
}

}  // namespace

TEST_SUITE("epfinder") {

TEST_CASE("reference EP from the documented seed")
{
    const OscillatorParams p = reference_params();
    const ExceptionalPoint ep = find_ep(p, {cplx(2.9, -0.05), 0.0, 0.08});
    CHECK(std::abs(ep.omega - cplx(2.9, -0.1)) < 5e-3);
    CHECK(std::abs(ep.f - 0.02) < 5e-3);
    CHECK(std::abs(ep.g - 0.1) < 5e-3);
    CHECK(ep.physical);
    const double scale = char_poly(p, ep.f, ep.g).max_coefficient();
    CHECK(std::abs(secular_det(p, ep.f, ep.g, ep.omega)) < constants::kEpTol * scale);
    CHECK(std::abs(det_derivative(p, ep.f, ep.g, ep.omega)) < constants::kEpTol * scale);
    MESSAGE("EP: omega = " << ep.omega << ", f = " << ep.f << ", g = " << ep.g << ", iterations " << ep.iterations);
}

TEST_CASE("equal frequencies: the antisymmetric mode at critical damping")
{
    OscillatorParams p;
    p.omega1 = 1.0;
    p.omega2 = 1.0;
    const ExceptionalPoint ep = find_ep(p, {cplx(0.05, -0.95), 0.05, 0.45});
    // family 4 g^2 = w0^2 + 2 f, E = -2 i g in the resonance convention
    CHECK(std::abs(4 * ep.g * ep.g - (1.0 + 2 * ep.f)) < 1e-8);
    CHECK(std::abs(ep.omega - cplx(0.0, -2.0 * ep.g)) < 1e-6);
}

TEST_CASE("omega1 = 1.0, omega2 = 1.1 against a brute-force grid")
{
    OscillatorParams p;
    p.omega1 = 1.0;
    p.omega2 = 1.1;
    const ExceptionalPoint ep = locate_physical_ep(p);
    CHECK(ep.physical);
    const auto [of, og] = grid_oracle(p, ep.f - 0.2, ep.f + 0.2, std::max(0.0, ep.g - 0.2), ep.g + 0.2);
    CHECK(std::abs(ep.f - of) < constants::kEpDedupRadius);
    CHECK(std::abs(ep.g - og) < constants::kEpDedupRadius);
    MESSAGE("solver f = " << ep.f << ", g = " << ep.g << "; grid f = " << of << ", g = " << og);
}

TEST_CASE("non-convergence carries the last iterate")
{
    const OscillatorParams p = reference_params();
    EpSolverOptions opts;
    opts.max_iter = 1;
    try {
        find_ep(p, {cplx(2.0, -1.0), 0.8, 0.4}, opts);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(e.kind() == "convergence");
        CHECK(std::isfinite(e.last_iterate().f));
    }
}

TEST_CASE("scan_seeds finds the reference EP in a small box")
{
    const auto eps = scan_seeds(reference_params(), {0.0, 0.1}, {0.0, 0.2}, 20);
    bool found = false;
    for (const auto& ep : eps)
        found = found || (std::abs(ep.omega - cplx(2.9, -0.1)) < 5e-3 && std::abs(ep.f - 0.02) < 5e-3 &&
                          std::abs(ep.g - 0.1) < 5e-3);
    CHECK(found);
    for (std::size_t a = 0; a < eps.size(); ++a)
        for (std::size_t b = a + 1; b < eps.size(); ++b)
            CHECK(std::abs(eps[a].omega - eps[b].omega) + std::abs(eps[a].f - eps[b].f) +
                      std::abs(eps[a].g - eps[b].g) > constants::kEpDedupRadius);
}

TEST_CASE("returned EPs carry a double root")
{
    for (const auto& ep : scan_seeds(reference_params(), {0.0, 0.1}, {0.0, 0.2}, 20)) {
        const auto r = poly_roots(char_poly(reference_params(), ep.f, ep.g));
        double gap = 1e9;
        for (std::size_t a = 0; a < r.size(); ++a)
            for (std::size_t b = a + 1; b < r.size(); ++b) gap = std::min(gap, std::abs(r[a] - r[b]));
        CHECK(gap < 1e-5);
    }
}

TEST_CASE("seeds within 10 percent of the EP converge to the same point")
{
    const ExceptionalPoint& ref = reference_ep();
    std::vector<ExceptionalPoint> hits;
    for (int k = 0; k < 10; ++k) {
        const EpSeed seed{cplx(ref.omega.real() * (1 + uniform(-0.1, 0.1)), ref.omega.imag() * (1 + uniform(-0.1, 0.1))),
                          ref.f * (1 + uniform(-0.1, 0.1)), ref.g * (1 + uniform(-0.1, 0.1))};
        hits.push_back(find_ep(reference_params(), seed));
    }
    for (const auto& a : hits)
        for (const auto& b : hits)
            CHECK(std::abs(a.omega - b.omega) + std::abs(a.f - b.f) + std::abs(a.g - b.g) < 1e-8);
}

TEST_CASE("scan_seeds with equal frequencies lands on the analytic family")
{
    OscillatorParams p;
    p.omega1 = 1.0;
    p.omega2 = 1.0;
    const auto eps = scan_seeds(p, {-0.3, 0.3}, {0.3, 0.7}, 10);
    REQUIRE_FALSE(eps.empty());
    for (const auto& ep : eps) CHECK(std::abs(4 * ep.g * ep.g - (1.0 + 2 * ep.f)) < 1e-8);
}

TEST_CASE("scan_seeds in a box without EPs")
{
    CHECK(scan_seeds(reference_params(), {0.5, 0.6}, {0.3, 0.35}, 10).empty());
}

TEST_CASE("select_physical prefers the lower half plane")
{
    ExceptionalPoint up, down;
    up.omega = cplx(2.9, 0.1);
    down.omega = cplx(2.9, -0.1);
    down.physical = true;
    const auto pick = select_physical({up, down});
    REQUIRE(pick.has_value());
    CHECK(pick->omega.imag() < 0.0);
    CHECK_FALSE(select_physical({up}).has_value());
}

TEST_CASE("locate_physical_ep is fast")
{
    const auto t0 = std::chrono::steady_clock::now();
    const ExceptionalPoint ep = locate_physical_ep(reference_params());
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(ep.physical);
    CHECK(s < 1.0);
}

}

#include "doctest.h"

#include "epfano/linalg.hpp"
#include "support.hpp"

using namespace epfano;
using namespace epfano::testing;

TEST_SUITE("linalg") {

TEST_CASE("poly_roots of x^2 - 1")
{
    const auto r = poly_roots(Polynomial({-1.0, 0.0, 1.0}));
    CHECK(multiset_distance(r, {1.0, -1.0}) < 1e-14);
}

TEST_CASE("poly_roots of the uncoupled quartic")
{
    const cplx w1 = 2.8, w2 = 3.0;
    const Polynomial p = Polynomial({-w1 * w1, 0.0, 1.0}) * Polynomial({-w2 * w2, 0.0, 1.0});
    CHECK(multiset_distance(poly_roots(p), {w1, -w1, w2, -w2}) < 1e-12);
}

TEST_CASE("poly_roots recovers planted roots and meets the residual bound")
{
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<cplx> planted;
        while (planted.size() < 4) {
            const cplx z = random_cplx(3.0);
            bool far = true;
            for (const cplx w : planted) far = far && std::abs(z - w) > 1e-3;
            if (far) planted.push_back(z);
        }
        const Polynomial p = Polynomial::from_roots(planted);
        const auto roots = poly_roots(p);
        REQUIRE(roots.size() == 4);
        CHECK(multiset_distance(roots, planted) < 1e-9);
        for (const cplx r : roots)
            CHECK(std::abs(p(r)) < 1e-10 * p.max_coefficient() * std::pow(std::max(1.0, std::abs(r)), 4));
    }
}

TEST_CASE("poly_roots keeps multiplicity of a double root")
{
    const std::vector<cplx> planted = {cplx(2.9, -0.1), cplx(2.9, -0.1), cplx(-1.0, 0.5), cplx(0.3, 0.0)};
    const auto roots = poly_roots(Polynomial::from_roots(planted));
    // a double root is only determined to ~sqrt(eps)
    CHECK(multiset_distance(roots, planted) < 1e-6);
}

TEST_CASE("poly_roots rejects degenerate input")
{
    CHECK_THROWS_AS(poly_roots(Polynomial({1.0})), ParameterError);
    CHECK_THROWS_AS(poly_roots(Polynomial({1.0, 1.0, 0.0})), ParameterError);
    CHECK_THROWS_AS(poly_roots(Polynomial(std::vector<cplx>(10, 1.0))), ParameterError);
}

TEST_CASE("eig_4x4 of a diagonal matrix")
{
    const std::array<cplx, 4> d = {1.0, 2.0, 3.0, 4.0};
    const auto es = eig_4x4(Mat4::diagonal(d));
    CHECK(multiset_distance({es.values.begin(), es.values.end()}, {d.begin(), d.end()}) < 1e-12);
    CHECK_FALSE(es.ill_conditioned);
    for (std::size_t k = 0; k < 4; ++k) {
        // each right vector is a unit axis up to scale
        const std::size_t axis = static_cast<std::size_t>(std::lround(es.values[k].real())) - 1;
        for (std::size_t i = 0; i < 4; ++i)
            if (i != axis) CHECK(std::abs(es.right(i, k)) < 1e-12);
    }
}

TEST_CASE("eig_4x4 reconstruction and biorthonormality on random real matrices")
{
    int checked = 0;
    while (checked < 100) {
        Mat4 m;
        for (auto& x : m.data) x = uniform(-1.0, 1.0);
        const auto es = eig_4x4(m);
        if (es.ill_conditioned || es.min_separation < 1e-3) continue;
        ++checked;
        Mat4 rebuilt;
        for (std::size_t k = 0; k < 4; ++k)
            for (std::size_t i = 0; i < 4; ++i)
                for (std::size_t j = 0; j < 4; ++j) rebuilt(i, j) += es.values[k] * es.right(i, k) * es.left(k, j);
        CHECK(norm(rebuilt - m) < 1e-9 * norm(m));
        const Mat4 overlap = es.left * es.right;
        CHECK(max_abs(overlap - Mat4::identity()) < 1e-10);
    }
}

TEST_CASE("eig_4x4 values are the roots of the characteristic polynomial")
{
    Mat4 m;
    for (auto& x : m.data) x = random_cplx(1.0);
    const auto es = eig_4x4(m);
    CHECK(multiset_distance({es.values.begin(), es.values.end()}, poly_roots(characteristic_polynomial(m))) < 1e-12);
    // and det(m - lambda) vanishes, by cofactor expansion
    for (const cplx l : es.values) CHECK(std::abs(cofactor_det4(m - l * Mat4::identity())) < 1e-10);
}

TEST_CASE("eig_4x4 flags a Jordan block")
{
    Mat4 m = Mat4::identity();
    m(0, 1) = 1.0;
    m(2, 2) = 3.0;
    m(3, 3) = -2.0;
    CHECK(eig_4x4(m).ill_conditioned);
}

TEST_CASE("eigen_2x2 examples")
{
    Mat2 id = Mat2::identity();
    auto e = eigen_2x2(id);
    CHECK(std::abs(e.lambda1 - 1.0) < 1e-15);
    CHECK(std::abs(e.lambda2 - 1.0) < 1e-15);
    CHECK(e.discriminant == cplx(0.0));

    Mat2 x;
    x(0, 1) = 1.0;
    x(1, 0) = 1.0;
    e = eigen_2x2(x);
    CHECK(multiset_distance({e.lambda1, e.lambda2}, {1.0, -1.0}) < 1e-15);
    CHECK(std::abs(e.discriminant - 4.0) < 1e-15);

    Mat2 jordan;
    jordan(0, 1) = 1.0;
    e = eigen_2x2(jordan);
    CHECK(e.lambda1 == cplx(0.0));
    CHECK(e.lambda2 == cplx(0.0));
    CHECK(e.discriminant == cplx(0.0));
}

TEST_CASE("eigen_2x2 trace and determinant identities")
{
    for (int trial = 0; trial < 500; ++trial) {
        Mat2 h;
        for (auto& x : h.data) x = random_cplx(2.0);
        const auto e = eigen_2x2(h);
        const cplx det = h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0);
        CHECK(std::abs(e.lambda1 + e.lambda2 - h.trace()) <= 1e-13 * std::max(1.0, std::abs(h.trace())));
        CHECK(std::abs(e.lambda1 * e.lambda2 - det) <= 1e-13 * std::max(1.0, std::abs(det)));
    }
}

TEST_CASE("eigen_2x2 discriminant vanishes on s I + N with N nilpotent")
{
    for (int trial = 0; trial < 200; ++trial) {
        // N = a (u w^T) with w . u = 0 is nilpotent
        const cplx u0 = random_cplx(1.0), u1 = random_cplx(1.0), a = random_cplx(1.0);
        Mat2 h;
        h(0, 0) = a * u0 * u1;
        h(0, 1) = -a * u0 * u0;
        h(1, 0) = a * u1 * u1;
        h(1, 1) = -a * u0 * u1;
        const cplx s = random_cplx(3.0);
        h(0, 0) += s;
        h(1, 1) += s;
        CHECK(std::abs(eigen_2x2(h).discriminant) < 1e-13);
    }
}

TEST_CASE("invert")
{
    CHECK(max_abs(invert(Mat4::identity()) - Mat4::identity()) == 0.0);
    const std::array<cplx, 2> d = {2.0, 4.0};
    const Mat2 inv = invert(Mat2::diagonal(d));
    CHECK(std::abs(inv(0, 0) - 0.5) < 1e-15);
    CHECK(std::abs(inv(1, 1) - 0.25) < 1e-15);
    for (int trial = 0; trial < 100; ++trial) {
        Mat4 m = 4.0 * Mat4::identity();
        for (auto& x : m.data) x += random_cplx(1.0);
        const Mat4 mi = invert(m);
        CHECK(max_abs(m * mi - Mat4::identity()) < 1e-9);
        CHECK(max_abs(mi - naive_inverse(m)) < 1e-10);
    }
    CHECK_THROWS_AS(invert(Mat2{}), SingularityError);
}

TEST_CASE("determinant agrees with cofactor expansion")
{
    for (int trial = 0; trial < 50; ++trial) {
        Mat4 m;
        for (auto& x : m.data) x = random_cplx(2.0);
        CHECK(std::abs(determinant(m) - cofactor_det4(m)) < 1e-12 * std::max(1.0, std::abs(cofactor_det4(m))));
    }
}

}

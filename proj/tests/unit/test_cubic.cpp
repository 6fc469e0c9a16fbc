#include <doctest.h>

#include <algorithm>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>

#include "magnomech/cubic.hpp"
#include "magnomech/errors.hpp"

using namespace magnomech;

namespace {

// Eigenvalues of the companion matrix of lambda^3 + r lambda^2 + s lambda + t.
std::array<cplx, 3> companion_roots(const CubicCoefficients& c) {
    Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
    m(0, 0) = -c.r;
    m(0, 1) = -c.s;
    m(0, 2) = -c.t;
    m(1, 0) = 1.0;
    m(2, 1) = 1.0;
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(m, false);
    const auto& ev = es.eigenvalues();
    return {ev(0), ev(1), ev(2)};
}

double matched_distance(std::array<cplx, 3> a, const std::array<cplx, 3>& b) {
    std::sort(a.begin(), a.end(), [](cplx x, cplx y) { return x.real() < y.real() || (x.real() == y.real() && x.imag() < y.imag()); });
    double best = 1e300;
    do {
        double worst = 0.0;
        for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
        best = std::min(best, worst);
    } while (std::next_permutation(a.begin(), a.end(), [](cplx x, cplx y) {
        return x.real() < y.real() || (x.real() == y.real() && x.imag() < y.imag());
    }));
    return best;
}

} // namespace

TEST_CASE("factored and degenerate cubics") {
    auto roots = cubic_roots({-6.0, 11.0, -6.0});
    std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
    for (int i = 0; i < 3; ++i) {
        CHECK(roots[i].real() == doctest::Approx(i + 1.0).epsilon(1e-14));
        CHECK(std::abs(roots[i].imag()) < 1e-14);
    }
    for (const auto& x : cubic_roots({0.0, 0.0, 0.0})) CHECK(x == cplx{});

    // (x - 2i)^3
    const cplx z(0.0, 2.0);
    for (const auto& x : cubic_roots({-3.0 * z, 3.0 * z * z, -z * z * z})) CHECK(std::abs(x - z) < 1e-5);
}

TEST_CASE("non-finite coefficients are rejected") {
    CHECK_THROWS_AS(cubic_roots({cplx(std::nan(""), 0.0), 1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(cubic_roots({1.0, cplx(0.0, std::numeric_limits<double>::infinity()), 1.0}), DomainError);
}

TEST_CASE("closed form agrees with the companion matrix") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    double worst_match = 0.0, worst_resid = 0.0;
    for (int k = 0; k < 2000; ++k) {
        const CubicCoefficients c{{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}};
        const auto roots = cubic_roots(c);
        worst_match = std::max(worst_match, matched_distance(roots, companion_roots(c)));
        for (const auto& x : roots)
            worst_resid = std::max(worst_resid, std::abs(c.evaluate(x)) / std::max(1.0, std::pow(std::abs(x), 3)));
    }
    CHECK(worst_match < 1e-9);
    CHECK(worst_resid < 1e-10);
}

TEST_CASE("polish does not worsen the closed form") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int k = 0; k < 500; ++k) {
        const CubicCoefficients c{{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}};
        const auto raw = cardano_roots(c);
        const auto pol = cubic_roots(c);
        for (int i = 0; i < 3; ++i) CHECK(std::abs(c.evaluate(pol[i])) <= std::abs(c.evaluate(raw[i])));
    }
}

TEST_CASE("discriminants") {
    CubicCoefficients c{-6.0, 11.0, -6.0};
    // prod (xi - xj)^2 = (1*2*1)^2 = 4
    CHECK(c.discriminant().real() == doctest::Approx(4.0));
    CHECK(CubicCoefficients{-4.0, 5.0, -2.0}.discriminant() == cplx{}); // (x-1)^2 (x-2)
    CHECK(RealCubic{2.0, -12.0, 22.0, -12.0}.discriminant() == doctest::Approx(4.0));
    CHECK(RealCubic{1.0, 0.0, 1.0, 0.0}.discriminant() < 0.0);
}

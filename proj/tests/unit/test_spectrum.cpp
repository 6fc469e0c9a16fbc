#include <doctest.h>

#include <algorithm>
#include <numbers>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>

#include "magnomech/spectrum.hpp"

using namespace magnomech;

namespace {

// Parameters with a third-order exceptional point at G_a = 1 (Delta_m =
// kappa_m = Gamma = 1, kappa_b = 0.01, theta = pi). Solved at 40 digits from
// r^2 = 3 s and r^3 = 27 t; the triple eigenvalue is 1.94276906887593 -
// 1.20381059060839 i.
SystemParams ep3_params() {
    SystemParams p;
    p.delta_c = 3.0747075632940973493;
    p.kappa_a = 2.6014317718251557638;
    p.omega_b = 1.7535996433336925682;
    p.g_b = 0.77916112112444550396;
    p.g_a = 1.0;
    return p;
}

std::array<cplx, 3> eigen_oracle(const EffectiveMatrix& m) {
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(m, false);
    return {es.eigenvalues()(0), es.eigenvalues()(1), es.eigenvalues()(2)};
}

} // namespace

TEST_CASE("effective matrix structure") {
    SystemParams p;
    const auto m = build_effective_matrix(p);
    CHECK(m(0, 2) == cplx{});
    CHECK(m(2, 0) == cplx{});
    CHECK(m(0, 1) == m(1, 0));
    CHECK(m(0, 1).real() == doctest::Approx(p.g_a));
    CHECK(m(0, 1).imag() == doctest::Approx(p.gamma)); // G_a + i Gamma at theta = pi
    CHECK(m(1, 2) == cplx(p.g_b, 0.0));
    CHECK(m(0, 0) == cplx(p.delta_c, -p.kappa_a));
    CHECK(m(2, 2) == cplx(p.omega_b, -p.kappa_b));
    // Dressing around an empty magnon mode switches the optomechanical coupling off.
    const auto empty = build_effective_matrix(p, Dressing::around(0.0, 0.0));
    CHECK(empty(1, 2) == cplx{});
    CHECK(empty(2, 1) == cplx{});
    CHECK(empty(0, 1) == m(0, 1));

    const auto d = build_effective_matrix(p, Dressing::around({0.3, -0.4}, {0.25, 7.0}));
    CHECK(d(1, 1) == cplx(p.delta_m + 2.0 * p.g_b * 0.25, -p.kappa_m));
    CHECK(d(1, 2) == p.g_b * cplx(0.3, -0.4));
    CHECK(d(2, 1) == std::conj(d(1, 2)));
}

TEST_CASE("decoupled limit returns the diagonal") {
    SystemParams p;
    p.g_a = 0.0;
    p.gamma = 0.0;
    p.g_b = 0.0;
    const auto s = spectrum_of(p);
    std::array<cplx, 3> diag{cplx(p.delta_c, -p.kappa_a), cplx(p.delta_m, -p.kappa_m), cplx(p.omega_b, -p.kappa_b)};
    std::sort(diag.begin(), diag.end(), [](cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
    for (int i = 0; i < 3; ++i) CHECK(std::abs(s.eigenvalues[i] - diag[i]) < 1e-12);

    const auto c = characteristic_cubic(build_effective_matrix(p));
    const cplx d1 = diag[0], d2 = diag[1], d3 = diag[2];
    CHECK(std::abs(c.r + (d1 + d2 + d3)) < 1e-14);
    CHECK(std::abs(c.s - (d1 * d2 + d1 * d3 + d2 * d3)) < 1e-14);
    CHECK(std::abs(c.t + d1 * d2 * d3) < 1e-14);
}

TEST_CASE("block determinant with G_b = 0") {
    SystemParams p;
    p.g_b = 0.0;
    p.g_a = 0.7;
    p.gamma = 0.4;
    p.theta = 2.0;
    const cplx g = p.coupling();
    const auto c = characteristic_cubic(build_effective_matrix(p));
    const cplx expect = -cplx(p.omega_b, -p.kappa_b) * (cplx(p.delta_c, -p.kappa_a) * cplx(p.delta_m, -p.kappa_m) - g * g);
    CHECK(std::abs(c.t - expect) < 1e-14);
}

TEST_CASE("coefficients agree with an eigenvalue oracle") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int k = 0; k < 300; ++k) {
        SystemParams p;
        p.delta_c = u(rng) - 1.5;
        p.delta_m = u(rng);
        p.omega_b = u(rng) + 0.1;
        p.kappa_a = u(rng);
        p.g_a = u(rng);
        p.g_b = u(rng);
        p.gamma = u(rng);
        p.theta = 2.0 * u(rng);
        const auto m = build_effective_matrix(p, Dressing::around({u(rng), u(rng)}, {u(rng), u(rng)}));
        const auto c = characteristic_cubic(m);
        const auto l = eigen_oracle(m);
        const double scale = std::max({1.0, std::abs(c.r), std::abs(c.s), std::abs(c.t)});
        CHECK(std::abs(-(l[0] + l[1] + l[2]) - c.r) < 1e-12 * scale);
        CHECK(std::abs(l[0] * l[1] + l[0] * l[2] + l[1] * l[2] - c.s) < 1e-12 * scale);
        CHECK(std::abs(-l[0] * l[1] * l[2] - c.t) < 1e-12 * scale);

        const auto s = solve_cubic(c);
        const auto& e = s.eigenvalues;
        CHECK(std::abs(-(e[0] + e[1] + e[2]) - c.r) < 1e-9 * std::max(1.0, std::abs(c.r)));
        CHECK(std::abs(e[0] * e[1] + e[0] * e[2] + e[1] * e[2] - c.s) < 1e-9 * std::max(1.0, std::abs(c.s)));
        CHECK(std::abs(-e[0] * e[1] * e[2] - c.t) < 1e-9 * std::max(1.0, std::abs(c.t)));
        CHECK(std::is_sorted(e.begin(), e.end(), [](cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); }));
        CHECK(s.coalescence == doctest::Approx(min_pairwise_distance(e)));
    }
}

TEST_CASE("printed coefficients: agreement and recorded discrepancy") {
    SystemParams p;
    p.gamma = 0.0;
    auto printed = printed_cubic(p);
    auto exact = characteristic_cubic(build_effective_matrix(p));
    CHECK(std::abs(printed.r - exact.r) < 1e-14);
    CHECK(std::abs(printed.s - exact.s) < 1e-13);
    // t as printed omits omega_b (G_a, Gamma contributions) and matches only at omega_b = 0.
    CHECK(std::abs(printed.t - exact.t) > 1e-3);
    p.omega_b = 1e-300;
    printed = printed_cubic(p);
    exact = characteristic_cubic(build_effective_matrix(p));
    CHECK(std::abs(printed.t - exact.t) < 1e-13);

    // With Gamma > 0 the printed s carries -i Gamma^2 e^{2 i theta} and 2 i Gamma e^{i theta} G_a.
    SystemParams q;
    const auto ps = printed_cubic(q).s, es = characteristic_cubic(build_effective_matrix(q)).s;
    const cplx i(0.0, 1.0), e = std::polar(1.0, q.theta), g = q.coupling();
    const cplx printed_coupling = -q.g_a * q.g_a + 2.0 * i * q.gamma * e * q.g_a - i * q.gamma * q.gamma * e * e;
    CHECK(std::abs((ps - es) - (printed_coupling + g * g)) < 1e-13);
    CHECK(std::abs(ps - es) > 1.0);
}

TEST_CASE("PT classification") {
    CHECK(classify_pt(std::array<cplx, 3>{cplx(1.0), cplx(2.0), cplx(3.0)}, 1e-9) == PtPhase::Protected);
    CHECK(classify_pt(std::array<cplx, 3>{cplx(1.0, 0.5), cplx(1.0, -0.5), cplx(2.0)}, 1e-9) == PtPhase::Broken);
    const double tol = 1e-6;
    CHECK(classify_pt(std::array<cplx, 3>{cplx(1.0, 2.0 * tol), cplx(2.0), cplx(3.0)}, tol) == PtPhase::Indeterminate);
    CHECK(classify_pt(std::array<cplx, 3>{cplx(1.0, 10.0 * tol), cplx(2.0), cplx(3.0)}, tol) == PtPhase::Broken);
    CHECK(classify_pt(std::array<cplx, 3>{cplx(1.0, 0.5 * tol), cplx(2.0), cplx(3.0)}, tol) == PtPhase::Protected);

    // Hermitian rendering is protected; decays break it.
    SystemParams h;
    h.gamma = 0.0;
    h.kappa_a = h.kappa_m = h.kappa_b = 0.0;
    CHECK(spectrum_of(h).pt_phase == PtPhase::Protected);
    CHECK(spectrum_of(SystemParams{}).pt_phase == PtPhase::Broken);
}

TEST_CASE("global detuning shift moves only Re lambda") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (int k = 0; k < 100; ++k) {
        SystemParams p;
        p.g_a = u(rng);
        p.gamma = u(rng);
        const double shift = 5.0 * (u(rng) - 1.0);
        auto q = p;
        q.delta_c += shift;
        q.delta_m += shift;
        q.omega_b += 10.0 + shift; // keep omega_b > 0
        p.omega_b += 10.0;
        const auto a = spectrum_of(p), b = spectrum_of(q);
        for (int i = 0; i < 3; ++i) {
            CHECK(b.eigenvalues[i].real() == doctest::Approx(a.eigenvalues[i].real() + shift).epsilon(1e-9));
            CHECK(b.eigenvalues[i].imag() == doctest::Approx(a.eigenvalues[i].imag()).epsilon(1e-9));
        }
        CHECK(classify_pt(a, 1e-6) == classify_pt(b, 1e-6));
    }
}

TEST_CASE("third-order exceptional point") {
    const auto p = ep3_params();
    const auto s = spectrum_of(p);
    CHECK(max_pairwise_distance(s.eigenvalues) < 1e-4);
    for (const auto& l : s.eigenvalues) CHECK(std::abs(l - cplx(1.9427690688759299725, -1.2038105906083852546)) < 1e-4);

    const auto eps = find_exceptional_points(p, ScanAxis::Ga, 0.0, 2.0, 201);
    REQUIRE(eps.size() == 1);
    CHECK(eps[0].axis_value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(eps[0].order == 3);

    const auto fit = splitting_exponent(p, ScanAxis::Ga, eps[0].axis_value, 1e-6, 1e-3, 13);
    CHECK(std::abs(fit.slope - 1.0 / 3.0) < 0.05);
}

TEST_CASE("second-order exceptional point in the photon-magnon block") {
    // Delta_c = Delta_m, Gamma = 0, decoupled phonon: EP at G_a = |kappa_a - kappa_m| / 2.
    SystemParams p;
    p.delta_c = p.delta_m = 1.0;
    p.gamma = 0.0;
    p.g_b = 0.0;
    p.omega_b = 5.0;
    const auto eps = find_exceptional_points(p, ScanAxis::Ga, 0.0, 1.0, 64);
    REQUIRE(eps.size() == 1);
    CHECK(eps[0].axis_value == doctest::Approx(0.4).epsilon(1e-6));
    CHECK(eps[0].order == 2);
    const auto fit = splitting_exponent(p, ScanAxis::Ga, 0.4, 1e-6, 1e-3, 13);
    CHECK(std::abs(fit.slope - 0.5) < 0.05);
}

TEST_CASE("no exceptional point cases") {
    SystemParams h;
    h.gamma = 0.0;
    h.kappa_a = h.kappa_m = h.kappa_b = 0.0;
    CHECK(find_exceptional_points(h, ScanAxis::Ga, 0.0, 2.0, 401).empty());
    CHECK(find_exceptional_points(ep3_params(), ScanAxis::Ga, 1.2, 2.0, 101).empty());
    CHECK_THROWS_AS(find_exceptional_points(h, ScanAxis::Ga, 0.0, 2.0, 15), std::invalid_argument);
    CHECK_THROWS_AS(find_exceptional_points(h, ScanAxis::Ga, 0.0, std::numeric_limits<double>::infinity(), 32), std::invalid_argument);
}

TEST_CASE("scan helpers") {
    CHECK(parse_scan_axis("gamma") == ScanAxis::Gamma);
    CHECK_THROWS_AS(parse_scan_axis("x"), std::invalid_argument);
    const std::vector<double> xs{0.0, 0.5, 1.0};
    const auto a = spectrum_scan(SystemParams{}, ScanAxis::Theta, xs, Dressing::bare(), 1);
    const auto b = spectrum_scan(SystemParams{}, ScanAxis::Theta, xs, Dressing::bare(), 3);
    for (std::size_t i = 0; i < xs.size(); ++i) CHECK(a[i].eigenvalues == b[i].eigenvalues);
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "magnomech/dynamics.hpp"
#include "magnomech/steadystate.hpp"

using namespace magnomech;

namespace {

SystemParams bistable() {
    SystemParams p;
    p.g_a = 2.4;
    p.gamma = 0.0;
    p.eta = std::sqrt(5.0);
    return p;
}

double distance(const TrajectoryState& a, const TrajectoryState& b) {
    return std::sqrt(std::norm(a.a - b.a) + std::norm(a.m - b.m) + std::norm(a.b - b.b));
}

} // namespace

TEST_CASE("right-hand side single terms") {
    SystemParams p;
    const auto zero = rhs({}, p);
    CHECK(zero.norm() == 0.0);
    p.eta = 0.7;
    const auto d = rhs({}, p);
    CHECK(d.da == cplx{});
    CHECK(d.db == cplx{});
    CHECK(std::abs(d.dm - cplx(0.7, 0.0)) < 1e-15);
}

TEST_CASE("steady roots are fixed points of the flow") {
    const auto p = bistable();
    const auto roots = solve_steady_states(p);
    REQUIRE(roots.size() == 3);
    for (const auto& r : roots) CHECK(rhs({0.0, r.a_s, r.m_s, r.b_s}, p).norm() < 1e-9 * std::max(1.0, p.eta));
}

TEST_CASE("undriven damped relaxation settles at the origin") {
    SystemParams p;
    p.gamma = 0.0;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-0.1, 0.1);
    const TrajectoryState init{0.0, {u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}};
    const auto res = integrate(init, p, default_dt(p), 20000.0, 1e-10);
    REQUIRE(res.outcome == Outcome::Settled);
    CHECK(std::abs(res.state.a) < 1e-8);
    CHECK(std::abs(res.state.m) < 1e-8);
    CHECK(std::abs(res.state.b) < 1e-8);
}

TEST_CASE("linear regime equals the closed-form steady state") {
    SystemParams p;
    p.g_b = 0.0;
    p.gamma = 0.3;
    p.eta = 1.3;
    const auto res = integrate({}, p, default_dt(p), 5000.0, 1e-11);
    REQUIRE(res.outcome == Outcome::Settled);
    const auto root = solve_steady_states(p).front();
    CHECK(std::abs(res.state.m - root.m_s) < 1e-8);
    CHECK(std::abs(res.state.a - root.a_s) < 1e-8);
}

TEST_CASE("settles on the upper stable root from nearby") {
    const auto p = bistable();
    const auto roots = solve_steady_states(p);
    REQUIRE(roots.size() == 3);
    REQUIRE(roots[2].stability == Stability::Stable);
    const auto& up = roots[2];
    const TrajectoryState init{0.0, up.a_s * 1.01, up.m_s * cplx(1.0, 0.01), up.b_s * 0.99};
    const auto res = integrate(init, p, default_dt(p), 20000.0, 1e-10);
    REQUIRE(res.outcome == Outcome::Settled);
    CHECK(std::norm(res.state.m) == doctest::Approx(up.n_m).epsilon(1e-6));
}

TEST_CASE("RK4 step-halving order") {
    SystemParams p = bistable();
    p.gamma = 0.4;
    const TrajectoryState init{0.0, {0.3, -0.2}, {0.5, 0.1}, {-0.1, 0.2}};
    const double t_end = 4.0;
    const double dts[] = {0.16, 0.08, 0.04, 0.02, 0.01};
    std::vector<TrajectoryState> out;
    for (double dt : dts) out.push_back(propagate(init, p, dt, t_end));
    for (std::size_t k = 0; k + 2 < out.size(); ++k) {
        const double e1 = distance(out[k], out[k + 1]);
        const double e2 = distance(out[k + 1], out[k + 2]);
        const double order = std::log2(e1 / e2);
        CHECK(order >= 3.7);
    }
}

TEST_CASE("divergence and preconditions") {
    SystemParams gain;
    gain.kappa_m = -1.0; // deliberate gain, bypassing validation
    gain.eta = 1.0;
    const auto res = integrate({0.0, {}, {0.1, 0.0}, {}}, gain, 0.005, 1e4, 1e-10);
    CHECK(res.outcome == Outcome::Diverged);
    CHECK(std::isfinite(std::abs(res.state.m)));

    SystemParams p;
    CHECK_THROWS_AS(integrate({}, p, 0.0, 10.0, 1e-9), std::invalid_argument);
    CHECK_THROWS_AS(integrate({}, p, 1.0, 1000.0, 1e-9), std::invalid_argument);
    CHECK_THROWS_AS(integrate({}, p, 0.01, 0.5, 1e-9), std::invalid_argument);
}

TEST_CASE("observer stride and unsettled outcome") {
    SystemParams p = bistable();
    int calls = 0;
    const double dt = default_dt(p);
    const auto res = integrate({}, p, dt, 1000 * dt, 1e-15, {[&](const TrajectoryState&) { ++calls; }, 10});
    CHECK(res.outcome == Outcome::Unsettled);
    CHECK(calls == 101);
    CHECK(res.state.t == doctest::Approx(1000 * dt));
}

#include "magnomech/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace magnomech {

namespace {

TrajectoryState advance(const TrajectoryState& s, const Derivative& d, double h) {
    return {s.t + h, s.a + h * d.da, s.m + h * d.dm, s.b + h * d.db};
}

TrajectoryState rk4_step(const TrajectoryState& s, const SystemParams& p, double dt, Derivative& k1) {
    k1 = rhs(s, p);
    const auto k2 = rhs(advance(s, k1, 0.5 * dt), p);
    const auto k3 = rhs(advance(s, k2, 0.5 * dt), p);
    const auto k4 = rhs(advance(s, k3, dt), p);
    const double h = dt / 6.0;
    return {s.t + dt, s.a + h * (k1.da + 2.0 * k2.da + 2.0 * k3.da + k4.da),
            s.m + h * (k1.dm + 2.0 * k2.dm + 2.0 * k3.dm + k4.dm),
            s.b + h * (k1.db + 2.0 * k2.db + 2.0 * k3.db + k4.db)};
}

double magnitude(const TrajectoryState& s) {
    return std::sqrt(std::norm(s.a) + std::norm(s.m) + std::norm(s.b));
}

} // namespace

double Derivative::norm() const { return std::sqrt(std::norm(da) + std::norm(dm) + std::norm(db)); }

Derivative rhs(const TrajectoryState& s, const SystemParams& p) {
    const cplx mi(0.0, -1.0);
    const cplx g = p.coupling();
    Derivative d;
    d.da = mi * (p.photon_response() * s.a + g * s.m);
    d.dm = mi * (cplx(p.delta_m, -p.kappa_m) * s.m + g * s.a + p.g_b * s.m * (2.0 * s.b.real()) + cplx(0.0, p.eta));
    d.db = mi * (cplx(p.omega_b, -p.kappa_b) * s.b + p.g_b * std::norm(s.m));
    return d;
}

std::string_view to_string(Outcome o) {
    switch (o) {
    case Outcome::Settled: return "Settled";
    case Outcome::Unsettled: return "Unsettled";
    case Outcome::Diverged: return "Diverged";
    }
    return "Unsettled";
}

double default_dt(const SystemParams& p) { return 0.01 / p.max_rate(); }

IntegrationResult integrate(const TrajectoryState& initial, const SystemParams& p, double dt, double t_max,
                            double settle_tol, const Observer& observer) {
    if (!(dt > 0.0) || dt > 0.1 / p.max_rate() * (1.0 + 1e-12))
        throw std::invalid_argument("dt must satisfy 0 < dt <= 0.1 / max_rate");
    if (!(t_max >= 100.0 * dt)) throw std::invalid_argument("t_max must be at least 100 dt");
    if (!(settle_tol > 0.0)) throw std::invalid_argument("settle_tol must be positive");

    const double threshold = settle_tol * std::max(1.0, p.eta);
    const double window = 50.0 / (p.kappa_m > 0.0 ? p.kappa_m : 1.0);
    const int stride = std::max(1, observer.stride);

    TrajectoryState s = initial;
    if (observer.fn) observer.fn(s);

    // Running sums over the current below-threshold stretch.
    double quiet_since = s.t;
    long long quiet_steps = 0;
    cplx sum_a{}, sum_m{}, sum_b{};
    long long step = 0;

    while (s.t < t_max) {
        Derivative k1;
        auto next = rk4_step(s, p, dt, k1);
        next.t = initial.t + static_cast<double>(step + 1) * dt;
        // k1 is the derivative at s, the state being judged.
        if (k1.norm() < threshold) {
            if (quiet_steps == 0) {
                quiet_since = s.t;
                sum_a = sum_m = sum_b = {};
            }
            ++quiet_steps;
            sum_a += s.a;
            sum_m += s.m;
            sum_b += s.b;
            if (s.t - quiet_since >= window) {
                const double n = static_cast<double>(quiet_steps);
                return {Outcome::Settled, {s.t, sum_a / n, sum_m / n, sum_b / n}};
            }
        } else {
            quiet_steps = 0;
        }

        const double mag = magnitude(next);
        if (!std::isfinite(mag) || mag > kOverflowGuard) return {Outcome::Diverged, {next.t, s.a, s.m, s.b}};
        s = next;
        ++step;
        if (observer.fn && step % stride == 0) observer.fn(s);
    }
    return {Outcome::Unsettled, s};
}

TrajectoryState propagate(const TrajectoryState& initial, const SystemParams& p, double dt, double t_end) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    const auto steps = static_cast<long long>(std::llround((t_end - initial.t) / dt));
    TrajectoryState s = initial;
    Derivative k1;
    for (long long i = 0; i < steps; ++i) s = rk4_step(s, p, dt, k1);
    s.t = initial.t + static_cast<double>(steps) * dt;
    return s;
}

} // namespace magnomech

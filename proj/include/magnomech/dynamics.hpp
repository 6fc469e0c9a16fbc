#pragma once

#include <functional>
#include <string_view>

#include "magnomech/params.hpp"

namespace magnomech {

struct TrajectoryState {
    double t = 0.0;
    cplx a{};
    cplx m{};
    cplx b{};
};

struct Derivative {
    cplx da{};
    cplx dm{};
    cplx db{};

    double norm() const;
};

// Mean-field equations of motion:
//   da/dt = -i[(Delta_c - i kappa_a) a + g m]
//   dm/dt = -i[(Delta_m - i kappa_m) m + g a + G_b m (b + b*) + i eta]
//   db/dt = -i[(omega_b - i kappa_b) b + G_b |m|^2]
// with g = G_a - i Gamma e^{i theta}.
Derivative rhs(const TrajectoryState& s, const SystemParams& p);

enum class Outcome { Settled, Unsettled, Diverged };
std::string_view to_string(Outcome o);

struct IntegrationResult {
    Outcome outcome = Outcome::Unsettled;
    // Settled: amplitudes averaged over the settle window, t = settle time.
    // Unsettled: final state. Diverged: last finite state, t = blow-up time.
    TrajectoryState state;
};

inline constexpr double kOverflowGuard = 1e12;

// 0.01 / max rate.
double default_dt(const SystemParams& p);

// Observer called with the state after every `stride`-th step (and the
// initial state).
struct Observer {
    std::function<void(const TrajectoryState&)> fn;
    int stride = 1;
};

// Fixed-step RK4 until settled, diverged, or t_max. Settled when the
// derivative norm stays below settle_tol * max(1, eta) for 50 / kappa_m of
// simulated time. Throws std::invalid_argument unless
// 0 < dt <= 0.1 / max_rate and t_max >= 100 dt.
IntegrationResult integrate(const TrajectoryState& initial, const SystemParams& p, double dt, double t_max,
                            double settle_tol, const Observer& observer = {});

// Plain RK4 to t_end in round((t_end - t) / dt) steps, no settle detection.
TrajectoryState propagate(const TrajectoryState& initial, const SystemParams& p, double dt, double t_end);

} // namespace magnomech

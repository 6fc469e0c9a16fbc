#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "magnomech/cubic.hpp"
#include "magnomech/params.hpp"

namespace magnomech {

// Photon-magnon kernel K entering P0 = (Delta_m - i kappa_m) w - K.
// LangevinConsistent: K = (G_a - i Gamma e^{i theta})^2, the fixed point of the
// equations of motion. ConjugatePhase: K = (G_a + i Gamma e^{i theta})^2.
enum class Kernel { LangevinConsistent, ConjugatePhase };
std::string_view to_string(Kernel k);

enum class Stability { Stable, Unstable, Marginal };
std::string_view to_string(Stability s);

// x |P0 - c x w|^2 = eta^2 |w|^2 in x = |m_s|^2, expanded as
// c3 x^3 + c2 x^2 + c1 x + c0.
struct MagnonCubic {
    RealCubic poly;
    Kernel kernel = Kernel::LangevinConsistent;
    cplx w{};   // Delta_c - i kappa_a
    cplx k{};   // kernel K
    cplx p0{};  // (Delta_m - i kappa_m) w - K
    double c = 0.0;
};

struct SteadyRoot {
    double n_m = 0.0;
    double n_a = 0.0;
    cplx a_s{};
    cplx m_s{};
    cplx b_s{};
    Stability stability = Stability::Marginal;
    double jacobian_max_re = 0.0;
};

MagnonCubic build_magnon_cubic(const SystemParams& p, Kernel kernel = Kernel::LangevinConsistent);

// Number of positive real roots the cubic is treated as having (1 or 3),
// decided by the sign of its discriminant.
int root_count(const MagnonCubic& mc, double eta);

// All steady states sorted ascending in n_m. Throws NumericalError if eta > 0
// yields no positive root.
std::vector<SteadyRoot> solve_steady_states(const SystemParams& p, Kernel kernel = Kernel::LangevinConsistent);

// |G_a - i Gamma e^{i theta}|^2 n_m / (Delta_c^2 + kappa_a^2).
double photon_number_from_magnon(double n_m, const SystemParams& p);

// Relative residual of the photon-form self-consistency
// n_a |P0 - c (|w|^2/|g|^2) n_a w|^2 = eta^2 |g|^2.
double photon_form_residual(double n_a, const SystemParams& p, Kernel kernel = Kernel::LangevinConsistent);

using Jacobian6 = Eigen::Matrix<double, 6, 6>;

// Real Jacobian of the flow in (Re a, Im a, Re m, Im m, Re b, Im b).
Jacobian6 jacobian(const SystemParams& p, cplx a, cplx m, cplx b);

struct StabilityResult {
    Stability stability = Stability::Marginal;
    double max_re = 0.0;
};

// Stable if max Re(eig) < -eps, Unstable if > eps, eps = 1e-9 kappa_m.
// Throws DomainError on a non-finite Jacobian.
StabilityResult jacobian_stability(const SteadyRoot& root, const SystemParams& p);

enum class SweepAxis { EtaSq, Ga, Gamma, KappaRatio };
std::string_view to_string(SweepAxis a);
SweepAxis parse_sweep_axis(std::string_view name); // throws std::invalid_argument

// EtaSq sets eta = sqrt(v); KappaRatio sets kappa_a = v kappa_m.
SystemParams with_sweep_axis(SystemParams p, SweepAxis axis, double value);

struct BranchPoint {
    int root_index = -1; // index into the per-point root list
    double n_m = 0.0;
    double n_a = 0.0;
    bool stable = false;
};

struct SweepResult {
    SweepAxis axis = SweepAxis::EtaSq;
    Kernel kernel = Kernel::LangevinConsistent;
    std::vector<double> values;
    std::vector<std::vector<SteadyRoot>> roots;
    std::vector<std::pair<double, double>> bistable_windows;
    std::vector<BranchPoint> up_branch;   // axis order
    std::vector<BranchPoint> down_branch; // axis order, built from the top end
};

// Closed-form 3-root interval in eta^2: the cubic's discriminant is a
// downward quadratic in eta^2, so there is at most one such interval.
std::optional<std::pair<double, double>> eta_sq_window(const SystemParams& p, Kernel kernel = Kernel::LangevinConsistent);

// Intervals of positive discriminant along the axis: sign changes between
// n_probe uniform samples, each refined by bisection to `resolution`.
std::vector<std::pair<double, double>> discriminant_windows(const SystemParams& p, SweepAxis axis, double lo,
                                                            double hi, int n_probe, Kernel kernel,
                                                            double resolution = 1e-10);

struct SweepOptions {
    Kernel kernel = Kernel::LangevinConsistent;
    int threads = 1;
    // Extra probes per output interval used for window detection.
    int window_oversample = 16;
};

// Throws ValidationError if any axis value yields invalid parameters.
SweepResult sweep(const SystemParams& p, SweepAxis axis, double lo, double hi, int n_points,
                  const SweepOptions& opts = {});

} // namespace magnomech

#pragma once

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "magnomech/params.hpp"
#include "magnomech/steadystate.hpp"

namespace magnomech {

// Quasi: V = U(n_m) + |w|^2 (n_a - rho n_m)^2 / 2 with rho = |g|^2/|w|^2 and
//   U(n) = |z|^2 n^2 / 2 - (2/3) c Re(z) n^3 + c^2 n^4 / 4 - eta^2 n,  z = P0 / w,
// so that dU/dn = n |z - c n|^2 - eta^2 and the critical points are exactly
// the steady states (n_a, n_m) = (rho x, x).
// PhaseExtremized: V = Delta_c n_a + Delta_m n_m - (c/2) n_m^2
//   - 2 |g| sqrt(n_a n_m) - 2 eta sqrt(n_m).
enum class PotentialForm { Quasi, PhaseExtremized };
std::string_view to_string(PotentialForm f);
PotentialForm parse_potential_form(std::string_view name); // throws std::invalid_argument

double effective_potential(double n_a, double n_m, const SystemParams& p,
                           PotentialForm form = PotentialForm::Quasi, Kernel kernel = Kernel::LangevinConsistent);

// (dV/dn_a, dV/dn_m).
std::array<double, 2> potential_gradient(double n_a, double n_m, const SystemParams& p,
                                         PotentialForm form = PotentialForm::Quasi,
                                         Kernel kernel = Kernel::LangevinConsistent);

// Row-major {V_aa, V_am, V_ma, V_mm}.
std::array<double, 4> potential_hessian(double n_a, double n_m, const SystemParams& p,
                                        PotentialForm form = PotentialForm::Quasi,
                                        Kernel kernel = Kernel::LangevinConsistent);

enum class CriticalClass { Minimum, Saddle, Maximum };
std::string_view to_string(CriticalClass c);

struct CriticalPoint {
    double n_a = 0.0;
    double n_m = 0.0;
    double value = 0.0;
    CriticalClass kind = CriticalClass::Saddle;
};

struct PotentialGrid {
    std::vector<double> n_a;      // strictly increasing
    std::vector<double> n_m;      // strictly increasing
    std::vector<double> v;        // v[i * n_m.size() + j] = V(n_a[i], n_m[j])
    std::vector<CriticalPoint> critical_points;
    std::vector<std::string> warnings; // dropped refinement candidates

    double at(std::size_t i, std::size_t j) const { return v[i * n_m.size() + j]; }
};

struct GridOptions {
    PotentialForm form = PotentialForm::Quasi;
    Kernel kernel = Kernel::LangevinConsistent;
    int threads = 1;
};

// Samples V on (n_cells + 1)^2 nodes, flags cells whose corner gradients
// bracket zero in both components, refines each by damped Newton (at most 100
// iterations) and classifies by Hessian eigenvalue signs. Requires
// n_cells >= 32, non-negative ranges of positive length (throws std::invalid_argument).
PotentialGrid build_grid(const SystemParams& p, std::pair<double, double> na_range,
                         std::pair<double, double> nm_range, int n_cells, const GridOptions& opts = {});

} // namespace magnomech

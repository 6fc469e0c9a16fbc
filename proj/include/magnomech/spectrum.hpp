#pragma once

#include <array>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "magnomech/cubic.hpp"
#include "magnomech/params.hpp"

namespace magnomech {

// 3x3 non-Hermitian effective matrix, rows/cols ordered (photon, magnon, phonon).
using EffectiveMatrix = Eigen::Matrix3cd;

// Magnon detuning and magnon-phonon coupling used in the effective matrix.
// Bare: Delta_m and G_b. Dressed: Delta_m + 2 G_b Re(b_s) and G_b m_s.
struct Dressing {
    bool dressed = false;
    cplx m_s{};
    cplx b_s{};

    static Dressing bare() { return {}; }
    static Dressing around(cplx m_s, cplx b_s) { return {true, m_s, b_s}; }
};

enum class PtPhase { Protected, Broken, Indeterminate };
std::string_view to_string(PtPhase phase);

struct Spectrum {
    std::array<cplx, 3> eigenvalues{}; // sorted by (real, imag)
    PtPhase pt_phase = PtPhase::Indeterminate;
    double coalescence = 0.0;          // min pairwise eigenvalue distance
    cplx discriminant{};
};

EffectiveMatrix build_effective_matrix(const SystemParams& p, const Dressing& dressing = Dressing::bare());

// r = -trace, s = sum of principal 2x2 minors, t = -det.
CubicCoefficients characteristic_cubic(const EffectiveMatrix& m);

// The symbolic r, s, t as printed in the original derivation. Kept as a
// comparison path only: its Gamma^2 term and its t (which drops omega_b)
// disagree with the matrix unless Gamma = 0 (and omega_b = 0 for t).
CubicCoefficients printed_cubic(const SystemParams& p, const Dressing& dressing = Dressing::bare());

// Protected/Broken guard band default: 1e-9 * max(1, max |lambda|).
double default_tol_im(const std::array<cplx, 3>& eigenvalues);

// Protected if every |Im| < tol_im, Broken if any |Im| >= 10 tol_im.
PtPhase classify_pt(const std::array<cplx, 3>& eigenvalues, double tol_im);
inline PtPhase classify_pt(const Spectrum& s, double tol_im) { return classify_pt(s.eigenvalues, tol_im); }

// Roots via cubic_roots(), sorted, classified with default_tol_im().
Spectrum solve_cubic(const CubicCoefficients& c);

// build_effective_matrix -> characteristic_cubic -> solve_cubic.
Spectrum spectrum_of(const SystemParams& p, const Dressing& dressing = Dressing::bare());

double min_pairwise_distance(const std::array<cplx, 3>& v);
double max_pairwise_distance(const std::array<cplx, 3>& v);

enum class ScanAxis { Ga, Gamma, Theta };
std::string_view to_string(ScanAxis axis);
ScanAxis parse_scan_axis(std::string_view name); // throws std::invalid_argument

SystemParams with_axis(SystemParams p, ScanAxis axis, double value);

// Spectrum at each axis value, in input order.
std::vector<Spectrum> spectrum_scan(const SystemParams& p, ScanAxis axis, const std::vector<double>& values,
                                    const Dressing& dressing = Dressing::bare(), int threads = 1);

struct EpCandidate {
    double axis_value = 0.0;
    double coalescence = 0.0;
    int order = 2;
    double discriminant_abs = 0.0;
};

struct EpSearchOptions {
    // Accept a refined minimum when its coalescence is at most
    // tolerance * max(1, largest |lambda| over the scan).
    double tolerance = 1e-2;
    double resolution = 1e-8; // golden-section stopping width on the axis
    Dressing dressing{};
    int threads = 1;
};

// Scans the axis on n_grid points, refines each interior local minimum of
// |discriminant| by golden-section search, and keeps those below the noise
// floor. Order 3 when all pairwise distances are under the floor, else 2.
// Requires n_grid >= 16 and a finite range (throws std::invalid_argument).
std::vector<EpCandidate> find_exceptional_points(const SystemParams& p, ScanAxis axis, double lo, double hi,
                                                 int n_grid, const EpSearchOptions& opts = {});

struct SplittingFit {
    std::vector<double> deltas;
    std::vector<double> splittings; // smallest eigenvalue gap at ep + delta
    double slope = 0.0;             // least-squares log-log slope
};

// Samples n log-spaced offsets in [delta_lo, delta_hi] above ep_value and fits
// the smallest eigenvalue gap, which is the pair that coalesces.
SplittingFit splitting_exponent(const SystemParams& p, ScanAxis axis, double ep_value, double delta_lo,
                                double delta_hi, int n, const Dressing& dressing = Dressing::bare());

} // namespace magnomech

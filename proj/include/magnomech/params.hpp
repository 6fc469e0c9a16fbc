#pragma once

#include <complex>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "magnomech/errors.hpp"

namespace magnomech {

using cplx = std::complex<double>;

inline constexpr double kHbar = 1.054571817e-34; // J s

// Laboratory inputs in SI units. Frequencies are angular (rad/s).
struct PhysicalInputs {
    double cavity_length = 12.5e-3;                              // L [m]
    double cavity_freq = 2.0 * std::numbers::pi * 1.9e9;         // omega_c
    double magnon_freq = 2.0 * std::numbers::pi * 1.9e9;         // omega_m
    double phonon_freq = 2.0 * std::numbers::pi * 1.0e6;         // omega_b
    double drive_freq = 2.0 * std::numbers::pi * 3.8e14;         // omega_B
    double drive_power = 0.0164e-3;                              // P [W]
    double cavity_decay = 2.0 * std::numbers::pi * 1.0e6;        // kappa
    double magnon_mass = 1.0e-12;                                // m_m [kg]
    double phonon_mass = 1.0e-12;                                // m_b [kg]
    double traveling_amp = 0.0;                                  // field amplitude of the traveling wave
    double angle = std::numbers::pi;                             // theta [rad]

    // Returns one message per violated invariant; empty when valid.
    std::vector<std::string> violations() const;
};

// Dimensionless system parameters. Rates are in units of kappa_m.
//
// Rows of the effective matrix and the Langevin equations are ordered
// (photon a, magnon m, phonon b).
struct SystemParams {
    double delta_c = -1.0; // photon detuning
    double delta_m = 1.0;  // magnon detuning
    double omega_b = 1.0;  // phonon frequency (Delta_b = omega_b)
    double kappa_a = 0.2;
    double kappa_m = 1.0;
    double kappa_b = 0.01;
    double g_a = 1.0;      // magnon-photon coupling
    double g_b = 2.0;      // magnon-phonon coupling
    double gamma = 1.0;    // traveling-field (non-Hermitian) strength
    double theta = std::numbers::pi;
    double eta = 0.0;      // drive strength

    // Photon-magnon coupling G_a - i Gamma e^{i theta}.
    cplx coupling() const;
    // Photon response w = Delta_c - i kappa_a.
    cplx photon_response() const { return {delta_c, -kappa_a}; }
    // Phonon-induced Kerr coefficient 2 G_b^2 omega_b / (omega_b^2 + kappa_b^2).
    double kerr() const;
    // Largest rate magnitude; sets the integrator step scale.
    double max_rate() const;

    std::vector<std::string> violations() const;
    // Throws ValidationError listing every violation.
    void validate() const;

    bool operator==(const SystemParams&) const = default;
};

// Parameter keys accepted in the dimensionless block and by set_param().
const std::vector<std::string>& param_keys();

// Assigns one field by key. Throws ConfigError on an unknown key.
void set_param(SystemParams& p, std::string_view key, double value);
double get_param(const SystemParams& p, std::string_view key);

// Converts laboratory inputs to dimensionless parameters normalized by the
// cavity decay kappa (kappa_a = kappa_m = kappa, kappa_b = 0.01 kappa).
// Throws DomainError naming the first non-positive mass, frequency, length,
// power or decay.
SystemParams derive_couplings(const PhysicalInputs& in);

// Zero-point motion sqrt(hbar / (2 m omega)).
double zero_point_motion(double mass, double freq);
// Drive strength sqrt(P kappa / (hbar omega_B)) in rad/s.
double drive_strength(double power, double kappa, double drive_freq);

} // namespace magnomech

#pragma once

#include <array>
#include <complex>

namespace magnomech {

using cplx = std::complex<double>;

// Monic cubic  lambda^3 + r lambda^2 + s lambda + t = 0.
struct CubicCoefficients {
    cplx r{};
    cplx s{};
    cplx t{};

    cplx evaluate(cplx x) const { return ((x + r) * x + s) * x + t; }
    cplx derivative(cplx x) const { return (3.0 * x + 2.0 * r) * x + s; }

    // r^2 s^2 - 4 s^3 - 4 r^3 t + 18 r s t - 27 t^2; zero iff a root is repeated.
    cplx discriminant() const;
    bool finite() const;
};

// All three roots from the closed-form Cardano solution of the depressed
// cubic, each refined by two guarded Newton steps. Throws DomainError on a
// non-finite coefficient.
std::array<cplx, 3> cubic_roots(const CubicCoefficients& c);

// Unrefined Cardano roots (exposed so tests can check what the polish buys).
std::array<cplx, 3> cardano_roots(const CubicCoefficients& c);

// Real cubic a3 x^3 + a2 x^2 + a1 x + a0 with a3 != 0.
struct RealCubic {
    double a3 = 0.0;
    double a2 = 0.0;
    double a1 = 0.0;
    double a0 = 0.0;

    double evaluate(double x) const { return ((a3 * x + a2) * x + a1) * x + a0; }
    // Discriminant of the monic normalization; > 0 iff three distinct real roots.
    double discriminant() const;
};

} // namespace magnomech

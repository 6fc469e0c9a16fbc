#include "magnomech/cubic.hpp"

#include <cmath>

#include "magnomech/errors.hpp"

namespace magnomech {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

cplx polish(const CubicCoefficients& c, cplx x) {
    cplx fx = c.evaluate(x);
    for (int step = 0; step < 2; ++step) {
        const cplx d = c.derivative(x);
        if (d == cplx{}) break;
        const cplx next = x - fx / d;
        const cplx fn = c.evaluate(next);
        if (!finite(next) || std::abs(fn) >= std::abs(fx)) break;
        x = next;
        fx = fn;
    }
    return x;
}

} // namespace

cplx CubicCoefficients::discriminant() const {
    return r * r * s * s - 4.0 * s * s * s - 4.0 * r * r * r * t + 18.0 * r * s * t - 27.0 * t * t;
}

bool CubicCoefficients::finite() const {
    return magnomech::finite(r) && magnomech::finite(s) && magnomech::finite(t);
}

std::array<cplx, 3> cardano_roots(const CubicCoefficients& c) {
    if (!c.finite()) throw DomainError("cubic coefficients must be finite");

    // lambda = y - r/3 turns the cubic into y^3 + p y + q = 0.
    const cplx shift = c.r / 3.0;
    const cplx p = c.s - c.r * c.r / 3.0;
    const cplx q = 2.0 * c.r * c.r * c.r / 27.0 - c.r * c.s / 3.0 + c.t;

    const cplx half_q = q / 2.0;
    const cplx sq = std::sqrt(half_q * half_q + p * p * p / 27.0);
    // Pick the branch that avoids cancellation.
    const cplx plus = -half_q + sq;
    const cplx minus = -half_q - sq;
    const cplx big = std::abs(plus) >= std::abs(minus) ? plus : minus;

    if (big == cplx{}) return {-shift, -shift, -shift};

    const cplx u = std::pow(big, 1.0 / 3.0);
    const cplx v = -p / (3.0 * u);
    const cplx w(-0.5, std::sqrt(3.0) / 2.0);
    const cplx w2 = std::conj(w);
    return {u + v - shift, w * u + w2 * v - shift, w2 * u + w * v - shift};
}

std::array<cplx, 3> cubic_roots(const CubicCoefficients& c) {
    auto roots = cardano_roots(c);
    for (auto& x : roots) x = polish(c, x);
    return roots;
}

double RealCubic::discriminant() const {
    const double b = a2 / a3, c = a1 / a3, d = a0 / a3;
    return 18.0 * b * c * d - 4.0 * b * b * b * d + b * b * c * c - 4.0 * c * c * c - 27.0 * d * d;
}

} // namespace magnomech

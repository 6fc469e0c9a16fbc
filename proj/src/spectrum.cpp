#include "magnomech/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "magnomech/parallel.hpp"

namespace magnomech {

namespace {

constexpr double kInvGolden = 0.6180339887498949;

struct Tilde {
    double delta_m;
    cplx g_b;
};

Tilde dressed_terms(const SystemParams& p, const Dressing& d) {
    if (!d.dressed) return {p.delta_m, cplx(p.g_b, 0.0)};
    return {p.delta_m + 2.0 * p.g_b * d.b_s.real(), p.g_b * d.m_s};
}

double abs_discriminant(const SystemParams& p, ScanAxis axis, double x, const Dressing& d) {
    return std::abs(characteristic_cubic(build_effective_matrix(with_axis(p, axis, x), d)).discriminant());
}

} // namespace

std::string_view to_string(PtPhase phase) {
    switch (phase) {
    case PtPhase::Protected: return "Protected";
    case PtPhase::Broken: return "Broken";
    case PtPhase::Indeterminate: return "Indeterminate";
    }
    return "Indeterminate";
}

std::string_view to_string(ScanAxis axis) {
    switch (axis) {
    case ScanAxis::Ga: return "ga";
    case ScanAxis::Gamma: return "gamma";
    case ScanAxis::Theta: return "theta";
    }
    return "ga";
}

ScanAxis parse_scan_axis(std::string_view name) {
    if (name == "ga" || name == "g_a") return ScanAxis::Ga;
    if (name == "gamma") return ScanAxis::Gamma;
    if (name == "theta") return ScanAxis::Theta;
    throw std::invalid_argument("unknown scan axis '" + std::string(name) + "' (expected ga, gamma or theta)");
}

SystemParams with_axis(SystemParams p, ScanAxis axis, double value) {
    switch (axis) {
    case ScanAxis::Ga: p.g_a = value; break;
    case ScanAxis::Gamma: p.gamma = value; break;
    case ScanAxis::Theta: p.theta = value; break;
    }
    return p;
}

EffectiveMatrix build_effective_matrix(const SystemParams& p, const Dressing& dressing) {
    const auto [dm, gb] = dressed_terms(p, dressing);
    const cplx g = p.coupling();
    EffectiveMatrix m = EffectiveMatrix::Zero();
    m(0, 0) = cplx(p.delta_c, -p.kappa_a);
    m(1, 1) = cplx(dm, -p.kappa_m);
    m(2, 2) = cplx(p.omega_b, -p.kappa_b);
    m(0, 1) = g;
    m(1, 0) = g;
    m(1, 2) = gb;
    m(2, 1) = std::conj(gb);
    return m;
}

CubicCoefficients characteristic_cubic(const EffectiveMatrix& m) {
    const cplx minors = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0) +
                        m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
    const cplx det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                     m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                     m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    return {-m.trace(), minors, -det};
}

CubicCoefficients printed_cubic(const SystemParams& p, const Dressing& dressing) {
    const auto [dm, gb] = dressed_terms(p, dressing);
    const cplx i(0.0, 1.0);
    const cplx e = std::polar(1.0, p.theta);
    const cplx wa(p.delta_c, -p.kappa_a);
    const cplx wm(dm, -p.kappa_m);
    const double gb2 = std::norm(gb);
    const cplx coupling = -p.g_a * p.g_a + 2.0 * i * p.gamma * e * p.g_a - i * p.gamma * p.gamma * e * e;

    CubicCoefficients c;
    c.r = -(wa + wm + cplx(p.omega_b, -p.kappa_b));
    c.s = coupling - gb2 + cplx(p.delta_c, -(p.kappa_a + p.kappa_b)) * cplx(dm, -(p.kappa_m + p.kappa_b)) +
          p.kappa_b * p.kappa_b + (wa + wm) * p.omega_b;
    c.t = i * p.kappa_b * (coupling + wa * wm) + gb2 * wa;
    return c;
}

double min_pairwise_distance(const std::array<cplx, 3>& v) {
    return std::min({std::abs(v[0] - v[1]), std::abs(v[0] - v[2]), std::abs(v[1] - v[2])});
}

double max_pairwise_distance(const std::array<cplx, 3>& v) {
    return std::max({std::abs(v[0] - v[1]), std::abs(v[0] - v[2]), std::abs(v[1] - v[2])});
}

double default_tol_im(const std::array<cplx, 3>& eigenvalues) {
    double scale = 1.0;
    for (const auto& l : eigenvalues) scale = std::max(scale, std::abs(l));
    return 1e-9 * scale;
}

PtPhase classify_pt(const std::array<cplx, 3>& eigenvalues, double tol_im) {
    double worst = 0.0;
    for (const auto& l : eigenvalues) worst = std::max(worst, std::abs(l.imag()));
    if (worst < tol_im) return PtPhase::Protected;
    if (worst >= 10.0 * tol_im) return PtPhase::Broken;
    return PtPhase::Indeterminate;
}

Spectrum solve_cubic(const CubicCoefficients& c) {
    Spectrum s;
    s.eigenvalues = cubic_roots(c);
    std::sort(s.eigenvalues.begin(), s.eigenvalues.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    s.pt_phase = classify_pt(s.eigenvalues, default_tol_im(s.eigenvalues));
    s.coalescence = min_pairwise_distance(s.eigenvalues);
    s.discriminant = c.discriminant();
    return s;
}

Spectrum spectrum_of(const SystemParams& p, const Dressing& dressing) {
    return solve_cubic(characteristic_cubic(build_effective_matrix(p, dressing)));
}

std::vector<Spectrum> spectrum_scan(const SystemParams& p, ScanAxis axis, const std::vector<double>& values,
                                    const Dressing& dressing, int threads) {
    std::vector<Spectrum> out(values.size());
    parallel_for(values.size(), threads, [&](std::size_t i) { out[i] = spectrum_of(with_axis(p, axis, values[i]), dressing); });
    return out;
}

std::vector<EpCandidate> find_exceptional_points(const SystemParams& p, ScanAxis axis, double lo, double hi,
                                                 int n_grid, const EpSearchOptions& opts) {
    if (n_grid < 16) throw std::invalid_argument("n_grid must be >= 16");
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo))
        throw std::invalid_argument("scan range must be finite with hi > lo");

    const auto n = static_cast<std::size_t>(n_grid);
    std::vector<double> xs(n), disc(n);
    std::vector<Spectrum> specs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    parallel_for(n, opts.threads, [&](std::size_t i) {
        specs[i] = spectrum_of(with_axis(p, axis, xs[i]), opts.dressing);
        disc[i] = std::abs(specs[i].discriminant);
    });

    double scale = 1.0;
    for (const auto& s : specs)
        for (const auto& l : s.eigenvalues) scale = std::max(scale, std::abs(l));
    const double floor = opts.tolerance * scale;

    std::vector<EpCandidate> out;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(disc[i] <= disc[i - 1] && disc[i] < disc[i + 1])) continue;

        double a = xs[i - 1], b = xs[i + 1];
        double x1 = b - kInvGolden * (b - a), x2 = a + kInvGolden * (b - a);
        double f1 = abs_discriminant(p, axis, x1, opts.dressing), f2 = abs_discriminant(p, axis, x2, opts.dressing);
        while (b - a > opts.resolution) {
            if (f1 <= f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - kInvGolden * (b - a);
                f1 = abs_discriminant(p, axis, x1, opts.dressing);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + kInvGolden * (b - a);
                f2 = abs_discriminant(p, axis, x2, opts.dressing);
            }
        }
        const double x = 0.5 * (a + b);
        const auto s = spectrum_of(with_axis(p, axis, x), opts.dressing);
        if (s.coalescence > floor) continue;
        if (!out.empty() && std::abs(out.back().axis_value - x) <= 2.0 * opts.resolution) continue;
        out.push_back({x, s.coalescence, max_pairwise_distance(s.eigenvalues) < floor ? 3 : 2, std::abs(s.discriminant)});
    }
    return out;
}

SplittingFit splitting_exponent(const SystemParams& p, ScanAxis axis, double ep_value, double delta_lo,
                                double delta_hi, int n, const Dressing& dressing) {
    if (n < 2 || !(delta_lo > 0.0) || !(delta_hi > delta_lo))
        throw std::invalid_argument("splitting_exponent needs n >= 2 and 0 < delta_lo < delta_hi");
    SplittingFit fit;
    const double llo = std::log(delta_lo), lhi = std::log(delta_hi);
    for (int k = 0; k < n; ++k) {
        const double d = std::exp(llo + (lhi - llo) * k / (n - 1));
        const auto s = spectrum_of(with_axis(p, axis, ep_value + d), dressing);
        fit.deltas.push_back(d);
        fit.splittings.push_back(s.coalescence);
    }
    double mx = 0, my = 0;
    for (int k = 0; k < n; ++k) {
        mx += std::log(fit.deltas[k]);
        my += std::log(fit.splittings[k]);
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (int k = 0; k < n; ++k) {
        const double dx = std::log(fit.deltas[k]) - mx;
        sxy += dx * (std::log(fit.splittings[k]) - my);
        sxx += dx * dx;
    }
    fit.slope = sxy / sxx;
    return fit;
}

} // namespace magnomech

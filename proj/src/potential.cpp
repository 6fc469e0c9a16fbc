#include "magnomech/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "magnomech/csv.hpp"
#include "magnomech/parallel.hpp"

namespace magnomech {

namespace {

struct QuasiTerms {
    double w2;  // |w|^2
    double rho; // |g|^2 / |w|^2
    cplx z;     // P0 / w
    double c;
    double eta2;
};

QuasiTerms quasi_terms(const SystemParams& p, Kernel kernel) {
    const auto mc = build_magnon_cubic(p, kernel);
    const double w2 = std::norm(mc.w);
    return {w2, std::norm(p.coupling()) / w2, mc.p0 / mc.w, mc.c, p.eta * p.eta};
}

} // namespace

std::string_view to_string(PotentialForm f) {
    return f == PotentialForm::Quasi ? "quasi" : "phase-extremized";
}

PotentialForm parse_potential_form(std::string_view name) {
    if (name == "quasi") return PotentialForm::Quasi;
    if (name == "phase-extremized" || name == "energy") return PotentialForm::PhaseExtremized;
    throw std::invalid_argument("unknown potential form '" + std::string(name) + "' (expected quasi or energy)");
}

std::string_view to_string(CriticalClass c) {
    switch (c) {
    case CriticalClass::Minimum: return "Minimum";
    case CriticalClass::Saddle: return "Saddle";
    case CriticalClass::Maximum: return "Maximum";
    }
    return "Saddle";
}

double effective_potential(double n_a, double n_m, const SystemParams& p, PotentialForm form, Kernel kernel) {
    if (form == PotentialForm::Quasi) {
        const auto q = quasi_terms(p, kernel);
        const double n = n_m, d = n_a - q.rho * n_m;
        const double u = 0.5 * std::norm(q.z) * n * n - (2.0 / 3.0) * q.c * q.z.real() * n * n * n +
                         0.25 * q.c * q.c * n * n * n * n - q.eta2 * n;
        return u + 0.5 * q.w2 * d * d;
    }
    const double j = std::abs(p.coupling());
    return p.delta_c * n_a + p.delta_m * n_m - 0.5 * p.kerr() * n_m * n_m - 2.0 * j * std::sqrt(n_a * n_m) -
           2.0 * p.eta * std::sqrt(n_m);
}

std::array<double, 2> potential_gradient(double n_a, double n_m, const SystemParams& p, PotentialForm form,
                                         Kernel kernel) {
    if (form == PotentialForm::Quasi) {
        const auto q = quasi_terms(p, kernel);
        const double d = n_a - q.rho * n_m;
        const double du = n_m * std::norm(q.z - q.c * n_m) - q.eta2;
        return {q.w2 * d, du - q.rho * q.w2 * d};
    }
    const double j = std::abs(p.coupling());
    return {p.delta_c - j * std::sqrt(n_m / n_a),
            p.delta_m - p.kerr() * n_m - j * std::sqrt(n_a / n_m) - p.eta / std::sqrt(n_m)};
}

std::array<double, 4> potential_hessian(double n_a, double n_m, const SystemParams& p, PotentialForm form,
                                        Kernel kernel) {
    if (form == PotentialForm::Quasi) {
        const auto q = quasi_terms(p, kernel);
        const double d2u = std::norm(q.z) - 4.0 * q.c * q.z.real() * n_m + 3.0 * q.c * q.c * n_m * n_m;
        const double off = -q.rho * q.w2;
        return {q.w2, off, off, d2u + q.rho * q.rho * q.w2};
    }
    const double j = std::abs(p.coupling());
    const double aa = 0.5 * j * std::sqrt(n_m) / (n_a * std::sqrt(n_a));
    const double am = -0.5 * j / std::sqrt(n_a * n_m);
    const double mm = -p.kerr() + (0.5 * j * std::sqrt(n_a) + 0.5 * p.eta) / (n_m * std::sqrt(n_m));
    return {aa, am, am, mm};
}

PotentialGrid build_grid(const SystemParams& p, std::pair<double, double> na_range,
                         std::pair<double, double> nm_range, int n_cells, const GridOptions& opts) {
    if (n_cells < 32) throw std::invalid_argument("n_cells must be >= 32");
    for (auto r : {na_range, nm_range})
        if (!std::isfinite(r.first) || !std::isfinite(r.second) || r.first < 0.0 || !(r.second > r.first))
            throw std::invalid_argument("grid ranges must be finite, non-negative and of positive length");

    const auto n = static_cast<std::size_t>(n_cells) + 1;
    PotentialGrid grid;
    grid.n_a.resize(n);
    grid.n_m.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double f = static_cast<double>(k) / static_cast<double>(n - 1);
        grid.n_a[k] = k + 1 == n ? na_range.second : na_range.first + f * (na_range.second - na_range.first);
        grid.n_m[k] = k + 1 == n ? nm_range.second : nm_range.first + f * (nm_range.second - nm_range.first);
    }

    grid.v.resize(n * n);
    std::vector<std::array<double, 2>> grad(n * n);
    parallel_for(n, opts.threads, [&](std::size_t i) {
        for (std::size_t j = 0; j < n; ++j) {
            grid.v[i * n + j] = effective_potential(grid.n_a[i], grid.n_m[j], p, opts.form, opts.kernel);
            grad[i * n + j] = potential_gradient(grid.n_a[i], grid.n_m[j], p, opts.form, opts.kernel);
        }
    });

    auto grad_at = [&](double x, double y) { return potential_gradient(x, y, p, opts.form, opts.kernel); };
    auto gnorm = [](const std::array<double, 2>& g) { return std::hypot(g[0], g[1]); };

    double gscale = 1.0;
    for (const auto& g : grad)
        if (std::isfinite(g[0]) && std::isfinite(g[1])) gscale = std::max(gscale, gnorm(g));
    const double gtol = 1e-12 * gscale;
    const double da = grid.n_a[1] - grid.n_a[0], dm = grid.n_m[1] - grid.n_m[0];

    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = 0; j + 1 < n; ++j) {
            bool bracket = true;
            for (int comp = 0; comp < 2 && bracket; ++comp) {
                double lo = 0.0, hi = 0.0;
                bool first = true;
                for (std::size_t di = 0; di < 2; ++di)
                    for (std::size_t dj = 0; dj < 2; ++dj) {
                        const double g = grad[(i + di) * n + j + dj][comp];
                        if (!std::isfinite(g)) continue;
                        lo = first ? g : std::min(lo, g);
                        hi = first ? g : std::max(hi, g);
                        first = false;
                    }
                bracket = !first && lo <= 0.0 && hi >= 0.0;
            }
            if (!bracket) continue;

            double x = 0.5 * (grid.n_a[i] + grid.n_a[i + 1]);
            double y = 0.5 * (grid.n_m[j] + grid.n_m[j + 1]);
            auto g = grad_at(x, y);
            bool converged = gnorm(g) <= gtol;
            for (int it = 0; it < 100 && !converged; ++it) {
                const auto h = potential_hessian(x, y, p, opts.form, opts.kernel);
                const double det = h[0] * h[3] - h[1] * h[2];
                if (det == 0.0 || !std::isfinite(det)) break;
                const double sx = -(h[3] * g[0] - h[1] * g[1]) / det;
                const double sy = -(-h[2] * g[0] + h[0] * g[1]) / det;
                double step = 1.0;
                bool moved = false;
                for (int half = 0; half < 40; ++half, step *= 0.5) {
                    const double nx = x + step * sx, ny = y + step * sy;
                    if (nx < 0.0 || ny < 0.0) continue;
                    const auto ng = grad_at(nx, ny);
                    if (std::isfinite(ng[0]) && std::isfinite(ng[1]) && gnorm(ng) < gnorm(g)) {
                        x = nx;
                        y = ny;
                        g = ng;
                        moved = true;
                        break;
                    }
                }
                if (!moved) break;
                converged = gnorm(g) <= gtol;
            }
            if (!converged) {
                grid.warnings.push_back("refinement from cell (" + std::to_string(i) + ", " + std::to_string(j) +
                                        ") did not converge; |grad| = " + csv::format_double(gnorm(g)));
                continue;
            }
            if (x < grid.n_a.front() || x > grid.n_a.back() || y < grid.n_m.front() || y > grid.n_m.back())
                continue;
            bool duplicate = false;
            for (const auto& c : grid.critical_points)
                if (std::abs(c.n_a - x) <= 1e-6 * da + 1e-12 * std::abs(x) &&
                    std::abs(c.n_m - y) <= 1e-6 * dm + 1e-12 * std::abs(y))
                    duplicate = true;
            if (duplicate) continue;

            const auto h = potential_hessian(x, y, p, opts.form, opts.kernel);
            const double tr = h[0] + h[3], det = h[0] * h[3] - h[1] * h[2];
            if (det == 0.0) continue;
            CriticalClass kind = det < 0.0 ? CriticalClass::Saddle
                                 : tr > 0.0 ? CriticalClass::Minimum
                                            : CriticalClass::Maximum;
            grid.critical_points.push_back(
                {x, y, effective_potential(x, y, p, opts.form, opts.kernel), kind});
        }
    }
    std::sort(grid.critical_points.begin(), grid.critical_points.end(),
              [](const CriticalPoint& a, const CriticalPoint& b) { return a.n_m < b.n_m; });
    return grid;
}

} // namespace magnomech

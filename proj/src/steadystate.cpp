#include "magnomech/steadystate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "magnomech/errors.hpp"
#include "magnomech/parallel.hpp"

namespace magnomech {

namespace {

// Rescaled monic cubic X^3 + b X^2 + c X + d with x = scale * X, chosen so the
// constant term is -1 whenever the cubic is genuinely cubic and driven.
struct Scaled {
    double scale = 1.0;
    double b = 0.0, c = 0.0, d = 0.0;

    double discriminant() const {
        return 18.0 * b * c * d - 4.0 * b * b * b * d + b * b * c * c - 4.0 * c * c * c - 27.0 * d * d;
    }
};

Scaled rescale(const RealCubic& poly) {
    Scaled s;
    if (poly.a0 < 0.0) s.scale = std::cbrt(-poly.a0 / poly.a3);
    const double k = s.scale;
    s.b = poly.a2 / (poly.a3 * k);
    s.c = poly.a1 / (poly.a3 * k * k);
    s.d = poly.a0 / (poly.a3 * k * k * k);
    return s;
}

double polish_real(const RealCubic& poly, double x) {
    double fx = poly.evaluate(x);
    for (int i = 0; i < 8 && fx != 0.0; ++i) {
        const double d = (3.0 * poly.a3 * x + 2.0 * poly.a2) * x + poly.a1;
        if (d == 0.0) break;
        const double next = x - fx / d;
        const double fn = poly.evaluate(next);
        if (!(std::abs(fn) < std::abs(fx))) break;
        x = next;
        fx = fn;
    }
    return x;
}

// Real roots x >= 0 of the magnon cubic, ascending.
std::vector<double> magnon_numbers(const MagnonCubic& mc, double eta) {
    if (eta == 0.0) return {0.0};
    if (mc.c == 0.0) return {-mc.poly.a0 / mc.poly.a1};

    const Scaled s = rescale(mc.poly);
    auto roots = cubic_roots({cplx(s.b), cplx(s.c), cplx(s.d)});
    std::vector<double> xs;
    if (s.discriminant() > 0.0) {
        for (const auto& r : roots) xs.push_back(r.real() * s.scale);
    } else {
        auto best = std::min_element(roots.begin(), roots.end(),
                                     [](cplx a, cplx b) { return std::abs(a.imag()) < std::abs(b.imag()); });
        xs.push_back(best->real() * s.scale);
    }
    for (auto& x : xs) x = polish_real(mc.poly, x);
    std::sort(xs.begin(), xs.end());
    return xs;
}

double epsilon(const SystemParams& p) { return 1e-9 * (p.kappa_m > 0.0 ? p.kappa_m : 1.0); }

// Real 2x2 block of z -> A z + B conj(z).
void put_block(Jacobian6& j, int row, int col, cplx a, cplx b) {
    j(row, col) = (a + b).real();
    j(row, col + 1) = -(a - b).imag();
    j(row + 1, col) = (a + b).imag();
    j(row + 1, col + 1) = (a - b).real();
}

double window_discriminant(const SystemParams& p, SweepAxis axis, double v, Kernel kernel) {
    const auto q = with_sweep_axis(p, axis, v);
    const auto mc = build_magnon_cubic(q, kernel);
    if (mc.c == 0.0 || q.eta == 0.0) return -1.0;
    return rescale(mc.poly).discriminant();
}

std::vector<BranchPoint> follow(const std::vector<std::vector<SteadyRoot>>& roots, bool upward) {
    const std::size_t n = roots.size();
    std::vector<BranchPoint> out(n);
    int prev_index = -1;
    std::size_t prev_count = 0;
    double prev_nm = 0.0;
    for (std::size_t step = 0; step < n; ++step) {
        const std::size_t i = upward ? step : n - 1 - step;
        const auto& rs = roots[i];
        if (rs.empty()) continue;

        std::vector<int> candidates;
        for (std::size_t k = 0; k < rs.size(); ++k)
            if (rs[k].stability == Stability::Stable) candidates.push_back(static_cast<int>(k));
        const bool any_stable = !candidates.empty();
        if (!any_stable)
            for (std::size_t k = 0; k < rs.size(); ++k) candidates.push_back(static_cast<int>(k));

        int pick = -1;
        if (prev_index < 0) {
            pick = upward ? candidates.front() : candidates.back();
        } else if (rs.size() == prev_count &&
                   std::find(candidates.begin(), candidates.end(), prev_index) != candidates.end()) {
            pick = prev_index;
        } else {
            pick = candidates.front();
            for (int k : candidates)
                if (std::abs(rs[k].n_m - prev_nm) < std::abs(rs[pick].n_m - prev_nm)) pick = k;
        }
        out[i] = {pick, rs[pick].n_m, rs[pick].n_a, any_stable};
        prev_index = pick;
        prev_count = rs.size();
        prev_nm = rs[pick].n_m;
    }
    return out;
}

} // namespace

std::string_view to_string(Kernel k) {
    return k == Kernel::ConjugatePhase ? "conjugate" : "langevin";
}

std::string_view to_string(Stability s) {
    switch (s) {
    case Stability::Stable: return "Stable";
    case Stability::Unstable: return "Unstable";
    case Stability::Marginal: return "Marginal";
    }
    return "Marginal";
}

std::string_view to_string(SweepAxis a) {
    switch (a) {
    case SweepAxis::EtaSq: return "eta2";
    case SweepAxis::Ga: return "ga";
    case SweepAxis::Gamma: return "gamma";
    case SweepAxis::KappaRatio: return "kappa_ratio";
    }
    return "eta2";
}

SweepAxis parse_sweep_axis(std::string_view name) {
    if (name == "eta2" || name == "eta_sq") return SweepAxis::EtaSq;
    if (name == "ga" || name == "g_a") return SweepAxis::Ga;
    if (name == "gamma") return SweepAxis::Gamma;
    if (name == "kappa_ratio") return SweepAxis::KappaRatio;
    throw std::invalid_argument("unknown sweep axis '" + std::string(name) +
                                "' (expected eta2, ga, gamma or kappa_ratio)");
}

SystemParams with_sweep_axis(SystemParams p, SweepAxis axis, double value) {
    switch (axis) {
    case SweepAxis::EtaSq: p.eta = value >= 0.0 ? std::sqrt(value) : -1.0; break;
    case SweepAxis::Ga: p.g_a = value; break;
    case SweepAxis::Gamma: p.gamma = value; break;
    case SweepAxis::KappaRatio: p.kappa_a = value * p.kappa_m; break;
    }
    return p;
}

MagnonCubic build_magnon_cubic(const SystemParams& p, Kernel kernel) {
    MagnonCubic mc;
    mc.kernel = kernel;
    mc.w = p.photon_response();
    const cplx ie = cplx(0.0, p.gamma) * std::polar(1.0, p.theta);
    const cplx g = kernel == Kernel::ConjugatePhase ? p.g_a + ie : p.g_a - ie;
    mc.k = g * g;
    mc.p0 = cplx(p.delta_m, -p.kappa_m) * mc.w - mc.k;
    mc.c = p.kerr();

    const double w2 = std::norm(mc.w);
    mc.poly.a3 = mc.c * mc.c * w2;
    mc.poly.a2 = -2.0 * mc.c * (mc.p0 * std::conj(mc.w)).real();
    mc.poly.a1 = std::norm(mc.p0);
    mc.poly.a0 = -p.eta * p.eta * w2;
    return mc;
}

int root_count(const MagnonCubic& mc, double eta) {
    if (eta == 0.0 || mc.c == 0.0) return 1;
    return rescale(mc.poly).discriminant() > 0.0 ? 3 : 1;
}

std::vector<SteadyRoot> solve_steady_states(const SystemParams& p, Kernel kernel) {
    const auto mc = build_magnon_cubic(p, kernel);
    const auto xs = magnon_numbers(mc, p.eta);
    const cplx g = p.coupling();

    std::vector<SteadyRoot> out;
    for (double x : xs) {
        if (p.eta > 0.0 && !(x > 0.0))
            throw NumericalError("magnon cubic returned a non-positive root for a driven system");
        SteadyRoot r;
        if (p.eta > 0.0) {
            r.m_s = cplx(0.0, -p.eta) * mc.w / (mc.p0 - mc.c * x * mc.w);
            r.a_s = -g * r.m_s / mc.w;
            r.n_m = std::norm(r.m_s);
            r.b_s = -p.g_b * r.n_m / cplx(p.omega_b, -p.kappa_b);
            r.n_a = photon_number_from_magnon(r.n_m, p);
        }
        const auto st = jacobian_stability(r, p);
        r.stability = st.stability;
        r.jacobian_max_re = st.max_re;
        out.push_back(r);
    }
    return out;
}

double photon_number_from_magnon(double n_m, const SystemParams& p) {
    return std::norm(p.coupling()) * n_m / std::norm(p.photon_response());
}

double photon_form_residual(double n_a, const SystemParams& p, Kernel kernel) {
    const auto mc = build_magnon_cubic(p, kernel);
    const double g2 = std::norm(p.coupling());
    if (g2 == 0.0) return std::abs(n_a);
    const double lhs = n_a * std::norm(mc.p0 - mc.c * (std::norm(mc.w) / g2) * n_a * mc.w);
    const double rhs = p.eta * p.eta * g2;
    return std::abs(lhs - rhs) / std::max(rhs, 1e-300);
}

Jacobian6 jacobian(const SystemParams& p, cplx a, cplx m, cplx b) {
    (void)a; // the flow is linear in a
    const cplx mi(0.0, -1.0);
    const cplx g = p.coupling();
    const double gb = p.g_b;
    Jacobian6 j = Jacobian6::Zero();
    put_block(j, 0, 0, mi * p.photon_response(), {});
    put_block(j, 0, 2, mi * g, {});
    put_block(j, 2, 0, mi * g, {});
    put_block(j, 2, 2, mi * (cplx(p.delta_m, -p.kappa_m) + gb * 2.0 * b.real()), {});
    put_block(j, 2, 4, mi * gb * m, mi * gb * m);
    put_block(j, 4, 2, mi * gb * std::conj(m), mi * gb * m);
    put_block(j, 4, 4, mi * cplx(p.omega_b, -p.kappa_b), {});
    return j;
}

StabilityResult jacobian_stability(const SteadyRoot& root, const SystemParams& p) {
    const Jacobian6 j = jacobian(p, root.a_s, root.m_s, root.b_s);
    if (!j.allFinite()) throw DomainError("Jacobian has non-finite entries");
    Eigen::EigenSolver<Jacobian6> es(j, false);
    if (es.info() != Eigen::Success) throw NumericalError("Jacobian eigenvalue solve failed");
    StabilityResult out;
    out.max_re = es.eigenvalues().real().maxCoeff();
    const double eps = epsilon(p);
    out.stability = out.max_re < -eps ? Stability::Stable : out.max_re > eps ? Stability::Unstable : Stability::Marginal;
    return out;
}

std::optional<std::pair<double, double>> eta_sq_window(const SystemParams& p, Kernel kernel) {
    const auto mc = build_magnon_cubic(p, kernel);
    if (mc.c == 0.0) return std::nullopt;
    const double b = mc.poly.a2 / mc.poly.a3, c = mc.poly.a1 / mc.poly.a3;
    // disc(d) = -27 d^2 + (18 b c - 4 b^3) d + (b^2 c^2 - 4 c^3), d = -eta^2 / kerr^2.
    const double qa = -27.0, qb = 18.0 * b * c - 4.0 * b * b * b, qc = b * b * c * c - 4.0 * c * c * c;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (!(disc > 0.0)) return std::nullopt;
    const double sq = std::sqrt(disc);
    const double big = qb >= 0.0 ? -0.5 * (qb + sq) : -0.5 * (qb - sq);
    double d1 = big / qa, d2 = qc / big;
    if (d1 > d2) std::swap(d1, d2);
    const double e = 1.0 / (mc.c * mc.c);
    const double lo = std::max(0.0, -d2 / e), hi = -d1 / e;
    if (!(hi > lo)) return std::nullopt;
    return std::make_pair(lo, hi);
}

std::vector<std::pair<double, double>> discriminant_windows(const SystemParams& p, SweepAxis axis, double lo,
                                                            double hi, int n_probe, Kernel kernel,
                                                            double resolution) {
    std::vector<std::pair<double, double>> out;
    if (n_probe < 2 || !(hi > lo)) return out;
    auto positive = [&](double v) { return window_discriminant(p, axis, v, kernel) > 0.0; };
    auto refine = [&](double a, double b, bool a_positive) {
        while (b - a > resolution) {
            const double mid = 0.5 * (a + b);
            if (positive(mid) == a_positive)
                a = mid;
            else
                b = mid;
        }
        return 0.5 * (a + b);
    };

    double prev_v = lo;
    bool prev = positive(lo);
    double start = lo;
    for (int k = 1; k < n_probe; ++k) {
        const double v = k + 1 == n_probe ? hi : lo + (hi - lo) * k / (n_probe - 1);
        const bool cur = positive(v);
        if (cur != prev) {
            const double edge = refine(prev_v, v, prev);
            if (cur)
                start = edge;
            else
                out.emplace_back(start, edge);
        }
        prev = cur;
        prev_v = v;
    }
    if (prev) out.emplace_back(start, hi);
    return out;
}

SweepResult sweep(const SystemParams& p, SweepAxis axis, double lo, double hi, int n_points,
                  const SweepOptions& opts) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || hi < lo)
        throw std::invalid_argument("sweep range must be finite with hi >= lo");
    if (lo == hi) n_points = 1;
    if (n_points < 1 || (hi > lo && n_points < 2))
        throw std::invalid_argument("sweep needs n_points >= 2 over a non-empty range");

    SweepResult res;
    res.axis = axis;
    res.kernel = opts.kernel;
    res.values.resize(static_cast<std::size_t>(n_points));
    for (int k = 0; k < n_points; ++k)
        res.values[k] = n_points == 1 ? lo : (k + 1 == n_points ? hi : lo + (hi - lo) * k / (n_points - 1));

    for (double v : {lo, hi}) {
        auto errs = with_sweep_axis(p, axis, v).violations();
        if (!errs.empty()) throw ValidationError(std::move(errs));
    }

    res.roots.resize(res.values.size());
    parallel_for(res.values.size(), opts.threads, [&](std::size_t i) {
        res.roots[i] = solve_steady_states(with_sweep_axis(p, axis, res.values[i]), opts.kernel);
    });

    if (axis == SweepAxis::EtaSq) {
        if (auto w = eta_sq_window(p, opts.kernel)) {
            const double a = std::max(w->first, lo), b = std::min(w->second, hi);
            if (b > a) res.bistable_windows.emplace_back(a, b);
        }
    } else if (n_points > 1) {
        const int probes = (n_points - 1) * std::max(1, opts.window_oversample) + 1;
        res.bistable_windows = discriminant_windows(p, axis, lo, hi, probes, opts.kernel);
    }

    res.up_branch = follow(res.roots, true);
    res.down_branch = follow(res.roots, false);
    return res;
}

} // namespace magnomech

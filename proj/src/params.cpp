#include "magnomech/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace magnomech {

namespace {

std::string join(const std::vector<std::string>& items) {
    std::ostringstream os;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) os << "; ";
        os << items[i];
    }
    return os.str();
}

struct FieldRef {
    const char* key;
    double SystemParams::*member;
};

constexpr FieldRef kFields[] = {
    {"delta_c", &SystemParams::delta_c}, {"delta_m", &SystemParams::delta_m},
    {"omega_b", &SystemParams::omega_b}, {"kappa_a", &SystemParams::kappa_a},
    {"kappa_m", &SystemParams::kappa_m}, {"kappa_b", &SystemParams::kappa_b},
    {"g_a", &SystemParams::g_a},         {"g_b", &SystemParams::g_b},
    {"gamma", &SystemParams::gamma},     {"theta", &SystemParams::theta},
    {"eta", &SystemParams::eta},
};

double SystemParams::*find_field(std::string_view key) {
    for (const auto& f : kFields)
        if (key == f.key) return f.member;
    return nullptr;
}

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw DomainError(std::string(name) + " must be positive and finite");
}

} // namespace

ValidationError::ValidationError(std::vector<std::string> failures)
    : std::invalid_argument("invalid parameters: " + join(failures)),
      failures_(std::move(failures)) {}

std::vector<std::string> PhysicalInputs::violations() const {
    std::vector<std::string> out;
    auto positive = [&](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) out.push_back(std::string(name) + " must be > 0");
    };
    positive(cavity_length, "cavity_length");
    positive(cavity_freq, "cavity_freq");
    positive(magnon_freq, "magnon_freq");
    positive(phonon_freq, "phonon_freq");
    positive(drive_freq, "drive_freq");
    if (!(drive_power >= 0.0) || !std::isfinite(drive_power))
        out.push_back("drive_power must be >= 0");
    positive(cavity_decay, "cavity_decay");
    positive(magnon_mass, "magnon_mass");
    positive(phonon_mass, "phonon_mass");
    if (!(traveling_amp >= 0.0) || !std::isfinite(traveling_amp))
        out.push_back("traveling_amp must be >= 0");
    if (!(angle >= 0.0 && angle < 2.0 * std::numbers::pi))
        out.push_back("angle must lie in [0, 2 pi)");
    return out;
}

cplx SystemParams::coupling() const {
    return cplx(g_a, 0.0) - cplx(0.0, gamma) * std::polar(1.0, theta);
}

double SystemParams::kerr() const {
    return 2.0 * g_b * g_b * omega_b / (omega_b * omega_b + kappa_b * kappa_b);
}

double SystemParams::max_rate() const {
    return std::max({std::abs(delta_c), std::abs(delta_m), omega_b, kappa_a, kappa_m, kappa_b,
                     g_a, g_b, gamma, 1.0});
}

std::vector<std::string> SystemParams::violations() const {
    std::vector<std::string> out;
    for (const auto& f : kFields) {
        if (!std::isfinite(this->*f.member)) out.push_back(std::string(f.key) + " must be finite");
    }
    auto nonneg = [&](double v, const char* name) {
        if (v < 0.0) out.push_back(std::string(name) + " must be >= 0");
    };
    nonneg(kappa_a, "kappa_a");
    nonneg(kappa_m, "kappa_m");
    nonneg(kappa_b, "kappa_b");
    nonneg(g_a, "g_a");
    nonneg(g_b, "g_b");
    nonneg(gamma, "gamma");
    nonneg(eta, "eta");
    if (!(omega_b > 0.0)) out.push_back("omega_b must be > 0");
    return out;
}

void SystemParams::validate() const {
    auto v = violations();
    if (!v.empty()) throw ValidationError(std::move(v));
}

const std::vector<std::string>& param_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& f : kFields) k.emplace_back(f.key);
        return k;
    }();
    return keys;
}

void set_param(SystemParams& p, std::string_view key, double value) {
    auto member = find_field(key);
    if (!member) throw ConfigError("unknown parameter key '" + std::string(key) + "'");
    p.*member = value;
}

double get_param(const SystemParams& p, std::string_view key) {
    auto member = find_field(key);
    if (!member) throw ConfigError("unknown parameter key '" + std::string(key) + "'");
    return p.*member;
}

double zero_point_motion(double mass, double freq) {
    return std::sqrt(kHbar / (2.0 * mass * freq));
}

double drive_strength(double power, double kappa, double drive_freq) {
    return std::sqrt(power * kappa / (kHbar * drive_freq));
}

SystemParams derive_couplings(const PhysicalInputs& in) {
    require_positive(in.magnon_mass, "magnon_mass");
    require_positive(in.phonon_mass, "phonon_mass");
    require_positive(in.cavity_freq, "cavity_freq");
    require_positive(in.magnon_freq, "magnon_freq");
    require_positive(in.phonon_freq, "phonon_freq");
    require_positive(in.drive_freq, "drive_freq");
    require_positive(in.cavity_length, "cavity_length");
    require_positive(in.cavity_decay, "cavity_decay");
    if (!(in.drive_power >= 0.0) || !std::isfinite(in.drive_power))
        throw DomainError("drive_power must be non-negative and finite");
    if (!(in.traveling_amp >= 0.0) || !std::isfinite(in.traveling_amp))
        throw DomainError("traveling_amp must be non-negative and finite");

    const double k = in.cavity_decay;
    const double x_m = zero_point_motion(in.magnon_mass, in.magnon_freq);
    const double x_b = zero_point_motion(in.phonon_mass, in.phonon_freq);
    const double g_a = std::sqrt(2.0) * (in.cavity_freq / in.cavity_length) * x_m;
    const double g_b = std::sqrt(2.0) * (in.cavity_freq / in.cavity_length) * x_b;
    const double gamma = in.traveling_amp * std::sqrt(kHbar / (in.magnon_freq * in.magnon_mass));
    const double eta = drive_strength(in.drive_power, k, in.drive_freq);

    SystemParams p;
    p.delta_c = (in.drive_freq - in.cavity_freq) / k;
    p.delta_m = (in.magnon_freq - in.drive_freq) / k;
    p.omega_b = in.phonon_freq / k;
    p.kappa_a = 1.0;
    p.kappa_m = 1.0;
    p.kappa_b = 0.01;
    p.g_a = g_a / k;
    p.g_b = g_b / k;
    p.gamma = gamma / k;
    p.theta = in.angle;
    p.eta = eta / k;
    return p;
}

} // namespace magnomech

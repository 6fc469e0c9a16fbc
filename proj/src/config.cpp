#include "magnomech/config.hpp"

#include <fstream>
#include <map>
#include <numbers>
#include <span>
#include <sstream>

#include "magnomech/csv.hpp"

namespace magnomech {

namespace {

enum class Block { None, Dimensionless, Physical };

struct Entry {
    Block block;
    std::string key;
    std::string value;
    int line;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<Entry> tokenize(std::string_view text) {
    std::vector<Entry> out;
    Block block = Block::None;
    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;

        if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        auto line = trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
            auto name = trim(line.substr(1, line.size() - 2));
            if (name == "dimensionless")
                block = Block::Dimensionless;
            else if (name == "physical")
                block = Block::Physical;
            else
                throw ConfigError("line " + std::to_string(lineno) + ": unknown section '" +
                                  std::string(name) + "'");
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
        out.push_back({block, std::string(key), std::string(value), lineno});
    }
    return out;
}

struct Unit {
    const char* suffix;
    double scale;
};

// Hz-family suffixes denote ordinary frequency; stored values are angular.
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr Unit kFreqUnits[] = {{"rad/s", 1.0},          {"Hz", kTwoPi},        {"kHz", kTwoPi * 1e3},
                               {"MHz", kTwoPi * 1e6},   {"GHz", kTwoPi * 1e9}, {"THz", kTwoPi * 1e12}};
constexpr Unit kPowerUnits[] = {{"W", 1.0}, {"mW", 1e-3}, {"uW", 1e-6}, {"nW", 1e-9}};
constexpr Unit kLengthUnits[] = {{"m", 1.0}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}};
constexpr Unit kMassUnits[] = {{"kg", 1.0}, {"g", 1e-3}, {"mg", 1e-6}, {"ug", 1e-9}, {"ng", 1e-12}};
constexpr Unit kAngleUnits[] = {{"rad", 1.0}, {"deg", std::numbers::pi / 180.0}};

struct PhysicalField {
    const char* key;
    double PhysicalInputs::*member;
    std::span<const Unit> units;
};

const PhysicalField kPhysicalFields[] = {
    {"cavity_length", &PhysicalInputs::cavity_length, kLengthUnits},
    {"cavity_freq", &PhysicalInputs::cavity_freq, kFreqUnits},
    {"magnon_freq", &PhysicalInputs::magnon_freq, kFreqUnits},
    {"phonon_freq", &PhysicalInputs::phonon_freq, kFreqUnits},
    {"drive_freq", &PhysicalInputs::drive_freq, kFreqUnits},
    {"drive_power", &PhysicalInputs::drive_power, kPowerUnits},
    {"cavity_decay", &PhysicalInputs::cavity_decay, kFreqUnits},
    {"magnon_mass", &PhysicalInputs::magnon_mass, kMassUnits},
    {"phonon_mass", &PhysicalInputs::phonon_mass, kMassUnits},
    {"traveling_amp", &PhysicalInputs::traveling_amp, {}},
    {"angle", &PhysicalInputs::angle, kAngleUnits},
};

const PhysicalField* find_physical(std::string_view key) {
    for (const auto& f : kPhysicalFields)
        if (key == f.key) return &f;
    return nullptr;
}

double parse_number(std::string_view key, std::string_view text) {
    try {
        return csv::parse_double(text);
    } catch (const std::invalid_argument&) {
        throw ConfigError("'" + std::string(key) + "': malformed number '" + std::string(text) + "'");
    }
}

} // namespace

double parse_quantity(std::string_view key, std::string_view value) {
    const auto* field = find_physical(key);
    if (!field) throw ConfigError("unknown physical key '" + std::string(key) + "'");
    value = trim(value);
    auto space = value.find_first_of(" \t");
    if (space == std::string_view::npos) return parse_number(key, value);

    auto number = parse_number(key, value.substr(0, space));
    auto unit = trim(value.substr(space));
    for (const auto& u : field->units)
        if (unit == u.suffix) return number * u.scale;
    throw ConfigError("'" + std::string(key) + "': unsupported unit '" + std::string(unit) + "'");
}

PhysicalInputs parse_physical(std::string_view text) {
    PhysicalInputs in;
    for (const auto& e : tokenize(text)) {
        if (e.block != Block::Physical) continue;
        const auto* field = find_physical(e.key);
        if (!field)
            throw ConfigError("line " + std::to_string(e.line) + ": unknown physical key '" + e.key + "'");
        in.*(field->member) = parse_quantity(e.key, e.value);
    }
    return in;
}

SystemParams load_config(std::string_view text) {
    auto entries = tokenize(text);
    bool has_physical = false, has_dimensionless = false;
    for (const auto& e : entries) {
        if (e.block == Block::Physical)
            has_physical = true;
        else
            has_dimensionless = true;
    }
    if (has_physical && has_dimensionless)
        throw ConfigError("config mixes [physical] and [dimensionless] parameters; use one block");

    SystemParams p;
    if (has_physical) {
        auto in = parse_physical(text);
        auto v = in.violations();
        if (!v.empty()) throw ValidationError(std::move(v));
        p = derive_couplings(in);
    } else {
        std::map<std::string, int> seen;
        for (const auto& e : entries) {
            if (seen[e.key]++)
                throw ConfigError("line " + std::to_string(e.line) + ": duplicate key '" + e.key + "'");
            try {
                set_param(p, e.key, parse_number(e.key, e.value));
            } catch (const ConfigError& err) {
                throw ConfigError("line " + std::to_string(e.line) + ": " + err.what());
            }
        }
    }
    p.validate();
    return p;
}

SystemParams load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_config(buf.str());
}

std::string serialize_config(const SystemParams& p) {
    std::ostringstream os;
    os << "[dimensionless]\n";
    for (const auto& key : param_keys()) os << key << " = " << csv::format_double(get_param(p, key)) << '\n';
    return os.str();
}

} // namespace magnomech

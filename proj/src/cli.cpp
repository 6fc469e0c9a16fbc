#include "magnomech/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "magnomech/config.hpp"
#include "magnomech/csv.hpp"
#include "magnomech/dynamics.hpp"
#include "magnomech/errors.hpp"
#include "magnomech/parallel.hpp"
#include "magnomech/potential.hpp"
#include "magnomech/spectrum.hpp"
#include "magnomech/steadystate.hpp"

#ifndef MAGNOMECH_VERSION
#define MAGNOMECH_VERSION "0.0.0"
#endif

namespace magnomech::cli {

namespace {

using json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunKey {
    const char* name;
    const char* fallback;
};

// Run settings accepted by --set alongside the parameter keys.
constexpr RunKey kRunKeys[] = {
    {"sweep_axis", "eta2"}, {"eta2_min", "0"},     {"eta2_max", "2"},     {"axis_min", "0"},
    {"axis_max", "2"},      {"n_points", "401"},   {"scan_axis", "ga"},   {"scan_min", "0"},
    {"scan_max", "2"},      {"n_grid", "401"},     {"ep_tolerance", "0.01"}, {"na_min", "0"},
    {"na_max", "auto"},     {"nm_min", "0"},       {"nm_max", "auto"},    {"n_cells", "64"},
    {"settle_tol", "1e-10"}, {"init_scale", "1"},
};

std::string valid_keys() {
    std::string s;
    for (const auto& k : param_keys()) s += (s.empty() ? "" : ", ") + k;
    for (const auto& k : kRunKeys) s += std::string(", ") + k.name;
    return s;
}

struct Context {
    std::string subcommand;
    SystemParams params;
    std::map<std::string, std::string> run;
    Kernel kernel = Kernel::LangevinConsistent;
    bool dressed = false;
    int threads = 1;
    json extra = json::object();

    const std::string& get(const std::string& key) const { return run.at(key); }
    double number(const std::string& key) const {
        try {
            return csv::parse_double(get(key));
        } catch (const std::invalid_argument&) {
            throw UsageError("run key '" + key + "' expects a number, got '" + get(key) + "'");
        }
    }
    int integer(const std::string& key) const {
        const double v = number(key);
        if (v != std::floor(v) || std::abs(v) > 1e9) throw UsageError("run key '" + key + "' expects an integer");
        return static_cast<int>(v);
    }
};

void apply_sets(Context& ctx, const std::vector<std::string>& sets) {
    for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("--set expects key=value, got '" + kv + "'");
        const auto key = kv.substr(0, eq), value = kv.substr(eq + 1);
        if (ctx.run.count(key)) {
            ctx.run[key] = value;
            continue;
        }
        double v = 0.0;
        try {
            v = csv::parse_double(value);
        } catch (const std::invalid_argument&) {
            throw UsageError("--set " + key + ": malformed number '" + value + "'");
        }
        try {
            set_param(ctx.params, key, v);
        } catch (const ConfigError&) {
            throw UsageError("unknown key '" + key + "' in --set; valid keys: " + valid_keys());
        }
    }
}

json params_json(const SystemParams& p) {
    json j = json::object();
    for (const auto& k : param_keys()) j[k] = get_param(p, k);
    return j;
}

Dressing dressing_for(const Context& ctx) {
    if (!ctx.dressed) return Dressing::bare();
    const auto roots = solve_steady_states(ctx.params, ctx.kernel);
    return Dressing::around(roots.front().m_s, roots.front().b_s);
}

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 1) throw std::invalid_argument("point count must be >= 1");
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) v[k] = n == 1 ? lo : (k + 1 == n ? hi : lo + (hi - lo) * k / (n - 1));
    return v;
}

void run_spectrum_sweep(Context& ctx, csv::Writer& w) {
    const auto axis = parse_scan_axis(ctx.get("scan_axis"));
    const double lo = ctx.number("scan_min"), hi = ctx.number("scan_max");
    const int n = ctx.integer("n_grid");
    if (!(hi >= lo) || n < 1) throw std::invalid_argument("spectrum-sweep needs scan_max >= scan_min and n_grid >= 1");
    const auto xs = linspace(lo, hi, lo == hi ? 1 : n);
    for (double x : {xs.front(), xs.back()}) with_axis(ctx.params, axis, x).validate();
    const auto specs = spectrum_scan(ctx.params, axis, xs, dressing_for(ctx), ctx.threads);
    ctx.extra["scan"] = {{"axis", to_string(axis)}, {"min", lo}, {"max", hi}, {"points", xs.size()}};

    w.header({"axis_value", "re_l1", "re_l2", "re_l3", "im_l1", "im_l2", "im_l3", "coalescence", "pt_phase"});
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const auto& s = specs[i];
        w.cell(xs[i]);
        for (const auto& l : s.eigenvalues) w.cell(l.real());
        for (const auto& l : s.eigenvalues) w.cell(l.imag());
        w.cell(s.coalescence).cell(to_string(s.pt_phase)).end_row();
    }
}

void run_ep_find(Context& ctx, csv::Writer& w) {
    const auto axis = parse_scan_axis(ctx.get("scan_axis"));
    const double lo = ctx.number("scan_min"), hi = ctx.number("scan_max");
    for (double x : {lo, hi}) with_axis(ctx.params, axis, x).validate();
    EpSearchOptions opts;
    opts.tolerance = ctx.number("ep_tolerance");
    opts.dressing = dressing_for(ctx);
    opts.threads = ctx.threads;
    const auto eps = find_exceptional_points(ctx.params, axis, lo, hi, ctx.integer("n_grid"), opts);
    ctx.extra["scan"] = {{"axis", to_string(axis)}, {"min", lo}, {"max", hi}, {"points", ctx.integer("n_grid")},
                         {"tolerance", opts.tolerance}};

    w.header({"axis_value", "coalescence", "order"});
    for (const auto& e : eps) w.cell(e.axis_value).cell(e.coalescence).cell(e.order).end_row();
}

SweepResult run_sweep(Context& ctx) {
    const auto axis = parse_sweep_axis(ctx.get("sweep_axis"));
    const bool eta = axis == SweepAxis::EtaSq;
    const double lo = ctx.number(eta ? "eta2_min" : "axis_min");
    const double hi = ctx.number(eta ? "eta2_max" : "axis_max");
    SweepOptions opts;
    opts.kernel = ctx.kernel;
    opts.threads = ctx.threads;
    auto res = sweep(ctx.params, axis, lo, hi, ctx.integer("n_points"), opts);
    ctx.extra["sweep"] = {{"axis", to_string(axis)}, {"min", lo}, {"max", hi}, {"points", res.values.size()}};
    return res;
}

void window_footer(const SweepResult& res, csv::Writer& w) {
    for (const auto& [a, b] : res.bistable_windows) w.comment("window: " + csv::format_double(a) + "," + csv::format_double(b));
}

void run_bistability_sweep(Context& ctx, csv::Writer& w) {
    const auto res = run_sweep(ctx);
    w.header({"axis_value", "root_index", "n_m", "n_a", "stability", "jacobian_max_re"});
    for (std::size_t i = 0; i < res.values.size(); ++i)
        for (std::size_t k = 0; k < res.roots[i].size(); ++k) {
            const auto& r = res.roots[i][k];
            w.cell(res.values[i]).cell(k).cell(r.n_m).cell(r.n_a).cell(to_string(r.stability)).cell(r.jacobian_max_re).end_row();
        }
    window_footer(res, w);
}

void run_hysteresis(Context& ctx, csv::Writer& w) {
    const auto res = run_sweep(ctx);
    w.header({"axis_value", "up_n_a", "down_n_a", "up_n_m", "down_n_m"});
    for (std::size_t i = 0; i < res.values.size(); ++i) {
        const auto &u = res.up_branch[i], &d = res.down_branch[i];
        w.cell(res.values[i]).cell(u.n_a).cell(d.n_a).cell(u.n_m).cell(d.n_m).end_row();
    }
    window_footer(res, w);
}

void run_potential_grid(Context& ctx, csv::Writer& w, PotentialForm form) {
    double na_auto = 1.0, nm_auto = 1.0;
    if (ctx.get("na_max") == "auto" || ctx.get("nm_max") == "auto") {
        const auto roots = solve_steady_states(ctx.params, ctx.kernel);
        double na = 0.0, nm = 0.0;
        for (const auto& r : roots) {
            na = std::max(na, r.n_a);
            nm = std::max(nm, r.n_m);
        }
        if (na > 0.0) na_auto = 1.5 * na;
        if (nm > 0.0) nm_auto = 1.5 * nm;
    }
    auto bound = [&](const char* key, double fallback) {
        return ctx.get(key) == "auto" ? fallback : ctx.number(key);
    };
    const std::pair<double, double> na{ctx.number("na_min"), bound("na_max", na_auto)};
    const std::pair<double, double> nm{ctx.number("nm_min"), bound("nm_max", nm_auto)};
    GridOptions opts;
    opts.form = form;
    opts.kernel = ctx.kernel;
    opts.threads = ctx.threads;
    const auto grid = build_grid(ctx.params, na, nm, ctx.integer("n_cells"), opts);
    ctx.extra["grid"] = {{"form", to_string(form)},
                         {"na", {na.first, na.second}},
                         {"nm", {nm.first, nm.second}},
                         {"n_cells", ctx.integer("n_cells")}};

    w.header({"n_a", "n_m", "V"});
    for (std::size_t i = 0; i < grid.n_a.size(); ++i)
        for (std::size_t j = 0; j < grid.n_m.size(); ++j) w.cell(grid.n_a[i]).cell(grid.n_m[j]).cell(grid.at(i, j)).end_row();
    for (const auto& c : grid.critical_points)
        w.comment("critical: " + csv::format_double(c.n_a) + "," + csv::format_double(c.n_m) + "," +
                  csv::format_double(c.value) + "," + std::string(to_string(c.kind)));
    for (const auto& msg : grid.warnings) w.comment("warning: " + msg);
}

struct SimulateFlags {
    std::string init;
    long long seed = -1;
    double dt = 0.0;
    double t_max = 1000.0;
    int stride = 100;
};

TrajectoryState initial_state(const Context& ctx, const SimulateFlags& f) {
    TrajectoryState s;
    if (!f.init.empty()) {
        std::vector<double> v;
        std::stringstream ss(f.init);
        for (std::string item; std::getline(ss, item, ',');) {
            try {
                v.push_back(csv::parse_double(item));
            } catch (const std::invalid_argument&) {
                throw UsageError("--init: malformed number '" + item + "'");
            }
        }
        if (v.size() != 6) throw UsageError("--init expects six numbers: re_a,im_a,re_m,im_m,re_b,im_b");
        return {0.0, {v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]}};
    }
    if (f.seed >= 0) {
        std::mt19937_64 rng(static_cast<std::uint64_t>(f.seed));
        const double scale = ctx.number("init_scale");
        std::uniform_real_distribution<double> u(-scale, scale);
        const double v[6] = {u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
        return {0.0, {v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]}};
    }
    return s;
}

void run_simulate(Context& ctx, csv::Writer& w, const SimulateFlags& f) {
    const auto init = initial_state(ctx, f);
    const double dt = f.dt > 0.0 ? f.dt : default_dt(ctx.params);
    const double tol = ctx.number("settle_tol");
    ctx.extra["simulate"] = {{"dt", dt},     {"t_max", f.t_max}, {"stride", f.stride}, {"seed", f.seed},
                             {"settle_tol", tol},
                             {"initial", {init.a.real(), init.a.imag(), init.m.real(), init.m.imag(), init.b.real(), init.b.imag()}}};

    w.header({"t", "re_a", "im_a", "re_m", "im_m", "re_b", "im_b", "n_a", "n_m"});
    Observer obs{[&](const TrajectoryState& s) {
                     w.cell(s.t).cell(s.a.real()).cell(s.a.imag()).cell(s.m.real()).cell(s.m.imag()).cell(s.b.real())
                         .cell(s.b.imag()).cell(std::norm(s.a)).cell(std::norm(s.m)).end_row();
                 },
                 f.stride};
    const auto res = integrate(init, ctx.params, dt, f.t_max, tol, obs);
    const auto& s = res.state;
    w.comment("outcome: " + std::string(to_string(res.outcome)) + "," + csv::format_double(s.t) + "," +
              csv::format_double(std::norm(s.a)) + "," + csv::format_double(std::norm(s.m)));
}

void run_check(Context& ctx, csv::Writer& w) {
    const double unit = ctx.params.delta_c != 0.0 ? std::abs(ctx.params.delta_c) : 1.0;
    const auto dressing = dressing_for(ctx);
    w.header({"g_a", "pt_phase", "max_abs_im", "coalescence", "vieta_residual"});
    for (double ratio : {0.5, 1.0, 1.5}) {
        auto p = ctx.params;
        p.g_a = ratio * unit;
        const auto cubic = characteristic_cubic(build_effective_matrix(p, dressing));
        const auto s = solve_cubic(cubic);
        const auto& l = s.eigenvalues;
        double im = 0.0;
        for (const auto& x : l) im = std::max(im, std::abs(x.imag()));
        const double scale = std::max({1.0, std::abs(cubic.r), std::abs(cubic.s), std::abs(cubic.t)});
        const double vieta = std::max({std::abs(-(l[0] + l[1] + l[2]) - cubic.r),
                                       std::abs(l[0] * l[1] + l[0] * l[2] + l[1] * l[2] - cubic.s),
                                       std::abs(-l[0] * l[1] * l[2] - cubic.t)}) / scale;
        w.cell(p.g_a).cell(to_string(s.pt_phase)).cell(im).cell(s.coalescence).cell(vieta).end_row();
        const auto printed = printed_cubic(p, dressing);
        w.comment("printed-cubic: g_a=" + csv::format_double(p.g_a) +
                  " dr=" + csv::format_double(std::abs(printed.r - cubic.r)) +
                  " ds=" + csv::format_double(std::abs(printed.s - cubic.s)) +
                  " dt=" + csv::format_double(std::abs(printed.t - cubic.t)));
    }
}

} // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectrum, bistability and potential solver for a driven non-Hermitian cavity magnomechanical system",
                 "magnomech"};
    app.set_version_flag("--version", MAGNOMECH_VERSION);
    app.require_subcommand(1, 1);
    app.fallthrough();

    std::string config_path, out_path = "-", kernel_name = "langevin", dressing_name = "bare";
    std::vector<std::string> sets;
    int threads = 0;
    app.add_option("--config", config_path, "Config file ([dimensionless] or [physical] block)");
    app.add_option("--set", sets, "Override a parameter or run key: key=value (repeatable)");
    app.add_option("--out", out_path, "Output path, - for standard output");
    app.add_option("--threads", threads, "Worker threads (default: MAGNOMECH_THREADS or 1)")->check(CLI::NonNegativeNumber);
    app.add_option("--kernel", kernel_name, "Steady-state kernel")->check(CLI::IsMember({"langevin", "conjugate"}));
    app.add_option("--dressing", dressing_name, "Effective-matrix dressing")->check(CLI::IsMember({"bare", "dressed"}));

    auto* spectrum_cmd = app.add_subcommand("spectrum-sweep", "Eigenvalues and PT phase along scan_axis");
    auto* ep_cmd = app.add_subcommand("ep-find", "Exceptional-point candidates along scan_axis");
    auto* bist_cmd = app.add_subcommand("bistability-sweep", "All steady states along sweep_axis");
    auto* hyst_cmd = app.add_subcommand("hysteresis", "Up/down branches along sweep_axis");
    auto* pot_cmd = app.add_subcommand("potential-grid", "Effective potential samples and critical points");
    auto* sim_cmd = app.add_subcommand("simulate", "Time integration of the equations of motion");
    auto* check_cmd = app.add_subcommand("check", "PT phase at G_a/|Delta_c| in {0.5, 1, 1.5}");

    std::string form_name = "quasi", plot_script;
    pot_cmd->add_option("--form", form_name, "Potential functional: quasi or energy")
        ->check(CLI::IsMember({"quasi", "energy"}));
    pot_cmd->add_option("--plot-script", plot_script, "Also write a gnuplot contour script to this path");

    SimulateFlags sim;
    sim_cmd->add_option("--init", sim.init, "Initial state re_a,im_a,re_m,im_m,re_b,im_b");
    sim_cmd->add_option("--seed", sim.seed, "Random initial state seed (ignored with --init)");
    sim_cmd->add_option("--dt", sim.dt, "Step size (default 0.01 / max rate)");
    sim_cmd->add_option("--t-max", sim.t_max, "Integration horizon");
    sim_cmd->add_option("--stride", sim.stride, "Emit every stride-th step")->check(CLI::PositiveNumber);

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << MAGNOMECH_VERSION << '\n';
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    }

    const auto started = std::chrono::steady_clock::now();
    Context ctx;
    ctx.subcommand = app.get_subcommands().front()->get_name();
    for (const auto& k : kRunKeys) ctx.run[k.name] = k.fallback;
    ctx.kernel = kernel_name == "conjugate" ? Kernel::ConjugatePhase : Kernel::LangevinConsistent;
    ctx.dressed = dressing_name == "dressed";
    ctx.threads = resolve_threads(threads);

    try {
        if (!config_path.empty()) ctx.params = load_config_file(config_path);
        apply_sets(ctx, sets);
        ctx.params.validate();

        std::ostringstream body;
        csv::Writer w(body);
        if (spectrum_cmd->parsed()) run_spectrum_sweep(ctx, w);
        else if (ep_cmd->parsed()) run_ep_find(ctx, w);
        else if (bist_cmd->parsed()) run_bistability_sweep(ctx, w);
        else if (hyst_cmd->parsed()) run_hysteresis(ctx, w);
        else if (pot_cmd->parsed()) run_potential_grid(ctx, w, parse_potential_form(form_name));
        else if (sim_cmd->parsed()) run_simulate(ctx, w, sim);
        else if (check_cmd->parsed()) run_check(ctx, w);

        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        json run = json::object();
        for (const auto& [k, v] : ctx.run) run[k] = v;
        json manifest = {{"subcommand", ctx.subcommand},
                         {"version", MAGNOMECH_VERSION},
                         {"params", params_json(ctx.params)},
                         {"kernel", to_string(ctx.kernel)},
                         {"dressing", ctx.dressed ? "dressed" : "bare"},
                         {"run", run},
                         {"descriptor", ctx.extra},
                         {"duration_s", seconds}};
        const std::string text = "# manifest: " + manifest.dump() + "\n" + body.str();

        if (out_path == "-") {
            out << text;
        } else {
            std::ofstream f(out_path, std::ios::binary);
            if (!f) throw UsageError("cannot open output file '" + out_path + "'");
            f << text;
            if (!plot_script.empty()) {
                std::ofstream ps(plot_script);
                if (!ps) throw UsageError("cannot open plot script path '" + plot_script + "'");
                ps << "set datafile separator ','\nset datafile commentschars '#'\nset view map\n"
                   << "set xlabel 'n_a'\nset ylabel 'n_m'\nset contour base\nset cntrparam levels 30\n"
                   << "unset surface\nset key off\n"
                   << "splot '" << out_path << "' every ::1 using 1:2:3 with lines\n";
            }
        }
        if (!plot_script.empty() && out_path == "-")
            err << "warning: --plot-script ignored when writing to standard output\n";
        return kOk;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << '\n';
        return kValidation;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kValidation;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return kValidation;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::invalid_argument& e) {
        err << "validation error: " << e.what() << '\n';
        return kValidation;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    }
}

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return dispatch(args, std::cout, std::cerr);
}

} // namespace magnomech::cli

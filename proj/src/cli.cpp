#include "slv/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "slv/classifier.hpp"
#include "slv/config.hpp"
#include "slv/levy.hpp"
#include "slv/lyapunov.hpp"
#include "slv/montecarlo.hpp"

namespace slv {

namespace {

constexpr const char* kVersion = "0.1.0";

// shortest round-trip representation, '.' decimal separator
std::string num(double v) { return nlohmann::json(v).dump(); }

void write_text(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary); // LF line endings as-is
    if (!out) throw ConfigError("cannot open output file: " + out_path);
    out << text;
}

ExperimentConfig load_model_config(const std::string& path) {
    if (path.empty()) throw ConfigError("--model <config> is required");
    ExperimentConfig cfg = load_config(path);
    if (!cfg.has_model) throw ConfigError("config has no [model] section: " + path);
    return cfg;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    if (!(lo > 0 && hi > lo)) throw ConfigError("need 0 < min < max");
    if (n < 2) throw ConfigError("need at least two grid points");
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i)
        g[i] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1));
    return g;
}

nlohmann::json estimate_json(const EstimateResult& r) {
    return nlohmann::json{
        {"n", r.n},
        {"successes", r.successes},
        {"censored", r.censored},
        {"errors", r.errors},
        {"exploded", r.exploded},
        {"p_hat", r.p_hat},
        {"ci_low", r.ci_low},
        {"ci_high", r.ci_high},
        {"mean_tau_y", r.mean_tau_y},
        {"sd_tau_y", r.sd_tau_y},
        {"config",
         {{"dt", r.dt}, {"tmax", r.t_max}, {"eps", r.eps_abs}, {"seed", r.seed}}}};
}

std::string estimate_csv_header() {
    return "n,successes,censored,errors,exploded,p_hat,ci_low,ci_high,"
           "mean_tau_y,sd_tau_y,dt,tmax,eps,seed\n";
}

std::string estimate_csv_row(const EstimateResult& r) {
    std::ostringstream row;
    row << r.n << ',' << r.successes << ',' << r.censored << ',' << r.errors
        << ',' << r.exploded << ',' << num(r.p_hat) << ',' << num(r.ci_low)
        << ',' << num(r.ci_high) << ',' << num(r.mean_tau_y) << ','
        << num(r.sd_tau_y) << ',' << num(r.dt) << ',' << num(r.t_max) << ','
        << num(r.eps_abs) << ',' << r.seed << '\n';
    return row.str();
}

std::string chosen_format(const RunConfig& run) {
    if (!run.format.empty()) return run.format;
    if (run.out.size() >= 5 && run.out.rfind(".json") == run.out.size() - 5)
        return "json";
    return "csv";
}

struct CommonFlags {
    std::string model_path;
    double dt = -1, tmax = -1, eps = -1, x0 = -1, y0 = -1;
    std::uint64_t n = 0;
    bool n_set = false, seed_set = false;
    std::uint64_t seed = 0;
    int threads = 0;
    std::string out, format;

    void attach(CLI::App* cmd, bool with_run) {
        cmd->add_option("--model,-m", model_path, "model/experiment config file");
        cmd->add_option("--dt", dt, "step size");
        cmd->add_option("--tmax", tmax, "time horizon");
        cmd->add_option("--eps", eps, "absorption threshold");
        cmd->add_option("--x0", x0, "initial X");
        cmd->add_option("--y0", y0, "initial Y");
        if (with_run) {
            cmd->add_option("--n", n, "replica count")->each([this](std::string) {
                n_set = true;
            });
            cmd->add_option("--seed", seed, "base seed")->each([this](std::string) {
                seed_set = true;
            });
            cmd->add_option("--threads", threads, "worker threads");
            cmd->add_option("--out", out, "output path (default stdout)");
            cmd->add_option("--format", format, "csv or json");
        } else {
            cmd->add_option("--out", out, "output path (default stdout)");
        }
    }

    ExperimentConfig resolve() const {
        ExperimentConfig cfg = load_model_config(model_path);
        if (dt > 0) cfg.sim.dt = dt;
        if (tmax > 0) cfg.sim.t_max = tmax;
        if (eps > 0) cfg.sim.eps_abs = eps;
        if (x0 > 0) cfg.sim.x0 = x0;
        if (y0 > 0) cfg.sim.y0 = y0;
        if (n_set) cfg.run.n = n;
        if (seed_set) cfg.run.seed = seed;
        if (threads > 0) cfg.run.threads = threads;
        if (!out.empty()) cfg.run.out = out;
        if (!format.empty()) {
            if (format != "csv" && format != "json")
                throw ConfigError("format must be 'csv' or 'json'");
            cfg.run.format = format;
        }
        return cfg;
    }
};

int cmd_classify(const CommonFlags& flags) {
    const ExperimentConfig cfg = flags.resolve();
    const RegimeVerdict v = classify(cfg.model);
    std::cout << verdict_name(v.verdict);
    if (!v.fired_rule.empty()) std::cout << " rule=" << v.fired_rule;
    std::cout << "\n";
    nlohmann::json detail{
        {"verdict", verdict_name(v.verdict)},
        {"rule", v.fired_rule},
        {"p", v.exponents.p},
        {"q", v.exponents.q},
        {"a", v.exponents.a},
        {"b", v.exponents.b},
        {"crit", v.crit},
        {"boundary_gap",
         v.boundary_gap ? nlohmann::json(*v.boundary_gap) : nlohmann::json()}};
    if (!v.note.empty()) detail["note"] = v.note;
    write_text(cfg.run.out, detail.dump() + "\n");
    return 0;
}

int cmd_coeff_table(const CommonFlags& flags, double umin, double umax,
                    int points) {
    const ExperimentConfig cfg = flags.resolve();
    std::ostringstream csv;
    csv << "u,a1,a2,a3,b1,b2,b3,theta,kappa\n";
    for (double u : log_grid(umin, umax, points)) {
        csv << num(u);
        for (Coefficient c :
             {Coefficient::A1, Coefficient::A2, Coefficient::A3, Coefficient::B1,
              Coefficient::B2, Coefficient::B3, Coefficient::Theta,
              Coefficient::Kappa})
            csv << ',' << num(eval_power_coefficient(cfg.model, c, u));
        csv << '\n';
    }
    write_text(cfg.run.out, csv.str());
    return 0;
}

int cmd_h_table(const CommonFlags& flags, double umin, double umax, int points,
                double delta) {
    const ExperimentConfig cfg = flags.resolve();
    const LevyMeasureSpec mu = LevyMeasureSpec::stable(cfg.model.alpha1);
    const LevyMeasureSpec nu = LevyMeasureSpec::stable(cfg.model.alpha2);
    std::ostringstream csv;
    csv << "u,delta,H1,H2,G10,G20\n";
    for (double u : log_grid(umin, umax, points)) {
        csv << num(u) << ',' << num(delta) << ',' << num(h_delta(mu, delta, u))
            << ',' << num(h_delta(nu, delta, u)) << ',' << num(g10(cfg.model, u))
            << ',' << num(g20(cfg.model, u)) << '\n';
    }
    write_text(cfg.run.out, csv.str());
    return 0;
}

int cmd_simulate(const CommonFlags& flags, std::uint64_t snapshot_stride,
                 const std::string& snapshot_out) {
    ExperimentConfig cfg = flags.resolve();
    cfg.sim.validate();
    std::ostringstream csv;
    csv << "replica,final_x,final_y,tau_x,tau_y,absorbed_y,min_y,steps\n";
    std::ostringstream snap;
    snap << "t,x,y\n";
    for (std::uint64_t i = 0; i < cfg.run.n; ++i) {
        SimConfig sim = cfg.sim;
        sim.snapshot_stride = (i == 0) ? snapshot_stride : 0;
        const TrajectoryOutcome o =
            simulate_path(cfg.model, sim, sim.x0, sim.y0,
                          RngStream(cfg.run.seed, i));
        csv << i << ',' << num(o.final_x) << ',' << num(o.final_y) << ',';
        if (o.tau_x) csv << num(*o.tau_x);
        csv << ',';
        if (o.tau_y) csv << num(*o.tau_y);
        csv << ',' << (o.tau_y ? 1 : 0) << ',' << num(o.min_y) << ','
            << o.steps_taken << '\n';
        if (i == 0)
            for (const Snapshot& s : o.snapshots)
                snap << num(s.t) << ',' << num(s.x) << ',' << num(s.y) << '\n';
    }
    write_text(cfg.run.out, csv.str());
    if (!snapshot_out.empty()) write_text(snapshot_out, snap.str());
    return 0;
}

int cmd_estimate(const CommonFlags& flags) {
    const ExperimentConfig cfg = flags.resolve();
    const EstimateResult r = estimate_extinction(cfg.model, cfg.sim, cfg.run.n,
                                                 cfg.run.seed, cfg.run.threads);
    if (chosen_format(cfg.run) == "json")
        write_text(cfg.run.out, estimate_json(r).dump(2) + "\n");
    else
        write_text(cfg.run.out, estimate_csv_header() + estimate_csv_row(r));
    return 0;
}

int cmd_couple_check(const CommonFlags& flags, double drift_shift, double tol) {
    const ExperimentConfig cfg = flags.resolve();
    const PowerModel& m = cfg.model;
    const CompiledModel cm = CompiledModel::compile(m);
    CoupledSpec spec;
    spec.drift1 = [cm](double, double u) { return u > 0 ? cm.drift_x(u) : 0.0; };
    spec.drift2 = [cm, drift_shift](double, double u) {
        return (u > 0 ? cm.drift_x(u) : 0.0) + drift_shift;
    };
    if (m.a2 > 0)
        spec.diffusion = [cm](double u) {
            return u > 0 ? std::sqrt(cm.diffusion2_x(u)) : 0.0;
        };
    if (m.a3 > 0)
        spec.jump_rate = [cm](double u) {
            return u > 0 ? cm.jump_rate_x(u) : 0.0;
        };
    spec.alpha = m.alpha1;
    const CoupledReplicaStats st =
        coupled_replicas(spec, cfg.sim, cfg.sim.x0, cfg.sim.x0, cfg.run.n,
                         cfg.run.seed, cfg.run.threads, tol);
    nlohmann::json summary{{"n", st.n},
                           {"violations", st.violations},
                           {"replicas_with_violation", st.replicas_with_violation},
                           {"max_violation", st.max_violation},
                           {"errors", st.errors},
                           {"drift_shift", drift_shift},
                           {"tol", tol}};
    write_text(cfg.run.out, summary.dump(2) + "\n");
    if (st.errors > 0) return 3;
    return st.violations == 0 ? 0 : 4;
}

struct LyapunovFlags {
    std::string family = "inverse-power";
    double rho = 1.0;
    double lambda = 1.0, lambda2 = 1.0, r = 0.1, beta = 1.0;
    double c_star = 0.5, delta = 1.5, c1 = 0.05, c2 = 0.4, c3 = 0.2;
    double x_lo = 1e-3, x_hi = 10.0, y_lo = 1e-3, y_hi = 10.0;
    int nx = 50, ny = 50;
    std::string direction = "upper";
    std::string summary_out;
};

std::unique_ptr<TestFunction> make_family(const LyapunovFlags& f) {
    if (f.family == "inverse-power") return make_inverse_power(f.rho);
    if (f.family == "exp-ratio") return make_exp_ratio(f.lambda, f.r, f.beta);
    if (f.family == "exp-tan")
        return make_exp_tan(f.lambda, f.lambda2, f.r, f.c_star, f.delta, f.c1,
                            f.c2, f.c3);
    if (f.family == "one-dim-exp") return make_one_dim_exp(f.lambda, f.r);
    if (f.family == "constant") return make_constant();
    throw ConfigError("unknown test-function family: " + f.family);
}

int cmd_lyapunov(const CommonFlags& flags, const LyapunovFlags& lf) {
    const ExperimentConfig cfg = flags.resolve();
    const std::unique_ptr<TestFunction> g = make_family(lf);
    GridSpec grid;
    grid.x_lo = lf.x_lo;
    grid.x_hi = lf.x_hi;
    grid.y_lo = lf.y_lo;
    grid.y_hi = lf.y_hi;
    grid.nx = lf.nx;
    grid.ny = lf.ny;
    DriftDirection dir;
    if (lf.direction == "upper")
        dir = DriftDirection::Upper;
    else if (lf.direction == "lower")
        dir = DriftDirection::Lower;
    else
        throw ConfigError("direction must be 'upper' or 'lower'");

    // per-point table
    std::ostringstream csv;
    csv << "x,y,g,Lg,ratio\n";
    auto axis = [&](double lo, double hi, int n) {
        std::vector<double> pts(n);
        for (int i = 0; i < n; ++i)
            pts[i] = n == 1 ? lo
                            : std::exp(std::log(lo) +
                                       (std::log(hi) - std::log(lo)) * i / (n - 1));
        return pts;
    };
    for (double x : axis(grid.x_lo, grid.x_hi, grid.nx)) {
        for (double y : axis(grid.y_lo, grid.y_hi, grid.ny)) {
            double lg = std::numeric_limits<double>::quiet_NaN();
            try {
                lg = apply_generator(cfg.model, *g, x, y);
            } catch (const Error&) {
            }
            const double gv = g->value(x, y);
            csv << num(x) << ',' << num(y) << ',' << num(gv) << ',' << num(lg)
                << ',' << num(lg / gv) << '\n';
        }
    }
    write_text(cfg.run.out, csv.str());

    const DriftReport rep =
        drift_check(cfg.model, *g, grid, dir, std::max(1, cfg.run.threads));
    nlohmann::json summary{{"direction", lf.direction},
                           {"extremum", rep.extremum},
                           {"arg_x", rep.arg_x},
                           {"arg_y", rep.arg_y},
                           {"refined_extremum", rep.refined_extremum},
                           {"refinement_rel_change", rep.refinement_rel_change},
                           {"nan_count", rep.nan_count},
                           {"points", rep.points},
                           {"vacuous", rep.vacuous},
                           {"pass", rep.pass}};
    write_text(lf.summary_out, summary.dump(2) + "\n");
    return rep.pass ? 0 : 4;
}

std::vector<std::string> split_csv_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ',')) {
        if (!cur.empty()) out.push_back(cur);
    }
    if (out.empty()) throw ConfigError("empty sweep value list");
    return out;
}

int cmd_sweep(const CommonFlags& flags, const std::string& key,
              const std::string& values, const std::string& key2,
              const std::string& values2) {
    if (key.empty()) throw ConfigError("sweep requires --key");
    const std::vector<std::string> vals = split_csv_list(values);
    const std::vector<std::string> vals2 =
        key2.empty() ? std::vector<std::string>{""} : split_csv_list(values2);

    const ExperimentConfig base = flags.resolve();
    std::ostringstream csv;
    csv << key;
    if (!key2.empty()) csv << ',' << key2;
    csv << ",n,successes,censored,errors,exploded,p_hat,ci_low,ci_high,"
           "mean_tau_y,sd_tau_y,dt,tmax,eps,seed\n";
    for (const std::string& v : vals) {
        for (const std::string& v2 : vals2) {
            ExperimentConfig cfg = base;
            apply_override(cfg, key, v);
            if (!key2.empty()) apply_override(cfg, key2, v2);
            const EstimateResult r =
                estimate_extinction(cfg.model, cfg.sim, cfg.run.n, cfg.run.seed,
                                    cfg.run.threads);
            csv << v;
            if (!key2.empty()) csv << ',' << v2;
            csv << ',' << estimate_csv_row(r);
        }
    }
    write_text(base.run.out, csv.str());
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"two-type branching system simulator and analyzer"};
    app.require_subcommand(1);

    CommonFlags classify_flags;
    CLI::App* classify_cmd =
        app.add_subcommand("classify", "regime verdict for a model config");
    classify_flags.attach(classify_cmd, true);

    CommonFlags coeff_flags;
    double coeff_umin = 1e-3, coeff_umax = 1e2;
    int coeff_points = 50;
    CLI::App* coeff_cmd =
        app.add_subcommand("coeff-table", "coefficient maps on a log grid");
    coeff_flags.attach(coeff_cmd, true);
    coeff_cmd->add_option("--umin", coeff_umin, "grid start");
    coeff_cmd->add_option("--umax", coeff_umax, "grid end");
    coeff_cmd->add_option("--points", coeff_points, "grid size");

    CommonFlags h_flags;
    double h_umin = 1e-3, h_umax = 1e2, h_delta_val = 0.0;
    int h_points = 50;
    CLI::App* h_cmd =
        app.add_subcommand("h-table", "jump-moment and drift aggregates");
    h_flags.attach(h_cmd, true);
    h_cmd->add_option("--umin", h_umin, "grid start");
    h_cmd->add_option("--umax", h_umax, "grid end");
    h_cmd->add_option("--points", h_points, "grid size");
    h_cmd->add_option("--delta", h_delta_val, "H exponent");

    CommonFlags sim_flags;
    std::uint64_t sim_stride = 0;
    std::string sim_snapshot_out;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "per-path outcomes");
    sim_flags.attach(sim_cmd, true);
    sim_cmd->add_option("--snapshot-stride", sim_stride,
                        "record replica 0 every k steps");
    sim_cmd->add_option("--snapshot-out", sim_snapshot_out,
                        "snapshot CSV path");

    CommonFlags est_flags;
    CLI::App* est_cmd =
        app.add_subcommand("estimate", "extinction-probability estimate");
    est_flags.attach(est_cmd, true);

    CommonFlags couple_flags;
    double couple_shift = 0.1, couple_tol = 1e-12;
    CLI::App* couple_cmd = app.add_subcommand(
        "couple-check", "shared-noise ordering check on the X dynamics");
    couple_flags.attach(couple_cmd, true);
    couple_cmd->add_option("--drift-shift", couple_shift,
                           "added to the second path's drift");
    couple_cmd->add_option("--tol", couple_tol, "ordering tolerance");

    CommonFlags lyap_flags;
    LyapunovFlags lf;
    CLI::App* lyap_cmd =
        app.add_subcommand("lyapunov", "generator drift check on a grid");
    lyap_flags.attach(lyap_cmd, true);
    lyap_cmd->add_option("--family", lf.family,
                         "inverse-power|exp-ratio|exp-tan|one-dim-exp|constant");
    lyap_cmd->add_option("--rho", lf.rho, "inverse-power exponent");
    lyap_cmd->add_option("--lambda", lf.lambda, "exponential rate");
    lyap_cmd->add_option("--lambda2", lf.lambda2, "second rate (exp-tan)");
    lyap_cmd->add_option("--r", lf.r, "fractional exponent");
    lyap_cmd->add_option("--beta", lf.beta, "ratio exponent (exp-ratio)");
    lyap_cmd->add_option("--cstar", lf.c_star, "support bound (exp-tan)");
    lyap_cmd->add_option("--delta", lf.delta, "barrier exponent (exp-tan)");
    lyap_cmd->add_option("--c1", lf.c1, "exp-tan cut 1");
    lyap_cmd->add_option("--c2", lf.c2, "exp-tan cut 2");
    lyap_cmd->add_option("--c3", lf.c3, "exp-tan cut 3");
    lyap_cmd->add_option("--xlo", lf.x_lo, "grid x start");
    lyap_cmd->add_option("--xhi", lf.x_hi, "grid x end");
    lyap_cmd->add_option("--ylo", lf.y_lo, "grid y start");
    lyap_cmd->add_option("--yhi", lf.y_hi, "grid y end");
    lyap_cmd->add_option("--nx", lf.nx, "grid x size");
    lyap_cmd->add_option("--ny", lf.ny, "grid y size");
    lyap_cmd->add_option("--direction", lf.direction, "upper|lower");
    lyap_cmd->add_option("--summary-out", lf.summary_out, "JSON summary path");

    CommonFlags sweep_flags;
    std::string sweep_key, sweep_values, sweep_key2, sweep_values2;
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "estimate over a one- or two-key grid");
    sweep_flags.attach(sweep_cmd, true);
    sweep_cmd->add_option("--key", sweep_key, "swept key (model or sim)");
    sweep_cmd->add_option("--values", sweep_values, "comma-separated values");
    sweep_cmd->add_option("--key2", sweep_key2, "second swept key");
    sweep_cmd->add_option("--values2", sweep_values2,
                          "values for the second key");

    CLI::App* version_cmd = app.add_subcommand("version", "print version");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        std::cerr << "ERROR 2: " << e.what() << "\n";
        return 2;
    }

    try {
        if (version_cmd->parsed()) {
            std::cout << "slv " << kVersion << "\n";
            return 0;
        }
        if (classify_cmd->parsed()) return cmd_classify(classify_flags);
        if (coeff_cmd->parsed())
            return cmd_coeff_table(coeff_flags, coeff_umin, coeff_umax,
                                   coeff_points);
        if (h_cmd->parsed())
            return cmd_h_table(h_flags, h_umin, h_umax, h_points, h_delta_val);
        if (sim_cmd->parsed())
            return cmd_simulate(sim_flags, sim_stride, sim_snapshot_out);
        if (est_cmd->parsed()) return cmd_estimate(est_flags);
        if (couple_cmd->parsed())
            return cmd_couple_check(couple_flags, couple_shift, couple_tol);
        if (lyap_cmd->parsed()) return cmd_lyapunov(lyap_flags, lf);
        if (sweep_cmd->parsed())
            return cmd_sweep(sweep_flags, sweep_key, sweep_values, sweep_key2,
                             sweep_values2);
        std::cerr << "ERROR 2: no subcommand\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "ERROR 2: " << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "ERROR 2: " << e.what() << "\n";
        return 2;
    } catch (const ModelError& e) {
        std::cerr << "ERROR 2: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "ERROR 2: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "ERROR 3: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "ERROR 3: " << e.what() << "\n";
        return 3;
    }
}

int run_cli(const std::vector<std::string>& args) {
    std::vector<std::string> full;
    full.reserve(args.size() + 1);
    full.push_back("slv");
    full.insert(full.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    argv.reserve(full.size());
    for (const std::string& s : full) argv.push_back(s.c_str());
    return run_cli(int(argv.size()), argv.data());
}

} // namespace slv

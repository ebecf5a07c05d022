// omsq: steady states, stability, covariances and mechanical squeezing of the
// nonlinear optomechanical cavity model, from the command line.
//
// Exit codes are part of the interface: 0 ok, 1 selftest failure, 2 config
// error, 3 convergence failure, 4 unstable parameters, 5 oracle mismatch.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "omsq/config.hpp"
#include "omsq/csv.hpp"
#include "omsq/linear.hpp"
#include "omsq/lyapunov.hpp"
#include "omsq/meanfield.hpp"
#include "omsq/selftest.hpp"
#include "omsq/sha1.hpp"
#include "omsq/squeezing.hpp"
#include "omsq/sweep.hpp"

#include "svg_plot.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace omsq;

namespace {

enum ExitCode {
    kOk = 0,
    kSelftestFailure = 1,
    kConfigError = 2,
    kConvergenceFailure = 3,
    kUnstableParameters = 4,
    kOracleMismatch = 5,
};

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_given = false;
    int threads = 2;
    std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_config) {
    auto* copt = cmd->add_option("--config", o.config_path, "input config file");
    if (needs_config) copt->required();
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_option("--seed", o.seed, "random seed")
        ->each([&o](const std::string&) { o.seed_given = true; });
    cmd->add_option("--threads", o.threads, "worker threads");
    cmd->add_option("--format", o.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
}

void write_text(const fs::path& p, const std::string& text) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot write " + p.string());
    out << text;
}

json cov_to_json(const CovarianceResult& cov,
                 const std::vector<std::string>& labels) {
    json j;
    j["method"] = cov.method == CovarianceMethod::algebraic
                      ? "algebraic"
                      : (cov.method == CovarianceMethod::ode ? "ode" : "stochastic");
    j["residual"] = cov.residual;
    j["margin"] = cov.margin;
    j["ill_conditioned"] = cov.ill_conditioned;
    j["labels"] = labels;
    json upper = json::array();
    for (int i = 0; i < cov.V.rows(); ++i)
        for (int k = i; k < cov.V.cols(); ++k)
            upper.push_back({{"i", i}, {"j", k}, {"v", cov.V(i, k)}});
    j["V_upper"] = upper;
    j["symplectic_eigenvalues"] = symplectic_eigenvalues(cov.V);
    return j;
}

// ------------------------------------------------------------------ steady

int cmd_steady(const CommonOpts& o) {
    const Config cfg = load_config(o.config_path);
    if (cfg.mode != ConfigMode::physical) {
        std::cerr << "steady needs a [physical] config\n";
        return kConfigError;
    }
    require_valid(cfg.physical);
    MeanFieldResult r;
    try {
        r = solve_steady_state(cfg.physical);
    } catch (const NoConvergence& e) {
        std::cerr << "no convergence: " << e.what() << "\n";
        return kConvergenceFailure;
    }
    const EffectiveParams e = effective_params(r.state, cfg.physical);

    std::printf("steady state: |alpha1| = %.6g, |alpha2| = %.6g, |beta| = %.6g\n",
                std::abs(r.state.alpha1), std::abs(r.state.alpha2),
                std::abs(r.state.beta));
    std::printf("derived: Lambda = %.6g, |chi| = %.6g, G1 = %.6g, "
                "delta_c = %.6g, phi = %.6g, phi_b = %.6g\n",
                e.Lambda, e.chi_mag, e.G1_mag, e.delta_c, e.phi, e.phi_b);
    std::printf("residual = %.3e%s\n", r.residual,
                r.ambiguous_branch ? "  [ambiguous branch: another fixed point "
                                     "is reachable nearby]"
                                   : "");

    if (o.format == "json") {
        json j;
        j["alpha1"] = {r.state.alpha1.real(), r.state.alpha1.imag()};
        j["alpha2"] = {r.state.alpha2.real(), r.state.alpha2.imag()};
        j["beta"] = {r.state.beta.real(), r.state.beta.imag()};
        j["residual"] = r.residual;
        j["ambiguous_branch"] = r.ambiguous_branch;
        j["effective"] = {{"delta_c", e.delta_c},
                          {"delta_c_prime", e.delta_c_prime},
                          {"G1", e.G1_mag},
                          {"G2", e.G2_mag},
                          {"Lambda", e.Lambda},
                          {"chi_mag", e.chi_mag},
                          {"phi", e.phi},
                          {"phi_b", e.phi_b}};
        write_text(fs::path(o.out_dir) / "steady.json", j.dump(2) + "\n");
    } else {
        std::string csv = csv_row(
            {"P1", "P2", "chi0_mag", "alpha1_re", "alpha1_im", "alpha2_re",
             "alpha2_im", "beta_re", "beta_im", "mf_residual", "delta_c",
             "delta_c_prime", "G1", "G2", "Lambda", "chi_mag", "phi", "phi_b"});
        csv += csv_row_values(
            {cfg.physical.P1, cfg.physical.P2, cfg.physical.chi0_mag,
             r.state.alpha1.real(), r.state.alpha1.imag(),
             r.state.alpha2.real(), r.state.alpha2.imag(), r.state.beta.real(),
             r.state.beta.imag(), r.residual, e.delta_c, e.delta_c_prime,
             e.G1_mag, e.G2_mag, e.Lambda, e.chi_mag, e.phi, e.phi_b});
        write_text(fs::path(o.out_dir) / "steady.csv", csv);
    }
    return kOk;
}

// ----------------------------------------------------------------- squeeze

int cmd_squeeze(const CommonOpts& o) {
    const Config cfg = load_config(o.config_path);
    if (cfg.mode != ConfigMode::effective) {
        std::cerr << "squeeze needs an [effective] config\n";
        return kConfigError;
    }
    require_valid(cfg.effective);
    const LinearModel m = build_reduced(cfg.effective);
    const StabilityResult st = is_stable(m);
    if (!st.stable) {
        std::printf("unstable parameters: margin = %.6g (no steady state)\n",
                    st.margin);
        return kUnstableParameters;
    }
    const CovarianceResult cov = solve_steady(m);
    const SqueezingReport rep = squeezing_report(cov.V);

    std::printf("S(theta=0) = %.4f dB, S_opt = %.4f dB at theta = %.6g, "
                "margin = %.6g\n",
                squeezing_db(cov.V, 0.0), rep.s_opt_db, rep.theta_opt, st.margin);
    std::printf("Var(X_b) = %.6g, Var(Y_b) = %.6g, Cov = %.6g, beats 3 dB: %s%s\n",
                rep.var_Xb, rep.var_Yb, rep.cov_XbYb,
                rep.beats_3db ? "yes" : "no",
                rep.degenerate ? "  [degenerate: angle-independent]" : "");

    if (o.format == "json") {
        json j = cov_to_json(cov, m.labels);
        j["S0_db"] = squeezing_db(cov.V, 0.0);
        j["S_opt_db"] = rep.s_opt_db;
        j["theta_opt"] = rep.theta_opt;
        j["beats_3db"] = rep.beats_3db;
        j["degenerate"] = rep.degenerate;
        write_text(fs::path(o.out_dir) / "squeeze.json", j.dump(2) + "\n");
    } else {
        std::string csv = csv_row({"theta", "variance", "S_db"});
        for (const auto& pt : rep.curve)
            csv += csv_row_values({pt.theta, pt.variance, pt.s_db});
        write_text(fs::path(o.out_dir) / "squeeze.csv", csv);
    }
    return kOk;
}

// ------------------------------------------------------------------- sweep

void emit_sweep(const SweepSpec& spec, const SweepResult& res,
                const std::string& out_dir, bool with_plot) {
    write_text(fs::path(out_dir) / (spec.name + ".csv"), res.to_csv());
    write_text(fs::path(out_dir) / (spec.name + ".meta"), res.meta_text());
    if (!with_plot) return;

    const auto col = [&](const std::string& name) -> int {
        const auto it = std::find(res.output_names.begin(),
                                  res.output_names.end(), name);
        return it == res.output_names.end()
                   ? -1
                   : static_cast<int>(it - res.output_names.begin());
    };
    int yc = col("S0_db");
    std::string y_name = "S0_db";
    if (yc < 0 && col("Lambda") >= 0) { yc = col("Lambda"); y_name = "Lambda"; }
    if (yc < 0 && col("margin") >= 0) { yc = col("margin"); y_name = "margin"; }
    if (yc < 0) return;

    std::string svg;
    if (spec.axes.size() == 1 || spec.axes[1].grid().size() <= 8) {
        std::vector<plot::Series> series;
        const auto g2 = spec.axes.size() == 2 ? spec.axes[1].grid()
                                              : std::vector<double>{0.0};
        for (size_t s = 0; s < g2.size(); ++s) {
            plot::Series ser;
            ser.label = spec.axes.size() == 2
                            ? spec.axes[1].name + " = " + format_double(g2[s])
                            : y_name;
            for (const auto& row : res.rows) {
                if (spec.axes.size() == 2 && row.axis_values[1] != g2[s]) continue;
                ser.x.push_back(row.axis_values[0]);
                ser.y.push_back(row.outputs[yc] ? *row.outputs[yc]
                                                : std::nan(""));
            }
            series.push_back(std::move(ser));
        }
        svg = plot::line_plot(series, spec.axes[0].name, y_name, spec.name);
    } else {
        const int nx = static_cast<int>(spec.axes[0].grid().size());
        const int ny = static_cast<int>(spec.axes[1].grid().size());
        std::vector<std::optional<double>> vals(
            static_cast<size_t>(nx) * ny);
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j)
                vals[static_cast<size_t>(j) * nx + i] =
                    res.rows[static_cast<size_t>(i) * ny + j].outputs[yc];
        svg = plot::heatmap(vals, nx, ny, spec.axes[0].min, spec.axes[0].max,
                            spec.axes[1].min, spec.axes[1].max,
                            spec.axes[0].name, spec.axes[1].name,
                            spec.name + " : " + y_name);
    }
    write_text(fs::path(out_dir) / (spec.name + ".svg"), svg);
}

int cmd_sweep(const CommonOpts& o, bool with_plot) {
    const Config cfg = load_config(o.config_path);
    if (!cfg.sweep.has_value()) {
        std::cerr << "sweep needs a [sweep] section\n";
        return kConfigError;
    }
    SweepSpec spec = *cfg.sweep;
    if (o.seed_given) spec.seed = o.seed;
    const SweepResult res = run(spec, {.threads = o.threads});
    emit_sweep(spec, res, o.out_dir, with_plot);
    std::printf("%s: %zu rows -> %s.csv (digest %s)\n", spec.name.c_str(),
                res.rows.size(), (fs::path(o.out_dir) / spec.name).c_str(),
                res.spec_digest.c_str());
    return kOk;
}

// ------------------------------------------------------------------ figure

int cmd_figure(const std::string& name, const CommonOpts& o) {
    if (name == "fig4") {
        // angle scans at the four (kappa1, |chi|) combinations
        std::string csv =
            csv_row({"panel", "kappa1", "chi_mag", "theta", "variance", "S_db"});
        std::vector<plot::Series> series;
        for (const SweepSpec& panel : figure_panels("fig4")) {
            const auto& e = std::get<EffectiveParams>(panel.base);
            const LinearModel m = build_reduced(e);
            if (!is_stable(m).stable) continue;
            const SqueezingReport rep = squeezing_report(solve_steady(m).V);
            plot::Series ser;
            ser.label = "kappa1 = " + format_double(e.kappa1) +
                        ", |chi| = " + format_double(e.chi_mag);
            for (const auto& pt : rep.curve) {
                csv += csv_escape(panel.name) + "," +
                       csv_row_values({e.kappa1, e.chi_mag, pt.theta,
                                       pt.variance, pt.s_db});
                ser.x.push_back(pt.theta);
                ser.y.push_back(pt.s_db);
            }
            series.push_back(std::move(ser));
        }
        write_text(fs::path(o.out_dir) / "fig4.csv", csv);
        write_text(fs::path(o.out_dir) / "fig4.svg",
                   plot::line_plot(series, "theta", "S_db", "fig4"));
        std::printf("fig4 -> %s/fig4.csv\n", o.out_dir.c_str());
        return kOk;
    }

    for (SweepSpec panel : figure_panels(name)) {
        if (o.seed_given) panel.seed = o.seed;
        const SweepResult res = run(panel, {.threads = o.threads});
        emit_sweep(panel, res, o.out_dir, true);
        std::printf("%s: %zu rows -> %s.csv\n", panel.name.c_str(),
                    res.rows.size(),
                    (fs::path(o.out_dir) / panel.name).c_str());
    }
    return kOk;
}

// ---------------------------------------------------------------- selftest

int cmd_selftest(const CommonOpts& o) {
    SelftestOptions opts;
    opts.threads = o.threads;
    if (o.seed_given) opts.seed = o.seed;
    int failures = 0;
    const auto results = run_selftest(opts, [&](const CheckResult& r) {
        std::printf("%s %s: %s\n", r.pass ? "[pass]" : "[FAIL]", r.name.c_str(),
                    r.detail.c_str());
        std::fflush(stdout);
    });
    for (const auto& r : results) failures += r.pass ? 0 : 1;
    std::printf("%zu checks, %d failed\n", results.size(), failures);
    return failures == 0 ? kOk : kSelftestFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mechanical squeezing of a nonlinear optomechanical cavity: "
                 "mean field, stability, covariances, squeezing, sweeps"};
    app.require_subcommand(1);

    CommonOpts steady_o, squeeze_o, sweep_o, figure_o, selftest_o;
    bool sweep_plot = false;
    std::string figure_name;

    add_common(app.add_subcommand("steady", "solve the classical steady state"),
               steady_o, true);
    add_common(app.add_subcommand("squeeze",
                                  "steady covariance and squeezing report"),
               squeeze_o, true);
    auto* sweep_cmd =
        app.add_subcommand("sweep", "run the [sweep] section of a config");
    add_common(sweep_cmd, sweep_o, true);
    sweep_cmd->add_flag("--plot", sweep_plot, "also write an svg rendering");
    auto* figure_cmd =
        app.add_subcommand("figure", "run a bundled preset (fig2..fig7)");
    figure_cmd->add_option("name", figure_name, "preset name")->required();
    add_common(figure_cmd, figure_o, false);
    add_common(app.add_subcommand("selftest", "run the verification suite"),
               selftest_o, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kConfigError;
    }

    try {
        if (app.got_subcommand("steady")) return cmd_steady(steady_o);
        if (app.got_subcommand("squeeze")) return cmd_squeeze(squeeze_o);
        if (app.got_subcommand("sweep")) return cmd_sweep(sweep_o, sweep_plot);
        if (app.got_subcommand("figure")) return cmd_figure(figure_name, figure_o);
        if (app.got_subcommand("selftest")) return cmd_selftest(selftest_o);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const UnknownPreset& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const InvalidParams& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const NoConvergence& e) {
        std::cerr << "convergence failure: " << e.what() << "\n";
        return kConvergenceFailure;
    } catch (const Unstable& e) {
        std::cerr << "unstable parameters: " << e.what() << "\n";
        return kUnstableParameters;
    } catch (const OracleMismatch& e) {
        std::cerr << "oracle mismatch: " << e.what() << "\n";
        return kOracleMismatch;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    }
    return kOk;
}

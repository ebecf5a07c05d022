#include "omsq/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>

#include "omsq/csv.hpp"
#include "omsq/linear.hpp"
#include "omsq/lyapunov.hpp"
#include "omsq/meanfield.hpp"
#include "omsq/rng.hpp"
#include "omsq/sha1.hpp"
#include "omsq/squeezing.hpp"

namespace omsq {

namespace {

// Entrywise covariance mismatch with a 1% scale floor: relative error on
// entries that are a vanishing fraction of the matrix scale carries no
// information, so tiny entries are compared against the floor instead.
double covariance_mismatch(const Eigen::MatrixXd& V1, const Eigen::MatrixXd& V2) {
    const double scale =
        std::max({V1.cwiseAbs().maxCoeff(), V2.cwiseAbs().maxCoeff(), 1e-300});
    double worst = 0.0;
    for (int i = 0; i < V1.rows(); ++i)
        for (int j = 0; j < V1.cols(); ++j) {
            const double denom = std::max(std::abs(V1(i, j)), 0.01 * scale);
            worst = std::max(worst, std::abs(V1(i, j) - V2(i, j)) / denom);
        }
    return worst;
}

const std::vector<std::string>& effective_output_names() {
    static const std::vector<std::string> names = {
        "margin", "var_Xb", "var_Yb", "cov_XbYb", "S0_db",
        "S_opt_db", "theta_opt", "lyap_residual", "symp_min",
    };
    return names;
}

const std::vector<std::string>& physical_output_names() {
    static const std::vector<std::string> names = {
        "mf_residual", "alpha1_re", "alpha1_im", "alpha2_re", "alpha2_im",
        "beta_re", "beta_im", "alpha1_abs", "alpha2_abs", "beta_abs",
        "phi_b", "Lambda", "chi_mag", "phi", "G1", "G2",
        "delta_c", "delta_c_prime",
        "margin", "var_Xb", "var_Yb", "cov_XbYb", "S0_db",
        "S_opt_db", "theta_opt", "lyap_residual", "symp_min",
    };
    return names;
}

struct PointOutput {
    std::map<std::string, double> values;
    bool stable = false;
    bool converged = true;
};

// The per-grid-point pipeline: (mean field if physical) -> reduced model ->
// stability -> (if stable) steady covariance -> squeezing.
PointOutput evaluate_point(const SweepSpec& spec,
                           const std::vector<double>& axis_values) {
    PointOutput out;
    EffectiveParams eff;

    if (spec.physical_mode()) {
        PhysicalParams p = std::get<PhysicalParams>(spec.base);
        for (size_t a = 0; a < spec.axes.size(); ++a)
            physical_field_setters().at(spec.axes[a].name)(p, axis_values[a]);
        require_valid(p);
        MeanFieldResult mf;
        try {
            mf = solve_steady_state(p);
        } catch (const NoConvergence& e) {
            out.converged = false;
            out.values["mf_residual"] = e.last_residual;
            return out;
        }
        eff = effective_params(mf.state, p);
        out.values["mf_residual"] = mf.residual;
        out.values["alpha1_re"] = mf.state.alpha1.real();
        out.values["alpha1_im"] = mf.state.alpha1.imag();
        out.values["alpha2_re"] = mf.state.alpha2.real();
        out.values["alpha2_im"] = mf.state.alpha2.imag();
        out.values["beta_re"] = mf.state.beta.real();
        out.values["beta_im"] = mf.state.beta.imag();
        out.values["alpha1_abs"] = std::abs(mf.state.alpha1);
        out.values["alpha2_abs"] = std::abs(mf.state.alpha2);
        out.values["beta_abs"] = std::abs(mf.state.beta);
        out.values["phi_b"] = eff.phi_b;
        out.values["Lambda"] = eff.Lambda;
        out.values["chi_mag"] = eff.chi_mag;
        out.values["phi"] = eff.phi;
        out.values["G1"] = eff.G1_mag;
        out.values["G2"] = eff.G2_mag;
        out.values["delta_c"] = eff.delta_c;
        out.values["delta_c_prime"] = eff.delta_c_prime;
    } else {
        eff = std::get<EffectiveParams>(spec.base);
        for (size_t a = 0; a < spec.axes.size(); ++a)
            effective_field_setters().at(spec.axes[a].name)(eff, axis_values[a]);
    }

    const LinearModel model = build_reduced(eff);
    const StabilityResult st = is_stable(model);
    out.values["margin"] = st.margin;
    out.stable = st.stable;
    if (!st.stable) return out; // squeezing columns stay empty

    const CovarianceResult cov = solve_steady(model);
    const SqueezingReport rep = squeezing_report(cov.V, 2);
    out.values["var_Xb"] = rep.var_Xb;
    out.values["var_Yb"] = rep.var_Yb;
    out.values["cov_XbYb"] = rep.cov_XbYb;
    out.values["S0_db"] = squeezing_db(cov.V, 0.0);
    out.values["S_opt_db"] = rep.s_opt_db;
    out.values["theta_opt"] = rep.theta_opt;
    out.values["lyap_residual"] = cov.residual;
    const auto nu = symplectic_eigenvalues(cov.V);
    out.values["symp_min"] = *std::min_element(nu.begin(), nu.end());
    return out;
}

LinearModel model_at_point(const SweepSpec& spec,
                           const std::vector<double>& axis_values) {
    EffectiveParams eff;
    if (spec.physical_mode()) {
        PhysicalParams p = std::get<PhysicalParams>(spec.base);
        for (size_t a = 0; a < spec.axes.size(); ++a)
            physical_field_setters().at(spec.axes[a].name)(p, axis_values[a]);
        eff = effective_params(solve_steady_state(p).state, p);
    } else {
        eff = std::get<EffectiveParams>(spec.base);
        for (size_t a = 0; a < spec.axes.size(); ++a)
            effective_field_setters().at(spec.axes[a].name)(eff, axis_values[a]);
    }
    return build_reduced(eff);
}

void validate_spec(const SweepSpec& spec) {
    if (spec.axes.empty() || spec.axes.size() > 2)
        throw InvalidParams({{"axes", "a sweep takes 1 or 2 axes",
                              static_cast<double>(spec.axes.size())}});
    for (const auto& ax : spec.axes) {
        const bool known = spec.physical_mode()
                               ? physical_field_setters().count(ax.name) > 0
                               : effective_field_setters().count(ax.name) > 0;
        if (!known)
            throw InvalidParams({{ax.name, "axis references no such field", 0.0}});
        if (ax.values.empty()) {
            if (ax.n_points < 1)
                throw InvalidParams({{ax.name, "n_points must be >= 1",
                                      static_cast<double>(ax.n_points)}});
            if (ax.n_points > 1 && !(ax.min < ax.max))
                throw InvalidParams({{ax.name, "min must be < max", ax.min}});
            if (ax.scale == AxisScale::log && !(ax.min > 0.0))
                throw InvalidParams({{ax.name, "log axis needs min > 0", ax.min}});
        }
    }
    if (!(spec.oracle_fraction >= 0.0 && spec.oracle_fraction <= 1.0))
        throw InvalidParams(
            {{"oracle_fraction", "must be in [0, 1]", spec.oracle_fraction}});
}

std::string dump_base(const SweepSpec& spec) {
    std::ostringstream os;
    if (spec.physical_mode()) {
        const auto& p = std::get<PhysicalParams>(spec.base);
        os << "[physical]\n";
        os << "omega_m_si = " << format_double(p.omega_m) << "\n";
        os << "omega_L = " << format_double(p.omega_L) << "\n";
        os << "delta_bar_c = " << format_double(p.delta_bar_c) << "\n";
        os << "kappa1 = " << format_double(p.kappa1) << "\n";
        os << "kappa2 = " << format_double(p.kappa2) << "\n";
        os << "gamma_m = " << format_double(p.gamma_m) << "\n";
        os << "g1 = " << format_double(p.g1) << "\n";
        os << "g2 = " << format_double(p.g2) << "\n";
        os << "eta = " << format_double(p.eta) << "\n";
        os << "chi0_mag = " << format_double(p.chi0_mag) << "\n";
        os << "chi0_phase = " << format_double(p.chi0_phase) << "\n";
        os << "P1 = " << format_double(p.P1) << "\n";
        os << "P2 = " << format_double(p.P2) << "\n";
        os << "n_th = " << format_double(p.n_th) << "\n";
    } else {
        const auto& e = std::get<EffectiveParams>(spec.base);
        os << "[effective]\n";
        os << "delta_c = " << format_double(e.delta_c) << "\n";
        os << "delta_c_prime = " << format_double(e.delta_c_prime) << "\n";
        os << "G1 = " << format_double(e.G1_mag) << "\n";
        os << "G1_phase = " << format_double(e.G1_phase) << "\n";
        os << "G2 = " << format_double(e.G2_mag) << "\n";
        os << "G2_phase = " << format_double(e.G2_phase) << "\n";
        os << "Lambda = " << format_double(e.Lambda) << "\n";
        os << "chi_mag = " << format_double(e.chi_mag) << "\n";
        os << "phi = " << format_double(e.phi) << "\n";
        os << "phi_b = " << format_double(e.phi_b) << "\n";
        os << "kappa1 = " << format_double(e.kappa1) << "\n";
        os << "kappa2 = " << format_double(e.kappa2) << "\n";
        os << "gamma_m = " << format_double(e.gamma_m) << "\n";
        os << "n_th = " << format_double(e.n_th) << "\n";
        os << "chi0_mag = " << format_double(e.chi0_mag) << "\n";
        os << "chi0_phase = " << format_double(e.chi0_phase) << "\n";
        os << "alpha1_mag = " << format_double(e.alpha1_mag) << "\n";
        os << "alpha1_phase = " << format_double(e.alpha1_phase) << "\n";
    }
    return os.str();
}

} // namespace

std::vector<double> SweepAxis::grid() const {
    if (!values.empty()) return values;
    std::vector<double> g(n_points);
    if (n_points == 1) {
        g[0] = min;
        return g;
    }
    for (int k = 0; k < n_points; ++k) {
        const double t = static_cast<double>(k) / (n_points - 1);
        if (scale == AxisScale::linear) {
            g[k] = min + t * (max - min);
        } else {
            g[k] = min * std::pow(max / min, t);
        }
    }
    return g;
}

std::string render_spec(const SweepSpec& spec) {
    std::ostringstream os;
    os << dump_base(spec);
    os << "[sweep]\n";
    os << "name = " << spec.name << "\n";
    for (size_t a = 0; a < spec.axes.size(); ++a) {
        const auto& ax = spec.axes[a];
        const std::string p = "axis" + std::to_string(a + 1);
        os << p << " = " << ax.name << "\n";
        if (!ax.values.empty()) {
            os << p << "_values = ";
            for (size_t k = 0; k < ax.values.size(); ++k)
                os << (k ? "," : "") << format_double(ax.values[k]);
            os << "\n";
        } else {
            os << p << "_min = " << format_double(ax.min) << "\n";
            os << p << "_max = " << format_double(ax.max) << "\n";
            os << p << "_points = " << ax.n_points << "\n";
            os << p << "_scale = "
               << (ax.scale == AxisScale::linear ? "linear" : "log") << "\n";
        }
    }
    if (!spec.outputs.empty()) {
        os << "outputs = ";
        for (size_t k = 0; k < spec.outputs.size(); ++k)
            os << (k ? "," : "") << spec.outputs[k];
        os << "\n";
    }
    os << "oracle_fraction = " << format_double(spec.oracle_fraction) << "\n";
    os << "seed = " << spec.seed << "\n";
    return os.str();
}

SweepResult run(const SweepSpec& spec, const SweepRunOptions& opts) {
    validate_spec(spec);

    const std::vector<std::string>& all_names =
        spec.physical_mode() ? physical_output_names() : effective_output_names();
    std::vector<std::string> names;
    if (spec.outputs.empty()) {
        names = all_names;
    } else {
        for (const auto& want : spec.outputs) {
            if (std::find(all_names.begin(), all_names.end(), want) ==
                all_names.end())
                throw InvalidParams({{want, "unknown output quantity", 0.0}});
            names.push_back(want);
        }
    }

    std::vector<std::vector<double>> grids;
    for (const auto& ax : spec.axes) grids.push_back(ax.grid());
    const size_t n_rows = grids.size() == 2 ? grids[0].size() * grids[1].size()
                                            : grids[0].size();

    SweepResult result;
    for (const auto& ax : spec.axes) result.axis_names.push_back(ax.name);
    result.output_names = names;
    result.seed = spec.seed;
    result.base_dump = dump_base(spec);
    result.spec_digest = git_blob_hash(render_spec(spec));
    result.rows.resize(n_rows);

    auto point_axes = [&](size_t idx) {
        std::vector<double> vals;
        if (grids.size() == 2) {
            vals = {grids[0][idx / grids[1].size()], grids[1][idx % grids[1].size()]};
        } else {
            vals = {grids[0][idx]};
        }
        return vals;
    };

    auto work = [&](size_t idx) {
        const std::vector<double> vals = point_axes(idx);
        SweepRow row;
        row.axis_values = vals;
        const PointOutput po = evaluate_point(spec, vals);
        row.stable = po.stable;
        row.converged = po.converged;
        row.outputs.resize(names.size());
        for (size_t k = 0; k < names.size(); ++k) {
            auto it = po.values.find(names[k]);
            if (it != po.values.end()) row.outputs[k] = it->second;
        }
        result.rows[idx] = std::move(row);
    };

    const int threads = std::max(1, opts.threads);
    if (threads == 1 || n_rows < 2) {
        for (size_t idx = 0; idx < n_rows; ++idx) work(idx);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w)
            pool.emplace_back([&] {
                for (size_t idx = next.fetch_add(1); idx < n_rows;
                     idx = next.fetch_add(1))
                    work(idx);
            });
        for (auto& th : pool) th.join();
    }

    // ---- oracle spot-check: re-verify a sample of stable points through the
    // ODE route; any disagreement is a hard failure.
    std::vector<size_t> stable_idx;
    for (size_t idx = 0; idx < n_rows; ++idx)
        if (result.rows[idx].stable && result.rows[idx].converged)
            stable_idx.push_back(idx);
    if (!stable_idx.empty() && spec.oracle_fraction > 0.0) {
        size_t n_check = static_cast<size_t>(
            std::ceil(spec.oracle_fraction * static_cast<double>(stable_idx.size())));
        n_check = std::clamp<size_t>(std::max<size_t>(n_check, 3), 1,
                                     stable_idx.size());
        Rng rng(spec.seed, 0xf00d);
        for (size_t k = 0; k < n_check; ++k) { // partial Fisher-Yates
            const size_t j =
                k + static_cast<size_t>(rng.next_double() *
                                        static_cast<double>(stable_idx.size() - k));
            std::swap(stable_idx[k], stable_idx[j]);
        }
        for (size_t k = 0; k < n_check; ++k) {
            const size_t idx = stable_idx[k];
            const LinearModel m = model_at_point(spec, point_axes(idx));
            const CovarianceResult alg = solve_steady(m);
            const double normA = m.A.cwiseAbs().rowwise().sum().maxCoeff();
            const CovarianceResult ode = integrate_covariance(
                m, Eigen::MatrixXd::Identity(m.dim, m.dim) / 2,
                50.0 / alg.margin, 0.02 / normA);
            const double mismatch = covariance_mismatch(alg.V, ode.V);
            if (mismatch > 1e-5) {
                std::ostringstream os;
                os << "sweep oracle mismatch " << mismatch << " at point (";
                const auto vals = point_axes(idx);
                for (size_t a = 0; a < vals.size(); ++a)
                    os << (a ? ", " : "") << result.axis_names[a] << " = "
                       << vals[a];
                os << ")";
                throw OracleMismatch(os.str());
            }
            result.rows[idx].oracle_checked = true;
        }
    }
    return result;
}

std::string SweepResult::to_csv() const {
    std::string out;
    std::vector<std::string> header = axis_names;
    header.insert(header.end(), {"converged", "stable", "oracle_checked"});
    header.insert(header.end(), output_names.begin(), output_names.end());
    out += csv_row(header);
    for (const auto& row : rows) {
        std::vector<std::string> fields;
        for (double v : row.axis_values) fields.push_back(format_double(v));
        fields.push_back(row.converged ? "1" : "0");
        fields.push_back(row.stable ? "1" : "0");
        fields.push_back(row.oracle_checked ? "1" : "0");
        for (const auto& v : row.outputs)
            fields.push_back(v ? format_double(*v) : "");
        out += csv_row(fields);
    }
    return out;
}

std::string SweepResult::meta_text() const {
    std::ostringstream os;
    os << "spec_digest = " << spec_digest << "\n";
    os << "seed = " << seed << "\n";
    os << "rows = " << rows.size() << "\n";
    os << "axes = ";
    for (size_t a = 0; a < axis_names.size(); ++a)
        os << (a ? "," : "") << axis_names[a];
    os << "\n";
    os << base_dump;
    return os.str();
}

// ---------------------------------------------------------------- presets

namespace {

PhysicalParams fig2_base() {
    PhysicalParams p;
    p.omega_m = 2.0 * kPi * 20e6; // 2 pi x 20 MHz
    p.omega_L = 2.5e7;            // 2 pi x 500 THz in units of omega_m
    p.delta_bar_c = 10.0;
    p.kappa1 = 100.0;
    p.kappa2 = 2000.0;
    p.gamma_m = 1e-6;
    p.g1 = 1e-4;
    p.g2 = 1e-4;
    p.eta = 1e-4;
    p.chi0_mag = 1e-3;
    p.P1 = 5e-3;
    p.P2 = 5e-3;
    p.n_th = 0.0;
    return p;
}

EffectiveParams effective_base(double kappa1, double chi_mag, double G1,
                               double Lambda, double delta_c, double n_th,
                               double phi = kPi / 2) {
    EffectiveParams e;
    e.kappa1 = kappa1;
    e.chi_mag = chi_mag;
    e.G1_mag = G1;
    e.Lambda = Lambda;
    e.delta_c = delta_c;
    e.n_th = n_th;
    e.phi = phi;
    e.gamma_m = 1e-6;
    e.phi_b = 0.0;
    return e;
}

SweepAxis linear_axis(const std::string& name, double min, double max, int n) {
    SweepAxis ax;
    ax.name = name;
    ax.min = min;
    ax.max = max;
    ax.n_points = n;
    return ax;
}

SweepAxis values_axis(const std::string& name, std::vector<double> vals) {
    SweepAxis ax;
    ax.name = name;
    ax.values = std::move(vals);
    ax.min = *std::min_element(ax.values.begin(), ax.values.end());
    ax.max = *std::max_element(ax.values.begin(), ax.values.end());
    ax.n_points = static_cast<int>(ax.values.size());
    return ax;
}

SweepSpec make_fig3_panel(char panel) {
    const double G1 = panel == 'a' ? 0.1 : (panel == 'b' ? 1.0 : 5.0);
    SweepSpec s;
    s.name = std::string("fig3") + panel;
    s.base = effective_base(100.0, 40.0, G1, 0.0, 10.0, 1000.0, 0.0);
    // phi resolved finer than 0.01 pi so the unstable band edges are sharp
    s.axes = {linear_axis("phi", 0.0, kPi, 161), linear_axis("Lambda", 0.0, 5.0, 101)};
    return s;
}

SweepSpec make_fig4_panel(char panel) {
    // (kappa1, |chi|) combinations; |chi| = 0.4 kappa1 when the medium is on
    double kappa1 = 0.0, chi = 0.0;
    switch (panel) {
        case 'a': kappa1 = 0.1; chi = 0.0; break;
        case 'b': kappa1 = 100.0; chi = 0.0; break;
        case 'c': kappa1 = 0.1; chi = 0.04; break;
        default: kappa1 = 100.0; chi = 40.0; break;
    }
    SweepSpec s;
    s.name = std::string("fig4") + panel;
    s.base = effective_base(kappa1, chi, 0.1, 10.0, 10.0, 0.0);
    s.axes = {values_axis("kappa1", {kappa1})}; // single point; theta scan is
                                                // the figure's x axis
    return s;
}

SweepSpec make_fig5_panel(char panel) {
    double kappa1 = 0.0, chi = 0.0;
    switch (panel) {
        case 'a': kappa1 = 0.1; chi = 0.0; break;
        case 'b': kappa1 = 10.0; chi = 0.0; break;
        case 'c': kappa1 = 100.0; chi = 0.0; break;
        case 'd': kappa1 = 0.1; chi = 0.04; break;
        case 'e': kappa1 = 10.0; chi = 4.0; break;
        default: kappa1 = 100.0; chi = 40.0; break; // 'f'
    }
    SweepSpec s;
    s.name = std::string("fig5") + panel;
    s.base = effective_base(kappa1, chi, 0.1, 0.0, 0.0, 0.0);
    s.axes = {linear_axis("Lambda", 0.0, 20.0, 101),
              linear_axis("delta_c", 0.0, 20.0, 101)};
    return s;
}

SweepSpec make_fig7_panel(char panel) {
    // The (G1, |chi|) pairs per panel are not fully pinned down; these
    // defaults reproduce the intended thermal-robustness structure and can be
    // overridden from a config.
    double G1 = 0.0, chi = 0.0;
    switch (panel) {
        case 'a': G1 = 0.5; chi = 0.0; break;
        case 'b': G1 = 1.5; chi = 0.0; break;
        case 'c': G1 = 2.5; chi = 0.0; break;
        case 'd': G1 = 0.5; chi = 50.0; break;
        case 'e': G1 = 1.5; chi = 50.0; break;
        default: G1 = 2.5; chi = 50.0; break; // 'f'
    }
    SweepSpec s;
    s.name = std::string("fig7") + panel;
    s.base = effective_base(100.0, chi, G1, 8.0, 0.0, 0.0);
    s.axes = {linear_axis("delta_c", 0.0, 20.0, 101),
              values_axis("n_th", {0.0, 500.0, 1000.0, 5000.0})};
    return s;
}

} // namespace

SweepSpec preset(const std::string& name) {
    if (name == "fig2") {
        SweepSpec s;
        s.name = "fig2";
        s.base = fig2_base();
        s.axes = {linear_axis("P", 0.0, 0.01, 101),
                  values_axis("chi0_mag", {0.0, 1e-3})};
        return s;
    }
    if (name == "fig3") return make_fig3_panel('a');
    if (name.size() == 5 && name.starts_with("fig3") && name[4] >= 'a' && name[4] <= 'c')
        return make_fig3_panel(name[4]);
    if (name == "fig4") return make_fig4_panel('d');
    if (name.size() == 5 && name.starts_with("fig4") && name[4] >= 'a' && name[4] <= 'd')
        return make_fig4_panel(name[4]);
    if (name == "fig5") return make_fig5_panel('f');
    if (name.size() == 5 && name.starts_with("fig5") && name[4] >= 'a' && name[4] <= 'f')
        return make_fig5_panel(name[4]);
    if (name == "fig6") {
        SweepSpec s;
        s.name = "fig6";
        s.base = effective_base(100.0, 0.0, 1.5, 0.0, 10.0, 1000.0);
        s.axes = {linear_axis("Lambda", 0.0, 20.0, 101),
                  linear_axis("chi_mag", 0.0, 50.0, 101)};
        return s;
    }
    if (name == "fig7") return make_fig7_panel('f');
    if (name.size() == 5 && name.starts_with("fig7") && name[4] >= 'a' && name[4] <= 'f')
        return make_fig7_panel(name[4]);
    throw UnknownPreset(name);
}

std::vector<SweepSpec> figure_panels(const std::string& figure) {
    std::vector<SweepSpec> out;
    if (figure == "fig2" || figure == "fig6") {
        out.push_back(preset(figure));
    } else if (figure == "fig3") {
        for (char c : {'a', 'b', 'c'}) out.push_back(make_fig3_panel(c));
    } else if (figure == "fig4") {
        for (char c : {'a', 'b', 'c', 'd'}) out.push_back(make_fig4_panel(c));
    } else if (figure == "fig5") {
        for (char c : {'a', 'b', 'c', 'd', 'e', 'f'}) out.push_back(make_fig5_panel(c));
    } else if (figure == "fig7") {
        for (char c : {'a', 'b', 'c', 'd', 'e', 'f'}) out.push_back(make_fig7_panel(c));
    } else {
        throw UnknownPreset(figure);
    }
    return out;
}

std::vector<std::string> preset_names() {
    return {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7"};
}

} // namespace omsq

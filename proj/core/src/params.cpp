#include "omsq/params.hpp"

#include <cmath>

namespace omsq {

namespace {

void check_finite(std::vector<Violation>& out, const std::string& field, double v) {
    if (!std::isfinite(v)) out.push_back({field, "must be finite", v});
}

void check_positive(std::vector<Violation>& out, const std::string& field, double v) {
    check_finite(out, field, v);
    if (!(v > 0.0)) out.push_back({field, "must be > 0", v});
}

void check_nonnegative(std::vector<Violation>& out, const std::string& field, double v) {
    check_finite(out, field, v);
    if (!(v >= 0.0)) out.push_back({field, "must be >= 0", v});
}

} // namespace

DriveAmplitudes drive_amplitudes(const PhysicalParams& p) {
    require_valid(p);
    const double flux1 = p.P1 / (kHbar * p.omega_L * p.omega_m);
    const double flux2 = p.P2 / (kHbar * 2.0 * p.omega_L * p.omega_m);
    DriveAmplitudes d;
    d.eps1 = std::sqrt(2.0 * p.kappa1 * p.omega_m * flux1) / p.omega_m;
    d.eps2 = std::sqrt(2.0 * p.kappa2 * p.omega_m * flux2) / p.omega_m;
    return d;
}

std::vector<Violation> validate(const PhysicalParams& p) {
    std::vector<Violation> out;
    check_positive(out, "omega_m", p.omega_m);
    check_positive(out, "omega_L", p.omega_L);
    check_finite(out, "delta_bar_c", p.delta_bar_c);
    check_positive(out, "kappa1", p.kappa1);
    check_positive(out, "kappa2", p.kappa2);
    check_positive(out, "gamma_m", p.gamma_m);
    check_finite(out, "g1", p.g1);
    check_finite(out, "g2", p.g2);
    check_nonnegative(out, "eta", p.eta);
    check_nonnegative(out, "chi0_mag", p.chi0_mag);
    check_finite(out, "chi0_phase", p.chi0_phase);
    check_nonnegative(out, "P1", p.P1);
    check_nonnegative(out, "P2", p.P2);
    check_nonnegative(out, "n_th", p.n_th);
    return out;
}

std::vector<Violation> validate(const EffectiveParams& e) {
    std::vector<Violation> out;
    check_finite(out, "delta_c", e.delta_c);
    check_finite(out, "delta_c_prime", e.delta_c_prime);
    check_nonnegative(out, "G1_mag", e.G1_mag);
    check_finite(out, "G1_phase", e.G1_phase);
    check_nonnegative(out, "G2_mag", e.G2_mag);
    check_finite(out, "G2_phase", e.G2_phase);
    check_finite(out, "Lambda", e.Lambda);
    check_nonnegative(out, "chi_mag", e.chi_mag);
    check_finite(out, "phi", e.phi);
    check_finite(out, "phi_b", e.phi_b);
    check_positive(out, "kappa1", e.kappa1);
    check_nonnegative(out, "kappa2", e.kappa2);
    check_positive(out, "gamma_m", e.gamma_m);
    check_nonnegative(out, "n_th", e.n_th);
    check_nonnegative(out, "chi0_mag", e.chi0_mag);
    check_nonnegative(out, "alpha1_mag", e.alpha1_mag);
    return out;
}

void require_valid(const PhysicalParams& p) {
    auto v = validate(p);
    if (!v.empty()) throw InvalidParams(std::move(v));
}

void require_valid(const EffectiveParams& e) {
    auto v = validate(e);
    if (!v.empty()) throw InvalidParams(std::move(v));
}

const std::map<std::string, PhysicalSetter>& physical_field_setters() {
    static const std::map<std::string, PhysicalSetter> table = {
        {"omega_m", [](PhysicalParams& p, double v) { p.omega_m = v; }},
        {"omega_L", [](PhysicalParams& p, double v) { p.omega_L = v; }},
        {"delta_bar_c", [](PhysicalParams& p, double v) { p.delta_bar_c = v; }},
        {"kappa1", [](PhysicalParams& p, double v) { p.kappa1 = v; }},
        {"kappa2", [](PhysicalParams& p, double v) { p.kappa2 = v; }},
        {"gamma_m", [](PhysicalParams& p, double v) { p.gamma_m = v; }},
        {"g1", [](PhysicalParams& p, double v) { p.g1 = v; }},
        {"g2", [](PhysicalParams& p, double v) { p.g2 = v; }},
        {"eta", [](PhysicalParams& p, double v) { p.eta = v; }},
        {"chi0_mag", [](PhysicalParams& p, double v) { p.chi0_mag = v; }},
        {"chi0_phase", [](PhysicalParams& p, double v) { p.chi0_phase = v; }},
        {"P1", [](PhysicalParams& p, double v) { p.P1 = v; }},
        {"P2", [](PhysicalParams& p, double v) { p.P2 = v; }},
        {"P", [](PhysicalParams& p, double v) { p.P1 = v; p.P2 = v; }},
        {"n_th", [](PhysicalParams& p, double v) { p.n_th = v; }},
    };
    return table;
}

const std::map<std::string, EffectiveSetter>& effective_field_setters() {
    static const std::map<std::string, EffectiveSetter> table = {
        {"delta_c", [](EffectiveParams& e, double v) { e.delta_c = v; }},
        {"delta_c_prime", [](EffectiveParams& e, double v) { e.delta_c_prime = v; }},
        {"G1", [](EffectiveParams& e, double v) { e.G1_mag = v; }},
        {"G1_phase", [](EffectiveParams& e, double v) { e.G1_phase = v; }},
        {"G2", [](EffectiveParams& e, double v) { e.G2_mag = v; }},
        {"G2_phase", [](EffectiveParams& e, double v) { e.G2_phase = v; }},
        {"Lambda", [](EffectiveParams& e, double v) { e.Lambda = v; }},
        {"chi_mag", [](EffectiveParams& e, double v) { e.chi_mag = v; }},
        {"phi", [](EffectiveParams& e, double v) { e.phi = v; }},
        {"phi_b", [](EffectiveParams& e, double v) { e.phi_b = v; }},
        {"kappa1", [](EffectiveParams& e, double v) { e.kappa1 = v; }},
        {"kappa2", [](EffectiveParams& e, double v) { e.kappa2 = v; }},
        {"gamma_m", [](EffectiveParams& e, double v) { e.gamma_m = v; }},
        {"n_th", [](EffectiveParams& e, double v) { e.n_th = v; }},
        {"chi0_mag", [](EffectiveParams& e, double v) { e.chi0_mag = v; }},
        {"chi0_phase", [](EffectiveParams& e, double v) { e.chi0_phase = v; }},
        {"alpha1_mag", [](EffectiveParams& e, double v) { e.alpha1_mag = v; }},
        {"alpha1_phase", [](EffectiveParams& e, double v) { e.alpha1_phase = v; }},
    };
    return table;
}

} // namespace omsq

// Parameter records for the nonlinear optomechanical cavity model and the
// nondimensionalization from laboratory units.
//
// Convention used throughout the library: every rate is stored as a multiple
// of the mechanical frequency omega_m, so the scaled equations of motion have
// omega_m = 1.  The absolute omega_m (rad/s) is kept only for the watt ->
// photon-flux conversion of the drive powers.

#pragma once

#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "omsq/errors.hpp"

namespace omsq {

inline constexpr double kHbar = 1.054571817e-34; // J s
inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Laboratory-frame inputs.  All rates in multiples of omega_m; powers in
// watts; omega_m itself in rad/s.
struct PhysicalParams {
    double omega_m = 0.0;      // rad/s (reference scale)
    double omega_L = 0.0;      // laser frequency / omega_m
    double delta_bar_c = 0.0;  // bare detuning (omega_c - omega_L) / omega_m
    double kappa1 = 0.0;       // decay of fundamental mode a1
    double kappa2 = 0.0;       // decay of second-order mode a2
    double gamma_m = 0.0;      // mechanical decay
    double g1 = 0.0;           // single-photon coupling, mode a1
    double g2 = 0.0;           // single-photon coupling, mode a2
    double eta = 0.0;          // quartic (Duffing) amplitude
    double chi0_mag = 0.0;     // |chi0|, medium coupling between a1 and a2
    double chi0_phase = 0.0;   // arg(chi0), rad
    double P1 = 0.0;           // drive power on a1, watts
    double P2 = 0.0;           // drive power on a2, watts
    double n_th = 0.0;         // mean thermal phonon occupation

    std::complex<double> chi0() const {
        return std::polar(chi0_mag, chi0_phase);
    }
};

// Linearization inputs.  Directly constructible (maps/scans mode) or derived
// from a solved mean field.  The trailing block (chi0, alpha1) is consumed
// only by the 6x6 model; it stays zero when unused.
struct EffectiveParams {
    double delta_c = 0.0;        // effective detuning of a1
    double delta_c_prime = 0.0;  // effective detuning of a2 (6x6 model only)
    double G1_mag = 0.0;         // |G1|; the 4x4 model uses G1 real = |G1|
    double G1_phase = 0.0;
    double G2_mag = 0.0;         // 6x6 model only
    double G2_phase = 0.0;
    double Lambda = 0.0;         // quartic-nonlinearity frequency shift
    double chi_mag = 0.0;        // |chi|, effective intracavity squeezing
    double phi = 0.0;            // chi = |chi| e^{2 i phi}, rad
    double phi_b = 0.0;          // mechanical mean-field phase, rad
    double kappa1 = 0.0;
    double kappa2 = 0.0;         // 6x6 model only
    double gamma_m = 0.0;
    double n_th = 0.0;
    double chi0_mag = 0.0;       // 6x6 model only
    double chi0_phase = 0.0;
    double alpha1_mag = 0.0;     // 6x6 model only
    double alpha1_phase = 0.0;   // defaults to 0 (G1 taken real) when entered directly

    std::complex<double> G1() const { return std::polar(G1_mag, G1_phase); }
    std::complex<double> G2() const { return std::polar(G2_mag, G2_phase); }
    std::complex<double> chi() const { return std::polar(chi_mag, 2.0 * phi); }
    std::complex<double> chi0() const { return std::polar(chi0_mag, chi0_phase); }
    std::complex<double> alpha1() const { return std::polar(alpha1_mag, alpha1_phase); }
    // alpha2 reconstructed from chi = chi0 * alpha2; zero when no medium.
    std::complex<double> alpha2() const {
        if (chi0_mag == 0.0) return {0.0, 0.0};
        return chi() / chi0();
    }
};

struct DriveAmplitudes {
    double eps1 = 0.0; // multiples of omega_m
    double eps2 = 0.0;
};

// eps_i = sqrt(2 kappa_i Phi_i) / omega_m with photon fluxes
// Phi_1 = P1/(hbar omega_L) and Phi_2 = P2/(hbar 2 omega_L); kappa_i in rad/s
// inside the square root.  hbar enters the library only here.
DriveAmplitudes drive_amplitudes(const PhysicalParams& p);

std::vector<Violation> validate(const PhysicalParams& p);
std::vector<Violation> validate(const EffectiveParams& e);

// Throwing wrappers used as operation preconditions.
void require_valid(const PhysicalParams& p);
void require_valid(const EffectiveParams& e);

// Field access by name, shared by the config reader and the sweep driver.
// Physical mode exposes the synthetic field "P" that assigns P1 = P2.
using PhysicalSetter = std::function<void(PhysicalParams&, double)>;
using EffectiveSetter = std::function<void(EffectiveParams&, double)>;
const std::map<std::string, PhysicalSetter>& physical_field_setters();
const std::map<std::string, EffectiveSetter>& effective_field_setters();

} // namespace omsq

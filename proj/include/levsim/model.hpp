// Physical parameters of the feedback-cooled levitated nanoparticle and the
// derived coefficients used by every solver. All rates share one unit (kHz);
// time is in the reciprocal unit (ms); x, p, epsilon, n are dimensionless.
#pragma once

#include <string>

namespace levsim {

struct SystemParams {
    double omega_z = 0.0;   // trap frequency
    double gamma_g = 0.0;   // gas damping rate
    double A_t = 0.0;       // trap-beam scattering momentum diffusion
    double A_p = 0.0;       // probe-beam scattering momentum diffusion
    double N_0 = 1.0;       // thermal phonon number (dimensionless, >= 1)
    double gamma_f = 0.0;   // feedback drift coefficient
    double Gamma_f = 0.0;   // feedback backaction diffusion coefficient
};

struct DerivedCoefficients {
    double D_p = 0.0;       // momentum diffusion 2*gamma_g*N_0
    double D_q = 0.0;       // position diffusion gamma_g/(6*N_0)
    double A_total = 0.0;   // A_t + A_p
    double J = 0.0;         // 12*(gamma_f - 9*Gamma_f)
    // Total momentum-diffusion scale A_t + A_p + D_p, ubiquitous in the
    // steady-state formulas.
    double S() const { return A_total + D_p; }
};

enum class Regime { LowDamping, Intermediate, Overdamped };

struct RegimeReport {
    double gamma_eff = 0.0; // (2*gamma_g + 24*gamma_f*x2)/omega_z
    Regime regime = Regime::LowDamping;
    double x2_used = 0.0;   // the <x^2> estimate the classification used
};

struct ModulationReport {
    double M = 0.0;         // gamma_f*n_ss/omega_z
    bool over_limit = false; // true when M > 1 (more than 100% laser modulation)
};

// Throws std::invalid_argument describing the first violated constraint.
void validate(const SystemParams& params);

DerivedCoefficients derive_coefficients(const SystemParams& params);

RegimeReport classify_regime(const SystemParams& params, double x2_ss);

ModulationReport modulation(const SystemParams& params, double n_ss);

// Conversion from the optional microphysical triple: gamma_f = chi^2*Phi*G,
// Gamma_f = chi^2*Phi*G^2. The triple itself is never stored.
struct FeedbackPair { double gamma_f, Gamma_f; };
FeedbackPair feedback_from_chi_phi_g(double chi, double Phi, double G);

const char* regime_name(Regime regime);

} // namespace levsim

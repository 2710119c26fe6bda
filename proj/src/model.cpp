#include "levsim/model.hpp"

#include <cmath>
#include <stdexcept>

namespace levsim {

void validate(const SystemParams& p) {
    auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
    if (!(p.omega_z > 0.0)) fail("omega_z must be > 0");
    if (p.gamma_g < 0.0) fail("gamma_g must be >= 0");
    if (p.A_t < 0.0) fail("A_t must be >= 0");
    if (p.A_p < 0.0) fail("A_p must be >= 0");
    if (!(p.N_0 >= 1.0)) fail("N_0 must be >= 1");
    if (p.gamma_f < 0.0) fail("gamma_f must be >= 0");
    if (p.Gamma_f < 0.0) fail("Gamma_f must be >= 0");
    // J = 12*(gamma_f - 9*Gamma_f) < 0 has no cooling steady state.
    if (p.gamma_f < 9.0 * p.Gamma_f)
        fail("gamma_f must be >= 9*Gamma_f (J >= 0 needed for a steady state)");
    for (double v : {p.omega_z, p.gamma_g, p.A_t, p.A_p, p.N_0, p.gamma_f, p.Gamma_f})
        if (!std::isfinite(v)) fail("parameters must be finite");
}

DerivedCoefficients derive_coefficients(const SystemParams& p) {
    validate(p);
    DerivedCoefficients d;
    d.D_p = 2.0 * p.gamma_g * p.N_0;
    d.D_q = p.gamma_g / (6.0 * p.N_0);
    d.A_total = p.A_t + p.A_p;
    d.J = 12.0 * (p.gamma_f - 9.0 * p.Gamma_f);
    return d;
}

RegimeReport classify_regime(const SystemParams& p, double x2_ss) {
    RegimeReport r;
    r.x2_used = x2_ss;
    r.gamma_eff = (2.0 * p.gamma_g + 24.0 * p.gamma_f * x2_ss) / p.omega_z;
    if (r.gamma_eff < 1e-2) r.regime = Regime::LowDamping;
    else if (r.gamma_eff >= 1.0) r.regime = Regime::Overdamped;
    else r.regime = Regime::Intermediate;
    return r;
}

ModulationReport modulation(const SystemParams& p, double n_ss) {
    ModulationReport m;
    m.M = p.gamma_f * n_ss / p.omega_z;
    m.over_limit = m.M > 1.0;
    return m;
}

FeedbackPair feedback_from_chi_phi_g(double chi, double Phi, double G) {
    const double base = chi * chi * Phi * G;
    return FeedbackPair{base, base * G};
}

const char* regime_name(Regime regime) {
    switch (regime) {
        case Regime::LowDamping: return "LowDamping";
        case Regime::Intermediate: return "Intermediate";
        case Regime::Overdamped: return "Overdamped";
    }
    return "Unknown";
}

} // namespace levsim

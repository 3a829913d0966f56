#include "horizon/masterq.hpp"

#include <cmath>
#include <sstream>

#include "horizon/errors.hpp"

namespace horizon::masterq {

void TwoLevelState::validate() const
{
    const double p = population_excited;
    if (!(p >= 0.0 && p <= 1.0)) {
        std::ostringstream os;
        os << "population_excited must lie in [0, 1] (got " << p << ")";
        throw ValidationError(os.str());
    }
    const double c2 = std::norm(coherence);
    // Small slack for states produced by floating-point evolution.
    if (c2 > p * (1.0 - p) * (1.0 + 1e-12) + 1e-300) {
        std::ostringstream os;
        os << "|coherence|^2 = " << c2 << " exceeds p+ p- = " << p * (1.0 - p);
        throw ValidationError(os.str());
    }
}

void TransitionRates::validate() const
{
    if (!(down >= 0.0) || !(up >= 0.0) || !(dephasing_extra >= 0.0) || !std::isfinite(down) ||
        !std::isfinite(up) || !std::isfinite(dephasing_extra))
        throw ValidationError("transition rates must be finite and non-negative");
}

TransitionRates rates_from_density(const response::SpectralDensity& density,
                                   const shifts::AtomSpec& atom)
{
    atom.validate();
    const double gp = density(atom.omega0);
    const double gm = density(-atom.omega0);
    if (!std::isfinite(gp) || !std::isfinite(gm) || gp < 0.0 || gm < 0.0) {
        std::ostringstream os;
        os << "spectral density undefined at +-omega0 (G(+) = " << gp << ", G(-) = " << gm << ")";
        throw DensityUndefined(os.str());
    }
    const double mu2 = atom.mu * atom.mu;
    return {2.0 * mu2 * gp, 2.0 * mu2 * gm, 0.0};
}

LambShift lamb_hamiltonian(const shifts::AtomSpec& atom, double k_plus, double k_minus)
{
    const double mu2 = atom.mu * atom.mu;
    return {mu2 * k_plus, mu2 * k_minus};
}

LambKernel lamb_kernel(const response::SpectralDensity& density, const shifts::AtomSpec& atom,
                       const pvquad::QuadratureSettings& settings)
{
    atom.validate();
    auto at = [&](double w) {
        // K(w) - K(0) = -(1/pi) P\int G(x) w / (x (x - w)) dx.
        const pvquad::LineDensity vacuum{[&density, w](double x) { return w * density.vacuum_part(x) / x; },
                                          pvquad::Vanishing{}, pvquad::HardCutoff{atom.cutoff_m}};
        pvquad::Estimate e = pvquad::hilbert_transform(vacuum, w, settings);
        if (density.vacuum() == response::VacuumKind::Unruh)
            e += pvquad::hilbert_transform(density.thermal_line_density(), w, settings);
        return e;
    };
    return {at(atom.omega0), at(-atom.omega0)};
}

TwoLevelState evolve(const TwoLevelState& state, const TransitionRates& rates, double tau,
                     const LambShift& lamb)
{
    state.validate();
    rates.validate();
    if (!(tau >= 0.0))
        throw ValidationError("evolve: tau must be non-negative");
    const double gamma = rates.total();
    TwoLevelState out = state;
    if (gamma == 0.0 && rates.dephasing_extra == 0.0 && lamb.gap() == 0.0)
        return out;
    if (gamma > 0.0) {
        const double pss = rates.up / gamma;
        out.population_excited = pss + (state.population_excited - pss) * std::exp(-gamma * tau);
    }
    const double decay = std::exp(-(0.5 * gamma + rates.dephasing_extra) * tau);
    const double phase = -lamb.gap() * tau;
    out.coherence = state.coherence * decay * std::polar(1.0, phase);
    return out;
}

TwoLevelState steady_state(const TransitionRates& rates)
{
    rates.validate();
    if (!(rates.total() > 0.0))
        throw DegenerateRates("steady state undefined: up + down = 0");
    return {rates.up / rates.total(), {0.0, 0.0}};
}

} // namespace horizon::masterq

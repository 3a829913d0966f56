#pragma once

#include <complex>

#include "horizon/pvquad.hpp"
#include "horizon/response.hpp"
#include "horizon/shifts.hpp"

// Weak-coupling master equation of a static two-level atom: dissipator rates
// from the spectral density, the Lamb-shift Hamiltonian, and the exact
// two-level solution in the atom's proper time.

namespace horizon::masterq {

// Reduced density matrix with trace 1. Only p_+ and rho_{+-} are stored.
struct TwoLevelState {
    double population_excited = 0.0;
    std::complex<double> coherence{0.0, 0.0};

    double population_ground() const noexcept { return 1.0 - population_excited; }
    // Throws ValidationError if p_+ is outside [0, 1] or |c|^2 > p_+ p_-.
    void validate() const;
};

struct TransitionRates {
    double down = 0.0;
    double up = 0.0;
    // Extra pure dephasing from the diagonal channels; 0 under the
    // principal-value prescription since G vanishes at zero frequency.
    double dephasing_extra = 0.0;

    void validate() const;
    double total() const noexcept { return up + down; }
};

// down = 2 mu^2 G(+omega0), up = 2 mu^2 G(-omega0).
TransitionRates rates_from_density(const response::SpectralDensity& density,
                                   const shifts::AtomSpec& atom);

struct LambShift {
    double excited = 0.0;
    double ground = 0.0;

    double gap() const noexcept { return excited - ground; }
};

// (mu^2 K(+omega0), mu^2 K(-omega0)).
LambShift lamb_hamiltonian(const shifts::AtomSpec& atom, double k_plus, double k_minus);

struct LambKernel {
    pvquad::Estimate k_plus;
    pvquad::Estimate k_minus;
};

// Mass-renormalized K(+-omega0) = K(+-omega0) - K(0) of the density, with the
// vacuum channel cut at atom.cutoff_m.
LambKernel lamb_kernel(const response::SpectralDensity& density, const shifts::AtomSpec& atom,
                       const pvquad::QuadratureSettings& settings = {});

// Exact solution after proper time tau. The Lamb gap only rotates the phase of
// the coherence. With up = down = 0 the state is returned unchanged.
TwoLevelState evolve(const TwoLevelState& state, const TransitionRates& rates, double tau,
                     const LambShift& lamb = {});

// p_+ = up / (up + down), no coherence; DegenerateRates when up + down = 0.
TwoLevelState steady_state(const TransitionRates& rates);

} // namespace horizon::masterq

#pragma once

#include <memory>
#include <vector>

#include "horizon/geometry.hpp"

// Transmission of massless scalar partial waves through the Schwarzschild
// curvature barrier, and the grey-body profile f(lambda, r) that weights the
// backscattered modes seen by a static atom.

namespace horizon::greybody {

enum class GreybodyModel { GeometricOptics, NumericalBarrier };

const char* to_string(GreybodyModel model) noexcept;

// Controls for the radial wave-equation solver. All lengths are in units of M
// and the solver internally works with the dimensionless frequency M*omega, so
// results depend on M*omega only.
struct BarrierSettings {
    // Base RK4 step in the tortoise coordinate, as a fraction of min(M, 1/omega).
    double step_fraction = 0.025;
    // Largest |V| / omega^2 tolerated at the inner matching point.
    double horizon_potential_ratio = 1e-10;
    // Outer matching radius satisfies
    //   omega * r >= outer_phase_factor * (l(l+1) + 1) + outer_phase_offset
    // and r >= outer_min_radius (units of M), so the far-zone series converges.
    double outer_phase_factor = 1.0;
    double outer_phase_offset = 20.0;
    double outer_min_radius = 40.0;
    // Accepted Richardson error estimate on a single transmission probability.
    double tolerance = 1e-6;
    // Combine the h and h/2 solutions by Richardson extrapolation.
    bool richardson = true;
    // Relative weight below which the l-sum is considered converged.
    double sum_rel_tol = 1e-9;
};

struct TransmissionResult {
    double gamma = 0.0;
    double error = 0.0;
    // |reflected|^2 + gamma - 1 from the finest solve; flux-conservation check.
    double unitarity_defect = 0.0;
};

struct TransmissionEntry {
    int l = 0;
    double gamma = 0.0;
    double error = 0.0;
};

struct TransmissionSpectrum {
    double frequency = 0.0;
    double mass = 1.0;
    std::vector<TransmissionEntry> entries; // l = 0 .. truncation_l, consecutive
    int truncation_l = 0;

    // Sum over l of (2l + 1) * gamma_l.
    double weighted_sum() const noexcept;
    double weighted_error() const noexcept;
};

// Step model: 1 if l < sqrt(27) M p, else 0 (ties transmit nothing).
double geo_transmission(int l, double p, double mass);

// Continuum limit 27 M^2 p^2 of the step-model weighted sum.
double geo_weighted_sum(double p, double mass);

// Discrete step-model sum over l of (2l + 1) * geo_transmission(l, p, M).
double geo_step_sum(double p, double mass);

// |B_l(omega)|^2 from the Regge-Wheeler equation with
// V = (1 - 2M/r) (l(l+1)/r^2 + 2M/r^3).
TransmissionResult rw_transmission(int l, double omega, double mass,
                                   const BarrierSettings& settings = {});

// Sum_{l=0}^{l_max} (2l+1) Gamma_l(omega).
double transmission_sum(double omega, double mass, GreybodyModel model, int l_max,
                        const BarrierSettings& settings = {});

// Numerical spectrum with the l-sum truncated adaptively beyond sqrt(27) M omega.
TransmissionSpectrum transmission_spectrum(double omega, double mass,
                                           const BarrierSettings& settings = {});

// Profile of the weighted sum relative to its geometric-optics value,
// R(M omega) = Sum (2l+1) Gamma_l / (27 M^2 omega^2), tabulated on a sorted
// grid of M omega and interpolated linearly. Below the grid R is held at its
// first value; above it R = 1, the geometric-optics limit.
class BarrierProfile {
public:
    explicit BarrierProfile(std::vector<double> m_omega_grid, const BarrierSettings& settings = {});

    double ratio(double m_omega) const noexcept;
    const std::vector<double>& grid() const noexcept { return grid_; }
    const std::vector<double>& values() const noexcept { return values_; }

    // Shared default table used by the NumericalBarrier model inside integrals.
    static const BarrierProfile& shared();

private:
    std::vector<double> grid_;
    std::vector<double> values_;
};

// f(lambda, r) = Sum (1 + 2l) |B_l(lambda sqrt(g00))|^2 / (4 lambda^2 r^2).
// NumericalBarrier evaluates the l-sum directly with the wave solver.
double f_factor(double lambda, const geometry::SchwarzschildContext& ctx, GreybodyModel model,
                const BarrierSettings& settings = {});

// As f_factor, but NumericalBarrier reads the weighted sum from the shared
// BarrierProfile table; used inside quadratures.
double f_factor_tabulated(double lambda, const geometry::SchwarzschildContext& ctx,
                          GreybodyModel model);

} // namespace horizon::greybody

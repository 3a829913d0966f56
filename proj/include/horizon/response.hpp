#pragma once

#include "horizon/geometry.hpp"
#include "horizon/greybody.hpp"
#include "horizon/pvquad.hpp"

// Fourier transforms G(lambda) of the field correlator along the static
// worldline, in the atom's proper frequency lambda, for the Boulware and Unruh
// states in the near-horizon and far-field regimes. The sum over m of
// |Y_lm|^2 has already been collapsed to (2l + 1) / (4 pi).

namespace horizon::response {

enum class VacuumKind { Boulware, Unruh };
enum class RegimeHint { NearHorizon, Asymptotic };

const char* to_string(VacuumKind v) noexcept;
const char* to_string(RegimeHint r) noexcept;

// 1 / (1 - exp(lambda / T)), i.e. minus the Bose occupation for lambda > 0.
double thermal_occupation(double lambda, double temperature);

// Bose occupation 1 / (exp(x) - 1) for x > 0, overflow-safe.
double bose(double x) noexcept;

class SpectralDensity {
public:
    SpectralDensity(VacuumKind vacuum, RegimeHint regime, geometry::SchwarzschildContext ctx,
                    greybody::GreybodyModel model);

    // G(lambda); lambda must be non-zero.
    double operator()(double lambda) const;

    // The theta(lambda)-weighted term and the Planck-weighted term of the
    // correlator, exactly as they appear in the mode sum; their sum is G.
    double one_sided_channel(double lambda) const;
    double planck_channel(double lambda) const;

    // Algebraic re-split of G used for principal-value integrals:
    //   vacuum  = theta(lambda) lambda (1 + f) / 2pi   (grows linearly)
    //   thermal = w |lambda| n(|lambda| / T) / 2pi     (w = 1 near the horizon,
    //                                                   w = f far away)
    double vacuum_part(double lambda) const;
    double thermal_part(double lambda) const;

    // f(|lambda|, r) from the selected grey-body model (tabulated for
    // NumericalBarrier).
    double greybody(double lambda) const;

    // Temperature entering the Planck factor: local (Tolman) temperature near
    // the horizon, T_H far away; 0 for Boulware.
    double temperature() const noexcept { return temperature_; }

    VacuumKind vacuum() const noexcept { return vacuum_; }
    RegimeHint regime() const noexcept { return regime_; }
    const geometry::SchwarzschildContext& context() const noexcept { return ctx_; }
    greybody::GreybodyModel model() const noexcept { return model_; }

    // Thermal part as a line density with exponential tails at rate 1/T on
    // both sides. Boulware yields an identically vanishing density.
    pvquad::LineDensity thermal_line_density() const;

private:
    VacuumKind vacuum_;
    RegimeHint regime_;
    geometry::SchwarzschildContext ctx_;
    greybody::GreybodyModel model_;
    double temperature_;
};

double boulware_density(double lambda, const geometry::SchwarzschildContext& ctx,
                        greybody::GreybodyModel model, RegimeHint regime);

double unruh_density(double lambda, const geometry::SchwarzschildContext& ctx,
                     greybody::GreybodyModel model, RegimeHint regime);

} // namespace horizon::response

#pragma once

#include "horizon/geometry.hpp"
#include "horizon/greybody.hpp"
#include "horizon/pvquad.hpp"
#include "horizon/response.hpp"

// Renormalized radiative level shifts of a static two-level atom. The linearly
// divergent free-particle self-energy is always removed (mass renormalization)
// and the remaining logarithm is cut at the scale m in the atom's proper
// frequency.

namespace horizon::shifts {

struct AtomSpec {
    double omega0 = 1.0;   // level spacing
    double mu = 0.01;      // coupling; weak coupling is assumed, not checked
    double cutoff_m = 1e6; // must exceed 100 * omega0

    void validate() const;
};

enum class Method { ClosedForm, Quadrature };
const char* to_string(Method m) noexcept;

enum class ThermalBranch { LowT, HighT };

struct ShiftBreakdown {
    double e0_log = 0.0; // renormalized flat-space term
    double e0r = 0.0;    // curvature (backscattered vacuum) term
    double eT = 0.0;     // thermal term at the local temperature
    double eTr = 0.0;    // backscattered thermal term at T_H
    double total = 0.0;
    double error = 0.0;  // quadrature error estimate; 0 for closed forms
    Method method = Method::ClosedForm;
    response::VacuumKind vacuum = response::VacuumKind::Boulware;
    response::RegimeHint regime = response::RegimeHint::NearHorizon;
    // The dropped self-energy -mu^2 m (1 + f) / 2pi^2 is common to both levels
    // and never enters any reported number.
    static constexpr const char* mass_renormalization = "linear self-energy dropped";
};

// (mu^2 omega0 / 2pi^2) ln(m / omega0).
double bethe_log_shift(const AtomSpec& atom);

// (mu^2 omega0 / 2pi^2) \int_0^m d lambda / (lambda + omega0) by quadrature.
pvquad::Estimate bethe_log_shift_quadrature(const AtomSpec& atom,
                                            const pvquad::QuadratureSettings& settings = {});

// Curvature term. Closed form: f * bethe_log_shift with the geometric-optics f.
// Quadrature: (mu^2 omega0 / 2pi^2) \int_0^m f(lambda, r) / (lambda + omega0).
pvquad::Estimate curvature_shift(const AtomSpec& atom, const geometry::SchwarzschildContext& ctx,
                                 greybody::GreybodyModel model, Method method = Method::ClosedForm,
                                 const pvquad::QuadratureSettings& settings = {});

// -(mu^2 / 2pi^2) P\int_0^inf lambda / (1 - e^{lambda/T})
//                      [1/(lambda - omega0) - 1/(lambda + omega0)] d lambda
pvquad::Estimate thermal_shift(const AtomSpec& atom, double temperature,
                               const pvquad::QuadratureSettings& settings = {});

// Low-T: -mu^2 T^2 / (6 omega0) - mu^2 pi^2 T^4 / (15 omega0^3), omega0/T >= 10.
// High-T: mu^2 omega0 ln(omega0^2 / T^2) / (2 pi^2), T/omega0 >= 10.
double thermal_shift_asymptotic(const AtomSpec& atom, double temperature, ThermalBranch branch);

// Thermal term weighted by the grey-body profile; for geometric optics it is
// exactly f * thermal_shift.
pvquad::Estimate backscatter_thermal_shift(const AtomSpec& atom,
                                           const geometry::SchwarzschildContext& ctx,
                                           double temperature, greybody::GreybodyModel model,
                                           const pvquad::QuadratureSettings& settings = {});

ShiftBreakdown ground_shift(response::VacuumKind vacuum, const AtomSpec& atom,
                            const geometry::SchwarzschildContext& ctx, greybody::GreybodyModel model,
                            response::RegimeHint regime, Method method,
                            const pvquad::QuadratureSettings& settings = {});

// Renormalized excited-level shift mu^2 K(+omega0). The pole at +omega0 sits
// inside the vacuum support, so the quadrature path is a principal value.
pvquad::Estimate excited_shift(response::VacuumKind vacuum, const AtomSpec& atom,
                               const geometry::SchwarzschildContext& ctx,
                               greybody::GreybodyModel model, response::RegimeHint regime,
                               Method method, const pvquad::QuadratureSettings& settings = {});

// Selects the far-field closed-form branch from omega0 / T_H; throws
// ValidityError when neither ratio reaches 10.
ThermalBranch far_field_branch(const AtomSpec& atom, double mass);

} // namespace horizon::shifts

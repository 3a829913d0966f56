#pragma once

#include <string>
#include <vector>

#include "horizon/geometry.hpp"
#include "horizon/greybody.hpp"
#include "horizon/pvquad.hpp"
#include "horizon/response.hpp"
#include "horizon/shifts.hpp"

// Radial force F = -d(delta E_ground)/dr on a static atom, split into the part
// coming from the thermal terms (Hawking radiation) and the part coming from
// vacuum polarization (Bethe log and curvature terms).

namespace horizon::force {

enum class ForceMethod { ClosedForm, NumericDiff };
enum class AsymptoticBranch { HighFreq, HighTemp };

const char* to_string(ForceMethod m) noexcept;

struct ForceValue {
    double total = 0.0;
    double thermal = 0.0;
    double vacuum = 0.0;
    double error = 0.0;
    // Set when the force was obtained outside both asymptotic windows.
    bool regime_extrapolated = false;
};

// (27 mu^2 M^2 omega0 / 4 pi^2 r^4) (r - 3M) ln(m / omega0).
double boulware_force(const shifts::AtomSpec& atom, const geometry::SchwarzschildContext& ctx);

// Near-horizon window (r - 2M)/M <= 0.1. The thermal part is the pole term.
ForceValue unruh_force_near_horizon_parts(const shifts::AtomSpec& atom,
                                          const geometry::SchwarzschildContext& ctx);
double unruh_force_near_horizon(const shifts::AtomSpec& atom,
                                const geometry::SchwarzschildContext& ctx);

// Far-field window r/M >= 50, with omega0/T_H >= 10 (HighFreq) or
// T_H/omega0 >= 10 (HighTemp).
ForceValue unruh_force_asymptotic_parts(const shifts::AtomSpec& atom,
                                        const geometry::SchwarzschildContext& ctx,
                                        AsymptoticBranch branch);
double unruh_force_asymptotic(const shifts::AtomSpec& atom,
                              const geometry::SchwarzschildContext& ctx, AsymptoticBranch branch);

// Closed-form force for the given vacuum and regime; selects the far-field
// branch from omega0 / T_H.
ForceValue closed_form_force(response::VacuumKind vacuum, const shifts::AtomSpec& atom,
                             const geometry::SchwarzschildContext& ctx,
                             response::RegimeHint regime);

struct NumericForceOptions {
    // Central-difference half step; 0 selects cbrt(machine epsilon) * r,
    // reduced to (r - 2M)/2 when that would cross the horizon.
    double step = 0.0;
    // Shifts being differentiated.
    shifts::Method shift_method = shifts::Method::Quadrature;
    pvquad::QuadratureSettings quadrature{};
};

// -[dE(r + h) - dE(r - h)] / (2h). An explicit step that reaches the horizon
// raises StencilError.
ForceValue numeric_force(response::VacuumKind vacuum, const shifts::AtomSpec& atom,
                         const geometry::SchwarzschildContext& ctx, greybody::GreybodyModel model,
                         response::RegimeHint regime, const NumericForceOptions& options = {});

// True when r lies inside the closed-form window of the regime.
bool in_closed_form_window(const geometry::SchwarzschildContext& ctx, response::RegimeHint regime);

struct ForceSample {
    double r = 0.0;
    ForceValue force;
    bool ok = true;
    std::string failure; // empty when ok
    bool numerical_failure = false;
};

struct SignChange {
    double lower = 0.0; // bracketing samples
    double upper = 0.0;
    double root = 0.0;
};

struct ForceProfile {
    std::vector<ForceSample> samples;
    ForceMethod method = ForceMethod::ClosedForm;
    response::VacuumKind vacuum = response::VacuumKind::Boulware;
    response::RegimeHint regime = response::RegimeHint::NearHorizon;
    std::vector<SignChange> sign_changes;

    std::size_t failed_count() const noexcept;
};

struct SweepOptions {
    NumericForceOptions numeric{};
    // Roots are bisected until the bracket is below root_rel_tol * r.
    double root_rel_tol = 1e-9;
    // 0 means hardware concurrency, further capped by HORIZON_SHIFT_THREADS.
    unsigned threads = 0;
};

// Worker count: requested (or hardware) capped by HORIZON_SHIFT_THREADS.
unsigned worker_count(unsigned requested, std::size_t jobs);

// Tabulates the force over r_grid (strictly increasing, all > 2M). Per-point
// failures are recorded in the samples; the sweep itself does not throw for
// them.
ForceProfile sweep_profile(response::VacuumKind vacuum, const shifts::AtomSpec& atom, double mass,
                           const std::vector<double>& r_grid, greybody::GreybodyModel model,
                           response::RegimeHint regime, ForceMethod method,
                           const SweepOptions& options = {});

} // namespace horizon::force

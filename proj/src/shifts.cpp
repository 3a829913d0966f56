#include "horizon/shifts.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "horizon/errors.hpp"

namespace horizon::shifts {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPiSq = 2.0 * kPi * kPi;
constexpr double kGateRatio = 10.0;

using greybody::GreybodyModel;
using response::RegimeHint;
using response::VacuumKind;

double geometric_f(const geometry::SchwarzschildContext& ctx)
{
    const double M = ctx.mass();
    const double r = ctx.radius();
    return 27.0 * M * M * geometry::metric_factor(ctx) / (4.0 * r * r);
}

void require_geometric(GreybodyModel model)
{
    if (model != GreybodyModel::GeometricOptics)
        throw ValidationError("closed-form shifts assume the geometric-optics grey-body model");
}

// Closed-form thermal contributions (ground level).
double closed_near_horizon_thermal(const AtomSpec& atom, const geometry::SchwarzschildContext& ctx)
{
    const double th = geometry::hawking_temperature(ctx.mass());
    const double g = geometry::metric_factor(ctx);
    const double w = atom.omega0;
    return atom.mu * atom.mu * w / kTwoPiSq * std::log(g * w * w / (th * th));
}

double closed_far_field_thermal(const AtomSpec& atom, const geometry::SchwarzschildContext& ctx)
{
    const double M = ctx.mass();
    const double r = ctx.radius();
    const double th = geometry::hawking_temperature(M);
    const double mu2 = atom.mu * atom.mu;
    const double w = atom.omega0;
    if (far_field_branch(atom, M) == ThermalBranch::LowT)
        return -9.0 * mu2 * M * M * th * th / (8.0 * w * r * r);
    const double g = geometry::metric_factor(ctx);
    return 27.0 * mu2 * M * M * w / (8.0 * kPi * kPi * r * r) * g * std::log(g * w * w / (th * th));
}

} // namespace

void AtomSpec::validate() const
{
    if (!(omega0 > 0.0) || !std::isfinite(omega0))
        throw ValidationError("omega0 must be positive");
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw ValidationError("mu must be positive");
    if (!(cutoff_m > 100.0 * omega0) || !std::isfinite(cutoff_m)) {
        std::ostringstream os;
        os << "cutoff_m must exceed 100 * omega0 (got cutoff_m = " << cutoff_m << ", omega0 = " << omega0
           << ")";
        throw ValidationError(os.str());
    }
}

const char* to_string(Method m) noexcept
{
    return m == Method::ClosedForm ? "closed" : "quadrature";
}

double bethe_log_shift(const AtomSpec& atom)
{
    atom.validate();
    return atom.mu * atom.mu * atom.omega0 / kTwoPiSq * std::log(atom.cutoff_m / atom.omega0);
}

pvquad::Estimate bethe_log_shift_quadrature(const AtomSpec& atom,
                                            const pvquad::QuadratureSettings& settings)
{
    atom.validate();
    const double w = atom.omega0;
    auto e = pvquad::tail_integrate([w](double x) { return w / (x + w); }, 0.0,
                                    pvquad::HardCutoff{atom.cutoff_m}, settings);
    const double scale = atom.mu * atom.mu / kTwoPiSq;
    e.value *= scale;
    e.error *= scale;
    return e;
}

pvquad::Estimate curvature_shift(const AtomSpec& atom, const geometry::SchwarzschildContext& ctx,
                                 GreybodyModel model, Method method,
                                 const pvquad::QuadratureSettings& settings)
{
    if (method == Method::ClosedForm) {
        require_geometric(model);
        return {geometric_f(ctx) * bethe_log_shift(atom), 0.0, 0};
    }
    atom.validate();
    const double w = atom.omega0;
    pvquad::Estimate e;
    if (model == GreybodyModel::GeometricOptics) {
        // f is lambda-independent and factors out of the integral.
        e = bethe_log_shift_quadrature(atom, settings);
        const double f = geometric_f(ctx);
        e.value *= f;
        e.error *= f;
        return e;
    }
    auto integrand = [&](double x) {
        return greybody::f_factor_tabulated(x, ctx, model) * w / (x + w);
    };
    // The tabulated profile has kinks at the grid nodes near M omega ~ 1.
    const double knee = 4.0 / (ctx.mass() * std::sqrt(geometry::metric_factor(ctx)));
    std::vector<double> breaks;
    if (knee < atom.cutoff_m)
        breaks.push_back(knee);
    e = pvquad::integrate(integrand, 0.0, atom.cutoff_m, settings, breaks);
    const double scale = atom.mu * atom.mu / kTwoPiSq;
    e.value *= scale;
    e.error *= scale;
    return e;
}

namespace {

// -(mu^2/2pi^2) P\int_0^inf weight(l) occ(l) 2 l omega0 / (l^2 - omega0^2) dl
template <class Weight>
pvquad::Estimate thermal_integral(const AtomSpec& atom, double temperature, Weight weight,
                                  const pvquad::QuadratureSettings& settings)
{
    atom.validate();
    if (!(temperature > 0.0) || !std::isfinite(temperature))
        throw DomainError("thermal shift: temperature must be positive");
    const double w = atom.omega0;
    auto g = [&](double x) {
        return weight(x) * response::thermal_occupation(x, temperature) * 2.0 * x * w / (x + w);
    };
    pvquad::Estimate e = pvquad::pv_integrate(g, w, 0.0, 2.0 * w, settings);
    e += pvquad::tail_integrate([&](double x) { return g(x) / (x - w); }, 2.0 * w,
                                pvquad::Exponential{1.0 / temperature}, settings);
    const double scale = -atom.mu * atom.mu / kTwoPiSq;
    e.value *= scale;
    e.error *= std::abs(scale);
    return e;
}

} // namespace

pvquad::Estimate thermal_shift(const AtomSpec& atom, double temperature,
                               const pvquad::QuadratureSettings& settings)
{
    return thermal_integral(atom, temperature, [](double) { return 1.0; }, settings);
}

double thermal_shift_asymptotic(const AtomSpec& atom, double temperature, ThermalBranch branch)
{
    atom.validate();
    if (!(temperature > 0.0))
        throw DomainError("thermal_shift_asymptotic: temperature must be positive");
    const double w = atom.omega0;
    const double T = temperature;
    const double mu2 = atom.mu * atom.mu;
    if (branch == ThermalBranch::LowT) {
        if (w / T < kGateRatio) {
            std::ostringstream os;
            os << "low-temperature branch needs omega0/T >= 10 (got " << w / T << ")";
            throw ValidityError(os.str());
        }
        return -mu2 * T * T / (6.0 * w) - mu2 * kPi * kPi * T * T * T * T / (15.0 * w * w * w);
    }
    if (T / w < kGateRatio) {
        std::ostringstream os;
        os << "high-temperature branch needs T/omega0 >= 10 (got " << T / w << ")";
        throw ValidityError(os.str());
    }
    return mu2 * w * std::log(w * w / (T * T)) / kTwoPiSq;
}

pvquad::Estimate backscatter_thermal_shift(const AtomSpec& atom,
                                           const geometry::SchwarzschildContext& ctx,
                                           double temperature, GreybodyModel model,
                                           const pvquad::QuadratureSettings& settings)
{
    if (model == GreybodyModel::GeometricOptics) {
        pvquad::Estimate e = thermal_shift(atom, temperature, settings);
        const double f = geometric_f(ctx);
        e.value *= f;
        e.error *= f;
        return e;
    }
    return thermal_integral(
        atom, temperature, [&](double x) { return greybody::f_factor_tabulated(x, ctx, model); },
        settings);
}

ThermalBranch far_field_branch(const AtomSpec& atom, double mass)
{
    const double th = geometry::hawking_temperature(mass);
    if (atom.omega0 / th >= kGateRatio)
        return ThermalBranch::LowT;
    if (th / atom.omega0 >= kGateRatio)
        return ThermalBranch::HighT;
    std::ostringstream os;
    os << "far-field closed form needs omega0/T_H >= 10 or T_H/omega0 >= 10 (omega0/T_H = "
       << atom.omega0 / th << ")";
    throw ValidityError(os.str());
}

ShiftBreakdown ground_shift(VacuumKind vacuum, const AtomSpec& atom,
                            const geometry::SchwarzschildContext& ctx, GreybodyModel model,
                            RegimeHint regime, Method method,
                            const pvquad::QuadratureSettings& settings)
{
    atom.validate();
    ShiftBreakdown b;
    b.method = method;
    b.vacuum = vacuum;
    b.regime = regime;

    if (method == Method::ClosedForm) {
        require_geometric(model);
        b.e0_log = bethe_log_shift(atom);
        b.e0r = geometric_f(ctx) * b.e0_log;
        if (vacuum == VacuumKind::Unruh) {
            if (regime == RegimeHint::NearHorizon)
                b.eT = closed_near_horizon_thermal(atom, ctx);
            else
                b.eTr = closed_far_field_thermal(atom, ctx);
        }
    } else {
        const auto flat = bethe_log_shift_quadrature(atom, settings);
        const auto curved = curvature_shift(atom, ctx, model, Method::Quadrature, settings);
        b.e0_log = flat.value;
        b.e0r = curved.value;
        b.error = flat.error + curved.error;
        if (vacuum == VacuumKind::Unruh) {
            if (regime == RegimeHint::NearHorizon) {
                const auto t = thermal_shift(atom, geometry::local_temperature(ctx), settings);
                b.eT = t.value;
                b.error += t.error;
            } else {
                const auto t = backscatter_thermal_shift(
                    atom, ctx, geometry::hawking_temperature(ctx.mass()), model, settings);
                b.eTr = t.value;
                b.error += t.error;
            }
        }
    }
    b.total = b.e0_log + b.e0r + b.eT + b.eTr;
    return b;
}

pvquad::Estimate excited_shift(VacuumKind vacuum, const AtomSpec& atom,
                               const geometry::SchwarzschildContext& ctx, GreybodyModel model,
                               RegimeHint regime, Method method,
                               const pvquad::QuadratureSettings& settings)
{
    atom.validate();
    const double mu2 = atom.mu * atom.mu;
    const double w = atom.omega0;

    if (method == Method::ClosedForm) {
        // The thermal part of G is even in lambda, so K_th(+w) = -K_th(-w).
        const ShiftBreakdown ground = ground_shift(vacuum, atom, ctx, model, regime, method, settings);
        const double vac = -(ground.e0_log + ground.e0r);
        return {vac - ground.eT - ground.eTr, 0.0, 0};
    }

    const response::SpectralDensity density(vacuum, regime, ctx, model);
    // Mass renormalization: K(w) - K(0) = -(1/pi) P\int G(x) w / (x (x - w)).
    const pvquad::LineDensity vacuum_line{
        [&](double x) { return w * density.vacuum_part(x) / x; }, pvquad::Vanishing{},
        pvquad::HardCutoff{atom.cutoff_m}};
    pvquad::Estimate e = pvquad::hilbert_transform(vacuum_line, w, settings);
    if (vacuum == VacuumKind::Unruh)
        e += pvquad::hilbert_transform(density.thermal_line_density(), w, settings);
    e.value *= mu2;
    e.error *= mu2;
    return e;
}

} // namespace horizon::shifts

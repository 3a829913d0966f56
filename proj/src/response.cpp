#include "horizon/response.hpp"

#include <cmath>
#include <numbers>

#include "horizon/errors.hpp"

namespace horizon::response {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kExpLimit = 700.0;

void require_nonzero(double lambda)
{
    if (lambda == 0.0 || !std::isfinite(lambda))
        throw DomainError("spectral density: lambda must be finite and non-zero");
}

} // namespace

const char* to_string(VacuumKind v) noexcept
{
    return v == VacuumKind::Boulware ? "boulware" : "unruh";
}

const char* to_string(RegimeHint r) noexcept
{
    return r == RegimeHint::NearHorizon ? "near-horizon" : "asymptotic";
}

double thermal_occupation(double lambda, double temperature)
{
    if (!(temperature > 0.0))
        throw DomainError("thermal_occupation: temperature must be positive");
    require_nonzero(lambda);
    const double x = lambda / temperature;
    if (x > kExpLimit)
        return -std::exp(-x);
    if (x < -kExpLimit)
        return 1.0;
    return -1.0 / std::expm1(x);
}

double bose(double x) noexcept
{
    if (x > kExpLimit)
        return std::exp(-x);
    return 1.0 / std::expm1(x);
}

SpectralDensity::SpectralDensity(VacuumKind vacuum, RegimeHint regime,
                                 geometry::SchwarzschildContext ctx, greybody::GreybodyModel model)
    : vacuum_(vacuum), regime_(regime), ctx_(ctx), model_(model), temperature_(0.0)
{
    if (vacuum_ == VacuumKind::Unruh) {
        temperature_ = regime_ == RegimeHint::NearHorizon ? geometry::local_temperature(ctx_)
                                                          : geometry::hawking_temperature(ctx_.mass());
    }
}

double SpectralDensity::greybody(double lambda) const
{
    return greybody::f_factor_tabulated(lambda, ctx_, model_);
}

double SpectralDensity::one_sided_channel(double lambda) const
{
    require_nonzero(lambda);
    if (lambda < 0.0)
        return 0.0;
    if (vacuum_ == VacuumKind::Boulware)
        return lambda * (1.0 + greybody(lambda)) / kTwoPi;
    // Near the horizon the ingoing (theta) modes are the backscattered ones.
    const double weight = regime_ == RegimeHint::NearHorizon ? greybody(lambda) : 1.0;
    return lambda * weight / kTwoPi;
}

double SpectralDensity::planck_channel(double lambda) const
{
    require_nonzero(lambda);
    if (vacuum_ == VacuumKind::Boulware)
        return 0.0;
    const double weight = regime_ == RegimeHint::NearHorizon ? 1.0 : greybody(lambda);
    // lambda / (1 - exp(-lambda / T)) = lambda * thermal_occupation(-lambda, T)
    return weight * lambda * thermal_occupation(-lambda, temperature_) / kTwoPi;
}

double SpectralDensity::operator()(double lambda) const
{
    return one_sided_channel(lambda) + planck_channel(lambda);
}

double SpectralDensity::vacuum_part(double lambda) const
{
    require_nonzero(lambda);
    if (lambda < 0.0)
        return 0.0;
    return lambda * (1.0 + greybody(lambda)) / kTwoPi;
}

double SpectralDensity::thermal_part(double lambda) const
{
    require_nonzero(lambda);
    if (vacuum_ == VacuumKind::Boulware)
        return 0.0;
    const double a = std::abs(lambda);
    const double weight = regime_ == RegimeHint::NearHorizon ? 1.0 : greybody(lambda);
    return weight * a * bose(a / temperature_) / kTwoPi;
}

pvquad::LineDensity SpectralDensity::thermal_line_density() const
{
    if (vacuum_ == VacuumKind::Boulware)
        return {[](double) { return 0.0; }, pvquad::Vanishing{}, pvquad::Vanishing{}};
    const pvquad::Exponential tail{1.0 / temperature_};
    return {[this](double x) { return thermal_part(x); }, tail, tail};
}

double boulware_density(double lambda, const geometry::SchwarzschildContext& ctx,
                        greybody::GreybodyModel model, RegimeHint regime)
{
    return SpectralDensity(VacuumKind::Boulware, regime, ctx, model)(lambda);
}

double unruh_density(double lambda, const geometry::SchwarzschildContext& ctx,
                     greybody::GreybodyModel model, RegimeHint regime)
{
    return SpectralDensity(VacuumKind::Unruh, regime, ctx, model)(lambda);
}

} // namespace horizon::response

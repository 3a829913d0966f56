#include "horizon/geometry.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "horizon/errors.hpp"

namespace horizon::geometry {

void require_positive_mass(double mass)
{
    if (!(mass > 0.0) || !std::isfinite(mass)) {
        std::ostringstream os;
        os << "mass must be positive and finite (got " << mass << ")";
        throw ValidationError(os.str());
    }
}

SchwarzschildContext::SchwarzschildContext(double mass, double radius)
    : mass_(mass), radius_(radius)
{
    require_positive_mass(mass);
    if (!std::isfinite(radius) || !(radius > 2.0 * mass * (1.0 + kHorizonMargin))) {
        std::ostringstream os;
        os.precision(17);
        os << "radius must satisfy r > 2M (static atom outside the horizon); got r = " << radius
           << " with M = " << mass;
        throw ValidationError(os.str());
    }
}

double metric_factor(const SchwarzschildContext& ctx) noexcept
{
    // (r - 2M)/r keeps full relative precision close to the horizon.
    return ctx.horizon_distance() / ctx.radius();
}

double surface_gravity(double mass)
{
    require_positive_mass(mass);
    return 1.0 / (4.0 * mass);
}

double hawking_temperature(double mass)
{
    return surface_gravity(mass) / (2.0 * std::numbers::pi);
}

double local_temperature(const SchwarzschildContext& ctx) noexcept
{
    return 1.0 / (8.0 * std::numbers::pi * ctx.mass() * std::sqrt(metric_factor(ctx)));
}

double photon_sphere(double mass)
{
    require_positive_mass(mass);
    return 3.0 * mass;
}

double tortoise_coordinate(const SchwarzschildContext& ctx) noexcept
{
    const double m2 = 2.0 * ctx.mass();
    return ctx.radius() + m2 * std::log(ctx.horizon_distance() / m2);
}

} // namespace horizon::geometry

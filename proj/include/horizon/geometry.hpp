#pragma once

// Schwarzschild exterior quantities in geometric units (G = c = hbar = k_B = 1).
// Every length, time and inverse energy is measured in the same unit as the
// black-hole mass.

namespace horizon::geometry {

// Smallest admissible radius is 2M(1 + kHorizonMargin).
inline constexpr double kHorizonMargin = 1e-12;

class SchwarzschildContext {
public:
    SchwarzschildContext(double mass, double radius);

    double mass() const noexcept { return mass_; }
    double radius() const noexcept { return radius_; }

    // r - 2M, computed without cancellation from the stored values.
    double horizon_distance() const noexcept { return radius_ - 2.0 * mass_; }

    SchwarzschildContext with_radius(double radius) const { return {mass_, radius}; }

private:
    double mass_;
    double radius_;
};

double metric_factor(const SchwarzschildContext& ctx) noexcept;
double surface_gravity(double mass);
double hawking_temperature(double mass);
// Tolman relation T = T_H / sqrt(g00).
double local_temperature(const SchwarzschildContext& ctx) noexcept;
double photon_sphere(double mass);
double tortoise_coordinate(const SchwarzschildContext& ctx) noexcept;

void require_positive_mass(double mass);

} // namespace horizon::geometry

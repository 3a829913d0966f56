#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "horizon/errors.hpp"
#include "horizon/geometry.hpp"

using namespace horizon;
using namespace horizon::geometry;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("metric factor")
{
    CHECK(metric_factor({1.0, 4.0}) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std::abs(metric_factor({1.0, 1e9}) - (1.0 - 2e-9)) < 1e-15);

    // Extended-precision reference for the same double input.
    using big = boost::multiprecision::cpp_bin_float_50;
    const double r = 2.000001;
    const big exact = (big(r) - 2) / big(r);
    const double g = metric_factor({1.0, r});
    CHECK(std::abs(g - exact.convert_to<double>()) <= 2.0 * std::numeric_limits<double>::epsilon() * g);
    CHECK(g == doctest::Approx(5e-7).epsilon(1e-9));
}

TEST_CASE("metric factor stays in (0, 1) and approaches 1 as 2M/r")
{
    for (double r : {2.0000001, 2.5, 3.0, 10.0, 1e3, 1e6}) {
        const double g = metric_factor({1.0, r});
        CHECK(g > 0.0);
        CHECK(g < 1.0);
        CHECK(1.0 - g == doctest::Approx(2.0 / r).epsilon(1e-9));
    }
}

TEST_CASE("context rejects radii at or inside the horizon")
{
    CHECK_THROWS_AS(SchwarzschildContext(1.0, 2.0), ValidationError);
    CHECK_THROWS_AS(SchwarzschildContext(1.0, 1.9), ValidationError);
    CHECK_THROWS_AS(SchwarzschildContext(1.0, 2.0 * (1.0 + 1e-13)), ValidationError);
    CHECK_NOTHROW(SchwarzschildContext(1.0, 2.0 * (1.0 + 1e-10)));
    CHECK_THROWS_AS(SchwarzschildContext(0.0, 1.0), ValidationError);
    CHECK_THROWS_AS(SchwarzschildContext(-1.0, 3.0), ValidationError);
}

TEST_CASE("surface gravity and Hawking temperature")
{
    CHECK(surface_gravity(1.0) == 0.25);
    CHECK(surface_gravity(0.25) == 1.0);
    CHECK(surface_gravity(2.0) == 0.125);
    CHECK(hawking_temperature(1.0) == doctest::Approx(0.03978874).epsilon(1e-7));
    CHECK(hawking_temperature(1.0 / (8.0 * kPi)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(hawking_temperature(10.0) == doctest::Approx(0.003978874).epsilon(1e-7));
    CHECK_THROWS_AS(surface_gravity(0.0), ValidationError);
    CHECK_THROWS_AS(hawking_temperature(-2.0), ValidationError);
}

TEST_CASE("local temperature")
{
    CHECK(local_temperature({1.0, 4.0}) == doctest::Approx(0.05626977).epsilon(1e-7));
    CHECK(local_temperature({1.0, 2.02}) == doctest::Approx(0.3998).epsilon(1e-4));
    CHECK(local_temperature({1.0, 1e12}) == doctest::Approx(hawking_temperature(1.0)).epsilon(1e-11));
    // T sqrt(r - 2M) -> T_H sqrt(2M)
    const double x = 1e-8;
    CHECK(local_temperature({1.0, 2.0 + x}) * std::sqrt(x) ==
          doctest::Approx(hawking_temperature(1.0) * std::sqrt(2.0)).epsilon(1e-8));
}

TEST_CASE("Tolman identity and ordering")
{
    for (double M : {0.5, 1.0, 3.0}) {
        for (double s : {1.001, 1.5, 4.0, 100.0}) {
            const SchwarzschildContext ctx(M, 2.0 * M * s);
            const double t = local_temperature(ctx);
            CHECK(t * std::sqrt(metric_factor(ctx)) ==
                  doctest::Approx(hawking_temperature(M)).epsilon(4e-16));
            CHECK(t > hawking_temperature(M));
        }
    }
}

TEST_CASE("photon sphere")
{
    CHECK(photon_sphere(1.0) == 3.0);
    CHECK(photon_sphere(2.0) == 6.0);
    CHECK(photon_sphere(0.5) == 1.5);
}

TEST_CASE("tortoise coordinate")
{
    CHECK(tortoise_coordinate({1.0, 4.0}) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(tortoise_coordinate({1.0, 6.0}) == doctest::Approx(7.386294).epsilon(1e-7));
    CHECK(tortoise_coordinate({1.0, 5.0}) < tortoise_coordinate({1.0, 6.0}));
    CHECK(tortoise_coordinate({1.0, 2.0 + 1e-10}) < -40.0);

    // dr*/dr = 1/g00
    for (double r : {2.1, 3.0, 7.5, 40.0}) {
        const double h = 1e-5 * r;
        const double d = (tortoise_coordinate({1.0, r + h}) - tortoise_coordinate({1.0, r - h})) / (2.0 * h);
        CHECK(d == doctest::Approx(1.0 / metric_factor({1.0, r})).epsilon(1e-6));
    }
}

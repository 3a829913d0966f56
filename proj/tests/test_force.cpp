#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "horizon/errors.hpp"
#include "horizon/force.hpp"
#include "oracles.hpp"

using namespace horizon;
using namespace horizon::force;
using greybody::GreybodyModel;
using response::RegimeHint;
using response::VacuumKind;
using shifts::AtomSpec;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr GreybodyModel kGeo = GreybodyModel::GeometricOptics;
const AtomSpec kAtom{1.0, 0.01, 1e6};

double coefficient(const AtomSpec& a, double M)
{
    return 27.0 * a.mu * a.mu * M * M * a.omega0 * std::log(a.cutoff_m / a.omega0) / (4.0 * kPi * kPi);
}
} // namespace

TEST_CASE("Boulware force")
{
    CHECK(boulware_force(kAtom, {1.0, 3.0}) == 0.0);
    CHECK(boulware_force(kAtom, {1.0, 2.5}) < 0.0);
    CHECK(boulware_force(kAtom, {1.0, 6.0}) == doctest::Approx(2.166e-8).epsilon(1e-3));
    CHECK(boulware_force(kAtom, {1.0, 6.0}) > 0.0);
    const double r = 1e6;
    CHECK(r * r * r * boulware_force(kAtom, {1.0, r}) == doctest::Approx(coefficient(kAtom, 1.0)).epsilon(1e-5));

    for (double rr : {2.5, 4.0, 8.0}) {
        const double inv = boulware_force(kAtom, {1.0, rr}) * std::pow(rr, 4) / (rr - 3.0);
        CHECK(inv == doctest::Approx(coefficient(kAtom, 1.0)).epsilon(1e-14));
    }
}

TEST_CASE("Boulware force is minus the derivative of the closed-form shift")
{
    NumericForceOptions o;
    o.shift_method = shifts::Method::ClosedForm;
    for (double r : {2.2, 3.5, 6.0, 40.0}) {
        const auto n = numeric_force(VacuumKind::Boulware, kAtom, {1.0, r}, kGeo, RegimeHint::Asymptotic, o);
        CHECK(n.total == doctest::Approx(boulware_force(kAtom, {1.0, r})).epsilon(1e-6));
        CHECK(n.thermal == 0.0);
        CHECK(!n.regime_extrapolated);
    }
}

TEST_CASE("numeric differentiation of quadrature shifts")
{
    NumericForceOptions o;
    o.step = 1e-4 * 6.0;
    const auto n = numeric_force(VacuumKind::Boulware, kAtom, {1.0, 6.0}, kGeo, RegimeHint::Asymptotic, o);
    CHECK(std::abs(n.total / boulware_force(kAtom, {1.0, 6.0}) - 1.0) < 0.005);

    // Second-order convergence. The quadrature shift carries ln(1 + m/w0).
    const double exact = boulware_force(kAtom, {1.0, 6.0}) * std::log1p(1e6) / std::log(1e6);
    auto err = [&](double h) {
        o.step = h;
        return numeric_force(VacuumKind::Boulware, kAtom, {1.0, 6.0}, kGeo, RegimeHint::Asymptotic, o).total - exact;
    };
    const double ratio = err(0.2) / err(0.1);
    CHECK(ratio == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("near-horizon thermal force of the exact thermal shift")
{
    // Compare with central differences of the digamma closed form.
    const AtomSpec a{1.0, 1.0, 1e6};
    for (double x : {1e-2, 1e-3}) {
        const double r = 2.0 + x;
        NumericForceOptions o;
        o.step = 1e-3 * x;
        const auto n = numeric_force(VacuumKind::Unruh, a, {1.0, r}, kGeo, RegimeHint::NearHorizon, o);
        auto e = [](double rr) { return oracle::thermal_shift_exact(1.0, 1.0, geometry::local_temperature({1.0, rr})); };
        const double ref = -(e(r + o.step) - e(r - o.step)) / (2.0 * o.step);
        CHECK(n.thermal == doctest::Approx(ref).epsilon(1e-5));
        CHECK(n.thermal < 0.0);
    }
}

TEST_CASE("numeric force of closed-form shifts near the horizon")
{
    const AtomSpec a{1.0, 1.0, 1e6};
    NumericForceOptions o;
    o.shift_method = shifts::Method::ClosedForm;
    const geometry::SchwarzschildContext ctx(1.0, 2.01);
    const auto n = numeric_force(VacuumKind::Unruh, a, ctx, kGeo, RegimeHint::NearHorizon, o);
    const auto c = unruh_force_near_horizon_parts(a, ctx);
    CHECK(n.thermal == doctest::Approx(c.thermal).epsilon(1e-6));
    CHECK(std::abs(n.total / c.total - 1.0) < 0.05);
}

TEST_CASE("Unruh near-horizon force")
{
    const AtomSpec a{1.0, 1.0, 1e6};
    CHECK(unruh_force_near_horizon(a, {1.0, 2.01}) == doctest::Approx(-5.628).epsilon(1e-3));
    const auto p = unruh_force_near_horizon_parts(a, {1.0, 2.01});
    CHECK(p.thermal == doctest::Approx(-5.04085).epsilon(1e-5));
    CHECK(p.vacuum == doctest::Approx(-27.0 * std::log(1e6) / (64.0 * kPi * kPi)).epsilon(1e-14));

    const double x = 1e-3;
    const double t1 = unruh_force_near_horizon_parts(a, {1.0, 2.0 + x}).thermal;
    const double t2 = unruh_force_near_horizon_parts(a, {1.0, 2.0 + x / 2}).thermal;
    CHECK(t2 / t1 == doctest::Approx(2.0).epsilon(0.01));

    for (double xx : {1e-8, 1e-4, 0.05, 0.099})
        CHECK(unruh_force_near_horizon(a, {1.0, 2.0 + xx}) < 0.0);
    CHECK_THROWS_AS(unruh_force_near_horizon(a, {1.0, 2.2}), ValidityError);

    const double y = 1e-4;
    CHECK(y * unruh_force_near_horizon(a, {1.0, 2.0 + y}) == doctest::Approx(-1.0 / (2.0 * kPi * kPi)).epsilon(0.02));
}

TEST_CASE("Unruh far-field force")
{
    const double th = geometry::hawking_temperature(1.0);
    const AtomSpec hot{1e-6, 0.01, 1e-2}; // T_H > m
    CHECK(th > hot.cutoff_m);
    const auto h = unruh_force_asymptotic_parts(hot, {1.0, 100.0}, AsymptoticBranch::HighTemp);
    CHECK(h.total < 0.0);
    CHECK(h.thermal < 0.0);

    const AtomSpec mild{th / 20.0, 0.01, th * 1e4};
    CHECK(unruh_force_asymptotic(mild, {1.0, 100.0}, AsymptoticBranch::HighTemp) > 0.0);

    const AtomSpec cold{1.0, 0.01, 1e6};
    const auto c = unruh_force_asymptotic_parts(cold, {1.0, 100.0}, AsymptoticBranch::HighFreq);
    CHECK(c.thermal < 0.0);
    CHECK(c.thermal == doctest::Approx(-9e-4 * th * th / 4.0 / 1e6).epsilon(1e-14));

    const double f1 = unruh_force_asymptotic(cold, {1.0, 100.0}, AsymptoticBranch::HighFreq);
    const double f2 = unruh_force_asymptotic(cold, {1.0, 200.0}, AsymptoticBranch::HighFreq);
    CHECK(f2 / f1 == doctest::Approx(0.125).epsilon(1e-14));

    CHECK_THROWS_AS(unruh_force_asymptotic(cold, {1.0, 40.0}, AsymptoticBranch::HighFreq), ValidityError);
    CHECK_THROWS_AS(unruh_force_asymptotic(cold, {1.0, 100.0}, AsymptoticBranch::HighTemp), ValidityError);
    CHECK_THROWS_AS(unruh_force_asymptotic(hot, {1.0, 100.0}, AsymptoticBranch::HighFreq), ValidityError);
}

TEST_CASE("stencil checks")
{
    NumericForceOptions o;
    o.step = 0.02;
    CHECK_THROWS_AS(numeric_force(VacuumKind::Boulware, kAtom, {1.0, 2.01}, kGeo, RegimeHint::NearHorizon, o),
                    StencilError);
    o.step = -1.0;
    CHECK_THROWS_AS(numeric_force(VacuumKind::Boulware, kAtom, {1.0, 3.0}, kGeo, RegimeHint::NearHorizon, o),
                    StencilError);
    // The default rule pulls the step inside the horizon distance.
    o.step = 0.0;
    CHECK_NOTHROW(numeric_force(VacuumKind::Boulware, kAtom, {1.0, 2.0 + 1e-7}, kGeo, RegimeHint::NearHorizon, o));
    const auto v = numeric_force(VacuumKind::Unruh, kAtom, {1.0, 3.0}, kGeo, RegimeHint::NearHorizon, o);
    CHECK(v.regime_extrapolated);
}

TEST_CASE("Boulware turning point")
{
    std::vector<double> grid;
    for (int i = 0; i < 17; ++i)
        grid.push_back(2.5 + 7.5 * i / 16.0);
    const auto p = sweep_profile(VacuumKind::Boulware, kAtom, 1.0, grid, kGeo, RegimeHint::Asymptotic,
                                 ForceMethod::ClosedForm);
    REQUIRE(p.sign_changes.size() == 1);
    CHECK(std::abs(p.sign_changes[0].root - 3.0) < 1e-6);
    CHECK(p.sign_changes[0].lower < 3.0);
    CHECK(p.sign_changes[0].upper > 3.0);
    CHECK(p.failed_count() == 0);

    // A sample sitting exactly on the root counts once.
    std::vector<double> on;
    for (int i = 0; i < 16; ++i)
        on.push_back(2.5 + 0.5 * i);
    const auto q = sweep_profile(VacuumKind::Boulware, kAtom, 1.0, on, kGeo, RegimeHint::Asymptotic,
                                 ForceMethod::ClosedForm);
    REQUIRE(q.sign_changes.size() == 1);
    CHECK(q.sign_changes[0].root == 3.0);
}

TEST_CASE("Boulware turning point from numeric differentiation")
{
    std::vector<double> grid;
    for (int i = 0; i < 9; ++i)
        grid.push_back(2.5 + 7.5 * i / 8.0 + 0.01);
    const auto p = sweep_profile(VacuumKind::Boulware, kAtom, 1.0, grid, kGeo, RegimeHint::Asymptotic,
                                 ForceMethod::NumericDiff);
    REQUIRE(p.sign_changes.size() == 1);
    CHECK(std::abs(p.sign_changes[0].root - 3.0) < 1e-3);
}

TEST_CASE("near-horizon sweeps")
{
    const AtomSpec a{1.0, 0.1, 1e6};
    std::vector<double> grid;
    for (int i = 0; i < 20; ++i)
        grid.push_back(2.0 + 0.9e-6 * std::pow(10.0, 5.0 * i / 19.0));
    const auto p = sweep_profile(VacuumKind::Unruh, a, 1.0, grid, kGeo, RegimeHint::NearHorizon, ForceMethod::ClosedForm);
    CHECK(p.sign_changes.empty());
    CHECK(p.failed_count() == 0);
    for (const auto& s : p.samples) {
        CHECK(s.force.total < 0.0);
        CHECK(s.force.thermal <= 0.0);
    }

    // Points beyond the window fail individually without aborting the sweep.
    grid.push_back(2.5);
    grid.push_back(3.0);
    const auto q = sweep_profile(VacuumKind::Unruh, a, 1.0, grid, kGeo, RegimeHint::NearHorizon, ForceMethod::ClosedForm);
    CHECK(q.failed_count() == 2);
    CHECK(!q.samples.back().ok);
    CHECK(!q.samples.back().numerical_failure);
    CHECK(q.samples.back().failure.find("0.1") != std::string::npos);
    CHECK(q.samples.front().ok);
}

TEST_CASE("thermal force component is attractive for quadrature shifts")
{
    const AtomSpec a{1.0, 0.1, 1e6};
    std::vector<double> near, far;
    for (int i = 0; i < 10; ++i) {
        near.push_back(2.0 + 1e-5 * std::pow(10.0, 4.0 * i / 9.0));
        far.push_back(50.0 * std::pow(10.0, 2.0 * i / 9.0));
    }
    const auto p = sweep_profile(VacuumKind::Unruh, a, 1.0, near, kGeo, RegimeHint::NearHorizon, ForceMethod::NumericDiff);
    const auto q = sweep_profile(VacuumKind::Unruh, a, 1.0, far, kGeo, RegimeHint::Asymptotic, ForceMethod::NumericDiff);
    for (const auto* prof : {&p, &q}) {
        CHECK(prof->failed_count() == 0);
        for (const auto& s : prof->samples)
            CHECK(s.force.thermal <= 0.0);
    }
}

TEST_CASE("sweeps are deterministic across thread counts")
{
    std::vector<double> grid;
    for (int i = 0; i < 12; ++i)
        grid.push_back(2.05 + 0.3 * i);
    SweepOptions one;
    one.threads = 1;
    SweepOptions four;
    four.threads = 4;
    const auto a = sweep_profile(VacuumKind::Unruh, kAtom, 1.0, grid, kGeo, RegimeHint::NearHorizon, ForceMethod::NumericDiff, one);
    const auto b = sweep_profile(VacuumKind::Unruh, kAtom, 1.0, grid, kGeo, RegimeHint::NearHorizon, ForceMethod::NumericDiff, four);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].r == b.samples[i].r);
        CHECK(a.samples[i].force.total == b.samples[i].force.total);
    }
}

TEST_CASE("worker count honours the environment cap")
{
    setenv("HORIZON_SHIFT_THREADS", "2", 1);
    CHECK(worker_count(8, 100) == 2);
    CHECK(worker_count(1, 100) == 1);
    CHECK(worker_count(8, 1) == 1);
    setenv("HORIZON_SHIFT_THREADS", "junk", 1);
    CHECK(worker_count(3, 100) == 3);
    unsetenv("HORIZON_SHIFT_THREADS");
    CHECK(worker_count(5, 100) == 5);
}

TEST_CASE("sweep input validation")
{
    CHECK_THROWS_AS(sweep_profile(VacuumKind::Boulware, kAtom, 1.0, {3.0, 2.5}, kGeo, RegimeHint::Asymptotic,
                                  ForceMethod::ClosedForm),
                    ValidationError);
    CHECK_THROWS_AS(sweep_profile(VacuumKind::Boulware, kAtom, 1.0, {1.5, 2.5}, kGeo, RegimeHint::Asymptotic,
                                  ForceMethod::ClosedForm),
                    ValidationError);
}

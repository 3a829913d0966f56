#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "horizon/errors.hpp"
#include "horizon/masterq.hpp"
#include "oracles.hpp"

using namespace horizon;
using namespace horizon::masterq;
using greybody::GreybodyModel;
using response::RegimeHint;
using response::SpectralDensity;
using response::VacuumKind;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr GreybodyModel kGeo = GreybodyModel::GeometricOptics;
const shifts::AtomSpec kAtom{1.0, 0.01, 1e6};
} // namespace

TEST_CASE("rates from the spectral density")
{
    const SpectralDensity b(VacuumKind::Boulware, RegimeHint::Asymptotic, {1.0, 6.0}, kGeo);
    const auto rb = rates_from_density(b, kAtom);
    CHECK(rb.up == 0.0);
    CHECK(rb.down > 0.0);
    CHECK(rb.down == doctest::Approx(2e-4 * b(1.0)).epsilon(1e-15));

    // Flat space: spontaneous emission rate mu^2 omega0 / pi.
    const SpectralDensity flat(VacuumKind::Boulware, RegimeHint::Asymptotic, {1.0, 1e6}, kGeo);
    CHECK(rates_from_density(flat, kAtom).down == doctest::Approx(1e-4 / kPi).epsilon(1e-10));

    // Detailed balance at the local temperature deep in the near-horizon zone.
    const geometry::SchwarzschildContext ctx(1.0, 2.0 + 1e-8);
    const SpectralDensity u(VacuumKind::Unruh, RegimeHint::NearHorizon, ctx, kGeo);
    const auto ru = rates_from_density(u, kAtom);
    CHECK(ru.up / ru.down == doctest::Approx(std::exp(-1.0 / u.temperature())).epsilon(1e-7));
    CHECK(ru.dephasing_extra == 0.0);

    // Far away the Unruh state is not thermal: upward rate is suppressed by f.
    const SpectralDensity far(VacuumKind::Unruh, RegimeHint::Asymptotic, {1.0, 100.0}, kGeo);
    const auto rf = rates_from_density(far, kAtom);
    const double th = geometry::hawking_temperature(1.0);
    CHECK(rf.up / rf.down < std::exp(-1.0 / th));
    CHECK(rf.up > 0.0);
}

TEST_CASE("Lamb kernel reproduces the level shifts")
{
    for (auto [v, reg, r] : {std::tuple{VacuumKind::Boulware, RegimeHint::Asymptotic, 6.0},
                             std::tuple{VacuumKind::Unruh, RegimeHint::NearHorizon, 2.01},
                             std::tuple{VacuumKind::Unruh, RegimeHint::Asymptotic, 200.0}}) {
        const geometry::SchwarzschildContext ctx(1.0, r);
        const SpectralDensity g(v, reg, ctx, kGeo);
        const auto k = lamb_kernel(g, kAtom);
        const auto lamb = lamb_hamiltonian(kAtom, k.k_plus.value, k.k_minus.value);
        const auto ground = shifts::ground_shift(v, kAtom, ctx, kGeo, reg, shifts::Method::Quadrature);
        const auto excited = shifts::excited_shift(v, kAtom, ctx, kGeo, reg, shifts::Method::Quadrature);
        CHECK(lamb.ground == doctest::Approx(ground.total).epsilon(1e-7));
        CHECK(lamb.excited == doctest::Approx(excited.value).epsilon(1e-7));
    }
    const auto l = lamb_hamiltonian(kAtom, 3.0, -2.0);
    CHECK(l.excited == doctest::Approx(3e-4));
    CHECK(l.gap() == doctest::Approx(5e-4));
}

TEST_CASE("evolution agrees with a direct integration")
{
    const TwoLevelState s{0.7, {0.2, -0.3}};
    const TransitionRates r{0.8, 0.3, 0.05};
    const LambShift lamb{0.4, -0.9};
    for (double tau : {0.1, 1.0, 5.0}) {
        const auto e = evolve(s, r, tau, lamb);
        const auto o = oracle::master_rk4({s.population_excited, s.coherence}, r.up, r.down, r.dephasing_extra,
                                          lamb.gap(), tau, 4000);
        CHECK(e.population_excited == doctest::Approx(o.p).epsilon(1e-12));
        CHECK(std::abs(e.coherence - o.c) < 1e-12);
    }
}

TEST_CASE("evolution composes")
{
    const TwoLevelState s{0.9, {0.1, 0.25}};
    const TransitionRates r{1.3, 0.2, 0.0};
    const LambShift lamb{0.1, 0.6};
    const auto direct = evolve(s, r, 1.7, lamb);
    const auto split = evolve(evolve(s, r, 0.5, lamb), r, 1.2, lamb);
    CHECK(std::abs(direct.population_excited - split.population_excited) < 1e-12);
    CHECK(std::abs(direct.coherence - split.coherence) < 1e-12);

    CHECK(evolve(s, r, 0.0, lamb).population_excited == s.population_excited);
    CHECK(evolve(s, r, 0.0, lamb).coherence == s.coherence);
}

TEST_CASE("evolution preserves positivity")
{
    std::mt19937_64 rng(20261015);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const double p = u(rng);
        const double amp = std::sqrt(p * (1.0 - p)) * u(rng);
        const TwoLevelState s{p, std::polar(amp, 2.0 * kPi * u(rng))};
        const TransitionRates r{5.0 * u(rng), 5.0 * u(rng), u(rng)};
        const LambShift lamb{10.0 * (u(rng) - 0.5), 10.0 * (u(rng) - 0.5)};
        const auto e = evolve(s, r, 10.0 * u(rng), lamb);
        CHECK_NOTHROW(e.validate());
    }
}

TEST_CASE("Lamb terms only rotate the coherence")
{
    const TwoLevelState s{0.4, {0.3, 0.1}};
    const TransitionRates r{0.5, 0.2, 0.0};
    const auto plain = evolve(s, r, 2.0);
    const auto shifted = evolve(s, r, 2.0, {0.7, -0.2});
    CHECK(plain.population_excited == shifted.population_excited);
    CHECK(std::abs(plain.coherence) == doctest::Approx(std::abs(shifted.coherence)).epsilon(1e-14));
    CHECK(std::arg(shifted.coherence / plain.coherence) == doctest::Approx(-0.9 * 2.0).epsilon(1e-12));
}

TEST_CASE("steady state")
{
    const TransitionRates r{0.6, 0.2, 0.0};
    const auto ss = steady_state(r);
    CHECK(ss.population_excited == doctest::Approx(0.25));
    CHECK(ss.coherence == std::complex<double>{});
    const auto late = evolve({1.0, {}}, r, 200.0);
    CHECK(late.population_excited == doctest::Approx(0.25).epsilon(1e-14));

    const SpectralDensity b(VacuumKind::Boulware, RegimeHint::Asymptotic, {1.0, 6.0}, kGeo);
    CHECK(steady_state(rates_from_density(b, kAtom)).population_excited == 0.0);

    // Near the horizon the atom thermalizes at the local temperature.
    const SpectralDensity u(VacuumKind::Unruh, RegimeHint::NearHorizon, {1.0, 2.0 + 1e-8}, kGeo);
    const double boltz = 1.0 / (1.0 + std::exp(1.0 / u.temperature()));
    CHECK(steady_state(rates_from_density(u, kAtom)).population_excited == doctest::Approx(boltz).epsilon(1e-7));

    CHECK_THROWS_AS(steady_state({}), DegenerateRates);
    CHECK_THROWS_AS(steady_state({0.0, 0.0, 0.3}), DegenerateRates);
}

TEST_CASE("no coupling leaves the state alone")
{
    const TwoLevelState s{0.3, {0.1, 0.2}};
    const auto e = evolve(s, {}, 50.0);
    CHECK(e.population_excited == s.population_excited);
    CHECK(e.coherence == s.coherence);
}

TEST_CASE("input validation")
{
    const TransitionRates r{1.0, 0.0, 0.0};
    CHECK_THROWS_AS(evolve({1.2, {}}, r, 1.0), ValidationError);
    CHECK_THROWS_AS(evolve({0.5, {0.6, 0.0}}, r, 1.0), ValidationError);
    CHECK_THROWS_AS(evolve({0.5, {}}, {-1.0, 0.0, 0.0}, 1.0), ValidationError);
    CHECK_THROWS_AS(evolve({0.5, {}}, r, -1.0), ValidationError);
    CHECK_THROWS_AS(rates_from_density(SpectralDensity(VacuumKind::Boulware, RegimeHint::Asymptotic, {1.0, 6.0}, kGeo),
                                       {1.0, 0.01, 10.0}),
                    ValidationError);
}

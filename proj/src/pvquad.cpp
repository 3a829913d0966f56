#include "horizon/pvquad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "horizon/errors.hpp"

namespace horizon::pvquad {

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
using Gauss = boost::math::quadrature::gauss<double, 10>;

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Piece {
    double a;
    double b;
    double value;
    double error;
    bool frozen;
};

// One 21-point Kronrod panel with the embedded 10-point Gauss rule. Error
// estimate follows the QUADPACK heuristic.
Piece gk21(const Integrand& f, double a, double b, int& evals)
{
    const auto& xk = Kronrod::abscissa();
    const auto& wk = Kronrod::weights();
    const auto& wg = Gauss::weights();

    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double fvals[21];
    const double fc = f(centre);
    fvals[0] = fc;
    double kronrod = fc * wk[0];
    double gauss = 0.0;
    double resabs = std::abs(kronrod);
    int n = 1;
    for (std::size_t i = 1; i < xk.size(); ++i) {
        const double dx = half * xk[i];
        const double fp = f(centre + dx);
        const double fm = f(centre - dx);
        fvals[n++] = fp;
        fvals[n++] = fm;
        kronrod += (fp + fm) * wk[i];
        resabs += (std::abs(fp) + std::abs(fm)) * wk[i];
        // 10-point Gauss nodes sit at the odd Kronrod indices.
        if (i % 2 == 1)
            gauss += (fp + fm) * wg[i / 2];
    }
    evals += 21;

    const double mean = 0.5 * kronrod;
    double resasc = std::abs(fc - mean) * wk[0];
    for (std::size_t i = 1, j = 1; i < xk.size(); ++i, j += 2)
        resasc += (std::abs(fvals[j] - mean) + std::abs(fvals[j + 1] - mean)) * wk[i];

    const double value = kronrod * half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    double err = std::abs((kronrod - gauss) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps))
        err = std::max(50.0 * kEps * resabs, err);
    if (!std::isfinite(value) || !std::isfinite(err)) {
        std::ostringstream os;
        os << "integrand is not finite on [" << a << ", " << b << "]";
        throw NonConvergence(os.str());
    }
    return {a, b, value, err, false};
}

double tolerance(const QuadratureSettings& s, double value)
{
    return std::max(s.abs_tol, s.rel_tol * std::abs(value));
}

} // namespace

void QuadratureSettings::validate() const
{
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
        throw ValidationError("quadrature tolerances must be positive");
    if (max_subdivisions < 10)
        throw ValidationError("max_subdivisions must be at least 10");
    if (!(pole_excision_halfwidth > 0.0) || !(pole_excision_halfwidth < 0.5))
        throw ValidationError("pole_excision_halfwidth must lie in (0, 0.5)");
}

Estimate integrate(const Integrand& f, double a, double b, const QuadratureSettings& settings,
                   std::vector<double> breakpoints)
{
    settings.validate();
    if (a == b)
        return {};
    if (!(a < b))
        throw DomainError("integrate: lower limit must not exceed upper limit");

    breakpoints.push_back(a);
    breakpoints.push_back(b);
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());

    int evals = 0;
    std::vector<Piece> pieces;
    pieces.reserve(static_cast<std::size_t>(settings.max_subdivisions) + breakpoints.size());
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (breakpoints[i] < a || breakpoints[i + 1] > b)
            continue;
        pieces.push_back(gk21(f, breakpoints[i], breakpoints[i + 1], evals));
    }

    for (;;) {
        double total = 0.0;
        double error = 0.0;
        for (const auto& p : pieces) {
            total += p.value;
            error += p.error;
        }
        if (error <= tolerance(settings, total))
            return {total, error, evals};

        auto worst = pieces.end();
        for (auto it = pieces.begin(); it != pieces.end(); ++it) {
            if (!it->frozen && (worst == pieces.end() || it->error > worst->error))
                worst = it;
        }
        if (worst == pieces.end() || static_cast<int>(pieces.size()) >= settings.max_subdivisions) {
            std::ostringstream os;
            os.precision(6);
            os << "adaptive quadrature on [" << a << ", " << b << "] did not reach tolerance: estimate "
               << total << " with error " << error << " after " << pieces.size() << " subintervals";
            throw NonConvergence(os.str());
        }

        const double lo = worst->a;
        const double hi = worst->b;
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi) || (hi - lo) < 1e3 * kEps * std::max(std::abs(lo), std::abs(hi))) {
            worst->frozen = true;
            continue;
        }
        *worst = gk21(f, lo, mid, evals);
        pieces.push_back(gk21(f, mid, hi, evals));
    }
}

Estimate pv_integrate(const Integrand& g, double pole, double a, double b,
                      const QuadratureSettings& settings)
{
    settings.validate();
    if (!(a < pole && pole < b)) {
        std::ostringstream os;
        os << "pv_integrate: pole " << pole << " must lie strictly inside (" << a << ", " << b << ")";
        throw DomainError(os.str());
    }
    double delta = pole != 0.0 ? settings.pole_excision_halfwidth * std::abs(pole)
                               : settings.pole_excision_halfwidth * (b - a);
    delta = std::min({delta, 0.5 * (pole - a), 0.5 * (b - pole)});

    const double g_pole = g(pole);
    auto subtracted = [&](double x) { return (g(x) - g_pole) / (x - pole); };
    // On the window the g(pole) terms cancel pairwise.
    auto folded = [&](double t) { return (g(pole + t) - g(pole - t)) / t; };

    Estimate total = integrate(folded, 0.0, delta, settings);
    total += integrate(subtracted, a, pole - delta, settings);
    total += integrate(subtracted, pole + delta, b, settings);
    total.value += g_pole * std::log((b - pole) / (pole - a));
    total.evaluations += 1;
    return total;
}

namespace {

constexpr double kFiniteSpan = 50.0; // decay lengths handled before the mapped tail

void check_decay(const Integrand& g, double a, double rate)
{
    const double len = 1.0 / rate;
    const double g1 = std::abs(g(a + 20.0 * len));
    const double g2 = std::abs(g(a + 40.0 * len));
    if (!(g1 > 0.0) || !std::isfinite(g1) || !std::isfinite(g2))
        return;
    const double observed = g2 > 0.0 ? std::log(g1 / g2) / (20.0 * len) : rate;
    if (observed < 0.1 * rate) {
        std::ostringstream os;
        os << "declared exponential tail rate " << rate << " but integrand decays at rate "
           << observed;
        throw TailMismatch(os.str());
    }
}

} // namespace

Estimate tail_integrate(const Integrand& g, double a, const Tail& tail,
                        const QuadratureSettings& settings)
{
    settings.validate();
    if (const auto* cut = std::get_if<HardCutoff>(&tail)) {
        if (!(cut->m >= a))
            throw DomainError("tail_integrate: hard cutoff lies below the lower limit");
        return integrate(g, a, cut->m, settings);
    }

    const double rate = std::get<Exponential>(tail).rate;
    if (!(rate > 0.0) || !std::isfinite(rate))
        throw DomainError("tail_integrate: exponential rate must be positive");
    check_decay(g, a, rate);

    const double len = 1.0 / rate;
    const double c = a + kFiniteSpan * len;
    Estimate total = integrate(g, a, c, settings);
    // x = c + len * u / (1 - u) maps [0, 1) onto [c, inf).
    auto mapped = [&](double u) {
        const double w = 1.0 - u;
        const double x = c + len * u / w;
        if (!std::isfinite(x))
            return 0.0;
        const double v = g(x) * len / (w * w);
        return std::isfinite(v) ? v : 0.0;
    };
    total += integrate(mapped, 0.0, 1.0, settings);
    return total;
}

namespace {

// \int_0^\infty h(t) / (t - pole) dt for a density h supported on t > 0.
Estimate half_line(const Integrand& h, double pole, const HalfLine& support,
                   const QuadratureSettings& settings)
{
    if (std::holds_alternative<Vanishing>(support))
        return {};

    auto plain = [&](double t) { return h(t) / (t - pole); };

    if (const auto* cut = std::get_if<HardCutoff>(&support)) {
        const double m = cut->m;
        if (pole <= 0.0 || pole > m)
            return integrate(plain, 0.0, m, settings);
        if (pole == m)
            throw DomainError("hilbert_transform: pole coincides with the hard cutoff");
        if (2.0 * pole >= m)
            return pv_integrate(h, pole, 0.0, m, settings);
        Estimate e = pv_integrate(h, pole, 0.0, 2.0 * pole, settings);
        e += integrate(plain, 2.0 * pole, m, settings);
        return e;
    }

    const auto rate = std::get<Exponential>(support);
    if (pole <= 0.0)
        return tail_integrate(plain, 0.0, rate, settings);
    Estimate e = pv_integrate(h, pole, 0.0, 2.0 * pole, settings);
    e += tail_integrate(plain, 2.0 * pole, rate, settings);
    return e;
}

} // namespace

Estimate hilbert_transform(const LineDensity& density, double omega,
                           const QuadratureSettings& settings)
{
    settings.validate();
    if (omega == 0.0)
        throw PoleAtOrigin("hilbert_transform: omega must be non-zero");

    const auto& G = density.eval;
    Estimate pos = half_line(G, omega, density.positive, settings);
    // \int_{-inf}^0 G(x)/(x - w) dx = -\int_0^inf G(-t)/(t + w) dt
    Estimate neg = half_line([&](double t) { return G(-t); }, -omega, density.negative, settings);

    Estimate out;
    out.value = -(pos.value - neg.value) / std::numbers::pi;
    out.error = (pos.error + neg.error) / std::numbers::pi;
    out.evaluations = pos.evaluations + neg.evaluations;
    return out;
}

} // namespace horizon::pvquad

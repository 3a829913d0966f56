#pragma once

#include <functional>
#include <variant>
#include <vector>

// Adaptive Gauss-Kronrod quadrature with Cauchy principal-value support and
// semi-infinite tails. All routines are deterministic: for identical inputs the
// subdivision order, and therefore the result, is bit-reproducible.

namespace horizon::pvquad {

using Integrand = std::function<double(double)>;

struct QuadratureSettings {
    double rel_tol = 1e-9;
    double abs_tol = 1e-14;
    int max_subdivisions = 2000;
    // Half-width of the folded window around a pole, as a fraction of |pole|.
    double pole_excision_halfwidth = 1e-3;

    void validate() const;
};

struct Estimate {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;

    Estimate& operator+=(const Estimate& o)
    {
        value += o.value;
        error += o.error;
        evaluations += o.evaluations;
        return *this;
    }
};

// Integrand decays like exp(-rate * x) at large x.
struct Exponential {
    double rate;
};
// Integration stops exactly at the cutoff m.
struct HardCutoff {
    double m;
};
using Tail = std::variant<Exponential, HardCutoff>;

// Plain adaptive integral over [a, b] with optional interior breakpoints.
Estimate integrate(const Integrand& f, double a, double b, const QuadratureSettings& settings,
                   std::vector<double> breakpoints = {});

// P \int_a^b g(x) / (x - pole) dx, a < pole < b. The 1/(x - pole) factor is
// supplied here; g must be continuous at the pole.
Estimate pv_integrate(const Integrand& g, double pole, double a, double b,
                      const QuadratureSettings& settings);

// \int_a^\infty g (Exponential) or \int_a^m g (HardCutoff).
Estimate tail_integrate(const Integrand& g, double a, const Tail& tail,
                        const QuadratureSettings& settings);

// Support of a one-dimensional density on one half of the real line.
struct Vanishing {};
using HalfLine = std::variant<Vanishing, Exponential, HardCutoff>;

// A real density on the real line with declared behaviour on each half-line.
struct LineDensity {
    Integrand eval;
    HalfLine negative = Vanishing{};
    HalfLine positive = Vanishing{};
};

// Returns K(omega) = -(1/pi) P \int G(x) / (x - omega) dx, the real quantity
// for which a level shift reads mu^2 * K. Split at 0 and at the pole.
Estimate hilbert_transform(const LineDensity& density, double omega,
                           const QuadratureSettings& settings);

} // namespace horizon::pvquad

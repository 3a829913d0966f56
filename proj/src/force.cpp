#include "horizon/force.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "horizon/errors.hpp"

namespace horizon::force {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNearHorizonWindow = 0.1; // (r - 2M)/M
constexpr double kFarFieldWindow = 50.0;   // r/M

using response::RegimeHint;
using response::VacuumKind;

double vacuum_coefficient(const shifts::AtomSpec& atom, double mass)
{
    return 27.0 * atom.mu * atom.mu * mass * mass * atom.omega0 / (4.0 * kPi * kPi) *
           std::log(atom.cutoff_m / atom.omega0);
}

} // namespace

const char* to_string(ForceMethod m) noexcept
{
    return m == ForceMethod::ClosedForm ? "closed" : "numeric";
}

double boulware_force(const shifts::AtomSpec& atom, const geometry::SchwarzschildContext& ctx)
{
    atom.validate();
    const double M = ctx.mass();
    const double r = ctx.radius();
    return vacuum_coefficient(atom, M) * (r - 3.0 * M) / (r * r * r * r);
}

ForceValue unruh_force_near_horizon_parts(const shifts::AtomSpec& atom,
                                          const geometry::SchwarzschildContext& ctx)
{
    atom.validate();
    const double M = ctx.mass();
    const double r = ctx.radius();
    const double x = ctx.horizon_distance();
    if (x / M > kNearHorizonWindow) {
        std::ostringstream os;
        os << "near-horizon force needs (r - 2M)/M <= 0.1 (got " << x / M << ")";
        throw ValidityError(os.str());
    }
    const double mu2 = atom.mu * atom.mu;
    ForceValue v;
    v.thermal = -mu2 * M * atom.omega0 / (kPi * kPi * x * r);
    v.vacuum = -27.0 * mu2 * atom.omega0 * std::log(atom.cutoff_m / atom.omega0) / (64.0 * M * kPi * kPi);
    v.total = v.thermal + v.vacuum;
    return v;
}

double unruh_force_near_horizon(const shifts::AtomSpec& atom,
                                const geometry::SchwarzschildContext& ctx)
{
    return unruh_force_near_horizon_parts(atom, ctx).total;
}

ForceValue unruh_force_asymptotic_parts(const shifts::AtomSpec& atom,
                                        const geometry::SchwarzschildContext& ctx,
                                        AsymptoticBranch branch)
{
    atom.validate();
    const double M = ctx.mass();
    const double r = ctx.radius();
    if (r / M < kFarFieldWindow) {
        std::ostringstream os;
        os << "far-field force needs r/M >= 50 (got " << r / M << ")";
        throw ValidityError(os.str());
    }
    const double th = geometry::hawking_temperature(M);
    const double w = atom.omega0;
    const double mu2 = atom.mu * atom.mu;
    const double r3 = r * r * r;
    ForceValue v;
    if (branch == AsymptoticBranch::HighFreq) {
        if (w / th < 10.0) {
            std::ostringstream os;
            os << "high-frequency branch needs omega0/T_H >= 10 (got " << w / th << ")";
            throw ValidityError(os.str());
        }
        v.thermal = -(9.0 * mu2 * M * M * th * th / (4.0 * w)) / r3;
    } else {
        if (th / w < 10.0) {
            std::ostringstream os;
            os << "high-temperature branch needs T_H/omega0 >= 10 (got " << th / w << ")";
            throw ValidityError(os.str());
        }
        v.thermal = -(27.0 * mu2 * M * M * w / (2.0 * kPi * kPi)) * std::log(th / w) / r3;
    }
    v.vacuum = vacuum_coefficient(atom, M) / r3;
    v.total = v.thermal + v.vacuum;
    return v;
}

double unruh_force_asymptotic(const shifts::AtomSpec& atom,
                              const geometry::SchwarzschildContext& ctx, AsymptoticBranch branch)
{
    return unruh_force_asymptotic_parts(atom, ctx, branch).total;
}

ForceValue closed_form_force(VacuumKind vacuum, const shifts::AtomSpec& atom,
                             const geometry::SchwarzschildContext& ctx, RegimeHint regime)
{
    if (vacuum == VacuumKind::Boulware) {
        ForceValue v;
        v.vacuum = boulware_force(atom, ctx);
        v.total = v.vacuum;
        return v;
    }
    if (regime == RegimeHint::NearHorizon)
        return unruh_force_near_horizon_parts(atom, ctx);
    const auto branch = shifts::far_field_branch(atom, ctx.mass()) == shifts::ThermalBranch::LowT
                            ? AsymptoticBranch::HighFreq
                            : AsymptoticBranch::HighTemp;
    return unruh_force_asymptotic_parts(atom, ctx, branch);
}

bool in_closed_form_window(const geometry::SchwarzschildContext& ctx, RegimeHint regime)
{
    const double M = ctx.mass();
    if (regime == RegimeHint::NearHorizon)
        return ctx.horizon_distance() / M <= kNearHorizonWindow;
    return ctx.radius() / M >= kFarFieldWindow;
}

ForceValue numeric_force(VacuumKind vacuum, const shifts::AtomSpec& atom,
                         const geometry::SchwarzschildContext& ctx, greybody::GreybodyModel model,
                         RegimeHint regime, const NumericForceOptions& options)
{
    atom.validate();
    const double M = ctx.mass();
    const double r = ctx.radius();
    const double floor = 2.0 * M * (1.0 + geometry::kHorizonMargin);
    double h = options.step;
    if (h == 0.0) {
        h = std::cbrt(std::numeric_limits<double>::epsilon()) * r;
        if (r - h <= floor)
            h = 0.5 * ctx.horizon_distance();
    }
    if (!(h > 0.0) || !std::isfinite(h)) {
        std::ostringstream os;
        os << "stencil half-step must be positive (got " << h << ")";
        throw StencilError(os.str());
    }
    if (r - h <= floor) {
        std::ostringstream os;
        os << "stencil r - h = " << r - h << " does not stay outside 2M(1 + 1e-12) = " << floor;
        throw StencilError(os.str());
    }

    auto shift_at = [&](double radius) {
        return shifts::ground_shift(vacuum, atom, ctx.with_radius(radius), model, regime,
                                    options.shift_method, options.quadrature);
    };
    const auto hi = shift_at(r + h);
    const auto lo = shift_at(r - h);
    ForceValue v;
    v.thermal = ((lo.eT + lo.eTr) - (hi.eT + hi.eTr)) / (2.0 * h);
    v.vacuum = ((lo.e0_log + lo.e0r) - (hi.e0_log + hi.e0r)) / (2.0 * h);
    v.total = (lo.total - hi.total) / (2.0 * h);
    v.error = (hi.error + lo.error) / (2.0 * h);
    v.regime_extrapolated = vacuum == VacuumKind::Unruh && !in_closed_form_window(ctx, regime);
    return v;
}

std::size_t ForceProfile::failed_count() const noexcept
{
    return static_cast<std::size_t>(
        std::count_if(samples.begin(), samples.end(), [](const ForceSample& s) { return !s.ok; }));
}

unsigned worker_count(unsigned requested, std::size_t jobs)
{
    unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("HORIZON_SHIFT_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && cap > 0)
            n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    n = static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
    return std::max(n, 1u);
}

ForceProfile sweep_profile(VacuumKind vacuum, const shifts::AtomSpec& atom, double mass,
                           const std::vector<double>& r_grid, greybody::GreybodyModel model,
                           RegimeHint regime, ForceMethod method, const SweepOptions& options)
{
    geometry::require_positive_mass(mass);
    atom.validate();
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        if (!(r_grid[i] > 2.0 * mass))
            throw ValidationError("sweep grid must lie outside r = 2M");
        if (i > 0 && !(r_grid[i] > r_grid[i - 1]))
            throw ValidationError("sweep grid must be strictly increasing");
    }

    auto evaluate = [&](double r) -> ForceValue {
        const geometry::SchwarzschildContext ctx(mass, r);
        if (method == ForceMethod::ClosedForm)
            return closed_form_force(vacuum, atom, ctx, regime);
        return numeric_force(vacuum, atom, ctx, model, regime, options.numeric);
    };

    ForceProfile profile;
    profile.method = method;
    profile.vacuum = vacuum;
    profile.regime = regime;
    profile.samples.resize(r_grid.size());

    const unsigned workers = worker_count(options.threads, r_grid.size());
    auto work = [&](unsigned id) {
        for (std::size_t i = id; i < r_grid.size(); i += workers) {
            ForceSample& s = profile.samples[i];
            s.r = r_grid[i];
            try {
                s.force = evaluate(s.r);
            } catch (const NumericalError& e) {
                s.ok = false;
                s.numerical_failure = true;
                s.failure = e.what();
            } catch (const Error& e) {
                s.ok = false;
                s.failure = e.what();
            }
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned id = 0; id < workers; ++id)
            pool.emplace_back(work, id);
        for (auto& t : pool)
            t.join();
    }

    const auto& s = profile.samples;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!s[i].ok)
            continue;
        if (s[i].force.total == 0.0) {
            profile.sign_changes.push_back({s[i].r, s[i].r, s[i].r});
            continue;
        }
        if (i + 1 >= s.size() || !s[i + 1].ok || s[i + 1].force.total == 0.0)
            continue;
        if ((s[i].force.total < 0.0) == (s[i + 1].force.total < 0.0))
            continue;
        double lo = s[i].r;
        double hi = s[i + 1].r;
        const bool lo_negative = s[i].force.total < 0.0;
        double root = 0.5 * (lo + hi);
        try {
            while (hi - lo > options.root_rel_tol * hi) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi)
                    break;
                const double fm = evaluate(mid).total;
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((fm < 0.0) == lo_negative)
                    lo = mid;
                else
                    hi = mid;
            }
            root = 0.5 * (lo + hi);
        } catch (const Error&) {
            // Keep the last bracket midpoint.
            root = 0.5 * (lo + hi);
        }
        profile.sign_changes.push_back({s[i].r, s[i + 1].r, root});
    }
    return profile;
}

} // namespace horizon::force

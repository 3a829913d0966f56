#include "horizon/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "horizon/geometry.hpp"

namespace horizon::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& what)
{
    throw ConfigError(key + ": " + what);
}

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

template <class E, std::size_t N>
E parse_enum(const std::string& key, const std::string& text, const std::pair<const char*, E> (&table)[N])
{
    std::string allowed;
    for (const auto& [name, value] : table) {
        if (text == name)
            return value;
        allowed += allowed.empty() ? name : std::string("|") + name;
    }
    fail(key, "expected one of " + allowed + " (got '" + text + "')");
}

const std::pair<const char*, response::VacuumKind> kVacua[] = {
    {"boulware", response::VacuumKind::Boulware}, {"unruh", response::VacuumKind::Unruh}};
const std::pair<const char*, response::RegimeHint> kRegimes[] = {
    {"near-horizon", response::RegimeHint::NearHorizon}, {"asymptotic", response::RegimeHint::Asymptotic}};
const std::pair<const char*, greybody::GreybodyModel> kModels[] = {
    {"geometric", greybody::GreybodyModel::GeometricOptics},
    {"numerical", greybody::GreybodyModel::NumericalBarrier}};
const std::pair<const char*, MethodChoice> kMethods[] = {
    {"closed", MethodChoice::Closed}, {"quadrature", MethodChoice::Quadrature}, {"both", MethodChoice::Both}};
const std::pair<const char*, OutputFormat> kFormats[] = {{"csv", OutputFormat::Csv}, {"json", OutputFormat::Json}};
const std::pair<const char*, Spacing> kSpacings[] = {{"linear", Spacing::Linear}, {"log", Spacing::Log}};
const std::pair<const char*, Command> kCommands[] = {{"shift", Command::Shift},
                                                     {"force", Command::Force},
                                                     {"greybody", Command::Greybody},
                                                     {"evolve", Command::Evolve},
                                                     {"sweep", Command::Sweep}};

template <class T>
T get_as(const json& j, const std::string& key)
{
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        if constexpr (std::is_same_v<T, std::string>)
            fail(key, "expected a string");
        else if constexpr (std::is_integral_v<T>)
            fail(key, "expected an integer");
        else
            fail(key, "expected a number");
    }
}

json grid_to_json(const Grid& g)
{
    return json{{"min", g.min}, {"max", g.max}, {"points", g.points}, {"spacing", to_string(g.spacing)}};
}

Grid grid_from_json(const json& j, const std::string& key)
{
    if (!j.is_object())
        fail(key, "expected an object with min, max, points, spacing");
    Grid g;
    bool has_min = false, has_max = false, has_points = false;
    for (const auto& [k, v] : j.items()) {
        const std::string path = key + "." + k;
        if (k == "min") {
            g.min = get_as<double>(v, path);
            has_min = true;
        } else if (k == "max") {
            g.max = get_as<double>(v, path);
            has_max = true;
        } else if (k == "points") {
            g.points = get_as<int>(v, path);
            has_points = true;
        } else if (k == "spacing") {
            g.spacing = parse_enum(path, get_as<std::string>(v, path), kSpacings);
        } else {
            fail(path, "unknown key");
        }
    }
    if (!has_min || !has_max || !has_points)
        fail(key, "min, max and points are all required");
    return g;
}

void validate_grid(const Grid& g, const std::string& key, double lower, const std::string& lower_text)
{
    if (g.points < 1)
        fail(key + ".points", "must be >= 1 (got " + std::to_string(g.points) + ")");
    if (!std::isfinite(g.min) || !std::isfinite(g.max))
        fail(key, "min and max must be finite");
    if (g.points == 1 ? g.max != g.min : !(g.max > g.min))
        fail(key, "needs min < max (or min == max with points = 1)");
    if (!(g.min > lower))
        fail(key + ".min", "must satisfy " + lower_text + " (got " + fmt(g.min) + ")");
}

} // namespace

const char* to_string(Command c) noexcept
{
    for (const auto& [name, value] : kCommands)
        if (value == c)
            return name;
    return "?";
}
const char* to_string(MethodChoice m) noexcept
{
    for (const auto& [name, value] : kMethods)
        if (value == m)
            return name;
    return "?";
}
const char* to_string(OutputFormat f) noexcept
{
    return f == OutputFormat::Csv ? "csv" : "json";
}
const char* to_string(Spacing s) noexcept
{
    return s == Spacing::Linear ? "linear" : "log";
}

std::vector<double> Grid::values() const
{
    std::vector<double> out(static_cast<std::size_t>(std::max(points, 0)));
    if (points == 1) {
        out[0] = min;
        return out;
    }
    for (int i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / (points - 1);
        out[static_cast<std::size_t>(i)] =
            spacing == Spacing::Linear ? min + t * (max - min) : std::exp(std::log(min) + t * std::log(max / min));
    }
    out.front() = min;
    out.back() = max;
    return out;
}

pvquad::QuadratureSettings RunConfig::quadrature() const
{
    pvquad::QuadratureSettings s;
    s.rel_tol = rel_tol;
    s.abs_tol = abs_tol;
    s.max_subdivisions = max_subdivisions;
    return s;
}

std::vector<double> RunConfig::radii() const
{
    if (radius)
        return {*radius};
    if (r_grid)
        return r_grid->values();
    return {};
}

std::string to_json(const RunConfig& c)
{
    json j;
    j["command"] = to_string(c.command);
    j["vacuum"] = response::to_string(c.vacuum);
    j["regime"] = response::to_string(c.regime);
    j["mass"] = c.mass;
    if (c.radius)
        j["radius"] = *c.radius;
    if (c.r_grid)
        j["r_grid"] = grid_to_json(*c.r_grid);
    j["omega0"] = c.omega0;
    j["mu"] = c.mu;
    j["cutoff_m"] = c.cutoff_m;
    j["greybody"] = greybody::to_string(c.greybody);
    j["method"] = to_string(c.method);
    j["rel_tol"] = c.rel_tol;
    j["abs_tol"] = c.abs_tol;
    j["max_subdivisions"] = c.max_subdivisions;
    j["step"] = c.step;
    if (c.frequency_grid)
        j["frequency_grid"] = grid_to_json(*c.frequency_grid);
    j["p_excited0"] = c.p_excited0;
    j["coherence0"] = c.coherence0;
    j["tau_max"] = c.tau_max;
    j["tau_points"] = c.tau_points;
    j["threads"] = c.threads;
    j["output"] = c.output;
    j["format"] = to_string(c.format);
    return j.dump();
}

RunConfig config_from_json(const std::string& text, RunConfig c)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: not valid JSON (") + e.what() + ")");
    }
    if (!j.is_object())
        throw ConfigError("config: top level must be a JSON object");
    for (const auto& [k, v] : j.items()) {
        if (k == "command")
            c.command = parse_enum(k, get_as<std::string>(v, k), kCommands);
        else if (k == "vacuum")
            c.vacuum = parse_enum(k, get_as<std::string>(v, k), kVacua);
        else if (k == "regime")
            c.regime = parse_enum(k, get_as<std::string>(v, k), kRegimes);
        else if (k == "mass")
            c.mass = get_as<double>(v, k);
        else if (k == "radius")
            c.radius = get_as<double>(v, k);
        else if (k == "r_grid")
            c.r_grid = grid_from_json(v, k);
        else if (k == "omega0")
            c.omega0 = get_as<double>(v, k);
        else if (k == "mu")
            c.mu = get_as<double>(v, k);
        else if (k == "cutoff_m")
            c.cutoff_m = get_as<double>(v, k);
        else if (k == "greybody")
            c.greybody = parse_enum(k, get_as<std::string>(v, k), kModels);
        else if (k == "method")
            c.method = parse_enum(k, get_as<std::string>(v, k), kMethods);
        else if (k == "rel_tol")
            c.rel_tol = get_as<double>(v, k);
        else if (k == "abs_tol")
            c.abs_tol = get_as<double>(v, k);
        else if (k == "max_subdivisions")
            c.max_subdivisions = get_as<int>(v, k);
        else if (k == "step")
            c.step = get_as<double>(v, k);
        else if (k == "frequency_grid")
            c.frequency_grid = grid_from_json(v, k);
        else if (k == "p_excited0")
            c.p_excited0 = get_as<double>(v, k);
        else if (k == "coherence0")
            c.coherence0 = get_as<double>(v, k);
        else if (k == "tau_max")
            c.tau_max = get_as<double>(v, k);
        else if (k == "tau_points")
            c.tau_points = get_as<int>(v, k);
        else if (k == "threads")
            c.threads = get_as<unsigned>(v, k);
        else if (k == "output")
            c.output = get_as<std::string>(v, k);
        else if (k == "format")
            c.format = parse_enum(k, get_as<std::string>(v, k), kFormats);
        else
            fail(k, "unknown key");
    }
    return c;
}

void validate(const RunConfig& c)
{
    if (!(c.mass > 0.0) || !std::isfinite(c.mass))
        fail("mass", "must be positive (got " + fmt(c.mass) + ")");
    const double horizon = 2.0 * c.mass * (1.0 + geometry::kHorizonMargin);
    const std::string outside = "r > 2M = " + fmt(2.0 * c.mass);

    const bool needs_radius = c.command != Command::Greybody;
    if (needs_radius) {
        if (c.radius && c.r_grid)
            fail("radius", "give either radius or r_grid, not both");
        if (!c.radius && !c.r_grid)
            fail("radius", "required (or r_grid with r_min, r_max, r_points)");
        if (c.command == Command::Evolve && c.r_grid)
            fail("r_grid", "evolve takes a single radius");
        if (c.radius && !(*c.radius > horizon))
            fail("radius", "must satisfy " + outside + " (got " + fmt(*c.radius) + ")");
        if (c.r_grid)
            validate_grid(*c.r_grid, "r_grid", horizon, outside);
    }
    if (c.frequency_grid)
        validate_grid(*c.frequency_grid, "frequency_grid", 0.0, "M omega > 0");

    if (!(c.omega0 > 0.0) || !std::isfinite(c.omega0))
        fail("omega0", "must be positive (got " + fmt(c.omega0) + ")");
    if (!(c.mu > 0.0) || !std::isfinite(c.mu))
        fail("mu", "must be positive (got " + fmt(c.mu) + ")");
    if (!(c.cutoff_m > 100.0 * c.omega0) || !std::isfinite(c.cutoff_m))
        fail("cutoff_m", "must exceed 100 * omega0 = " + fmt(100.0 * c.omega0) + " (got " + fmt(c.cutoff_m) + ")");
    if (!(c.rel_tol > 0.0 && c.rel_tol < 1.0))
        fail("rel_tol", "must lie in (0, 1) (got " + fmt(c.rel_tol) + ")");
    if (!(c.abs_tol > 0.0) || !std::isfinite(c.abs_tol))
        fail("abs_tol", "must be finite and positive (got " + fmt(c.abs_tol) + ")");
    if (c.max_subdivisions < 10)
        fail("max_subdivisions", "must be >= 10 (got " + std::to_string(c.max_subdivisions) + ")");
    if (!(c.step >= 0.0) || !std::isfinite(c.step))
        fail("step", "must be >= 0 (0 selects the default rule)");
    if (!(c.p_excited0 >= 0.0 && c.p_excited0 <= 1.0))
        fail("p_excited0", "must lie in [0, 1] (got " + fmt(c.p_excited0) + ")");
    if (c.coherence0 * c.coherence0 > c.p_excited0 * (1.0 - c.p_excited0))
        fail("coherence0", "must satisfy coherence0^2 <= p_excited0 (1 - p_excited0)");
    if (!(c.tau_max >= 0.0) || !std::isfinite(c.tau_max))
        fail("tau_max", "must be >= 0");
    if (c.tau_points < 1)
        fail("tau_points", "must be >= 1");
    if (c.output.empty())
        fail("output", "must be a path or '-' for stdout");

    const bool closed = c.method != MethodChoice::Quadrature;
    if (closed && c.greybody == greybody::GreybodyModel::NumericalBarrier &&
        c.command != Command::Greybody)
        fail("method", "closed forms assume greybody=geometric; use method=quadrature with greybody=numerical");

    const bool uses_shifts = c.command == Command::Shift || c.command == Command::Sweep ||
                             c.command == Command::Force || c.command == Command::Evolve;
    if (closed && uses_shifts && c.vacuum == response::VacuumKind::Unruh &&
        c.regime == response::RegimeHint::Asymptotic) {
        const double th = geometry::hawking_temperature(c.mass);
        if (c.omega0 / th < 10.0 && th / c.omega0 < 10.0)
            fail("omega0", "far-field closed form needs omega0/T_H >= 10 or T_H/omega0 >= 10 (T_H = " +
                               fmt(th) + ", omega0/T_H = " + fmt(c.omega0 / th) + "); use method=quadrature");
    }
    if (closed && (c.command == Command::Force || c.command == Command::Sweep) &&
        c.vacuum == response::VacuumKind::Unruh) {
        for (double r : c.radii()) {
            const bool near = c.regime == response::RegimeHint::NearHorizon;
            const bool inside = near ? (r - 2.0 * c.mass) / c.mass <= 0.1 : r / c.mass >= 50.0;
            if (!inside)
                fail(c.radius ? "radius" : "r_grid",
                     std::string("closed-form force needs ") + (near ? "(r - 2M)/M <= 0.1" : "r/M >= 50") +
                         " (got r = " + fmt(r) + "); use method=quadrature");
        }
    }
}

RunConfig parse_config(const std::vector<std::string>& args)
{
    CLI::App app{"Radiative level shifts and forces on a static atom outside a Schwarzschild black hole",
                 "horizon-shift"};
    app.set_version_flag("--version", std::string("horizon-shift ") + HORIZON_SHIFT_VERSION);
    app.require_subcommand(1);

    std::optional<std::string> config_path, vacuum, regime, greybody, method, format, r_spacing, f_spacing, output;
    std::optional<double> mass, radius, r_min, r_max, omega0, mu, cutoff_m, rel_tol, abs_tol, step, f_min, f_max,
        p0, c0, tau_max;
    std::optional<int> r_points, max_sub, f_points, tau_points;
    std::optional<unsigned> threads;

    app.add_option("--config", config_path, "JSON config file; flags override its values");
    app.add_option("--vacuum", vacuum, "boulware|unruh");
    app.add_option("--regime", regime, "near-horizon|asymptotic");
    app.add_option("--mass", mass, "black-hole mass M (default 1)");
    app.add_option("--radius", radius, "single radius r > 2M");
    app.add_option("--r-min", r_min, "radial grid start");
    app.add_option("--r-max", r_max, "radial grid end");
    app.add_option("--r-points", r_points, "radial grid size");
    app.add_option("--r-spacing", r_spacing, "linear|log");
    app.add_option("--omega0", omega0, "level spacing");
    app.add_option("--mu", mu, "coupling");
    app.add_option("--cutoff-m", cutoff_m, "Bethe cutoff m > 100 omega0");
    app.add_option("--greybody", greybody, "geometric|numerical");
    app.add_option("--method", method, "closed|quadrature|both");
    app.add_option("--rel-tol", rel_tol, "quadrature relative tolerance");
    app.add_option("--abs-tol", abs_tol, "quadrature absolute tolerance");
    app.add_option("--max-subdivisions", max_sub, "quadrature subdivision cap");
    app.add_option("--step", step, "force stencil half-step (0 = default rule)");
    app.add_option("--freq-min", f_min, "greybody: smallest M omega");
    app.add_option("--freq-max", f_max, "greybody: largest M omega");
    app.add_option("--freq-points", f_points, "greybody: number of frequencies");
    app.add_option("--freq-spacing", f_spacing, "greybody: linear|log");
    app.add_option("--p-excited0", p0, "evolve: initial excited population");
    app.add_option("--coherence0", c0, "evolve: initial (real) coherence");
    app.add_option("--tau-max", tau_max, "evolve: final proper time");
    app.add_option("--tau-points", tau_points, "evolve: number of output times");
    app.add_option("--threads", threads, "worker threads (0 = hardware); HORIZON_SHIFT_THREADS caps it");
    app.add_option("--output", output, "output path or '-' for stdout");
    app.add_option("--format", format, "csv|json");

    for (const auto& [name, value] : kCommands) {
        (void)value;
        app.add_subcommand(name)->fallthrough();
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::CallForAllHelp&) {
        throw HelpRequested(app.help("", CLI::AppFormatMode::All));
    } catch (const CLI::CallForVersion&) {
        throw HelpRequested(std::string("horizon-shift ") + HORIZON_SHIFT_VERSION + "\n");
    } catch (const CLI::ParseError& e) {
        throw ConfigError(std::string("arguments: ") + e.what());
    }

    RunConfig c;
    if (config_path) {
        std::ifstream in(*config_path);
        if (!in)
            fail("config", "cannot read '" + *config_path + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        c = config_from_json(buf.str());
    }
    c.command = parse_enum("command", app.get_subcommands().front()->get_name(), kCommands);

    if (vacuum)
        c.vacuum = parse_enum("vacuum", *vacuum, kVacua);
    if (regime)
        c.regime = parse_enum("regime", *regime, kRegimes);
    if (greybody)
        c.greybody = parse_enum("greybody", *greybody, kModels);
    if (method)
        c.method = parse_enum("method", *method, kMethods);
    if (format)
        c.format = parse_enum("format", *format, kFormats);
    if (output)
        c.output = *output;
    if (mass)
        c.mass = *mass;
    if (omega0)
        c.omega0 = *omega0;
    if (mu)
        c.mu = *mu;
    if (cutoff_m)
        c.cutoff_m = *cutoff_m;
    if (rel_tol)
        c.rel_tol = *rel_tol;
    if (abs_tol)
        c.abs_tol = *abs_tol;
    if (max_sub)
        c.max_subdivisions = *max_sub;
    if (step)
        c.step = *step;
    if (p0)
        c.p_excited0 = *p0;
    if (c0)
        c.coherence0 = *c0;
    if (tau_max)
        c.tau_max = *tau_max;
    if (tau_points)
        c.tau_points = *tau_points;
    if (threads)
        c.threads = *threads;

    const bool grid_flags = r_min || r_max || r_points || r_spacing;
    if (radius && grid_flags)
        fail("radius", "give either --radius or --r-min/--r-max/--r-points, not both");
    if (radius) {
        c.radius = *radius;
        c.r_grid.reset();
    }
    if (grid_flags) {
        Grid g = c.r_grid.value_or(Grid{});
        const bool complete = (r_min || c.r_grid) && (r_max || c.r_grid) && (r_points || c.r_grid);
        if (!complete)
            fail("r_grid", "--r-min, --r-max and --r-points are all required");
        if (r_min)
            g.min = *r_min;
        if (r_max)
            g.max = *r_max;
        if (r_points)
            g.points = *r_points;
        if (r_spacing)
            g.spacing = parse_enum("r_spacing", *r_spacing, kSpacings);
        c.r_grid = g;
        c.radius.reset();
    }
    if (f_min || f_max || f_points || f_spacing) {
        Grid g = c.frequency_grid.value_or(Grid{});
        const bool complete = (f_min || c.frequency_grid) && (f_max || c.frequency_grid) &&
                              (f_points || c.frequency_grid);
        if (!complete)
            fail("frequency_grid", "--freq-min, --freq-max and --freq-points are all required");
        if (f_min)
            g.min = *f_min;
        if (f_max)
            g.max = *f_max;
        if (f_points)
            g.points = *f_points;
        if (f_spacing)
            g.spacing = parse_enum("freq_spacing", *f_spacing, kSpacings);
        c.frequency_grid = g;
    }

    validate(c);
    return c;
}

} // namespace horizon::cli

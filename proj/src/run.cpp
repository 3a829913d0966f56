#include "horizon/run.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <thread>

#include <json.hpp>

#include "horizon/force.hpp"
#include "horizon/greybody.hpp"
#include "horizon/masterq.hpp"
#include "horizon/response.hpp"
#include "horizon/shifts.hpp"

namespace horizon::cli {

namespace {

using nlohmann::ordered_json;

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

struct Failure {
    std::string where;
    std::string message;
    bool numerical = false;
};

// Row-producing task. Each task either fills its row or records a failure.
struct Row {
    bool ok = false;
    std::vector<std::string> csv;
    ordered_json record;
    Failure failure;
};

void run_tasks(std::vector<std::function<void(Row&)>>& tasks, std::vector<Row>& rows, unsigned threads)
{
    rows.assign(tasks.size(), Row{});
    const unsigned workers = force::worker_count(threads, tasks.size());
    auto work = [&](unsigned id) {
        for (std::size_t i = id; i < tasks.size(); i += workers) {
            try {
                tasks[i](rows[i]);
                rows[i].ok = true;
            } catch (const NumericalError& e) {
                rows[i].failure.message = e.what();
                rows[i].failure.numerical = true;
            } catch (const Error& e) {
                rows[i].failure.message = e.what();
            }
        }
    };
    if (workers == 1) {
        work(0);
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned id = 0; id < workers; ++id)
        pool.emplace_back(work, id);
    for (auto& t : pool)
        t.join();
}

std::vector<shifts::Method> shift_methods(MethodChoice m)
{
    if (m == MethodChoice::Closed)
        return {shifts::Method::ClosedForm};
    if (m == MethodChoice::Quadrature)
        return {shifts::Method::Quadrature};
    return {shifts::Method::ClosedForm, shifts::Method::Quadrature};
}

struct Table {
    std::vector<std::string> columns;
    std::vector<Row> rows;
    std::vector<std::string> notes; // extra trailing comment lines
    ordered_json extra = ordered_json::object();
};

int emit(const RunConfig& config, const Table& table, std::ostream& out)
{
    std::vector<Failure> failures;
    for (const auto& row : table.rows)
        if (!row.ok)
            failures.push_back(row.failure);

    if (config.format == OutputFormat::Csv) {
        out << "# horizon-shift " << HORIZON_SHIFT_VERSION << '\n';
        out << "# config: " << to_json(config) << '\n';
        for (std::size_t i = 0; i < table.columns.size(); ++i)
            out << (i ? "," : "") << table.columns[i];
        out << '\n';
        for (const auto& row : table.rows) {
            if (!row.ok)
                continue;
            for (std::size_t i = 0; i < row.csv.size(); ++i)
                out << (i ? "," : "") << row.csv[i];
            out << '\n';
        }
        for (const auto& n : table.notes)
            out << "# " << n << '\n';
        for (const auto& f : failures)
            out << "# failed: " << f.where << ": " << f.message << '\n';
    } else {
        ordered_json doc;
        doc["version"] = HORIZON_SHIFT_VERSION;
        doc["config"] = ordered_json::parse(to_json(config));
        ordered_json records = ordered_json::array();
        for (const auto& row : table.rows)
            if (row.ok)
                records.push_back(row.record);
        doc["records"] = records;
        for (const auto& [k, v] : table.extra.items())
            doc[k] = v;
        ordered_json fails = ordered_json::array();
        for (const auto& f : failures)
            fails.push_back({{"where", f.where}, {"message", f.message}, {"numerical", f.numerical}});
        doc["failures"] = fails;
        out << doc.dump(2) << '\n';
    }
    out.flush();

    bool numerical = false;
    for (const auto& f : failures)
        numerical = numerical || f.numerical;
    if (failures.empty())
        return kExitOk;
    return numerical ? kExitNumerical : kExitValidation;
}

Table shift_table(const RunConfig& c)
{
    Table t;
    t.columns = {"r", "method", "vacuum", "regime", "e0_log", "e0r", "eT", "eTr",
                 "total", "excited", "lamb_gap", "error_estimate"};
    std::vector<std::function<void(Row&)>> tasks;
    for (double r : c.radii()) {
        for (auto method : shift_methods(c.method)) {
            tasks.emplace_back([&c, r, method](Row& row) {
                row.failure.where = "r=" + num(r) + " method=" + shifts::to_string(method);
                const geometry::SchwarzschildContext ctx(c.mass, r);
                const auto q = c.quadrature();
                const auto b = shifts::ground_shift(c.vacuum, c.atom(), ctx, c.greybody, c.regime, method, q);
                const auto ex = shifts::excited_shift(c.vacuum, c.atom(), ctx, c.greybody, c.regime, method, q);
                const double err = b.error + ex.error;
                row.csv = {num(r), shifts::to_string(method), response::to_string(c.vacuum),
                           response::to_string(c.regime), num(b.e0_log), num(b.e0r), num(b.eT), num(b.eTr),
                           num(b.total), num(ex.value), num(ex.value - b.total), num(err)};
                row.record = {{"r", r},
                              {"method", shifts::to_string(method)},
                              {"vacuum", response::to_string(c.vacuum)},
                              {"regime", response::to_string(c.regime)},
                              {"e0_log", b.e0_log},
                              {"e0r", b.e0r},
                              {"eT", b.eT},
                              {"eTr", b.eTr},
                              {"total", b.total},
                              {"error_estimate", b.error},
                              {"excited", ex.value},
                              {"excited_error_estimate", ex.error},
                              {"lamb_gap", ex.value - b.total},
                              {"mass_renormalization", shifts::ShiftBreakdown::mass_renormalization}};
            });
        }
    }
    run_tasks(tasks, t.rows, c.threads);
    return t;
}

std::vector<force::ForceMethod> force_methods(MethodChoice m)
{
    if (m == MethodChoice::Closed)
        return {force::ForceMethod::ClosedForm};
    if (m == MethodChoice::Quadrature)
        return {force::ForceMethod::NumericDiff};
    return {force::ForceMethod::ClosedForm, force::ForceMethod::NumericDiff};
}

Table force_table(const RunConfig& c)
{
    Table t;
    t.columns = {"r", "F_total", "F_thermal", "F_vacuum", "method", "regime", "error_estimate"};
    force::SweepOptions opts;
    opts.numeric.step = c.step;
    opts.numeric.quadrature = c.quadrature();
    opts.threads = c.threads;
    const auto radii = c.radii();
    ordered_json roots = ordered_json::array();
    for (auto method : force_methods(c.method)) {
        const auto profile =
            force::sweep_profile(c.vacuum, c.atom(), c.mass, radii, c.greybody, c.regime, method, opts);
        const char* mtag = force::to_string(method);
        for (const auto& s : profile.samples) {
            Row row;
            row.ok = s.ok;
            if (!s.ok) {
                row.failure = {"r=" + num(s.r) + " method=" + mtag, s.failure, s.numerical_failure};
                t.rows.push_back(row);
                continue;
            }
            const auto& f = s.force;
            row.csv = {num(s.r), num(f.total), num(f.thermal), num(f.vacuum), mtag,
                       response::to_string(c.regime), num(f.error)};
            row.record = {{"r", s.r},
                          {"F_total", f.total},
                          {"F_thermal", f.thermal},
                          {"F_vacuum", f.vacuum},
                          {"method", mtag},
                          {"regime", response::to_string(c.regime)},
                          {"error_estimate", f.error},
                          {"regime_extrapolated", f.regime_extrapolated}};
            if (f.regime_extrapolated)
                t.notes.push_back("regime-extrapolated: r=" + num(s.r) + " method=" + mtag);
            t.rows.push_back(row);
        }
        for (const auto& sc : profile.sign_changes) {
            t.notes.push_back("sign_change method=" + std::string(mtag) + " lower=" + num(sc.lower) +
                              " upper=" + num(sc.upper) + " root=" + num(sc.root));
            roots.push_back({{"method", mtag}, {"lower", sc.lower}, {"upper", sc.upper}, {"root", sc.root}});
        }
    }
    t.extra["sign_changes"] = roots;
    return t;
}

Table sweep_table(const RunConfig& c)
{
    Table t;
    t.columns = {"r", "method", "e0_log", "e0r", "eT", "eTr", "total", "F_total", "F_thermal", "F_vacuum",
                 "error_estimate"};
    std::vector<std::function<void(Row&)>> tasks;
    for (double r : c.radii()) {
        for (auto method : shift_methods(c.method)) {
            tasks.emplace_back([&c, r, method](Row& row) {
                row.failure.where = "r=" + num(r) + " method=" + shifts::to_string(method);
                const geometry::SchwarzschildContext ctx(c.mass, r);
                const auto q = c.quadrature();
                const auto b = shifts::ground_shift(c.vacuum, c.atom(), ctx, c.greybody, c.regime, method, q);
                force::ForceValue f;
                if (method == shifts::Method::ClosedForm) {
                    f = force::closed_form_force(c.vacuum, c.atom(), ctx, c.regime);
                } else {
                    force::NumericForceOptions o;
                    o.step = c.step;
                    o.quadrature = q;
                    f = force::numeric_force(c.vacuum, c.atom(), ctx, c.greybody, c.regime, o);
                }
                const double err = b.error + f.error;
                row.csv = {num(r),         shifts::to_string(method), num(b.e0_log), num(b.e0r),
                           num(b.eT),      num(b.eTr),                num(b.total),  num(f.total),
                           num(f.thermal), num(f.vacuum),             num(err)};
                row.record = {{"r", r},          {"method", shifts::to_string(method)},
                              {"e0_log", b.e0_log}, {"e0r", b.e0r},
                              {"eT", b.eT},        {"eTr", b.eTr},
                              {"total", b.total},  {"F_total", f.total},
                              {"F_thermal", f.thermal}, {"F_vacuum", f.vacuum},
                              {"error_estimate", err}};
            });
        }
    }
    run_tasks(tasks, t.rows, c.threads);
    return t;
}

Table greybody_table(const RunConfig& c)
{
    Table t;
    t.columns = {"M_omega", "geometric_sum", "step_sum", "numerical_sum", "ratio", "error_estimate",
                 "truncation_l"};
    const Grid grid = c.frequency_grid.value_or(Grid{0.5, 4.0, 8, Spacing::Linear});
    std::vector<std::function<void(Row&)>> tasks;
    for (double mw : grid.values()) {
        tasks.emplace_back([&c, mw](Row& row) {
            row.failure.where = "M_omega=" + num(mw);
            const double omega = mw / c.mass;
            const double geo = greybody::geo_weighted_sum(omega, c.mass);
            const double step = greybody::geo_step_sum(omega, c.mass);
            const auto spectrum = greybody::transmission_spectrum(omega, c.mass);
            const double sum = spectrum.weighted_sum();
            row.csv = {num(mw),       num(geo),
                       num(step),     num(sum),
                       num(sum / geo), num(spectrum.weighted_error()),
                       std::to_string(spectrum.truncation_l)};
            row.record = {{"M_omega", mw},       {"geometric_sum", geo},
                          {"step_sum", step},    {"numerical_sum", sum},
                          {"ratio", sum / geo},  {"error_estimate", spectrum.weighted_error()},
                          {"truncation_l", spectrum.truncation_l}};
        });
    }
    run_tasks(tasks, t.rows, c.threads);
    return t;
}

Table evolve_table(const RunConfig& c)
{
    Table t;
    t.columns = {"tau", "p_excited", "coherence_abs"};
    const geometry::SchwarzschildContext ctx(c.mass, *c.radius);
    const response::SpectralDensity density(c.vacuum, c.regime, ctx, c.greybody);
    const auto rates = masterq::rates_from_density(density, c.atom());
    masterq::LambShift lamb;
    if (c.method == MethodChoice::Closed) {
        const auto g = shifts::ground_shift(c.vacuum, c.atom(), ctx, c.greybody, c.regime,
                                            shifts::Method::ClosedForm);
        const auto e = shifts::excited_shift(c.vacuum, c.atom(), ctx, c.greybody, c.regime,
                                             shifts::Method::ClosedForm);
        lamb = {e.value, g.total};
    } else {
        const auto k = masterq::lamb_kernel(density, c.atom(), c.quadrature());
        lamb = masterq::lamb_hamiltonian(c.atom(), k.k_plus.value, k.k_minus.value);
    }
    t.notes.push_back("rate_down=" + num(rates.down) + " rate_up=" + num(rates.up) +
                      " lamb_excited=" + num(lamb.excited) + " lamb_ground=" + num(lamb.ground));
    t.extra["rates"] = {{"down", rates.down}, {"up", rates.up}, {"dephasing_extra", rates.dephasing_extra}};
    t.extra["lamb"] = {{"excited", lamb.excited}, {"ground", lamb.ground}, {"gap", lamb.gap()}};

    const masterq::TwoLevelState s0{c.p_excited0, {c.coherence0, 0.0}};
    for (int i = 0; i < c.tau_points; ++i) {
        const double tau = c.tau_points == 1 ? c.tau_max : c.tau_max * i / (c.tau_points - 1);
        const auto s = masterq::evolve(s0, rates, tau, lamb);
        Row row;
        row.ok = true;
        row.csv = {num(tau), num(s.population_excited), num(std::abs(s.coherence))};
        row.record = {{"tau", tau},
                      {"p_excited", s.population_excited},
                      {"coherence_abs", std::abs(s.coherence)},
                      {"coherence_re", s.coherence.real()},
                      {"coherence_im", s.coherence.imag()}};
        t.rows.push_back(row);
    }
    return t;
}

} // namespace

int run(const RunConfig& config, std::ostream& out)
{
    validate(config);
    switch (config.command) {
    case Command::Shift:
        return emit(config, shift_table(config), out);
    case Command::Force:
        return emit(config, force_table(config), out);
    case Command::Sweep:
        return emit(config, sweep_table(config), out);
    case Command::Greybody:
        return emit(config, greybody_table(config), out);
    case Command::Evolve:
        return emit(config, evolve_table(config), out);
    }
    return kExitValidation;
}

int main_entry(const std::vector<std::string>& args, std::ostream& so, std::ostream& se)
{
    RunConfig config;
    try {
        config = parse_config(args);
    } catch (const HelpRequested& h) {
        so << h.what();
        return kExitOk;
    } catch (const Error& e) {
        se << "horizon-shift: " << e.what() << '\n';
        return kExitValidation;
    }
    try {
        if (config.output == "-")
            return run(config, so);
        std::ofstream file(config.output, std::ios::binary);
        if (!file) {
            se << "horizon-shift: output: cannot open '" << config.output << "'\n";
            return kExitValidation;
        }
        const int code = run(config, file);
        if (code != kExitOk)
            se << "horizon-shift: some rows failed; see the failure manifest in " << config.output << '\n';
        return code;
    } catch (const ValidationError& e) {
        se << "horizon-shift: " << e.what() << '\n';
        return kExitValidation;
    } catch (const NumericalError& e) {
        se << "horizon-shift: numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}

} // namespace horizon::cli

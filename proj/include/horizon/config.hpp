#pragma once

#include <optional>
#include <string>
#include <vector>

#include "horizon/errors.hpp"
#include "horizon/greybody.hpp"
#include "horizon/pvquad.hpp"
#include "horizon/response.hpp"
#include "horizon/shifts.hpp"

namespace horizon::cli {

// Raised for any invalid flag, key or value; the message names the key.
class ConfigError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// --help / --version: carries the text to print, exit code 0.
class HelpRequested : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Command { Shift, Force, Greybody, Evolve, Sweep };
enum class MethodChoice { Closed, Quadrature, Both };
enum class OutputFormat { Csv, Json };
enum class Spacing { Linear, Log };

const char* to_string(Command c) noexcept;
const char* to_string(MethodChoice m) noexcept;
const char* to_string(OutputFormat f) noexcept;
const char* to_string(Spacing s) noexcept;

struct Grid {
    double min = 0.0;
    double max = 0.0;
    int points = 0;
    Spacing spacing = Spacing::Linear;

    std::vector<double> values() const;
    bool operator==(const Grid&) const = default;
};

struct RunConfig {
    Command command = Command::Shift;
    response::VacuumKind vacuum = response::VacuumKind::Boulware;
    response::RegimeHint regime = response::RegimeHint::NearHorizon;
    double mass = 1.0;
    std::optional<double> radius;
    std::optional<Grid> r_grid;
    double omega0 = 1.0;
    double mu = 0.01;
    double cutoff_m = 1e6;
    greybody::GreybodyModel greybody = greybody::GreybodyModel::GeometricOptics;
    MethodChoice method = MethodChoice::Both;
    double rel_tol = 1e-9;
    double abs_tol = 1e-14;
    int max_subdivisions = 2000;
    // Force stencil half-step; 0 selects the default rule.
    double step = 0.0;
    // greybody: grid in M * omega.
    std::optional<Grid> frequency_grid;
    // evolve: initial state and proper-time grid [0, tau_max].
    double p_excited0 = 1.0;
    double coherence0 = 0.0;
    double tau_max = 1.0;
    int tau_points = 11;
    unsigned threads = 0;
    std::string output = "-";
    OutputFormat format = OutputFormat::Csv;

    shifts::AtomSpec atom() const { return {omega0, mu, cutoff_m}; }
    pvquad::QuadratureSettings quadrature() const;
    // Single radius or the grid, whichever is set.
    std::vector<double> radii() const;

    bool operator==(const RunConfig&) const = default;
};

// JSON object with one key per field; unset optionals are omitted.
std::string to_json(const RunConfig& config);

// Parses a JSON config document. Unknown keys and ill-typed values raise
// ConfigError. Keys not present keep their defaults.
RunConfig config_from_json(const std::string& text, RunConfig base = {});

// argv[1] is the subcommand. Values from --config FILE are applied first and
// explicit flags override them. Runs validate() on the result.
RunConfig parse_config(const std::vector<std::string>& args);

// Physical and structural checks, with messages naming the offending key.
void validate(const RunConfig& config);

} // namespace horizon::cli

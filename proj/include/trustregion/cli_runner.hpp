#pragma once

#include "trustregion/adversary_transport.hpp"
#include "trustregion/binary_action.hpp"
#include "trustregion/binary_trust.hpp"
#include "trustregion/core_model.hpp"
#include "trustregion/game_oracle.hpp"
#include "trustregion/mva_lp.hpp"
#include "trustregion/spherical.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace trustregion::cli {

using nlohmann::json;
namespace fs = std::filesystem;

inline constexpr const char* kSchemaVersion = "1";

enum class Task { binary_trust, binary_action, mva, spherical, oracle, sweep, verify_tre };

std::string to_string(Task t);

/// Configuration problem; `field` is the JSON path of the offending entry.
class ConfigError : public InputError {
public:
    ConfigError(std::string field, const std::string& msg)
        : InputError(field + ": " + msg), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Bundle directory or an artifact inside it is missing or unreadable.
class MissingArtifact : public InputError {
public:
    using InputError::InputError;
};

// ---------------------------------------------------------------- parsing

/// Number given either as a JSON number or as a decimal string ("0.75", "1e-9").
double parse_real(const json& node, const std::string& field);

/// Exact decimal grid: from + i * step for i = 0..n, each point rounded once
/// from its decimal value. Accepts {"from","to","step"} or an explicit list.
std::vector<double> parse_alpha_grid(const json& node, const std::string& field);

/// {"kind": "quadratic" | "log-score" | "weighted-quadratic" (gamma) | "custom-grid" (knots, d2)}
UtilityCurve parse_utility(const json& node, const std::string& field);

/// {"kind": "uniform" | "grid" (knots, values) | "beta" (a, b, n) | "atoms" (points, probs)}
/// Optional "lower"/"upper" for uniform; radial densities pass lower = 0, upper = r0.
BeliefDensity parse_density(const json& node, const std::string& field, double lower = 0.0,
                            double upper = 1.0);

/// Comma-separated numeric matrix, one row per line ('#' lines skipped).
Eigen::MatrixXd read_matrix_csv(const fs::path& path);

/// Game document: states, prior, messages [{posterior, prob}], types,
/// type_law (N x T), actions, payoff flat in [a, w, t] order, alpha.
FiniteGame game_from_json(const json& doc, const std::string& field = "game");
json game_to_json(const FiniteGame& g);
FiniteGame load_game(const fs::path& path);

struct ExperimentConfig {
    Task task = Task::binary_trust;
    json doc;
    /// Directory that relative paths in the document resolve against.
    fs::path base_dir;
    std::uint64_t seed = 0;
};

/// Validates the task-specific required fields, alpha ranges and referenced files.
ExperimentConfig parse_config(const json& doc, const fs::path& base_dir);
ExperimentConfig load_config(const fs::path& path);

struct RunOptions {
    fs::path out_dir = "out";
    int jobs = 0;
    std::optional<std::uint64_t> seed;  ///< overrides the config seed
    double tolerance = 1e-9;
    /// Force the alpha-grid form of the task (the `sweep` subcommand).
    bool sweep = false;
};

// ---------------------------------------------------------------- output

/// Fixed-point with 6 decimals, trailing zeros trimmed ("0.750000" -> "0.75").
std::string format_decimal(double x);

/// Interval endpoint with 6 decimals rounded outward (down for a lower bound,
/// up for an upper bound) so the printed interval contains the computed one.
/// Values within 1e-9 of a 6-decimal grid point print as that point.
std::string format_bound(double x, bool upper);

/// Writes text with LF endings, replacing the file.
void write_text(const fs::path& path, const std::string& text);

/// CSV schemas, one header per table; never reordered.
inline constexpr const char* kTrustCsvHeader = "alpha,lo,hi,cutoff";
inline constexpr const char* kActionCsvHeader =
    "alpha,L,G,alpha_hat,regime,sigma_low,sigma_high,value,no_adviser_value";
inline constexpr const char* kSphereCsvHeader = "alpha,r_star,residual";

/// Text for --help describing every CSV table.
std::string csv_schema_help();

// ---------------------------------------------------------------- artifacts

struct TrustArtifact {
    json utility;  ///< utility as given in the config
    json tau;      ///< density as given in the config
    TrustInterval trust;
    TransportMap map;
};

json to_json(const TransportMap& map);
/// Rebuilds the pieces through their factories (quantile pieces need tau).
TransportMap transport_map_from_json(const json& node, const BeliefDensity& tau);

json to_json(const TrustArtifact& a);
TrustArtifact trust_artifact_from_json(const json& node);

json to_json(const MvaSolution& s);
MvaSolution mva_from_json(const json& node);

json to_json(const BinaryActionSolution& s);
BinaryActionSolution binary_action_from_json(const json& node);

struct OracleArtifact {
    FiniteGame game;
    SaddleSolution solution;
    AdviserValue adviser;
};

json to_json(const OracleArtifact& a);
OracleArtifact oracle_from_json(const json& node);

json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const json& node, const std::string& field);

// ---------------------------------------------------------------- running

struct RunReport {
    /// One line per solved instance.
    std::vector<std::string> summary;
    std::vector<fs::path> artifacts;
};

/// Dispatches to the owning module and writes the bundle (manifest.json plus
/// JSON solutions and CSV tables) under opts.out_dir. verify-tre configs are
/// rejected here; use verify_bundle.
RunReport run_experiment(const ExperimentConfig& cfg, const RunOptions& opts);

struct CheckLine {
    std::string artifact;
    std::string invariant;
    double measured = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct VerifyReport {
    std::vector<CheckLine> checks;
    bool pass = true;
};

/// Re-loads every artifact listed in dir/manifest.json and re-runs its
/// certificate checks. Throws MissingArtifact when the bundle is incomplete.
VerifyReport verify_bundle(const fs::path& dir, const RunOptions& opts);

std::string format_check(const CheckLine& c);

} // namespace trustregion::cli

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "bundle_lab/bundle_mechanism.hpp"
#include "bundle_lab/valuation.hpp"

namespace bundle_lab {

std::string_view library_version() noexcept;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Command { single_opt, pair_opt, verify_thm1, verify_thm2, partition, sweep };

std::string_view to_string(Command command) noexcept;
/// Throws ConfigError for unknown names.
Command parse_command(std::string_view name);

/// Config-file form of a distribution: {"type":"uniform","M":1.0} or
/// {"type":"piecewise_linear","knots":[...],"densities":[...]}.
struct DistributionSpec {
  enum class Kind { uniform, piecewise_linear };
  Kind kind = Kind::uniform;
  double upper_bound = 1.0;       ///< uniform only
  std::vector<double> knots;      ///< piecewise_linear only
  std::vector<double> densities;  ///< piecewise_linear only

  ValuationDistribution build() const;
  bool operator==(const DistributionSpec&) const = default;
};

struct ExperimentConfig {
  Command command = Command::single_opt;
  std::vector<DistributionSpec> distributions;
  std::uint64_t seed = 0;
  std::size_t n_samples = 100000;
  std::vector<double> eps_grid{0.01, 0.02, 0.05, 0.1, 0.2};
  std::vector<std::size_t> n_list;
  std::size_t customers = 36;               ///< partition: population size N
  std::vector<std::size_t> group_sizes{2, 3, 6};
  int budget = 8;                           ///< optimizer rounds / sweeps
  std::vector<BundleOffer> offers;          ///< pair-opt: extra offers to evaluate
  std::string output;                       ///< CSV path; empty = no file

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses and validates a JSON config. Unknown keys, missing required fields
/// and invalid distributions raise ConfigError naming the JSON path.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const ExperimentConfig& config);

/// {"individual_prices":[0.5,null],"bundle_price":1.0}, null meaning NO_SALE.
BundleOffer offer_from_json(const nlohmann::json& j, const std::string& path = "$");
nlohmann::json offer_to_json(const BundleOffer& offer);

using Cell = std::variant<std::int64_t, double, std::string>;

struct RunReport {
  ExperimentConfig config;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> notes;
  double wall_seconds = 0.0;
  std::string version{library_version()};
  bool passed = true;  ///< false when a verify-* check failed
};

/// CSV text: header row, then rows in order; doubles at 12 significant digits.
std::string to_csv(const RunReport& report);
void emit_csv(const RunReport& report, const std::filesystem::path& path);

/// Human-readable footer: version, command, wall time, notes. Kept out of
/// the CSV so the CSV is byte-reproducible.
std::string report_footer(const RunReport& report);

/// Dispatches to the command, writes the CSV when config.output is set.
RunReport run(const ExperimentConfig& config);

/// Mixed population of N i.i.d. customers: for each group size s, N/s of them
/// are split into groups of s. Each group size is optimized once (pairs
/// exactly, larger groups by Monte Carlo) and compared with separate sales.
RunReport partition_experiment(const ExperimentConfig& config);

}  // namespace bundle_lab

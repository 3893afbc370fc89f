#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "duality/family.hpp"
#include "duality/report.hpp"

/// Configuration-driven check suites.
///
/// Config text is line oriented. `[check]` opens a descriptor; `key = value`
/// tokens on that line and the following ones fill it. Keys before the first
/// header (or under `[suite]`) set `seed` and `output`. `#` starts a comment.
///
///   seed = 7
///   [check] name=generator_duality family=SEP j=0.5 p=0.5 edges=0-1 totals=1,1
namespace duality::suite {

struct CheckDescriptor {
  std::string name;
  std::optional<Family> family;
  Params params;
  std::string edges;  // "0-1,1-2"; empty means a path on `vertices`
  int vertices = 2;
  std::vector<int> totals;     // one value: every total up to it; two: that sector pair
  std::vector<double> grid;    // empty: the family's standard grid
  std::vector<double> t_values;
  std::optional<double> tolerance;
  std::optional<std::int64_t> n_samples;
  std::map<std::string, std::string> options;  // check-specific keys, see known_options()
  int line = 0;
};

struct SuiteConfig {
  std::vector<CheckDescriptor> checks;
  std::uint64_t seed = 42;
  std::string output_path;
};

const std::vector<std::string>& known_checks();
const std::vector<std::string>& known_options();

/// Throws ParseError (with the line number), UnknownCheckName, BadParamRange.
SuiteConfig parse_config(std::string_view text);
/// Reads and parses a file; IoError when it cannot be read.
SuiteConfig load_config(const std::string& path);

/// The bundled suite covering every acceptance criterion that is attainable.
std::string_view default_suite_text();

/// Tolerance used when a descriptor gives none.
double default_tolerance(const CheckDescriptor& check);

/// Precedence: explicit seed, then DUALITY_LAB_SEED, then the config value.
std::uint64_t resolve_seed(std::uint64_t config_seed, std::optional<std::uint64_t> explicit_seed = std::nullopt);

struct RunOptions {
  int jobs = 1;                // descriptors evaluated concurrently
  std::ostream* log = nullptr;  // seeds of statistical checks and retries
};

/// One report per descriptor, in config order. Module errors become failed
/// reports with an infinite residual. Statistical checks are seeded from
/// (seed, descriptor index) and retried once on a fresh seed when z > 3.
std::vector<CheckReport> run_suite(const SuiteConfig& config, const RunOptions& options = {});
CheckReport run_check(const CheckDescriptor& check, std::uint64_t seed, std::size_t index, std::ostream* log = nullptr);

bool all_passed(const std::vector<CheckReport>& reports);

}  // namespace duality::suite

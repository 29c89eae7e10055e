#pragma once

#include "qce/channels.hpp"
#include "qce/entropies.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace qce {

struct PropertyReport {
  std::string suite;
  int trials = 0;
  int failures = 0;  // trials whose solver did not converge or threw
  double max_violation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::uint64_t seed = 0;
};

enum class Execution { serial, parallel };

inline constexpr std::uint64_t kDefaultSeed = 20240607;

struct SuiteOptions {
  int trials = 25;
  std::uint64_t seed = kDefaultSeed;
  int dim_a = 2;
  int dim_b = 2;
  Execution execution = Execution::parallel;
};

inline constexpr double kEqualityTol = 1e-6;
inline constexpr double kEqualityTolLarge = 1e-5;
inline constexpr double kInequalitySlack = 1e-7;

// A trial returns its violation (>= 0) or nullopt when the solver failed.
using Trial = std::function<std::optional<double>(Rng& rng, int trial)>;

// Runs trials with per-trial streams Rng(seed, trial); results are reduced in
// trial order so serial and parallel execution give identical reports.
PropertyReport run_trials(const std::string& suite, const SuiteOptions& opts, double tolerance,
                          const Trial& trial);

// Twelve in-region triples across D1 and D2 including boundary points.
const std::vector<EntropyParams>& catalogue();
// Six catalogue entries used by the data-processing suite.
std::vector<EntropyParams> dpi_triples();
// Catalogue entries whose dual also lies in the region.
std::vector<EntropyParams> self_dual_region_triples();

std::vector<PropertyReport> check_dpi(const EntropyParams& params, const SuiteOptions& opts);
PropertyReport check_additivity(const EntropyParams& params, const SuiteOptions& opts);
PropertyReport check_duality(const EntropyParams& params, const SuiteOptions& opts, int dim_c = 2);

struct ChainSpec {
  std::string name;
  double beta, w, gamma, v, lambda;
  bool allow_outside_region = false;
};
std::vector<ChainSpec> chain_instances();
PropertyReport check_chain(const ChainSpec& spec, const SuiteOptions& opts);

enum class Axis { alpha, z, lambda };
// The two fixed coordinates are given in (alpha, z, lambda) order with the
// swept one omitted. With `state` set, every trial reuses it.
PropertyReport check_monotone(Axis axis, const std::vector<double>& grid, double fixed_first,
                              double fixed_second, const SuiteOptions& opts,
                              const std::optional<BipartiteState>& state = std::nullopt);

enum class ConvexityCase { concave_q, convex_q, logconcave_q };
PropertyReport check_convexity(ConvexityCase c, const EntropyParams& params,
                               const SuiteOptions& opts);

// Two reports: alpha -> 1 against von Neumann, and lambda endpoints.
std::vector<PropertyReport> check_limits(const SuiteOptions& opts,
                                         const std::optional<BipartiteState>& state = std::nullopt);

std::vector<std::string> suite_names();
std::vector<PropertyReport> run_suite(const std::string& name, const SuiteOptions& opts);

// Product of two bipartite states regrouped as (A A')(B B').
BipartiteState bipartite_product(const BipartiteState& x, const BipartiteState& y);

}  // namespace qce

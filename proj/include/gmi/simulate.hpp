#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gmi/result.hpp"
#include "gmi/tables.hpp"

namespace gmi {

enum class Hypothesis { H0, Ha };

std::string hypothesis_name(Hypothesis h);

/// One simulation configuration: a marginal-tail parameter p (reports label
/// rows by 1-p), the escort and level parameters, and the replication plan.
struct ScenarioSpec {
  int dims_i = 11;
  int dims_j = 11;
  double p = 0.5;
  double lambda = 2.0;
  double alpha = 0.01;
  std::vector<std::int64_t> sample_sizes;
  std::int64_t replicates = 10000;
  std::uint64_t base_seed = 0;
  Hypothesis hypothesis = Hypothesis::H0;
};

/// Tally for one (sample size, method) cell of a scenario.
struct CellTally {
  std::int64_t n = 0;
  Method method = Method::ZAB;
  std::int64_t rejected = 0;
  std::int64_t aborted = 0;  // replicates with undefined statistic
  double rate = 0.0;         // rejected / (replicates - aborted)
};

struct ScenarioResult {
  ScenarioSpec spec;
  std::vector<CellTally> cells;  // sizes in spec order x methods in
                                 // canonical order
  double elapsed_seconds = 0.0;  // in-memory only; never serialized

  double rate(Method m, std::int64_t n) const;
  std::map<Method, std::int64_t> degenerate_counts() const;
};

/// Product distribution with both marginals {1-p, p/(I-1), ..., p/(I-1)}.
ProbTable build_h0_distribution(int dims_i, int dims_j, double p);

/// Same marginals, but the lower-right (I-1)x(I-1) block's mass is
/// collected on its diagonal: the dependent counterpart of the H0 table.
ProbTable build_ha_distribution(int dims_i, double p);

/// Runs the scenario: for every sample size draws `replicates` multinomial
/// samples (per-replicate seeds mixed from the spec, independent of thread
/// scheduling) and tallies rejections of all five methods at level alpha.
/// Replicates whose statistic is undefined (insufficient support or
/// degenerate variance) are counted as aborted, never folded into rates.
ScenarioResult run_scenario(const ScenarioSpec& spec, int threads = 0);

/// The full convergence/power comparison grid: one H0 and one Ha scenario
/// per entry of p_values, at I = J = 11.
std::vector<ScenarioResult> grid_report(
    const std::vector<double>& p_values,
    const std::vector<std::int64_t>& sizes, std::int64_t replicates,
    std::uint64_t base_seed, double lambda = 2.0, double alpha = 0.01,
    int threads = 0);

/// TSV with columns one_minus_p, n, method, hypothesis, rate, aborted.
std::string report_to_tsv(std::span<const ScenarioResult> results);

/// JSON document mirroring the ScenarioResult list.
std::string report_to_json(std::span<const ScenarioResult> results);

}  // namespace gmi

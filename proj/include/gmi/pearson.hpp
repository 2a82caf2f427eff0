#pragma once

#include <optional>
#include <utility>

#include "gmi/result.hpp"
#include "gmi/tables.hpp"

namespace gmi {

/// Which degrees of freedom the chi-squared reference uses.
enum class DfMode {
  Theoretical,  // (I-1)(J-1) from caller-supplied nominal dimensions
  Observed,     // (I_hat-1)(J_hat-1) from occupied rows/columns
};

/// Pearson's statistic n * sum (phat_ij - phat_i. phat_.j)^2 / (phat_i. phat_.j)
/// over cells with positive estimated expectation.
double pearson_statistic(const CountsTable& counts);

TestResult pearson_test(
    const CountsTable& counts, double alpha, DfMode mode,
    std::optional<std::pair<int, int>> nominal_dims = std::nullopt);

}  // namespace gmi

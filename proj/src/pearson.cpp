#include "gmi/pearson.hpp"

#include <string>

#include "gmi/special.hpp"

namespace gmi {

double pearson_statistic(const CountsTable& counts) {
  if (counts.total() < 1) {
    throw InsufficientSupport("pearson statistic needs n >= 1");
  }
  const ObservedDims dims = observed_dims(counts);
  if (dims.i_hat < 2 || dims.j_hat < 2) {
    throw InsufficientSupport("need at least 2 occupied rows and 2 occupied "
                              "columns (got " +
                              std::to_string(dims.i_hat) + "x" +
                              std::to_string(dims.j_hat) + ")");
  }
  const ProbTable phat = empirical(counts);
  const double n = static_cast<double>(counts.total());
  double t = 0.0;
  for (std::size_t i = 0; i < phat.rows(); ++i) {
    for (std::size_t j = 0; j < phat.cols(); ++j) {
      const double expected = phat.row_marginals()[i] * phat.col_marginals()[j];
      if (expected <= 0.0) continue;  // observed count is necessarily 0 there
      const double diff = phat(i, j) - expected;
      t += diff * diff / expected;
    }
  }
  return n * t;
}

TestResult pearson_test(const CountsTable& counts, double alpha, DfMode mode,
                        std::optional<std::pair<int, int>> nominal_dims) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("alpha must lie in (0,1)");
  }
  const double statistic = pearson_statistic(counts);
  const ObservedDims dims = observed_dims(counts);

  int df = 0;
  if (mode == DfMode::Theoretical) {
    if (!nominal_dims) {
      throw DomainError(
          "theoretical df mode requires the nominal (I, J) dimensions");
    }
    df = (nominal_dims->first - 1) * (nominal_dims->second - 1);
  } else {
    df = (dims.i_hat - 1) * (dims.j_hat - 1);
  }
  if (df < 1) {
    throw InvalidDf("chi-squared test needs df >= 1 (got " +
                    std::to_string(df) + ")");
  }

  TestResult res;
  res.method = mode == DfMode::Theoretical ? Method::PearsonTheoretical
                                           : Method::PearsonObserved;
  res.statistic = statistic;
  res.p_value = chisq_sf(statistic, df);
  res.reject = res.p_value < alpha;
  res.alpha = alpha;
  res.df = df;
  res.i_hat = dims.i_hat;
  res.j_hat = dims.j_hat;
  return res;
}

}  // namespace gmi

#include "gmi/entropy.hpp"

#include <cmath>

namespace gmi {

double shannon_entropy(std::span<const double> dist) {
  double h = 0.0;
  for (double p : dist) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

double shannon_entropy(const ProbTable& dist) {
  return shannon_entropy(dist.cells());
}

double mutual_information(const ProbTable& joint) {
  const double mi = shannon_entropy(joint.row_marginals()) +
                    shannon_entropy(joint.col_marginals()) -
                    shannon_entropy(joint.cells());
  if (mi < 0.0) {
    if (mi < -1e-12) {
      throw InternalError("mutual information came out below -1e-12");
    }
    return 0.0;
  }
  return mi;
}

double wilks_statistic(const CountsTable& counts, EscortParam lam) {
  if (counts.total() < 1) {
    throw ZeroSample("wilks statistic needs n >= 1");
  }
  const ProbTable escorted = power_escort_table(empirical(counts), lam).escort;
  return 2.0 * static_cast<double>(counts.total()) *
         mutual_information(escorted);
}

}  // namespace gmi

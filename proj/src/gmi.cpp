#include "gmi/gmi.hpp"

#include <cmath>
#include <cstddef>

#include "gmi/entropy.hpp"
#include "gmi/special.hpp"

namespace gmi {

std::string method_name(Method m) {
  switch (m) {
    case Method::ZAB:
      return "zab";
    case Method::ZA:
      return "za";
    case Method::ZB:
      return "zb";
    case Method::PearsonObserved:
      return "pearson-observed";
    case Method::PearsonTheoretical:
      return "pearson-theoretical";
  }
  throw InternalError("unknown method enum value");
}

Method method_from_name(const std::string& name) {
  for (Method m : kAllMethods) {
    if (method_name(m) == name) return m;
  }
  throw DomainError("unknown method '" + name + "'");
}

namespace {

// All escort quantities the decomposition and its gradient share.
struct EscortParts {
  std::vector<double> q;          // joint escort cells
  std::vector<double> a, b;       // escorted row / column marginals
  std::vector<double> q_row, q_col;  // marginals of the joint escort
  double c = 0.0;
  double h_q = 0.0, h_a = 0.0, h_b = 0.0;
  double h_qrow = 0.0, h_qcol = 0.0;
};

EscortParts make_parts(const ProbTable& dist, double lambda) {
  EscortParts parts;
  const EscortParam lam(lambda);
  EscortTable et = power_escort_table(dist, lam);
  parts.c = et.c_lambda;
  parts.q_row = et.escort.row_marginals();
  parts.q_col = et.escort.col_marginals();
  parts.q.assign(et.escort.cells().begin(), et.escort.cells().end());

  auto [a, ca] = power_escort_vector(dist.row_marginals(), lam);
  auto [b, cb] = power_escort_vector(dist.col_marginals(), lam);
  parts.a = std::move(a);
  parts.b = std::move(b);

  parts.h_q = shannon_entropy(parts.q);
  parts.h_a = shannon_entropy(parts.a);
  parts.h_b = shannon_entropy(parts.b);
  parts.h_qrow = shannon_entropy(parts.q_row);
  parts.h_qcol = shannon_entropy(parts.q_col);
  return parts;
}

GmiDecomposition assemble(const EscortParts& parts) {
  GmiDecomposition d;
  d.c_lambda = parts.c;
  d.h_joint_escort = parts.h_q;
  d.h_escort_row_marg = parts.h_qrow;
  d.h_escort_col_marg = parts.h_qcol;
  d.h_row_marg_escort = parts.h_a;
  d.h_col_marg_escort = parts.h_b;
  d.t_a = -parts.h_q + parts.h_a + parts.h_b;
  d.t_b = -parts.h_a - parts.h_b + parts.h_qrow + parts.h_qcol;
  return d;
}

// Unconstrained dT_A/dp_{i,j} at every strictly positive cell (zero cells
// are left at 0; they carry no multinomial mass and are never perturbed).
//
// For F(p) = sum_k phi(q_k) with q = p^lambda / c one has
//   d/dp_u sum q ln q = (lambda q_u / p_u)(ln q_u + H(q)),
// applied to the joint term and to the two escorted-marginal terms of t_a.
std::vector<double> unconstrained_gradient(const ProbTable& dist,
                                           double lambda,
                                           const EscortParts& parts) {
  const std::size_t rows = dist.rows(), cols = dist.cols();
  const auto& r = dist.row_marginals();
  const auto& s = dist.col_marginals();
  std::vector<double> grad(rows * cols, 0.0);
  std::vector<double> row_term(rows, 0.0), col_term(cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    if (r[i] > 0.0) {
      row_term[i] =
          lambda * (parts.a[i] / r[i]) * (std::log(parts.a[i]) + parts.h_a);
    }
  }
  for (std::size_t j = 0; j < cols; ++j) {
    if (s[j] > 0.0) {
      col_term[j] =
          lambda * (parts.b[j] / s[j]) * (std::log(parts.b[j]) + parts.h_b);
    }
  }
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const std::size_t k = i * cols + j;
      const double p = dist.cells()[k];
      if (p <= 0.0) continue;
      const double joint_term =
          lambda * (parts.q[k] / p) * (std::log(parts.q[k]) + parts.h_q);
      grad[k] = joint_term - row_term[i] - col_term[j];
    }
  }
  return grad;
}

// Contraction sigma^2 = sum g^2 v - (sum g v)^2 with g_k = G_k - G_pivot
// over the given strictly positive cells; pivot is the eliminated cell.
double contract_sigma2(const std::vector<double>& unconstrained,
                       std::span<const double> cells,
                       const std::vector<std::size_t>& positive,
                       std::size_t pivot) {
  const double g_pivot = unconstrained[pivot];
  double sum_g2v = 0.0, sum_gv = 0.0;
  for (std::size_t k : positive) {
    if (k == pivot) continue;
    const double g = unconstrained[k] - g_pivot;
    const double v = cells[k];
    sum_g2v += g * g * v;
    sum_gv += g * v;
  }
  return sum_g2v - sum_gv * sum_gv;
}

void require_testing_lambda(const EscortParam& lam) {
  if (lam.lambda() == 1.0) {
    throw DomainError(
        "lambda = 1 degenerates the variance; the test requires lambda != 1");
  }
}

CountsTable restrict_to_support(const CountsTable& counts) {
  std::vector<std::size_t> live_rows, live_cols;
  for (std::size_t i = 0; i < counts.rows(); ++i) {
    for (std::size_t j = 0; j < counts.cols(); ++j) {
      if (counts(i, j) > 0) {
        live_rows.push_back(i);
        break;
      }
    }
  }
  for (std::size_t j = 0; j < counts.cols(); ++j) {
    for (std::size_t i = 0; i < counts.rows(); ++i) {
      if (counts(i, j) > 0) {
        live_cols.push_back(j);
        break;
      }
    }
  }
  std::vector<std::int64_t> cells;
  cells.reserve(live_rows.size() * live_cols.size());
  for (std::size_t i : live_rows) {
    for (std::size_t j : live_cols) {
      cells.push_back(counts(i, j));
    }
  }
  return CountsTable(live_rows.size(), live_cols.size(), std::move(cells));
}

}  // namespace

GmiDecomposition gmi_decompose(const ProbTable& dist, EscortParam lam) {
  return assemble(make_parts(dist, lam.lambda()));
}

std::vector<double> grad_t_a(const ProbTable& dist, EscortParam lam) {
  require_testing_lambda(lam);
  for (double p : dist.cells()) {
    if (p <= 0.0) {
      throw ZeroCellInSupport(
          "t_a gradient needs strictly positive cells; restrict to the "
          "observed support first");
    }
  }
  const EscortParts parts = make_parts(dist, lam.lambda());
  const std::vector<double> g = unconstrained_gradient(dist, lam.lambda(), parts);
  const std::size_t last = g.size() - 1;
  std::vector<double> free_grad(last);
  for (std::size_t k = 0; k < last; ++k) {
    free_grad[k] = g[k] - g[last];
  }
  return free_grad;
}

VarianceEstimate sigma2_of(const ProbTable& dist, EscortParam lam) {
  VarianceEstimate est;
  est.gradient = grad_t_a(dist, lam);
  double sum_g2v = 0.0, sum_gv = 0.0;
  for (std::size_t k = 0; k < est.gradient.size(); ++k) {
    const double v = dist.cells()[k];
    sum_g2v += est.gradient[k] * est.gradient[k] * v;
    sum_gv += est.gradient[k] * v;
  }
  est.sigma2 = sum_g2v - sum_gv * sum_gv;
  if (est.sigma2 < 0.0) {
    if (est.sigma2 < -1e-9) {
      throw InternalError("variance contraction came out negative");
    }
    est.sigma2 = 0.0;
  }
  est.degenerate = est.sigma2 < 1e-12;
  return est;
}

ZStatistics z_statistics(const CountsTable& counts, EscortParam lam) {
  require_testing_lambda(lam);
  if (counts.total() < 1) {
    throw ZeroSample("z statistics need n >= 1");
  }
  const ObservedDims dims = observed_dims(counts);
  if (dims.i_hat < 2 || dims.j_hat < 2) {
    throw InsufficientSupport("need at least 2 occupied rows and 2 occupied "
                              "columns (got " +
                              std::to_string(dims.i_hat) + "x" +
                              std::to_string(dims.j_hat) + ")");
  }
  const CountsTable support = restrict_to_support(counts);
  const ProbTable phat = empirical(support);
  const EscortParts parts = make_parts(phat, lam.lambda());
  const GmiDecomposition d = assemble(parts);

  const std::vector<double> g = unconstrained_gradient(phat, lam.lambda(), parts);
  std::vector<std::size_t> positive;
  positive.reserve(g.size());
  for (std::size_t k = 0; k < phat.cells().size(); ++k) {
    if (phat.cells()[k] > 0.0) positive.push_back(k);
  }
  const std::size_t pivot = positive.back();

  ZStatistics zs;
  zs.var.sigma2 = contract_sigma2(g, phat.cells(), positive, pivot);
  if (zs.var.sigma2 < 0.0) zs.var.sigma2 = 0.0;
  zs.var.degenerate = zs.var.sigma2 < 1e-12;
  zs.var.gradient.reserve(positive.size() - 1);
  for (std::size_t k : positive) {
    if (k != pivot) zs.var.gradient.push_back(g[k] - g[pivot]);
  }
  if (zs.var.degenerate) {
    throw DegenerateVariance("plug-in variance is numerically zero; the "
                             "normal approximation is invalid here");
  }
  const double scale =
      std::sqrt(static_cast<double>(counts.total())) / std::sqrt(zs.var.sigma2);
  zs.z_a = scale * d.t_a;
  zs.z_b = scale * d.t_b;
  zs.z_ab = select_z_ab(zs.z_a, zs.z_b);
  return zs;
}

double select_z_ab(double z_a, double z_b) {
  return std::abs(z_a) >= std::abs(z_b) ? z_a : z_b;
}

TestResult gmi_test(const CountsTable& counts, EscortParam lam, double alpha,
                    Method method, double sparsity_threshold) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("alpha must lie in (0,1)");
  }
  if (method != Method::ZA && method != Method::ZB && method != Method::ZAB) {
    throw DomainError("gmi_test covers the Z statistics only");
  }
  const ZStatistics zs = z_statistics(counts, lam);
  const ObservedDims dims = observed_dims(counts);

  TestResult res;
  res.method = method;
  res.statistic = method == Method::ZA   ? zs.z_a
                  : method == Method::ZB ? zs.z_b
                                         : zs.z_ab;
  res.p_value = 2.0 * (1.0 - normal_cdf(std::abs(res.statistic)));
  res.reject = res.p_value < alpha;
  res.alpha = alpha;
  res.lambda = lam.lambda();
  res.sigma2_hat = zs.var.sigma2;
  res.i_hat = dims.i_hat;
  res.j_hat = dims.j_hat;

  const double occupancy = static_cast<double>(counts.total()) /
                           (static_cast<double>(dims.i_hat) * dims.j_hat);
  if (occupancy < sparsity_threshold) {
    res.warnings.push_back(
        "sparsity advisory: n/(I_hat*J_hat) = " + std::to_string(occupancy) +
        " is below " + std::to_string(sparsity_threshold) +
        "; the normal approximation may be unreliable");
  }
  const ProbTable phat = empirical(restrict_to_support(counts));
  auto near_uniform = [](const std::vector<double>& marg) {
    const double u = 1.0 / static_cast<double>(marg.size());
    for (double m : marg) {
      if (std::abs(m - u) > 1e-9) return false;
    }
    return true;
  };
  if (near_uniform(phat.row_marginals()) || near_uniform(phat.col_marginals())) {
    res.warnings.push_back(
        "uniform-marginal advisory: an observed marginal is within 1e-9 of "
        "uniform, where the test variance degenerates");
  }
  return res;
}

}  // namespace gmi

#pragma once

#include <vector>

#include "gmi/escort.hpp"
#include "gmi/result.hpp"
#include "gmi/tables.hpp"

namespace gmi {

/// The escort-entropy building blocks of the independence identity.
///
/// t_a is the first curly bracket (joint-escort entropy against the
/// escorted marginals), t_b the second (escorted marginals against the
/// marginals of the joint escort); t_a + t_b equals the mutual information
/// of the escorted joint, and both vanish exactly on product tables.
struct GmiDecomposition {
  double t_a = 0.0;
  double t_b = 0.0;
  double c_lambda = 0.0;          // joint escort normalizer sum p^lambda
  double h_joint_escort = 0.0;    // H of the joint escort table
  double h_escort_row_marg = 0.0; // H of the row marginal of the joint escort
  double h_escort_col_marg = 0.0; // H of the column marginal of the joint escort
  double h_row_marg_escort = 0.0; // H of the escorted row marginal
  double h_col_marg_escort = 0.0; // H of the escorted column marginal
};

/// Delta-method variance of sqrt(n) * t_a under multinomial sampling.
struct VarianceEstimate {
  double sigma2 = 0.0;
  std::vector<double> gradient;  // free-parameterization gradient of t_a
  bool degenerate = false;       // sigma2 below the 1e-12 floor
};

/// Z statistics of the escort decomposition on one counts table.
struct ZStatistics {
  double z_a = 0.0;
  double z_b = 0.0;
  double z_ab = 0.0;
  VarianceEstimate var;
};

GmiDecomposition gmi_decompose(const ProbTable& dist, EscortParam lam);

/// Gradient of t_a in the free parameterization: cells in row-major order
/// with the last cell eliminated (it absorbs any perturbation so the table
/// stays on the simplex). Requires every cell strictly positive.
std::vector<double> grad_t_a(const ProbTable& dist, EscortParam lam);

/// sigma^2 = sum g^2 v - (sum g v)^2 over the free cells, the contraction
/// of the multinomial covariance with the t_a gradient. Requires every
/// cell strictly positive.
VarianceEstimate sigma2_of(const ProbTable& dist, EscortParam lam);

/// Z_A, Z_B and the larger-magnitude selection Z_AB, computed on the
/// empirical table restricted to its observed support. Zero cells inside
/// the support are held fixed; only strictly positive cells enter the
/// gradient and variance.
ZStatistics z_statistics(const CountsTable& counts, EscortParam lam);

/// Z_AB picks whichever of Z_A, Z_B has the larger magnitude; ties go to
/// Z_A.
double select_z_ab(double z_a, double z_b);

/// Two-sided normal test on the chosen Z statistic. p = 2(1 - Phi(|z|)),
/// rejection strict: p < alpha.
TestResult gmi_test(const CountsTable& counts, EscortParam lam, double alpha,
                    Method method, double sparsity_threshold = 5.0);

}  // namespace gmi

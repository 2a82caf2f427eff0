#include <doctest.h>

#include <cmath>
#include <random>

#include "gmi/entropy.hpp"
#include "gmi/gmi.hpp"
#include "gmi/simulate.hpp"
#include "test_util.hpp"

using namespace gmi;

TEST_CASE("entropy of degenerate, uniform and hand-computed vectors") {
  CHECK(shannon_entropy(std::vector<double>{1.0}) == 0.0);
  for (int k : {2, 5, 16}) {
    const std::vector<double> uniform(k, 1.0 / k);
    CHECK(shannon_entropy(uniform) ==
          doctest::Approx(std::log(double(k))).epsilon(1e-13));
  }
  CHECK(shannon_entropy(std::vector<double>{0.5, 0.25, 0.25}) ==
        doctest::Approx(1.5 * std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("entropy is permutation-invariant, nonnegative, zero iff point mass") {
  std::mt19937_64 rng(19);
  for (int it = 0; it < 50; ++it) {
    std::vector<double> v = testutil::random_simplex(rng, 6);
    const double h = shannon_entropy(v);
    CHECK(h >= 0.0);
    std::shuffle(v.begin(), v.end(), rng);
    CHECK(std::abs(shannon_entropy(v) - h) <= 1e-12);
  }
  CHECK(shannon_entropy(std::vector<double>{0.0, 1.0, 0.0}) == 0.0);
}

TEST_CASE("mutual information vanishes exactly on products") {
  std::mt19937_64 rng(29);
  for (int it = 0; it < 50; ++it) {
    const ProbTable prod = testutil::random_product_table(rng, 3, 5);
    CHECK(mutual_information(prod) <= 1e-12);
  }
}

TEST_CASE("mutual information of the diagonal table is ln 2") {
  CHECK(mutual_information(ProbTable::from_rows({{0.5, 0.0}, {0.0, 0.5}})) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("mutual information of the dependent sparse family is positive") {
  CHECK(mutual_information(build_ha_distribution(11, 0.5)) > 0.0);
}

TEST_CASE("mutual information is bounded by the marginal entropies") {
  std::mt19937_64 rng(31);
  for (int it = 0; it < 100; ++it) {
    const ProbTable t = testutil::random_table(rng, 2 + it % 5, 2 + it % 4);
    const double mi = mutual_information(t);
    const double cap = std::min(shannon_entropy(t.row_marginals()),
                                shannon_entropy(t.col_marginals()));
    CHECK(mi <= cap + 1e-12);
  }
}

TEST_CASE("mutual information is invariant under row/column permutations") {
  std::mt19937_64 rng(37);
  const ProbTable t = testutil::random_table(rng, 3, 4);
  const double mi = mutual_information(t);
  std::vector<double> cells(t.cells().begin(), t.cells().end());
  for (std::size_t j = 0; j < 4; ++j) std::swap(cells[j], cells[8 + j]);
  for (std::size_t i = 0; i < 3; ++i) {
    std::swap(cells[i * 4], cells[i * 4 + 2]);
  }
  CHECK(std::abs(mutual_information(ProbTable(3, 4, std::move(cells))) - mi) <=
        1e-12);
}

TEST_CASE("wilks statistic vanishes on exact-product counts") {
  // rows proportional to each other make the empirical table a product
  const CountsTable counts = CountsTable::from_rows({{4, 2}, {8, 4}});
  CHECK(std::abs(wilks_statistic(counts, EscortParam(2.0))) <= 1e-10);
}

TEST_CASE("wilks statistic equals 2n (t_a + t_b) on random count tables") {
  std::mt19937_64 rng(41);
  for (int it = 0; it < 1000; ++it) {
    const CountsTable counts =
        testutil::random_counts(rng, 2 + it % 5, 2 + it % 4);
    for (double lambda : {0.5, 2.0}) {
      const double w = wilks_statistic(counts, EscortParam(lambda));
      const GmiDecomposition d =
          gmi_decompose(empirical(counts), EscortParam(lambda));
      const double x = 2.0 * double(counts.total()) * (d.t_a + d.t_b);
      CHECK(std::abs(w - x) <= std::max(1e-9 * std::abs(x), 1e-12));
    }
  }
}

TEST_CASE("wilks statistic matches its chi-squared mean under the null") {
  // At lambda = 1 the escort is the identity and the statistic is the
  // plug-in likelihood-ratio statistic, whose null mean approaches
  // df = (I-1)(J-1) = 4.
  const ProbTable dist = product_of_marginals(
      ProbTable::from_rows({{0.25, 0.15, 0.1}, {0.15, 0.09, 0.06},
                            {0.1, 0.06, 0.04}}));
  const int replicates = 400, n = 5000;
  double mean = 0.0;
  for (int rep = 0; rep < replicates; ++rep) {
    mean += wilks_statistic(sample_multinomial(dist, n, 7000 + rep),
                            EscortParam(1.0));
  }
  mean /= replicates;
  const double tol = 4.0 * std::sqrt(2.0 * 4.0 / replicates);
  CHECK(std::abs(mean - 4.0) <= tol);
}

TEST_CASE("wilks statistic rejects n = 0") {
  CHECK_THROWS_AS(wilks_statistic(CountsTable::from_rows({{0, 0}}),
                                  EscortParam(2.0)),
                  ZeroSample);
}

#include <doctest.h>

#include <cmath>

#include <json.hpp>

#include "gmi/entropy.hpp"
#include "gmi/gmi.hpp"
#include "gmi/simulate.hpp"

using namespace gmi;

namespace {

ScenarioSpec small_spec() {
  ScenarioSpec spec;
  spec.p = 0.5;
  spec.sample_sizes = {60};
  spec.replicates = 40;
  spec.base_seed = 123;
  spec.hypothesis = Hypothesis::H0;
  return spec;
}

}  // namespace

TEST_CASE("null family: 11x11 construction at p = 0.1") {
  const ProbTable t = build_h0_distribution(11, 11, 0.1);
  CHECK(t(0, 0) == doctest::Approx(0.81).epsilon(1e-14));
  CHECK(t(0, 5) == doctest::Approx(0.009).epsilon(1e-14));
  CHECK(t(7, 0) == doctest::Approx(0.009).epsilon(1e-14));
  CHECK(t(3, 4) == doctest::Approx(0.0001).epsilon(1e-12));
}

TEST_CASE("null family tables are exact products that sum to one") {
  for (int dims : {2, 5, 11}) {
    for (double p : {0.1, 0.25, 0.5, 0.9}) {
      const ProbTable t = build_h0_distribution(dims, dims, p);
      double total = 0.0;
      for (double c : t.cells()) total += c;
      CHECK(std::abs(total - 1.0) <= 1e-12);
      const ProbTable prod = product_of_marginals(t);
      for (std::size_t k = 0; k < t.cells().size(); ++k) {
        CHECK(std::abs(t.cells()[k] - prod.cells()[k]) <= 1e-15);
      }
      const GmiDecomposition d = gmi_decompose(t, EscortParam(2.0));
      CHECK(std::abs(d.t_a) <= 1e-12);
      CHECK(std::abs(d.t_b) <= 1e-12);
    }
  }
}

TEST_CASE("alternative family: diagonal block at p = 0.1") {
  const ProbTable t = build_ha_distribution(11, 0.1);
  CHECK(t(1, 1) == doctest::Approx(0.001).epsilon(1e-13));
  CHECK(t(4, 4) == doctest::Approx(0.001).epsilon(1e-13));
  CHECK(t(1, 2) == 0.0);
  CHECK(t(9, 3) == 0.0);
  CHECK(t(0, 4) == doctest::Approx(0.009).epsilon(1e-14));
}

TEST_CASE("alternative family keeps the null marginals") {
  for (double p : {0.1, 0.3, 0.5}) {
    const ProbTable ha = build_ha_distribution(11, p);
    const ProbTable h0 = build_h0_distribution(11, 11, p);
    for (std::size_t i = 0; i < 11; ++i) {
      CHECK(std::abs(ha.row_marginals()[i] - h0.row_marginals()[i]) <= 1e-15);
      CHECK(std::abs(ha.col_marginals()[i] - h0.col_marginals()[i]) <= 1e-15);
    }
  }
  CHECK(mutual_information(build_ha_distribution(11, 0.5)) > 0.0);
}

TEST_CASE("family constructors validate their domain") {
  CHECK_THROWS_AS(build_h0_distribution(1, 5, 0.5), DomainError);
  CHECK_THROWS_AS(build_h0_distribution(5, 5, 0.0), DomainError);
  CHECK_THROWS_AS(build_h0_distribution(5, 5, 1.0), DomainError);
  CHECK_THROWS_AS(build_ha_distribution(1, 0.5), DomainError);
}

TEST_CASE("run_scenario is deterministic, including across thread counts") {
  const ScenarioSpec spec = small_spec();
  const ScenarioResult once = run_scenario(spec, 1);
  const ScenarioResult again = run_scenario(spec, 1);
  const ScenarioResult threaded = run_scenario(spec, 4);
  REQUIRE(once.cells.size() == again.cells.size());
  REQUIRE(once.cells.size() == threaded.cells.size());
  for (std::size_t k = 0; k < once.cells.size(); ++k) {
    CHECK(once.cells[k].rejected == again.cells[k].rejected);
    CHECK(once.cells[k].aborted == again.cells[k].aborted);
    CHECK(once.cells[k].rejected == threaded.cells[k].rejected);
    CHECK(once.cells[k].aborted == threaded.cells[k].aborted);
  }
  const std::vector<ScenarioResult> a{once}, b{threaded};
  CHECK(report_to_tsv(a) == report_to_tsv(b));
  CHECK(report_to_json(a) == report_to_json(b));
}

TEST_CASE("run_scenario orders cells by size then canonical method") {
  ScenarioSpec spec = small_spec();
  spec.sample_sizes = {30, 60};
  spec.replicates = 10;
  const ScenarioResult res = run_scenario(spec, 2);
  REQUIRE(res.cells.size() == 10);
  CHECK(res.cells[0].n == 30);
  CHECK(res.cells[0].method == Method::ZAB);
  CHECK(res.cells[4].method == Method::PearsonTheoretical);
  CHECK(res.cells[5].n == 60);
  CHECK(res.cells[5].method == Method::ZAB);
}

TEST_CASE("aborted replicates are excluded from the denominator") {
  ScenarioSpec spec;
  spec.p = 0.1;  // 1-p = 0.9: sparse, aborts expected at n = 30
  spec.sample_sizes = {30};
  spec.replicates = 300;
  spec.base_seed = 7;
  spec.hypothesis = Hypothesis::H0;
  const ScenarioResult res = run_scenario(spec, 0);
  const auto degenerate = res.degenerate_counts();
  CHECK(degenerate.at(Method::ZAB) > 0);
  for (const CellTally& c : res.cells) {
    CHECK(c.rejected <= spec.replicates - c.aborted);
    if (c.aborted < spec.replicates) {
      CHECK(c.rate == doctest::Approx(double(c.rejected) /
                                      double(spec.replicates - c.aborted)));
    }
  }
}

TEST_CASE("cells whose every replicate aborted serialize a missing rate") {
  // Find a seed whose single n=2 draw from the very sparse family lands in
  // one row, so all five statistics are undefined.
  ScenarioSpec spec;
  spec.p = 0.1;
  spec.sample_sizes = {2};
  spec.replicates = 1;
  spec.hypothesis = Hypothesis::H0;
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    spec.base_seed = seed;
    const ScenarioResult res = run_scenario(spec, 1);
    if (res.cells[0].aborted != 1) continue;
    CHECK(std::isnan(res.cells[0].rate));
    const std::vector<ScenarioResult> list{res};
    CHECK(report_to_tsv(list).find("\tnan\t") != std::string::npos);
    CHECK(report_to_json(list).find("\"rate\": null") != std::string::npos);
    return;
  }
  FAIL("no aborting seed found in 64 tries");
}

TEST_CASE("power grows with n under the alternative") {
  ScenarioSpec spec;
  spec.p = 0.5;
  spec.sample_sizes = {30, 100, 500};
  spec.replicates = 800;
  spec.base_seed = 99;
  spec.hypothesis = Hypothesis::Ha;
  const ScenarioResult res = run_scenario(spec, 0);
  const double p30 = res.rate(Method::ZAB, 30);
  const double p100 = res.rate(Method::ZAB, 100);
  const double p500 = res.rate(Method::ZAB, 500);
  const double slack = 3.0 * std::sqrt(2.0 * 0.25 / spec.replicates);
  CHECK(p100 >= p30 - slack);
  CHECK(p500 >= p100 - slack);
  CHECK(p500 > 0.99);
}

TEST_CASE("scenario validation") {
  ScenarioSpec spec = small_spec();
  spec.replicates = 0;
  CHECK_THROWS_AS(run_scenario(spec), DomainError);
  spec = small_spec();
  spec.p = 1.5;
  CHECK_THROWS_AS(run_scenario(spec), DomainError);
  spec = small_spec();
  spec.lambda = 1.0;
  CHECK_THROWS_AS(run_scenario(spec), DomainError);
  spec = small_spec();
  spec.dims_j = 12;
  spec.hypothesis = Hypothesis::Ha;
  CHECK_THROWS_AS(run_scenario(spec), DomainError);
  spec = small_spec();
  spec.sample_sizes = {0};
  CHECK_THROWS_AS(run_scenario(spec), DomainError);
}

TEST_CASE("json report mirrors the scenario result") {
  ScenarioSpec spec = small_spec();
  spec.sample_sizes = {30, 60};
  spec.replicates = 25;
  const ScenarioResult res = run_scenario(spec, 2);
  const auto doc =
      nlohmann::json::parse(report_to_json(std::vector<ScenarioResult>{res}));
  REQUIRE(doc["scenarios"].size() == 1);
  const auto& entry = doc["scenarios"][0];
  CHECK(entry["spec"]["dims"] == nlohmann::json({11, 11}));
  CHECK(entry["spec"]["p"] == 0.5);
  CHECK(entry["spec"]["one_minus_p"] == 0.5);
  CHECK(entry["spec"]["replicates"] == 25);
  CHECK(entry["spec"]["base_seed"] == 123);
  CHECK(entry["spec"]["hypothesis"] == "h0");
  REQUIRE(entry["cells"].size() == res.cells.size());
  for (std::size_t k = 0; k < res.cells.size(); ++k) {
    const auto& cell = entry["cells"][k];
    CHECK(cell["n"] == res.cells[k].n);
    CHECK(cell["method"] == method_name(res.cells[k].method));
    CHECK(cell["rejected"] == res.cells[k].rejected);
    CHECK(cell["aborted"] == res.cells[k].aborted);
  }
  for (Method m : kAllMethods) {
    CHECK(entry["degenerate_counts"].contains(method_name(m)));
  }
  // no timing field: reports must be byte-identical across schedules
  CHECK_FALSE(entry.contains("elapsed_seconds"));
}

TEST_CASE("grid_report produces one scenario pair per p value") {
  const std::vector<ScenarioResult> report =
      grid_report({0.5}, {30, 60}, 20, 5, 2.0, 0.01, 2);
  REQUIRE(report.size() == 2);
  CHECK(report[0].spec.hypothesis == Hypothesis::H0);
  CHECK(report[1].spec.hypothesis == Hypothesis::Ha);
  CHECK(report[0].cells.size() == 10);

  const std::string tsv = report_to_tsv(report);
  CHECK(tsv.rfind("one_minus_p\tn\tmethod\thypothesis\trate\taborted\n", 0) ==
        0);
  // header + 20 cells
  CHECK(std::count(tsv.begin(), tsv.end(), '\n') == 21);
}

#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "stopstare/oracle.hpp"

using namespace stopstare;

namespace {

Graph parse(const std::string& text, LoadOptions opts = {}) {
  std::istringstream in(text);
  return Graph::parse_edge_list(in, opts);
}

const char* kG1 = "2 1\n0 1 1.0\n";
const char* kG2 = "3 3\n0 1 0.5\n1 2 0.5\n2 0 0.5\n";
const char* kG3 = "5 4\n0 1 1.0\n0 2 1.0\n0 3 1.0\n0 4 1.0\n";
const char* kG4 = "3 2\n0 1 0.3\n2 1 0.4\n";

std::vector<NodeId> all_nodes(uint32_t n) {
  std::vector<NodeId> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

TEST_CASE("simulate_once on deterministic graphs") {
  Graph g1 = parse(kG1);
  RngStream rng(1, 0);
  for (int i = 0; i < 50; ++i) {
    CHECK(simulate_once(g1, std::vector<NodeId>{0}, DiffusionModel::IC, rng) ==
          2);
    CHECK(simulate_once(g1, std::vector<NodeId>{0}, DiffusionModel::LT, rng) ==
          2);
    CHECK(simulate_once(g1, std::vector<NodeId>{1}, DiffusionModel::IC, rng) ==
          1);
  }
  Graph g3 = parse(kG3);
  CHECK(simulate_once(g3, std::vector<NodeId>{0}, DiffusionModel::IC, rng) ==
        5);
  CHECK(simulate_once(g3, std::vector<NodeId>{3}, DiffusionModel::IC, rng) ==
        1);
}

TEST_CASE("exact influence on the reference graphs") {
  Graph g1 = parse(kG1);
  auto r1 = exact_influence(g1, std::vector<NodeId>{0}, DiffusionModel::IC);
  CHECK(r1.influence == 2.0);
  CHECK(r1.outcomes_enumerated == 2);

  Graph g2 = parse(kG2);
  auto r2 = exact_influence(g2, std::vector<NodeId>{0}, DiffusionModel::IC);
  CHECK(r2.influence == doctest::Approx(1.75).epsilon(1e-14));
  CHECK(r2.outcomes_enumerated == 8);

  Graph g3 = parse(kG3);
  CHECK(exact_influence(g3, std::vector<NodeId>{0}, DiffusionModel::IC)
            .influence == 5.0);
  CHECK(exact_influence(g3, std::vector<NodeId>{2}, DiffusionModel::IC)
            .influence == 1.0);

  Graph g4 = parse(kG4);
  auto r4 = exact_influence(g4, std::vector<NodeId>{0}, DiffusionModel::LT);
  CHECK(r4.influence == doctest::Approx(1.3).epsilon(1e-14));
  CHECK(r4.outcomes_enumerated == 3);  // only node 1 has in-edges: 2 + 1
}

TEST_CASE("seeding every node gives influence exactly n") {
  for (const char* text : {kG1, kG2, kG3, kG4}) {
    Graph g = parse(text);
    for (DiffusionModel model : {DiffusionModel::IC, DiffusionModel::LT}) {
      if (model == DiffusionModel::LT && !g.lt_feasible()) continue;
      CHECK(exact_influence(g, all_nodes(g.n()), model).influence ==
            doctest::Approx((double)g.n()).epsilon(1e-14));
    }
  }
}

TEST_CASE("exact influence is monotone in the seed set") {
  Graph g2 = parse(kG2);
  for (DiffusionModel model : {DiffusionModel::IC, DiffusionModel::LT}) {
    double i0 =
        exact_influence(g2, std::vector<NodeId>{0}, model).influence;
    double i01 =
        exact_influence(g2, std::vector<NodeId>{0, 1}, model).influence;
    double i012 =
        exact_influence(g2, std::vector<NodeId>{0, 1, 2}, model).influence;
    CHECK(i0 <= i01);
    CHECK(i01 <= i012);
    CHECK(i0 >= 1.0);
  }
}

TEST_CASE("activation probabilities decompose the exact influence") {
  Graph g2 = parse(kG2);
  auto probs =
      exact_activation_probabilities(g2, std::vector<NodeId>{0},
                                     DiffusionModel::IC);
  REQUIRE(probs.size() == 3);
  CHECK(probs[0] == 1.0);
  CHECK(probs[1] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(probs[2] == doctest::Approx(0.25).epsilon(1e-14));
  double sum = probs[0] + probs[1] + probs[2];
  CHECK(sum == doctest::Approx(
                   exact_influence(g2, std::vector<NodeId>{0},
                                   DiffusionModel::IC)
                       .influence)
                   .epsilon(1e-14));

  Graph g4 = parse(kG4);
  auto plt = exact_activation_probabilities(g4, std::vector<NodeId>{0},
                                            DiffusionModel::LT);
  CHECK(plt[0] == 1.0);
  CHECK(plt[1] == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(plt[2] == 0.0);
}

TEST_CASE("Monte Carlo estimate brackets the exact value within 4 sigma") {
  Graph g2 = parse(kG2);
  for (DiffusionModel model : {DiffusionModel::IC, DiffusionModel::LT}) {
    double exact =
        exact_influence(g2, std::vector<NodeId>{0}, model).influence;
    McEstimate mc =
        mc_influence(g2, std::vector<NodeId>{0}, model, 200000, 11, 4);
    CHECK(mc.runs == 200000);
    CHECK(mc.std_error > 0.0);
    CHECK(std::abs(mc.mean - exact) <= 4 * mc.std_error);
  }
}

TEST_CASE("Monte Carlo result does not depend on thread count") {
  Graph g2 = parse(kG2);
  McEstimate one =
      mc_influence(g2, std::vector<NodeId>{1}, DiffusionModel::IC, 5000, 3, 1);
  McEstimate many =
      mc_influence(g2, std::vector<NodeId>{1}, DiffusionModel::IC, 5000, 3, 8);
  CHECK(one.mean == many.mean);
  CHECK(one.std_error == many.std_error);
}

TEST_CASE("enumeration guards reject oversized inputs") {
  // IC: 23 edges is one past the 2^22-realization budget.
  std::ostringstream big;
  big << "24 23\n";
  for (int i = 0; i < 23; ++i) big << i << ' ' << i + 1 << " 0.5\n";
  Graph path = parse(big.str());
  CHECK_THROWS_AS(
      exact_influence(path, std::vector<NodeId>{0}, DiffusionModel::IC),
      std::length_error);
  // ...but the LT enumeration of the same graph is tiny (2 choices per node).
  CHECK_THROWS_AS(
      exact_influence(path, std::vector<NodeId>{0}, DiffusionModel::LT),
      std::length_error);  // 2^23 single-in-edge choices

  std::ostringstream cyc;
  cyc << "22 22\n";
  for (int i = 0; i < 22; ++i) cyc << i << ' ' << (i + 1) % 22 << " 0.4\n";
  Graph ok = parse(cyc.str());  // exactly 2^22 outcomes: allowed
  CHECK(exact_influence(ok, std::vector<NodeId>{0}, DiffusionModel::LT)
            .outcomes_enumerated == (1ull << 22));
}

TEST_CASE("invalid seed sets are rejected") {
  Graph g1 = parse(kG1);
  CHECK_THROWS_AS(
      exact_influence(g1, std::vector<NodeId>{}, DiffusionModel::IC),
      std::invalid_argument);
  CHECK_THROWS_AS(
      exact_influence(g1, std::vector<NodeId>{2}, DiffusionModel::IC),
      std::out_of_range);
  RngStream rng(1, 0);
  CHECK_THROWS_AS(
      simulate_once(g1, std::vector<NodeId>{}, DiffusionModel::IC, rng),
      std::invalid_argument);
}

TEST_CASE("LT enumeration requires a feasible graph") {
  Graph infeasible = parse("2 2\n0 1 0.7\n0 1 0.6\n");
  // parallel edges merge to 1 - 0.3*0.4 = 0.88: feasible; build a truly
  // infeasible one instead
  CHECK(infeasible.lt_feasible());
  Graph bad = parse("3 2\n0 2 0.7\n1 2 0.6\n");
  CHECK(!bad.lt_feasible());
  CHECK_THROWS_AS(
      exact_influence(bad, std::vector<NodeId>{0}, DiffusionModel::LT),
      std::domain_error);
}

TEST_CASE("exhaustive optimum on worked examples") {
  Graph g1 = parse(kG1);
  OptResult o1 = exact_opt(g1, 1, DiffusionModel::IC);
  CHECK(o1.seeds == std::vector<NodeId>{0});
  CHECK(o1.opt == 2.0);

  Graph g3 = parse(kG3);
  OptResult o3 = exact_opt(g3, 1, DiffusionModel::IC);
  CHECK(o3.seeds == std::vector<NodeId>{0});
  CHECK(o3.opt == 5.0);
  OptResult o3b = exact_opt(g3, 2, DiffusionModel::IC);
  CHECK(o3b.seeds == std::vector<NodeId>{0, 1});  // ties break lexicographic
  CHECK(o3b.opt == 5.0);

  Graph g2 = parse(kG2);
  OptResult o2 = exact_opt(g2, 3, DiffusionModel::IC);
  CHECK(o2.seeds == std::vector<NodeId>{0, 1, 2});
  CHECK(o2.opt == 3.0);

  Graph g4 = parse(kG4);
  OptResult o4 = exact_opt(g4, 1, DiffusionModel::LT);
  CHECK(o4.seeds == std::vector<NodeId>{2});  // 1 + 0.4 beats 1 + 0.3
  CHECK(o4.opt == doctest::Approx(1.4).epsilon(1e-14));
}

TEST_CASE("exact_opt guards combination count and argument range") {
  std::ostringstream text;
  text << "25 1\n0 1 0.5\n";
  Graph sparse = parse(text.str());
  CHECK_THROWS_AS(exact_opt(sparse, 12, DiffusionModel::IC),
                  std::length_error);  // C(25,12) is about 5.2 million
  Graph g1 = parse(kG1);
  CHECK_THROWS_AS(exact_opt(g1, 0, DiffusionModel::IC), std::invalid_argument);
  CHECK_THROWS_AS(exact_opt(g1, 3, DiffusionModel::IC), std::invalid_argument);
}

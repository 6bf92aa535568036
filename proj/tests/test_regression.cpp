#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "shapodd/game.hpp"
#include "shapodd/regression.hpp"
#include "shapodd/sampling.hpp"
#include "shapodd/transforms.hpp"

using namespace shapodd;

namespace {

// Boundary-first sample set over explicit interior masks.
SampleSet make_samples(int d, const std::vector<std::uint64_t>& interior) {
  SampleSet set;
  set.d = d;
  set.coalitions.push_back(Coalition::empty(d));
  set.coalitions.push_back(Coalition::full(d));
  for (std::uint64_t mask : interior)
    set.coalitions.push_back(Coalition::from_index(d, mask));
  return set;
}

SampleSet exhaustive_samples(int d) {
  std::vector<std::uint64_t> interior;
  const std::uint64_t n = std::uint64_t{1} << d;
  for (std::uint64_t mask = 1; mask < n - 1; ++mask) interior.push_back(mask);
  SampleSet set = make_samples(d, interior);
  set.paired = true;
  return set;
}

RegressionProblem problem_for_table(const GameTable& table,
                                    const SampleSet& samples,
                                    BasisSpec basis) {
  RegressionProblem problem;
  problem.samples = samples;
  problem.basis = std::move(basis);
  for (const Coalition& s : samples.coalitions)
    problem.targets.push_back(table.value(s));
  problem.value_empty = problem.targets[0];
  problem.value_full = problem.targets[1];
  for (std::size_t i = samples.interior_begin(); i < samples.size(); ++i)
    problem.interior_weights.push_back(
        kernel_weight(samples.coalitions[i].size(), samples.d));
  return problem;
}

double reconstruction(const CoefficientMap& map, const Coalition& s) {
  return map.basis == Basis::fourier ? oracles::eval_fourier(map, s)
                                     : oracles::eval_mobius(map, s);
}

}  // namespace

TEST_CASE("design matrix entries") {
  SampleSet samples = make_samples(2, {0b01});
  RegressionProblem problem;
  problem.samples = samples;
  problem.targets = {0, 0, 0};
  problem.interior_weights = {kernel_weight(1, 2)};

  problem.basis.basis = Basis::fourier;
  problem.basis.terms = {Coalition::full(2)};
  CHECK(build_design(problem)(0, 0) == doctest::Approx(-1.0));

  problem.basis.terms = {Coalition::empty(2)};
  CHECK(build_design(problem)(0, 0) == doctest::Approx(1.0));

  problem.basis.basis = Basis::mobius;
  problem.basis.terms = {Coalition::full(2)};
  CHECK(build_design(problem)(0, 0) == doctest::Approx(0.0));
}

TEST_CASE("minimum norm least squares") {
  Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(2, 2);
  Eigen::VectorXd b(2);
  b << 3, 4;
  Eigen::VectorXd x = min_norm_lstsq(identity, b);
  CHECK(x(0) == doctest::Approx(3.0));
  CHECK(x(1) == doctest::Approx(4.0));

  Eigen::MatrixXd wide(1, 2);
  wide << 1, 1;
  Eigen::VectorXd b1(1);
  b1 << 2;
  Eigen::VectorXd x1 = min_norm_lstsq(wide, b1);
  CHECK(x1(0) == doctest::Approx(1.0));
  CHECK(x1(1) == doctest::Approx(1.0));

  Eigen::MatrixXd rank1(2, 2);
  rank1 << 1, 0, 1, 0;
  Eigen::VectorXd b2(2);
  b2 << 1, 1;
  Eigen::VectorXd x2 = min_norm_lstsq(rank1, b2);
  CHECK(x2(0) == doctest::Approx(1.0));
  CHECK(x2(1) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("additive game has the closed-form fourier fit") {
  GameTable table(2, {0, 1, 2, 3});  // additive with c = (1, 2)
  SampleSet samples = make_samples(2, {0b01, 0b10});
  BasisSpec basis = BasisSpec::up_to_order(Basis::fourier, 2, 1);
  CoefficientMap beta =
      solve_constrained_wls(problem_for_table(table, samples, basis));

  CHECK(beta.at(Coalition::empty(2)) == doctest::Approx(1.5));
  CHECK(beta.at(Coalition::from_players(2, {0})) == doctest::Approx(-0.5));
  CHECK(beta.at(Coalition::from_players(2, {1})) == doctest::Approx(-1.0));

  // Zero residual: the fit reproduces the table everywhere.
  for (std::uint64_t mask = 0; mask < 4; ++mask) {
    Coalition s = Coalition::from_index(2, mask);
    CHECK(reconstruction(beta, s) ==
          doctest::Approx(table.value(s)).epsilon(1e-12));
  }
}

TEST_CASE("exhaustive fits recover exact shapley values") {
  for (int d : {4, 7, 10}) {
    GameTable table = random_table(d, static_cast<std::uint64_t>(d) * 3 + 1);
    Attribution truth = exact_shapley(table);
    SampleSet samples = exhaustive_samples(d);

    // Fourier basis strictly containing the additive terms.
    BasisSpec fourier = BasisSpec::up_to_order(Basis::fourier, d, 1);
    fourier.terms.push_back(Coalition::from_players(d, {0, 1, 2}));
    Attribution via_fourier = shapley_from_fourier(
        solve_constrained_wls(problem_for_table(table, samples, fourier)));
    CHECK(oracles::max_abs_diff(via_fourier.phi, truth.phi) < 1e-8);

    BasisSpec mobius = BasisSpec::up_to_order(Basis::mobius, d, 1);
    Attribution via_mobius = shapley_from_mobius(
        solve_constrained_wls(problem_for_table(table, samples, mobius)));
    CHECK(oracles::max_abs_diff(via_mobius.phi, truth.phi) < 1e-8);
  }
}

TEST_CASE("the fit interpolates the boundary at any budget") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const int d = 9;
    GameTable table = random_table(d, seed + 40);
    SampleSet samples = sample_coalitions(d, d + 3, seed, true);
    for (Basis basis_kind : {Basis::fourier, Basis::mobius}) {
      BasisSpec basis = BasisSpec::up_to_order(basis_kind, d, 1);
      CoefficientMap fit =
          solve_constrained_wls(problem_for_table(table, samples, basis));
      CHECK(reconstruction(fit, Coalition::empty(d)) ==
            doctest::Approx(table.value(Coalition::empty(d))).epsilon(1e-10));
      CHECK(reconstruction(fit, Coalition::full(d)) ==
            doctest::Approx(table.value(Coalition::full(d))).epsilon(1e-10));

      // Efficiency follows from the boundary interpolation.
      Attribution phi = basis_kind == Basis::fourier
                            ? shapley_from_fourier(fit)
                            : shapley_from_mobius(fit);
      const double span = table.value(Coalition::full(d)) -
                          table.value(Coalition::empty(d));
      CHECK(std::abs(phi.sum() - span) <=
            1e-10 * std::max(1.0, std::abs(span)));
    }
  }
}

TEST_CASE("paired sampling separates the odd and even objectives") {
  // Joint fit with both parities vs an odd-only fit against f_odd.
  SplitRng seeds(404);
  for (int trial = 0; trial < 5; ++trial) {
    const int d = 8;
    GameTable table = random_table(d, seeds.next_u64());
    auto [odd_part, even_part] = odd_even_decompose(table);
    SampleSet samples = sample_coalitions(d, 60, seeds.next_u64(), true);

    BasisSpec joint = BasisSpec::up_to_order(Basis::fourier, d, 2);
    std::vector<Coalition> triples = {Coalition::from_players(d, {0, 1, 2}),
                                      Coalition::from_players(d, {1, 3, 5}),
                                      Coalition::from_players(d, {2, 4, 7})};
    for (const Coalition& t : triples) joint.terms.push_back(t);
    CoefficientMap joint_fit =
        solve_constrained_wls(problem_for_table(table, samples, joint));

    BasisSpec odd_basis;
    odd_basis.basis = Basis::fourier;
    for (const Coalition& t : joint.terms)
      if (t.size() & 1) odd_basis.terms.push_back(t);
    CoefficientMap odd_fit = solve_constrained_wls(
        problem_for_table(odd_part, samples, odd_basis));

    for (const Coalition& t : odd_basis.terms)
      CHECK(joint_fit.at(t) == doctest::Approx(odd_fit.at(t)).epsilon(1e-8));
  }
}

TEST_CASE("frontier invariance under paired sampling") {
  // Expanding an odd order cap by one only adds even terms, so the Shapley
  // readout cannot move.
  SplitRng seeds(505);
  const int d = 10;
  for (int trial = 0; trial < 3; ++trial) {
    GameTable table = random_table(d, seeds.next_u64());
    SampleSet samples = sample_coalitions(d, 400, seeds.next_u64(), true);
    for (int k : {1, 3}) {
      BasisSpec lower = BasisSpec::up_to_order(Basis::mobius, d, k);
      BasisSpec upper = BasisSpec::up_to_order(Basis::mobius, d, k + 1);
      Attribution phi_lower = shapley_from_mobius(
          solve_constrained_wls(problem_for_table(table, samples, lower)));
      Attribution phi_upper = shapley_from_mobius(
          solve_constrained_wls(problem_for_table(table, samples, upper)));
      CHECK(oracles::max_abs_diff(phi_lower.phi, phi_upper.phi) < 1e-8);
    }
  }
}

TEST_CASE("tower property over exhaustive samples") {
  const int d = 8;
  GameTable table = random_table(d, 606);
  SampleSet samples = exhaustive_samples(d);

  BasisSpec order2 = BasisSpec::up_to_order(Basis::mobius, d, 2);
  CoefficientMap fit2 =
      solve_constrained_wls(problem_for_table(table, samples, order2));
  Attribution phi2 = shapley_from_mobius(fit2);

  // Refit the already-fitted function with the additive basis.
  GameTable fitted = synthesize_table(fit2);
  BasisSpec order1 = BasisSpec::up_to_order(Basis::mobius, d, 1);
  Attribution phi1 = shapley_from_mobius(
      solve_constrained_wls(problem_for_table(fitted, samples, order1)));

  CHECK(oracles::max_abs_diff(phi2.phi, phi1.phi) < 1e-8);
}

TEST_CASE("degenerate single-player game") {
  GameTable table(1, {0.25, 2.0});
  SampleSet samples = make_samples(1, {});
  BasisSpec basis = BasisSpec::up_to_order(Basis::fourier, 1, 1);
  CoefficientMap fit =
      solve_constrained_wls(problem_for_table(table, samples, basis));
  Attribution phi = shapley_from_fourier(fit);
  CHECK(phi.phi[0] == doctest::Approx(1.75));
}

TEST_CASE("solver input validation") {
  GameTable table(3, {0, 1, 2, 3, 4, 5, 6, 7});
  BasisSpec basis = BasisSpec::up_to_order(Basis::fourier, 3, 1);

  // No interior samples at d > 1.
  SampleSet empty_interior = make_samples(3, {});
  CHECK_THROWS_AS(solve_constrained_wls(
                      problem_for_table(table, empty_interior, basis)),
                  std::invalid_argument);

  // Non-finite target.
  SampleSet samples = make_samples(3, {0b001, 0b110});
  RegressionProblem bad = problem_for_table(table, samples, basis);
  bad.targets[2] = std::nan("");
  CHECK_THROWS_AS(solve_constrained_wls(bad), std::invalid_argument);

  // Mobius basis without the empty set cannot match f(empty) != 0.
  BasisSpec no_empty;
  no_empty.basis = Basis::mobius;
  for (int i = 0; i < 3; ++i)
    no_empty.terms.push_back(Coalition::singleton(3, i));
  GameTable shifted(3, {1, 2, 3, 4, 5, 6, 7, 8});
  CHECK_THROWS_AS(solve_constrained_wls(
                      problem_for_table(shifted, samples, no_empty)),
                  std::invalid_argument);

  // Duplicate basis terms.
  BasisSpec dup = basis;
  dup.terms.push_back(Coalition::empty(3));
  CHECK_THROWS_AS(
      solve_constrained_wls(problem_for_table(table, samples, dup)),
      std::invalid_argument);
}

TEST_CASE("duplicate sample rows are merged, not reweighted") {
  GameTable table = random_table(6, 77);
  SampleSet unique_samples = make_samples(6, {0b000111, 0b011000, 0b100001});
  SampleSet dup_samples =
      make_samples(6, {0b000111, 0b011000, 0b000111, 0b100001, 0b011000});
  BasisSpec basis = BasisSpec::up_to_order(Basis::fourier, 6, 1);

  CoefficientMap a =
      solve_constrained_wls(problem_for_table(table, unique_samples, basis));
  CoefficientMap b =
      solve_constrained_wls(problem_for_table(table, dup_samples, basis));
  for (const auto& [term, value] : a.entries)
    CHECK(b.at(term) == doctest::Approx(value).epsilon(1e-12));
}

TEST_CASE("make_regression_problem pulls targets through the budget guard") {
  ValueFunction game = additive_game(4, {1, 2, 3, 4});
  SampleSet samples = sample_coalitions(4, 8, 5, true);
  RegressionProblem problem = make_regression_problem(
      samples, game, BasisSpec::up_to_order(Basis::fourier, 4, 1));
  CHECK(problem.targets.size() == 8);
  CHECK(problem.value_empty == doctest::Approx(0.0));
  CHECK(problem.value_full == doctest::Approx(10.0));
  CHECK(game.query_count() == 8);
  CHECK(problem.interior_weights.size() == 6);
}

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "shapodd/sampling.hpp"
#include "shapodd/transforms.hpp"

namespace shapodd {

// Ordered basis term collection for one of the two bases.
struct BasisSpec {
  Basis basis = Basis::fourier;
  std::vector<Coalition> terms;

  std::size_t size() const { return terms.size(); }

  // {empty} + all singletons + the given odd interactions (the OddSHAP basis).
  static BasisSpec fourier_odd(int d, const std::vector<Coalition>& interactions);

  // All terms of cardinality <= k in the given basis.
  static BasisSpec up_to_order(Basis basis, int d, int k);

  // Throws on duplicate terms or dimension mismatches.
  void validate(int d) const;
};

// Weighted regression instance over the interior samples of a SampleSet.
// The boundary rows are carried separately: they enter as exact constraints,
// never as weighted rows.
struct RegressionProblem {
  SampleSet samples;
  std::vector<double> targets;           // aligned with samples.coalitions
  std::vector<double> interior_weights;  // aligned with interior samples
  BasisSpec basis;
  double value_empty = 0.0;
  double value_full = 0.0;

  int dimension() const { return samples.d; }
  std::size_t interior_count() const {
    return samples.size() - samples.interior_begin();
  }
};

// Builds (targets, kernel weights, boundary values) by evaluating the game on
// every sampled coalition.
RegressionProblem make_regression_problem(const SampleSet& samples,
                                          class ValueFunction& game,
                                          BasisSpec basis);

// Unweighted design matrix: entry (j,t) = u_{T_t}(S_j) or chi_{T_t}(S_j) for
// the j-th interior sample.
Eigen::MatrixXd build_design(const RegressionProblem& problem);

// Minimum-norm least squares via SVD; singular values below
// 1e-10 * sigma_max are treated as zero.
Eigen::VectorXd min_norm_lstsq(const Eigen::MatrixXd& A,
                               const Eigen::VectorXd& b);

// Solves the weighted least squares problem subject to the exact boundary
// constraints g(empty) = f(empty), g(full) = f(full): the constraint rows are
// eliminated by shifting to a particular solution and solving in the
// orthogonal complement of the constraint rows, with the minimum-norm
// tie-break on the coefficients.
CoefficientMap solve_constrained_wls(const RegressionProblem& problem);

}  // namespace shapodd

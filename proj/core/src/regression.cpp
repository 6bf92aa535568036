#include "shapodd/regression.hpp"

#include <lapacke.h>

#include <Eigen/SVD>
#include <cmath>
#include <functional>
#include <unordered_set>

#include "shapodd/game.hpp"

namespace shapodd {

BasisSpec BasisSpec::fourier_odd(int d,
                                 const std::vector<Coalition>& interactions) {
  BasisSpec spec;
  spec.basis = Basis::fourier;
  spec.terms.reserve(1 + static_cast<std::size_t>(d) + interactions.size());
  spec.terms.push_back(Coalition::empty(d));
  for (int i = 0; i < d; ++i)
    spec.terms.push_back(Coalition::singleton(d, i));
  for (const Coalition& t : interactions) {
    if (t.size() < 3 || (t.size() & 1) == 0)
      throw std::invalid_argument(
          "odd-configuration interactions must have odd cardinality >= 3");
    spec.terms.push_back(t);
  }
  spec.validate(d);
  return spec;
}

namespace {

// Subsets of {0..d-1} with exactly `size` members, in lexicographic order.
// Index-vector enumeration, so it works for any d <= 128.
void for_each_combination(int d, int size,
                          const std::function<void(const Coalition&)>& fn) {
  if (size == 0) {
    fn(Coalition::empty(d));
    return;
  }
  if (size > d) return;
  std::vector<int> c(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) c[static_cast<std::size_t>(i)] = i;
  while (true) {
    fn(Coalition::from_players(d, c));
    int i = size - 1;
    while (i >= 0 && c[static_cast<std::size_t>(i)] == d - size + i) --i;
    if (i < 0) break;
    ++c[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < size; ++j)
      c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
  }
}

}  // namespace

BasisSpec BasisSpec::up_to_order(Basis basis, int d, int k) {
  if (k < 0 || k > d) throw std::invalid_argument("basis order out of range");
  double total = 0.0;
  for (int j = 0; j <= k; ++j) total += binomial(d, j);
  if (total > 1e7)
    throw std::invalid_argument("basis too large to enumerate");

  BasisSpec spec;
  spec.basis = basis;
  spec.terms.reserve(static_cast<std::size_t>(total));
  for (int j = 0; j <= k; ++j)
    for_each_combination(d, j,
                         [&](const Coalition& c) { spec.terms.push_back(c); });
  return spec;
}

void BasisSpec::validate(int d) const {
  std::unordered_set<Coalition> seen;
  for (const Coalition& t : terms) {
    if (t.dimension() != d)
      throw std::invalid_argument("basis term has wrong dimension");
    if (!seen.insert(t).second)
      throw std::invalid_argument("duplicate basis term");
  }
}

RegressionProblem make_regression_problem(const SampleSet& samples,
                                          ValueFunction& game,
                                          BasisSpec basis) {
  if (samples.d != game.dimension())
    throw std::invalid_argument("sample set and game dimension mismatch");
  if (samples.size() < 2 || !samples.coalitions[0].is_empty() ||
      !samples.coalitions[1].is_full())
    throw std::invalid_argument("sample set must start with the boundaries");

  RegressionProblem problem;
  problem.samples = samples;
  problem.basis = std::move(basis);
  problem.targets.reserve(samples.size());
  for (const Coalition& s : samples.coalitions)
    problem.targets.push_back(game.evaluate(s));
  problem.value_empty = problem.targets[0];
  problem.value_full = problem.targets[1];
  problem.interior_weights.reserve(samples.size() - 2);
  for (std::size_t i = samples.interior_begin(); i < samples.size(); ++i)
    problem.interior_weights.push_back(
        kernel_weight(samples.coalitions[i].size(), samples.d));
  return problem;
}

namespace {

double basis_entry(Basis basis, const Coalition& term, const Coalition& s) {
  if (basis == Basis::fourier)
    return (s.intersection_size(term) & 1) ? -1.0 : 1.0;
  return term.subset_of(s) ? 1.0 : 0.0;
}

}  // namespace

Eigen::MatrixXd build_design(const RegressionProblem& problem) {
  const std::size_t rows = problem.interior_count();
  const std::size_t cols = problem.basis.size();
  Eigen::MatrixXd design(rows, cols);
  for (std::size_t j = 0; j < rows; ++j) {
    const Coalition& s =
        problem.samples.coalitions[problem.samples.interior_begin() + j];
    for (std::size_t t = 0; t < cols; ++t)
      design(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(t)) =
          basis_entry(problem.basis.basis, problem.basis.terms[t], s);
  }
  return design;
}

Eigen::VectorXd min_norm_lstsq(const Eigen::MatrixXd& A,
                               const Eigen::VectorXd& b) {
  if (A.cols() == 0) return Eigen::VectorXd(0);
  if (A.rows() == 0) return Eigen::VectorXd::Zero(A.cols());
  if (b.size() != A.rows())
    throw std::invalid_argument("right-hand side length mismatch");

  // LAPACK dgelsd: divide-and-conquer SVD least squares. rcond implements the
  // relative cutoff, singular values <= 1e-10 * sigma_max count as zero.
  const lapack_int m = static_cast<lapack_int>(A.rows());
  const lapack_int n = static_cast<lapack_int>(A.cols());
  Eigen::MatrixXd work = A;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(std::max(m, n));
  rhs.head(m) = b;
  Eigen::VectorXd singular_values(std::min(m, n));
  lapack_int rank = 0;
  const lapack_int info =
      LAPACKE_dgelsd(LAPACK_COL_MAJOR, m, n, 1, work.data(), m, rhs.data(),
                     std::max(m, n), singular_values.data(), 1e-10, &rank);
  if (info != 0)
    throw std::runtime_error("dgelsd failed to converge (info=" +
                             std::to_string(info) + ")");
  return rhs.head(n);
}

CoefficientMap solve_constrained_wls(const RegressionProblem& problem) {
  const int d = problem.dimension();
  problem.basis.validate(d);
  const Eigen::Index n_terms =
      static_cast<Eigen::Index>(problem.basis.size());
  if (n_terms == 0) throw std::invalid_argument("empty basis");
  if (problem.targets.size() != problem.samples.size())
    throw std::invalid_argument("one target per sample required");
  for (double y : problem.targets)
    if (!std::isfinite(y)) throw std::invalid_argument("non-finite targets");
  if (problem.interior_count() < 1 && d > 1)
    throw std::invalid_argument("fewer than 1 interior sample");
  if (problem.interior_weights.size() != problem.interior_count())
    throw std::invalid_argument("one weight per interior sample required");
  for (double w : problem.interior_weights)
    if (!(w > 0.0)) throw std::invalid_argument("weights must be positive");

  // Boundary constraint rows: the fit must interpolate f at the empty and
  // full coalitions.
  const Coalition empty = Coalition::empty(d);
  const Coalition full = Coalition::full(d);
  Eigen::MatrixXd constraints(2, n_terms);
  for (Eigen::Index t = 0; t < n_terms; ++t) {
    const Coalition& term = problem.basis.terms[static_cast<std::size_t>(t)];
    constraints(0, t) = basis_entry(problem.basis.basis, term, empty);
    constraints(1, t) = basis_entry(problem.basis.basis, term, full);
  }
  Eigen::Vector2d boundary(problem.value_empty, problem.value_full);

  // Minimum-norm particular solution and the row-space projector of the
  // constraint matrix, from its thin SVD (rank <= 2).
  Eigen::JacobiSVD<Eigen::MatrixXd> csvd(
      constraints, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double sv_tol = 1e-12 * csvd.singularValues()(0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < csvd.singularValues().size(); ++i)
    if (csvd.singularValues()(i) > sv_tol) ++rank;
  const Eigen::MatrixXd row_basis = csvd.matrixV().leftCols(rank);  // n x r
  Eigen::VectorXd particular = Eigen::VectorXd::Zero(n_terms);
  for (Eigen::Index i = 0; i < rank; ++i)
    particular += row_basis.col(i) *
                  (csvd.matrixU().col(i).dot(boundary) /
                   csvd.singularValues()(i));
  if ((constraints * particular - boundary).norm() >
      1e-8 * (1.0 + boundary.norm()))
    throw std::invalid_argument(
        "boundary constraints are infeasible for this basis");

  // Interior rows, prescaled by sqrt(w); duplicate coalitions are merged
  // (weights are not multiplied).
  const std::size_t raw_rows = problem.interior_count();
  std::vector<std::size_t> keep;
  keep.reserve(raw_rows);
  {
    std::unordered_set<Coalition> seen;
    seen.insert(empty);
    seen.insert(full);
    for (std::size_t j = 0; j < raw_rows; ++j) {
      const Coalition& s =
          problem.samples.coalitions[problem.samples.interior_begin() + j];
      if (seen.insert(s).second) keep.push_back(j);
    }
  }

  const Eigen::Index rows = static_cast<Eigen::Index>(keep.size());
  Eigen::MatrixXd design(rows, n_terms);
  Eigen::VectorXd target(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::size_t j = keep[static_cast<std::size_t>(r)];
    const Coalition& s =
        problem.samples.coalitions[problem.samples.interior_begin() + j];
    const double sw = std::sqrt(problem.interior_weights[j]);
    for (Eigen::Index t = 0; t < n_terms; ++t)
      design(r, t) =
          sw * basis_entry(problem.basis.basis,
                           problem.basis.terms[static_cast<std::size_t>(t)], s);
    target(r) =
        sw * problem.targets[problem.samples.interior_begin() + j];
  }

  Eigen::VectorXd coeffs;
  if (rows == 0) {
    coeffs = particular;
  } else {
    // Project the design onto the orthogonal complement of the constraint
    // rows and shift the target by the particular solution; the minimum-norm
    // correction then stays inside the constraint null space.
    Eigen::VectorXd shifted = target - design * particular;
    Eigen::MatrixXd projected =
        design - (design * row_basis) * row_basis.transpose();
    coeffs = particular + min_norm_lstsq(projected, shifted);
  }

  CoefficientMap out(d, problem.basis.basis);
  for (Eigen::Index t = 0; t < n_terms; ++t)
    out.set(problem.basis.terms[static_cast<std::size_t>(t)], coeffs(t));
  return out;
}

}  // namespace shapodd

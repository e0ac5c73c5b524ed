#pragma once

#include <cstdint>
#include <vector>

#include "roughmild/grid.hpp"

namespace roughmild {

/// Finite-dimensional generator A with cached step exponentials
/// S_k = exp(k h A) for k = 0..n and a fitted growth envelope
/// |S_t|_op <= M e^(omega t).  Immutable after construction and safe to
/// share read-only across workers.
class SemigroupTable {
 public:
  SemigroupTable(Eigen::MatrixXd a_matrix, Grid grid,
                 std::vector<Eigen::MatrixXd> exps, double growth_m,
                 double growth_omega, bool symmetric);

  const Eigen::MatrixXd& generator() const { return a_; }
  const Grid& grid() const { return grid_; }
  int state_dim() const { return static_cast<int>(a_.rows()); }

  /// exp(k h A); index 0 is the identity.
  const Eigen::MatrixXd& exp_at(int k) const { return exps_.at(k); }

  Eigen::VectorXd apply(int k, const Eigen::VectorXd& y) const {
    return exps_.at(k) * y;
  }

  double growth_m() const { return growth_m_; }
  double growth_omega() const { return growth_omega_; }
  bool symmetric() const { return symmetric_; }

  /// True when A == 0, in which case every S_k is skipped as an exact
  /// identity (keeps summation order identical to the flat integrals).
  bool is_identity() const { return identity_; }

  /// Graph norm |y| + sum_{j<=order} |A^j y| for order in 0..3.
  double graph_norm(const Eigen::VectorXd& y, int order) const;

 private:
  Eigen::MatrixXd a_;
  Grid grid_;
  std::vector<Eigen::MatrixXd> exps_;
  double growth_m_;
  double growth_omega_;
  bool symmetric_;
  bool identity_;
};

/// Builds the table: eigendecomposition for symmetric generators, scaling
/// and squaring (Pade) otherwise.  The envelope is fitted deterministically
/// on a refined time grid:
///   omega = max(0, max_t log|S_t| / t),   M = max_t |S_t| e^(-omega t).
SemigroupTable build_semigroup(const Eigen::MatrixXd& a_matrix, const Grid& grid,
                               int fit_refine = 8);

struct RatioCheck {
  double max_ratio = 0.0;
  double bound = 0.0;
  bool holds = false;
};

/// Orbit Lipschitz bound: max over grid pairs of
///   |S_t y - S_s y| / (|t-s| |y|_{D(A)})  vs  M e^(omega T).
RatioCheck orbit_lipschitz_check(const SemigroupTable& table,
                                 const Eigen::VectorXd& y, double tol = 1e-8);

/// Quadruple estimate behind rough convolutions: max over grid quadruples
/// q, r <= s <= t of
///   |S_{s-r,t-r} y - S_{s-q,t-q} y| / (|t-s| |r-q| |y|_{D(A^2)})
/// vs M e^(2 omega T).  Exhaustive sweep, O(n^4).
RatioCheck quad_estimate_check(const SemigroupTable& table,
                               const Eigen::VectorXd& y, double tol = 1e-8);

/// Worst relative defect of S_{(j+k)h} = S_{jh} S_{kh} over random index
/// pairs; a structural self-check of the cached exponentials.
double semigroup_law_defect(const SemigroupTable& table, int n_pairs,
                            std::uint64_t seed);

/// Shipped example generators.
Eigen::MatrixXd zero_generator(int m);
Eigen::MatrixXd diagonal_generator(const Eigen::VectorXd& entries);
/// 1-d Dirichlet Laplacian: tridiag(1, -2, 1) / spacing^2.
Eigen::MatrixXd laplacian_1d(int m, double spacing = 1.0);
/// Non-normal upper-triangular test matrix (exercises M > 1).
Eigen::MatrixXd nonnormal_test_matrix(int m, double coupling = 2.0);

}  // namespace roughmild

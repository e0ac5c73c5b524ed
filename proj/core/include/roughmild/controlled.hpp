#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "roughmild/rough_path.hpp"
#include "roughmild/tensor.hpp"

namespace roughmild {

/// Whether a controlled path takes values in the state space R^m (blocks
/// m x 1) or in the operator space L(R^d, R^m) (blocks m x d).
enum class PathRole { State, Operator };

/// Norm bundle of a controlled path (Y, Y'):
///   seminorm = ||Y'||_alpha + ||R^Y||_{2 alpha}
///   pointed  = |Y'_0| + seminorm
///   full     = |Y_0| + pointed
/// plus the sup and Hoelder quantities the norm inequalities refer to.
struct ControlledNorms {
  double y_prime_alpha = 0.0;
  double remainder_2alpha = 0.0;
  double seminorm = 0.0;
  double pointed = 0.0;
  double full = 0.0;
  double y_sup = 0.0;
  double y_prime_sup = 0.0;
  double y_alpha = 0.0;
};

/// Path Y controlled by a reference rough path, together with its Gubinelli
/// derivative Y'.  The remainder R^Y_{s,t} = Y_{s,t} - Y'_s X_{s,t} is
/// derived on demand; its 2 alpha seminorm is the quality metric.
///
/// Values are immutable after construction; all operations on controlled
/// paths are pure functions and safe to run concurrently.
class ControlledPath {
 public:
  ControlledPath(std::shared_ptr<const RoughPath> reference,
                 std::vector<Eigen::MatrixXd> y, std::vector<Tensor3> y_prime,
                 PathRole role);

  /// Constant path c with zero derivative.
  static ControlledPath constant(std::shared_ptr<const RoughPath> reference,
                                 const Eigen::MatrixXd& c, PathRole role);

  /// The driver itself as a controlled path: Y = X, Y' = Id.
  static ControlledPath identity_lift(std::shared_ptr<const RoughPath> reference);

  const RoughPath& reference() const { return *reference_; }
  std::shared_ptr<const RoughPath> reference_ptr() const { return reference_; }
  const Grid& grid() const { return reference_->grid(); }
  double alpha() const { return reference_->alpha(); }
  PathRole role() const { return role_; }

  int block_rows() const { return static_cast<int>(y_.front().rows()); }
  int block_cols() const { return static_cast<int>(y_.front().cols()); }
  int driver_dim() const { return reference_->dim(); }

  const std::vector<Eigen::MatrixXd>& values() const { return y_; }
  const std::vector<Tensor3>& derivatives() const { return y_prime_; }
  const Eigen::MatrixXd& value(int i) const { return y_[i]; }
  const Tensor3& derivative(int i) const { return y_prime_[i]; }

  /// Remainder R^Y over [t_i, t_j] = Y_{t_j} - Y_{t_i} - Y'_{t_i} X_{t_i,t_j}.
  Eigen::MatrixXd remainder(int i, int j) const;

  /// Restriction to [t_{i0}, t_{i1}] over the matching driver restriction.
  ControlledPath subrange(int i0, int i1) const;

  /// Componentwise difference; both paths must share the reference driver.
  ControlledPath difference(const ControlledPath& other) const;

 private:
  std::shared_ptr<const RoughPath> reference_;
  std::vector<Eigen::MatrixXd> y_;
  std::vector<Tensor3> y_prime_;
  PathRole role_;
};

/// Exact grid sups for all norm levels of (Y, Y').
ControlledNorms controlled_norms(const ControlledPath& cp);

/// Time-dependent coefficient field for the equation
///   dY = (A Y + f0(t,Y)) dt + f(t,Y) dX.
/// f0 maps into R^m, f into L(R^d, R^m) as an m x d matrix, and the state
/// derivative D_y f(t,y) is an (m x d) x m array (one slice per state
/// coordinate).  When no analytic derivative is supplied, eval_df falls
/// back to central differences with step eps^(1/3) (1 + |y|).
///
/// Declared bounds are metadata used for diagnostics only; unbounded test
/// coefficients are permitted.  Evaluators must be reentrant: they may be
/// called concurrently from several worker threads.
struct CoefficientField {
  using DriftFn = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;
  using DiffusionFn = std::function<Eigen::MatrixXd(double, const Eigen::VectorXd&)>;
  using DerivativeFn = std::function<Tensor3(double, const Eigen::VectorXd&)>;

  int state_dim = 0;
  int driver_dim = 0;
  DriftFn f0;
  DiffusionFn f;
  DerivativeFn df;  // optional analytic D_y f

  double lip_f0 = 0.0;  // declared Lipschitz bound of f0 (diagnostic)
  double cb_f = 0.0;    // declared C_b bound of f (diagnostic)
  bool bounded = true;  // false flags coefficients outside C_b hypotheses

  Eigen::VectorXd eval_f0(double t, const Eigen::VectorXd& y) const;
  Eigen::MatrixXd eval_f(double t, const Eigen::VectorXd& y) const;
  Tensor3 eval_df(double t, const Eigen::VectorXd& y) const;
  bool has_analytic_df() const { return static_cast<bool>(df); }
};

/// Composition with the diffusion coefficient: value f(t, Y_t), derivative
/// D_y f(t, Y_t) Y'_t.  Input must be state-valued; the output is
/// operator-valued.
ControlledPath compose_smooth(const CoefficientField& field, const ControlledPath& cp);

/// Composition with a constant linear map, applied to values and
/// derivatives alike.
ControlledPath compose_linear(const Eigen::MatrixXd& phi, const ControlledPath& cp);

/// Composition with a time-indexed family of linear maps {phi_i}.
ControlledPath compose_linear(const std::vector<Eigen::MatrixXd>& phi,
                              const ControlledPath& cp);

/// Empirical 2 alpha-Hoelder constant of a time-indexed family:
/// max over grid pairs of |phi_i - phi_j|_op / |t_i - t_j|^(2 alpha).
/// A global constant for user-supplied families cannot be verified from
/// samples; callers record this grid value as the observed one.
double time_family_holder_constant(const std::vector<Eigen::MatrixXd>& phi,
                                   const Grid& grid, double alpha);

/// Continuous bilinear map W x E -> Wbar given by coordinate forms:
/// B(y,z)_i = y^T forms[i] z.
struct BilinearMap {
  std::vector<Eigen::MatrixXd> forms;

  int out_dim() const { return static_cast<int>(forms.size()); }
  Eigen::VectorXd operator()(const Eigen::VectorXd& y, const Eigen::VectorXd& z) const;
};

/// Composition with a bilinear map; the derivative follows the Leibniz rule
/// B(Y, Z') + B(Y', Z).  Both inputs must be state-valued over the same
/// reference.
ControlledPath compose_bilinear(const BilinearMap& map, const ControlledPath& y,
                                const ControlledPath& z);

/// Concatenation into a controlled path over the product space, with block
/// derivative (Y, Z)' = (Y', Z').
ControlledPath pair(const ControlledPath& y, const ControlledPath& z);

}  // namespace roughmild

#include "roughmild/controlled.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace roughmild {

ControlledPath::ControlledPath(std::shared_ptr<const RoughPath> reference,
                               std::vector<Eigen::MatrixXd> y,
                               std::vector<Tensor3> y_prime, PathRole role)
    : reference_(std::move(reference)),
      y_(std::move(y)),
      y_prime_(std::move(y_prime)),
      role_(role) {
  if (!reference_) {
    throw std::invalid_argument("ControlledPath: missing reference rough path");
  }
  const int points = reference_->grid().n_points();
  const int d = reference_->dim();
  if (static_cast<int>(y_.size()) != points ||
      static_cast<int>(y_prime_.size()) != points) {
    throw std::invalid_argument("ControlledPath: y and y' must share the reference grid");
  }
  const int rows = static_cast<int>(y_.front().rows());
  const int cols = static_cast<int>(y_.front().cols());
  if (role_ == PathRole::State && cols != 1) {
    throw std::invalid_argument("ControlledPath: state-valued paths need column blocks");
  }
  if (role_ == PathRole::Operator && cols != d) {
    throw std::invalid_argument("ControlledPath: operator-valued paths need m x d blocks");
  }
  for (int i = 0; i < points; ++i) {
    if (y_[i].rows() != rows || y_[i].cols() != cols || !y_[i].allFinite()) {
      throw std::invalid_argument("ControlledPath: inconsistent or non-finite values");
    }
    if (y_prime_[i].rows() != rows || y_prime_[i].cols() != cols ||
        y_prime_[i].dirs() != d || !y_prime_[i].all_finite()) {
      throw std::invalid_argument("ControlledPath: inconsistent or non-finite derivative");
    }
  }
}

ControlledPath ControlledPath::constant(std::shared_ptr<const RoughPath> reference,
                                        const Eigen::MatrixXd& c, PathRole role) {
  const int points = reference->grid().n_points();
  const int d = reference->dim();
  std::vector<Eigen::MatrixXd> y(points, c);
  std::vector<Tensor3> yp(points,
                          Tensor3(static_cast<int>(c.rows()), static_cast<int>(c.cols()), d));
  return ControlledPath(std::move(reference), std::move(y), std::move(yp), role);
}

ControlledPath ControlledPath::identity_lift(std::shared_ptr<const RoughPath> reference) {
  const int points = reference->grid().n_points();
  const int d = reference->dim();
  std::vector<Eigen::MatrixXd> y(points);
  Tensor3 id(d, 1, d);
  id.flat() = Eigen::MatrixXd::Identity(d, d);
  std::vector<Tensor3> yp(points, id);
  for (int i = 0; i < points; ++i) {
    y[i] = reference->first_level().value(i);
  }
  return ControlledPath(std::move(reference), std::move(y), std::move(yp),
                        PathRole::State);
}

Eigen::MatrixXd ControlledPath::remainder(int i, int j) const {
  if (i > j) throw std::invalid_argument("ControlledPath::remainder: need i <= j");
  return y_[j] - y_[i] - y_prime_[i].apply(reference_->increment(i, j));
}

ControlledPath ControlledPath::subrange(int i0, int i1) const {
  auto sub_ref = std::make_shared<RoughPath>(reference_->subrange(i0, i1));
  std::vector<Eigen::MatrixXd> y(y_.begin() + i0, y_.begin() + i1 + 1);
  std::vector<Tensor3> yp(y_prime_.begin() + i0, y_prime_.begin() + i1 + 1);
  return ControlledPath(std::move(sub_ref), std::move(y), std::move(yp), role_);
}

ControlledPath ControlledPath::difference(const ControlledPath& other) const {
  if (reference_ != other.reference_ && !(reference_->grid() == other.grid())) {
    throw std::invalid_argument("ControlledPath::difference: mismatched reference");
  }
  std::vector<Eigen::MatrixXd> y(y_.size());
  std::vector<Tensor3> yp(y_prime_.size());
  for (std::size_t i = 0; i < y_.size(); ++i) {
    y[i] = y_[i] - other.y_[i];
    yp[i] = y_prime_[i] - other.y_prime_[i];
  }
  return ControlledPath(reference_, std::move(y), std::move(yp), role_);
}

ControlledNorms controlled_norms(const ControlledPath& cp) {
  const Grid& grid = cp.grid();
  const int n = grid.n_steps();
  const double h = grid.step();
  const double alpha = cp.alpha();
  const auto& y = cp.values();
  const auto& yp = cp.derivatives();
  const auto& x = cp.reference().first_level().values();
  const int block = static_cast<int>(y.front().size());
  const int d = cp.driver_dim();

  ControlledNorms out;
  // Flattened copies keep the O(n^2) pair sweep allocation-free.
  Eigen::MatrixXd yv(block, n + 1);
  for (int i = 0; i <= n; ++i) {
    yv.col(i) = Eigen::Map<const Eigen::VectorXd>(y[i].data(), block);
    out.y_sup = std::max(out.y_sup, yv.col(i).norm());
    out.y_prime_sup = std::max(out.y_prime_sup, yp[i].norm());
  }
  // Per-gap powers are shared by every pair at that gap.
  std::vector<double> inv_pow_a(n + 1, 0.0), inv_pow_2a(n + 1, 0.0);
  for (int g = 1; g <= n; ++g) {
    const double pow_a = std::pow(h * g, alpha);
    inv_pow_a[g] = 1.0 / pow_a;
    inv_pow_2a[g] = 1.0 / (pow_a * pow_a);
  }
  Eigen::VectorXd inc(d), rem(block);
  for (int i = 0; i < n; ++i) {
    const auto& flat = yp[i].flat();
    for (int j = i + 1; j <= n; ++j) {
      const int g = j - i;
      out.y_alpha = std::max(out.y_alpha,
                             (yv.col(j) - yv.col(i)).norm() * inv_pow_a[g]);
      out.y_prime_alpha = std::max(
          out.y_prime_alpha, (yp[j].flat() - flat).norm() * inv_pow_a[g]);
      inc = x.col(j) - x.col(i);
      rem = yv.col(j) - yv.col(i);
      rem.noalias() -= flat * inc;
      out.remainder_2alpha = std::max(out.remainder_2alpha,
                                      rem.norm() * inv_pow_2a[g]);
    }
  }
  out.seminorm = out.y_prime_alpha + out.remainder_2alpha;
  out.pointed = yp[0].norm() + out.seminorm;
  out.full = y[0].norm() + out.pointed;
  return out;
}

namespace {

class CoefficientError : public std::runtime_error {
 public:
  CoefficientError(const char* what_part, double t, const Eigen::VectorXd& y)
      : std::runtime_error(std::string("coefficient evaluation failed: ") +
                           what_part + " non-finite at t=" + std::to_string(t) +
                           ", |y|=" + std::to_string(y.norm())) {}
};

}  // namespace

Eigen::VectorXd CoefficientField::eval_f0(double t, const Eigen::VectorXd& y) const {
  Eigen::VectorXd out = f0(t, y);
  if (!out.allFinite()) throw CoefficientError("f0", t, y);
  return out;
}

Eigen::MatrixXd CoefficientField::eval_f(double t, const Eigen::VectorXd& y) const {
  Eigen::MatrixXd out = f(t, y);
  if (!out.allFinite()) throw CoefficientError("f", t, y);
  return out;
}

Tensor3 CoefficientField::eval_df(double t, const Eigen::VectorXd& y) const {
  if (df) {
    Tensor3 out = df(t, y);
    if (!out.all_finite()) throw CoefficientError("df", t, y);
    return out;
  }
  // Central differences, step scaled by cbrt(machine epsilon).
  const double eps = std::cbrt(std::numeric_limits<double>::epsilon());
  const double step = eps * (1.0 + y.norm());
  Tensor3 out(state_dim, driver_dim, static_cast<int>(y.size()));
  Eigen::VectorXd probe = y;
  for (int j = 0; j < y.size(); ++j) {
    probe(j) = y(j) + step;
    Eigen::MatrixXd hi = eval_f(t, probe);
    probe(j) = y(j) - step;
    Eigen::MatrixXd lo = eval_f(t, probe);
    probe(j) = y(j);
    out.set_slice(j, (hi - lo) / (2.0 * step));
  }
  return out;
}

ControlledPath compose_smooth(const CoefficientField& field, const ControlledPath& cp) {
  if (cp.role() != PathRole::State) {
    throw std::invalid_argument("compose_smooth: input must be state-valued");
  }
  const Grid& grid = cp.grid();
  const int points = grid.n_points();
  const int d = cp.driver_dim();
  std::vector<Eigen::MatrixXd> values(points);
  std::vector<Tensor3> derivs(points);
  for (int i = 0; i < points; ++i) {
    const double t = grid.time(i);
    const Eigen::VectorXd state = cp.value(i).col(0);
    values[i] = field.eval_f(t, state);
    const Tensor3 df = field.eval_df(t, state);  // (m x d) blocks per state coord
    Tensor3 deriv(field.state_dim, field.driver_dim, d);
    for (int a = 0; a < d; ++a) {
      // Chain rule: slice_a( f(Y)' ) = sum_j dYa_j * d f / d y_j.
      const Eigen::VectorXd dir = cp.derivative(i).slice(a).col(0);
      deriv.set_slice(a, df.apply(dir));
    }
    derivs[i] = std::move(deriv);
  }
  return ControlledPath(cp.reference_ptr(), std::move(values), std::move(derivs),
                        PathRole::Operator);
}

namespace {

ControlledPath apply_linear_family(
    const std::function<const Eigen::MatrixXd&(int)>& phi_at,
    const ControlledPath& cp) {
  const int points = cp.grid().n_points();
  const int d = cp.driver_dim();
  std::vector<Eigen::MatrixXd> values(points);
  std::vector<Tensor3> derivs(points);
  for (int i = 0; i < points; ++i) {
    const Eigen::MatrixXd& phi = phi_at(i);
    if (phi.cols() != cp.block_rows()) {
      throw std::invalid_argument("compose_linear: dimension mismatch");
    }
    values[i] = phi * cp.value(i);
    Tensor3 deriv(static_cast<int>(phi.rows()), cp.block_cols(), d);
    for (int a = 0; a < d; ++a) {
      deriv.set_slice(a, phi * cp.derivative(i).slice(a));
    }
    derivs[i] = std::move(deriv);
  }
  return ControlledPath(cp.reference_ptr(), std::move(values), std::move(derivs),
                        cp.role());
}

}  // namespace

ControlledPath compose_linear(const Eigen::MatrixXd& phi, const ControlledPath& cp) {
  return apply_linear_family([&phi](int) -> const Eigen::MatrixXd& { return phi; }, cp);
}

ControlledPath compose_linear(const std::vector<Eigen::MatrixXd>& phi,
                              const ControlledPath& cp) {
  if (static_cast<int>(phi.size()) != cp.grid().n_points()) {
    throw std::invalid_argument("compose_linear: need one map per grid point");
  }
  return apply_linear_family(
      [&phi](int i) -> const Eigen::MatrixXd& { return phi[i]; }, cp);
}

double time_family_holder_constant(const std::vector<Eigen::MatrixXd>& phi,
                                   const Grid& grid, double alpha) {
  if (static_cast<int>(phi.size()) != grid.n_points()) {
    throw std::invalid_argument(
        "time_family_holder_constant: need one map per grid point");
  }
  double worst = 0.0;
  for (int i = 0; i < grid.n_steps(); ++i) {
    for (int j = i + 1; j <= grid.n_steps(); ++j) {
      const double gap = grid.step() * (j - i);
      const double diff = (phi[j] - phi[i]).jacobiSvd().singularValues()(0);
      worst = std::max(worst, diff / std::pow(gap, 2.0 * alpha));
    }
  }
  return worst;
}

Eigen::VectorXd BilinearMap::operator()(const Eigen::VectorXd& y,
                                        const Eigen::VectorXd& z) const {
  Eigen::VectorXd out(out_dim());
  for (int i = 0; i < out_dim(); ++i) {
    out(i) = y.dot(forms[i] * z);
  }
  return out;
}

ControlledPath compose_bilinear(const BilinearMap& map, const ControlledPath& y,
                                const ControlledPath& z) {
  if (y.role() != PathRole::State || z.role() != PathRole::State) {
    throw std::invalid_argument("compose_bilinear: inputs must be state-valued");
  }
  if (y.reference_ptr() != z.reference_ptr()) {
    throw std::invalid_argument("compose_bilinear: mismatched reference");
  }
  const int points = y.grid().n_points();
  const int d = y.driver_dim();
  const int m = map.out_dim();
  std::vector<Eigen::MatrixXd> values(points);
  std::vector<Tensor3> derivs(points);
  for (int i = 0; i < points; ++i) {
    const Eigen::VectorXd yv = y.value(i).col(0);
    const Eigen::VectorXd zv = z.value(i).col(0);
    values[i] = map(yv, zv);
    Tensor3 deriv(m, 1, d);
    for (int a = 0; a < d; ++a) {
      deriv.set_slice(a, map(yv, z.derivative(i).slice(a).col(0)) +
                             map(y.derivative(i).slice(a).col(0), zv));
    }
    derivs[i] = std::move(deriv);
  }
  return ControlledPath(y.reference_ptr(), std::move(values), std::move(derivs),
                        PathRole::State);
}

ControlledPath pair(const ControlledPath& y, const ControlledPath& z) {
  if (y.reference_ptr() != z.reference_ptr()) {
    throw std::invalid_argument("pair: mismatched reference");
  }
  if (y.role() != PathRole::State || z.role() != PathRole::State) {
    throw std::invalid_argument("pair: inputs must be state-valued");
  }
  const int points = y.grid().n_points();
  const int d = y.driver_dim();
  const int my = y.block_rows();
  const int mz = z.block_rows();
  std::vector<Eigen::MatrixXd> values(points);
  std::vector<Tensor3> derivs(points);
  for (int i = 0; i < points; ++i) {
    Eigen::MatrixXd v(my + mz, 1);
    v << y.value(i), z.value(i);
    values[i] = std::move(v);
    Tensor3 deriv(my + mz, 1, d);
    Eigen::MatrixXd flat(my + mz, d);
    flat.topRows(my) = y.derivative(i).flat();
    flat.bottomRows(mz) = z.derivative(i).flat();
    deriv.flat() = std::move(flat);
    derivs[i] = std::move(deriv);
  }
  return ControlledPath(y.reference_ptr(), std::move(values), std::move(derivs),
                        PathRole::State);
}

}  // namespace roughmild

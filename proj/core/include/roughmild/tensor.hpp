#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace roughmild {

/// Dense rank-3 array representing a linear map from direction space R^dirs
/// into a (rows x cols) block space.  Stored as a (rows*cols) x dirs matrix
/// whose a-th column is the column-major vectorization of slice a.
///
/// Gubinelli derivatives live here: a state-valued controlled path has
/// blocks of shape (m x 1) with one slice per driver direction, an
/// operator-valued one has (m x d) blocks.
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(int rows, int cols, int dirs)
      : rows_(rows), cols_(cols), flat_(Eigen::MatrixXd::Zero(rows * cols, dirs)) {}

  static Tensor3 from_flat(int rows, int cols, Eigen::MatrixXd flat) {
    Tensor3 t;
    if (flat.rows() != rows * cols) {
      throw std::invalid_argument("Tensor3::from_flat: shape mismatch");
    }
    t.rows_ = rows;
    t.cols_ = cols;
    t.flat_ = std::move(flat);
    return t;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int dirs() const { return static_cast<int>(flat_.cols()); }

  const Eigen::MatrixXd& flat() const { return flat_; }
  Eigen::MatrixXd& flat() { return flat_; }

  Eigen::Map<const Eigen::MatrixXd> slice(int a) const {
    return Eigen::Map<const Eigen::MatrixXd>(flat_.col(a).data(), rows_, cols_);
  }
  void set_slice(int a, const Eigen::MatrixXd& block) {
    flat_.col(a) = Eigen::Map<const Eigen::VectorXd>(block.data(), rows_ * cols_);
  }

  /// Applies the map to a direction vector: sum_a x_a slice(a).
  Eigen::MatrixXd apply(const Eigen::VectorXd& x) const {
    Eigen::VectorXd v = flat_ * x;
    return Eigen::Map<const Eigen::MatrixXd>(v.data(), rows_, cols_);
  }

  /// Contraction against a second-level tensor, for square blocks with
  /// cols == dirs:  sum_{a,b} slice(a).col(b) * xx(a,b).
  Eigen::VectorXd contract_pair(const Eigen::MatrixXd& xx) const {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(rows_);
    add_contract_pair(xx, acc);
    return acc;
  }

  /// Allocation-free variant: acc += contraction.
  void add_contract_pair(const Eigen::MatrixXd& xx, Eigen::VectorXd& acc) const {
    if (cols_ != dirs() || xx.rows() != dirs() || xx.cols() != dirs()) {
      throw std::invalid_argument("Tensor3::contract_pair: shape mismatch");
    }
    for (int a = 0; a < dirs(); ++a) {
      acc.noalias() += slice(a) * xx.row(a).transpose();
    }
  }

  double norm() const { return flat_.norm(); }
  bool all_finite() const { return flat_.allFinite(); }

  Tensor3& operator+=(const Tensor3& o) { flat_ += o.flat_; return *this; }
  Tensor3& operator-=(const Tensor3& o) { flat_ -= o.flat_; return *this; }
  Tensor3& operator*=(double c) { flat_ *= c; return *this; }

  friend Tensor3 operator-(const Tensor3& a, const Tensor3& b) {
    Tensor3 out = a;
    out -= b;
    return out;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  Eigen::MatrixXd flat_;
};

}  // namespace roughmild

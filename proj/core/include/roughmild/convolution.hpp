#pragma once

#include "roughmild/controlled.hpp"
#include "roughmild/semigroup.hpp"

namespace roughmild {

/// Quadrature weights for the drift convolution integral
/// N_t = int_0^t S_{t-s} g_s ds.  LeftPoint matches the order of the
/// compensated rough term and is the default; SemigroupExact freezes g at
/// the left endpoint but integrates the semigroup factor exactly
/// (phi1 weights), which removes the stiff-layer error.
enum class QuadratureRule { LeftPoint, Trapezoid, SemigroupExact };

/// Drift convolution at grid index j.  g must be a state path (one column
/// per grid point) on the table's grid.
Eigen::VectorXd regular_convolution(const SemigroupTable& table,
                                    const Eigen::MatrixXd& g, int j,
                                    QuadratureRule rule = QuadratureRule::LeftPoint);

/// All of N_0..N_n in one O(n^2) sweep.
Eigen::MatrixXd regular_convolution_path(const SemigroupTable& table,
                                         const Eigen::MatrixXd& g,
                                         QuadratureRule rule = QuadratureRule::LeftPoint);

/// Rough convolution N_{t_j} = int_0^{t_j} S_{t_j - s} Y_s dX_s as the
/// compensated sum of the semigroup-twisted integrand:
///   sum_{k<j} S_{(j-k)h} ( Y_{t_k} X_k + Y'_{t_k} : XX_k ).
/// With A == 0 this reduces bitwise to the flat rough integral (the
/// identity factors are skipped, keeping the same summation order).
Eigen::VectorXd rough_convolution(const SemigroupTable& table,
                                  const ControlledPath& cp, int j);

/// Full convolution path as a controlled path with derivative N' = Y.
ControlledPath rough_convolution_controlled(const SemigroupTable& table,
                                            const ControlledPath& cp);

/// The two compensated sums behind N_{s,t} - I_{s,t}:
///   term1 = int over [s,t] of (S_{t-r} - Id) Y_r dX_r      ~ |t-s|^(3 alpha)
///   term2 = int over [0,s] of (S_{t-r} - S_{s-r}) Y_r dX_r ~ |t-s|
/// Their sum reproduces N_{s,t} - I_{s,t} up to rounding.
struct ConvolutionSplit {
  Eigen::VectorXd term1;
  Eigen::VectorXd term2;
};
ConvolutionSplit convolution_decomposition_probe(const SemigroupTable& table,
                                                 const ControlledPath& cp, int i,
                                                 int j);

}  // namespace roughmild

#pragma once

#include "metricstats/spaces.hpp"

#include <Eigen/Dense>

namespace metricstats {

// Symmetric n x n matrix of pairwise distances with zero diagonal; the
// interchange format between the estimator, graph, and embedding layers.
using DistanceMatrix = Eigen::MatrixXd;

// Distance between two flattened objects of the given space:
//   Euclidean        |x - y|
//   Sphere           arccos of the clamped inner product
//   Hyperbolic2      arccosh(z_a z_b - x_a x_b - y_a y_b)
//   Spd              per SpdMetric: Frobenius norm of the difference, of
//                    matrix logs, of matrix powers scaled by 1/alpha, of
//                    Cholesky factors; |log(U^{-1/2} V U^{-1/2})|_F;
//                    [tr U + tr V - 2 tr(U^{1/2} V U^{1/2})^{1/2}]^{1/2}
//   GaussianBW       the Bures-Wasserstein formula above
//   Wasserstein1D    L2 distance of quantile grids under trapezoid weights
//   FisherRao        arccos of the clamped Bhattacharyya coefficient
// arccos/arccosh arguments are clamped into the domain when within 1e-9 of
// it and rejected beyond that slack.
double distance(const SpaceKind& space, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// Pairwise distances, each unordered pair computed once.
DistanceMatrix distance_matrix(const ObjectSample& sample);

// Matrix functions on symmetric positive (semi)definite input via
// symmetric eigendecomposition, eigenvalues clamped at 1e-12. Used by the
// SPD metrics, the mean computations, and the Gaussian geodesic.
Eigen::MatrixXd spd_sqrt(const Eigen::MatrixXd& a);
Eigen::MatrixXd spd_inv_sqrt(const Eigen::MatrixXd& a);
Eigen::MatrixXd spd_log(const Eigen::MatrixXd& a);
Eigen::MatrixXd spd_exp(const Eigen::MatrixXd& a);
Eigen::MatrixXd spd_pow(const Eigen::MatrixXd& a, double alpha);

// Lower-triangular Cholesky factor with positive diagonal.
Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& a);

} // namespace metricstats

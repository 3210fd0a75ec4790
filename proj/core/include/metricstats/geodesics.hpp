#pragma once

#include "metricstats/distance.hpp"
#include "metricstats/spaces.hpp"

#include <Eigen/Core>

namespace metricstats {

// Classical-MDS embedding of an intrinsic distance matrix, plus the data
// needed to map representation points back to sample objects.
struct EmbeddingModel {
    Eigen::MatrixXd coordinates;
    int q = 0;
    Eigen::VectorXd eigenvalues;
    ObjectSample sample;
    DistanceMatrix d_i;
    // Set when the q-th MDS eigenvalue is not positive: the requested target
    // dimension exceeds the detected intrinsic dimension.
    bool deficient = false;
};

// Double-center -1/2 J D^2 J, take the top q eigenpairs (negative values
// clamped to 0), and scale eigenvectors by sqrt(eigenvalue). Each
// eigenvector's first nonzero entry is made positive so embeddings are
// reproducible.
EmbeddingModel isomap_embed(const ObjectSample& sample, const DistanceMatrix& d_i, int q);

// Straight-line interpolation s(t) = (1-t) psi(x) + t psi(y) in the
// representation space.
Eigen::VectorXd interpolate_representation(const EmbeddingModel& model, int x_index, int y_index,
                                           double t);

// Median nearest-neighbor distance between representation points; the
// default kernel bandwidth for inverse_map.
double default_bandwidth(const EmbeddingModel& model);

enum class InverseMapMode {
    // Weighted Frechet mean over the sample with Gaussian kernel weights.
    WeightedMean,
    // Argmin of the weighted objective over the sample objects themselves.
    NearestSample,
};

// Kernel-weighted barycenter pullback of a representation point: weights
// w_i proportional to exp(-|psi(X_i) - zeta|^2 / (2 h^2)). Throws an
// extrapolation error when every weight underflows (zeta far outside the
// embedded sample).
Eigen::VectorXd inverse_map(const EmbeddingModel& model, const Eigen::VectorXd& zeta,
                            double bandwidth, InverseMapMode mode = InverseMapMode::WeightedMean);

// Closed-form Bures-Wasserstein geodesic between Gaussian covariances:
// W(t) = [(1-t)I + tT] U [(1-t)I + tT] with the optimal transport map
// T = V^{1/2} (V^{1/2} U V^{1/2})^{-1/2} V^{1/2}.
Eigen::MatrixXd gaussian_wasserstein_geodesic(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v,
                                              double t);

} // namespace metricstats

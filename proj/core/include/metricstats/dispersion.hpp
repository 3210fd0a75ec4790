#pragma once

#include "metricstats/distance.hpp"
#include "metricstats/frechet.hpp"
#include "metricstats/spaces.hpp"

#include <Eigen/Core>

namespace metricstats {

// Joint dispersion summary of one sample: metric variance v_m, Frechet
// variance v_f, and the 2x2 asymptotic covariance estimate for the pair
// (v_m, v_f), ordered sigma = [[var_m, cov_fm], [cov_fm, var_f]].
struct DispersionEstimate {
    double v_m = 0.0;
    double v_f = 0.0;
    Eigen::Matrix2d sigma = Eigen::Matrix2d::Zero();
    int n = 0;
    Eigen::VectorXd mean_distances;
    Eigen::VectorXd mean_object;
    // Sample index of the mean when it was restricted to sample points
    // (intrinsic pipeline); -1 when a free Frechet mean was used.
    int mean_index = -1;
    bool sigma_clamped = false;
    bool mean_converged = true;
};

// (1/(n(n-1))) sum_{i<j} dist(i,j)^2.
double metric_variance(const DistanceMatrix& dist);

// Mean of squared distances to the Frechet mean.
double frechet_variance(const Eigen::VectorXd& dist_to_mean);

// Plug-in estimate of the asymptotic covariance of (v_m, v_f). Diagonal
// entries are clamped at 0; *clamped reports whether clamping happened.
Eigen::Matrix2d covariance_estimate(const DistanceMatrix& dist,
                                    const Eigen::VectorXd& dist_to_mean,
                                    bool* clamped = nullptr);

// Full pipeline on a sample: distance matrix, Frechet mean, distances to
// the mean, then the three estimators.
DispersionEstimate dispersion(const ObjectSample& sample, const FrechetMeanOptions& options = {});

// Same estimators on a precomputed distance matrix with the mean restricted
// to the sample point mean_index (distances to the mean are that row).
DispersionEstimate dispersion_from_matrix(const DistanceMatrix& dist, int mean_index);

} // namespace metricstats

#pragma once

#include "metricstats/distance.hpp"
#include "metricstats/spaces.hpp"

#include <Eigen/Core>

namespace metricstats {

struct FrechetMeanOptions {
    int max_iter = 500;
    double tol = 1e-9;
};

struct FrechetMeanResult {
    Eigen::VectorXd mean;
    double objective = 0.0;
    int iterations = 0;
    bool converged = true;
};

struct RestrictedMeanResult {
    int index = 0;
    double objective = 0.0;
};

// Minimizer of F(m) = sum_i w_i d^2(m, X_i) with uniform weights 1/n.
// Closed forms where the metric admits them (Euclidean, flat SPD metrics,
// quantile and root-density grids); Riemannian gradient descent on the sphere
// and hyperboloid; Karcher/Bures fixed-point iterations for the curved SPD
// metrics. Non-convergence is reported through the converged flag, not thrown.
FrechetMeanResult frechet_mean(const ObjectSample& sample, const FrechetMeanOptions& options = {});

// Same minimization under caller-supplied nonnegative weights (need not be
// normalized; they are rescaled to sum to 1).
FrechetMeanResult weighted_frechet_mean(const ObjectSample& sample, const Eigen::VectorXd& weights,
                                        const FrechetMeanOptions& options = {});

// Argmin over sample indices k of (1/n) sum_i dist(k,i)^2; ties go to the
// smallest index.
RestrictedMeanResult frechet_mean_restricted(const DistanceMatrix& dist);

// Objective sum_i w_i d^2(point, X_i) evaluated with pairwise summation.
double weighted_objective(const ObjectSample& sample, const Eigen::VectorXd& weights,
                          const Eigen::VectorXd& point);

} // namespace metricstats

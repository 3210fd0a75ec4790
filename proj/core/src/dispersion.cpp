#include "metricstats/dispersion.hpp"

#include "metricstats/errors.hpp"
#include "metricstats/stats.hpp"

#include <string>
#include <vector>

namespace metricstats {

namespace {

void check_square(const DistanceMatrix& dist, const char* what) {
    const int n = static_cast<int>(dist.rows());
    if (n < 2 || dist.cols() != n) {
        throw InvalidInputError(std::string(what) + ": need a square matrix with n >= 2");
    }
    if (!dist.allFinite()) {
        throw InvalidInputError(std::string(what) + ": matrix has non-finite entries");
    }
}

// Per-index mean of squared distances to the other points,
// (1/(n-1)) sum_{j != i} dist(i,j)^2.
Eigen::VectorXd row_square_means(const DistanceMatrix& dist) {
    const int n = static_cast<int>(dist.rows());
    Eigen::VectorXd out(n);
    std::vector<double> terms(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            terms[static_cast<size_t>(j)] = j == i ? 0.0 : dist(i, j) * dist(i, j);
        }
        out(i) = pairwise_sum(terms) / (n - 1);
    }
    return out;
}

} // namespace

double metric_variance(const DistanceMatrix& dist) {
    check_square(dist, "metric_variance");
    const int n = static_cast<int>(dist.rows());
    std::vector<double> terms;
    terms.reserve(static_cast<size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            terms.push_back(dist(i, j) * dist(i, j));
        }
    }
    return pairwise_sum(terms) / (static_cast<double>(n) * (n - 1));
}

double frechet_variance(const Eigen::VectorXd& dist_to_mean) {
    const int n = static_cast<int>(dist_to_mean.size());
    if (n < 1) {
        throw InvalidInputError("frechet_variance: empty distance vector");
    }
    if (!dist_to_mean.allFinite() || dist_to_mean.minCoeff() < 0) {
        throw InvalidInputError("frechet_variance: distances must be finite and nonnegative");
    }
    std::vector<double> terms(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        terms[static_cast<size_t>(i)] = dist_to_mean(i) * dist_to_mean(i);
    }
    return pairwise_sum(terms) / n;
}

Eigen::Matrix2d covariance_estimate(const DistanceMatrix& dist,
                                    const Eigen::VectorXd& dist_to_mean, bool* clamped) {
    check_square(dist, "covariance_estimate");
    const int n = static_cast<int>(dist.rows());
    if (dist_to_mean.size() != n) {
        throw InvalidInputError("covariance_estimate: dist_to_mean length does not match matrix");
    }

    const double v_m = metric_variance(dist);
    const double v_f = frechet_variance(dist_to_mean);
    const Eigen::VectorXd row_means = row_square_means(dist);

    std::vector<double> mm(static_cast<size_t>(n));
    std::vector<double> fm(static_cast<size_t>(n));
    std::vector<double> ff(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double d2 = dist_to_mean(i) * dist_to_mean(i);
        mm[static_cast<size_t>(i)] = row_means(i) * row_means(i);
        fm[static_cast<size_t>(i)] = d2 * row_means(i);
        ff[static_cast<size_t>(i)] = d2 * d2;
    }
    double var_m = pairwise_sum(mm) / n - (2.0 * v_m) * (2.0 * v_m);
    double cov_fm = pairwise_sum(fm) / n - v_f * (2.0 * v_m);
    double var_f = pairwise_sum(ff) / n - v_f * v_f;

    bool did_clamp = false;
    if (var_m < 0) {
        var_m = 0;
        did_clamp = true;
    }
    if (var_f < 0) {
        var_f = 0;
        did_clamp = true;
    }
    if (clamped != nullptr) {
        *clamped = did_clamp;
    }

    Eigen::Matrix2d sigma;
    sigma << var_m, cov_fm, cov_fm, var_f;
    return sigma;
}

DispersionEstimate dispersion(const ObjectSample& sample, const FrechetMeanOptions& options) {
    validate_sample(sample);
    const int n = sample.size();

    const DistanceMatrix dist = distance_matrix(sample);
    const FrechetMeanResult mean = frechet_mean(sample, options);

    Eigen::VectorXd to_mean(n);
    for (int i = 0; i < n; ++i) {
        to_mean(i) = distance(sample.space, mean.mean, sample.objects.row(i).transpose());
    }

    DispersionEstimate est;
    est.n = n;
    est.v_m = metric_variance(dist);
    est.v_f = frechet_variance(to_mean);
    est.sigma = covariance_estimate(dist, to_mean, &est.sigma_clamped);
    est.mean_distances = to_mean;
    est.mean_object = mean.mean;
    est.mean_index = -1;
    est.mean_converged = mean.converged;
    return est;
}

DispersionEstimate dispersion_from_matrix(const DistanceMatrix& dist, int mean_index) {
    check_square(dist, "dispersion_from_matrix");
    const int n = static_cast<int>(dist.rows());
    if (mean_index < 0 || mean_index >= n) {
        throw InvalidInputError("dispersion_from_matrix: mean index out of range");
    }

    const Eigen::VectorXd to_mean = dist.row(mean_index).transpose();

    DispersionEstimate est;
    est.n = n;
    est.v_m = metric_variance(dist);
    est.v_f = frechet_variance(to_mean);
    est.sigma = covariance_estimate(dist, to_mean, &est.sigma_clamped);
    est.mean_distances = to_mean;
    est.mean_index = mean_index;
    est.mean_converged = true;
    return est;
}

} // namespace metricstats

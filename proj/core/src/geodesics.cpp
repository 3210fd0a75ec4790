#include "metricstats/geodesics.hpp"

#include "metricstats/errors.hpp"
#include "metricstats/frechet.hpp"
#include "metricstats/stats.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace metricstats {

namespace {

void check_model_index(const EmbeddingModel& model, int index, const char* what) {
    if (index < 0 || index >= model.coordinates.rows()) {
        throw InvalidInputError(std::string(what) + ": sample index out of range");
    }
}

} // namespace

EmbeddingModel isomap_embed(const ObjectSample& sample, const DistanceMatrix& d_i, int q) {
    const int n = static_cast<int>(d_i.rows());
    if (n < 2 || d_i.cols() != n) {
        throw InvalidInputError("isomap_embed: need a square distance matrix with n >= 2");
    }
    if (sample.size() != n) {
        throw InvalidInputError("isomap_embed: sample size does not match distance matrix");
    }
    if (q < 1 || q >= n) {
        throw InvalidInputError("isomap_embed: need 1 <= q < n");
    }

    // Gram matrix of the centered configuration: B = -1/2 J D^2 J.
    const Eigen::MatrixXd squared = d_i.array().square();
    const Eigen::VectorXd row_means = squared.rowwise().mean();
    const double grand_mean = row_means.mean();
    Eigen::MatrixXd gram(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            gram(i, j) = -0.5 * (squared(i, j) - row_means(i) - row_means(j) + grand_mean);
        }
    }
    gram = 0.5 * (gram + gram.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
    if (solver.info() != Eigen::Success) {
        throw InvalidInputError("isomap_embed: eigendecomposition failed");
    }

    EmbeddingModel model;
    model.q = q;
    model.sample = sample;
    model.d_i = d_i;
    model.eigenvalues = Eigen::VectorXd(q);
    model.coordinates = Eigen::MatrixXd::Zero(n, q);

    // Eigen returns ascending order; the top-q pairs sit at the tail.
    for (int k = 0; k < q; ++k) {
        const int at = n - 1 - k;
        const double value = solver.eigenvalues()(at);
        Eigen::VectorXd vec = solver.eigenvectors().col(at);
        for (int i = 0; i < n; ++i) {
            if (std::abs(vec(i)) > 1e-12) {
                if (vec(i) < 0) {
                    vec = -vec;
                }
                break;
            }
        }
        if (value <= 0) {
            model.deficient = true;
            model.eigenvalues(k) = 0.0;
            continue;
        }
        model.eigenvalues(k) = value;
        model.coordinates.col(k) = std::sqrt(value) * vec;
    }
    return model;
}

Eigen::VectorXd interpolate_representation(const EmbeddingModel& model, int x_index, int y_index,
                                           double t) {
    check_model_index(model, x_index, "interpolate_representation");
    check_model_index(model, y_index, "interpolate_representation");
    if (!(t >= 0.0 && t <= 1.0)) {
        throw InvalidInputError("interpolate_representation: t must lie in [0, 1]");
    }
    return (1.0 - t) * model.coordinates.row(x_index).transpose() +
           t * model.coordinates.row(y_index).transpose();
}

double default_bandwidth(const EmbeddingModel& model) {
    const int n = static_cast<int>(model.coordinates.rows());
    if (n < 2) {
        throw InvalidInputError("default_bandwidth: need at least 2 points");
    }
    std::vector<double> nearest(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) {
            if (j != i) {
                best = std::min(best,
                                (model.coordinates.row(i) - model.coordinates.row(j)).norm());
            }
        }
        nearest[static_cast<size_t>(i)] = best;
    }
    std::sort(nearest.begin(), nearest.end());
    const size_t half = nearest.size() / 2;
    if (nearest.size() % 2 == 1) {
        return nearest[half];
    }
    return 0.5 * (nearest[half - 1] + nearest[half]);
}

Eigen::VectorXd inverse_map(const EmbeddingModel& model, const Eigen::VectorXd& zeta,
                            double bandwidth, InverseMapMode mode) {
    if (!(bandwidth > 0)) {
        throw InvalidInputError("inverse_map: bandwidth must be positive");
    }
    if (zeta.size() != model.q) {
        throw InvalidInputError("inverse_map: point dimension does not match embedding");
    }
    const int n = static_cast<int>(model.coordinates.rows());

    Eigen::VectorXd weights(n);
    for (int i = 0; i < n; ++i) {
        const double gap = (model.coordinates.row(i).transpose() - zeta).squaredNorm();
        weights(i) = std::exp(-gap / (2.0 * bandwidth * bandwidth));
    }
    if (weights.maxCoeff() < 1e-300) {
        throw ExtrapolationError(
            "inverse_map: every kernel weight underflowed; the representation point lies far "
            "outside the embedded sample");
    }
    weights /= weights.sum();

    if (mode == InverseMapMode::WeightedMean) {
        return weighted_frechet_mean(model.sample, weights).mean;
    }

    // Argmin over the sample objects of sum_i w_i d^2(X_k, X_i), using the
    // ambient metric.
    int best = -1;
    double best_objective = 0.0;
    for (int k = 0; k < n; ++k) {
        double objective = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = distance(model.sample.space, model.sample.objects.row(k).transpose(),
                                      model.sample.objects.row(i).transpose());
            objective += weights(i) * d * d;
        }
        if (best < 0 || objective < best_objective) {
            best = k;
            best_objective = objective;
        }
    }
    return model.sample.objects.row(best).transpose();
}

Eigen::MatrixXd gaussian_wasserstein_geodesic(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v,
                                              double t) {
    const int d = static_cast<int>(u.rows());
    if (u.cols() != d || v.rows() != d || v.cols() != d) {
        throw InvalidInputError("gaussian_wasserstein_geodesic: endpoint shapes differ");
    }
    if (!(t >= 0.0 && t <= 1.0)) {
        throw InvalidInputError("gaussian_wasserstein_geodesic: t must lie in [0, 1]");
    }

    const Eigen::MatrixXd v_root = spd_sqrt(v);
    const Eigen::MatrixXd inner = v_root * u * v_root;
    const Eigen::MatrixXd transport =
        v_root * spd_inv_sqrt(0.5 * (inner + inner.transpose())) * v_root;
    const Eigen::MatrixXd blend =
        (1.0 - t) * Eigen::MatrixXd::Identity(d, d) + t * transport;
    const Eigen::MatrixXd w = blend * u * blend;
    return 0.5 * (w + w.transpose());
}

} // namespace metricstats

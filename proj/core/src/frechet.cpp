#include "metricstats/frechet.hpp"

#include "metricstats/errors.hpp"
#include "metricstats/stats.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace metricstats {

namespace {

Eigen::VectorXd normalized_weights(int n, const Eigen::VectorXd& weights) {
    if (weights.size() != n) {
        throw InvalidInputError("frechet_mean: weight vector length does not match sample size");
    }
    if (!weights.allFinite() || weights.minCoeff() < 0) {
        throw InvalidInputError("frechet_mean: weights must be finite and nonnegative");
    }
    const double total = weights.sum();
    if (total <= 0) {
        throw InvalidInputError("frechet_mean: weights sum to zero");
    }
    return weights / total;
}

Eigen::VectorXd weighted_row_sum(const ObjectSample& sample, const Eigen::VectorXd& w) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(sample.objects.cols());
    for (int i = 0; i < sample.size(); ++i) {
        out += w(i) * sample.objects.row(i).transpose();
    }
    return out;
}

Eigen::VectorXd flatten_matrix(const Eigen::MatrixXd& m) {
    const int d = static_cast<int>(m.rows());
    Eigen::VectorXd v(d * d);
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
            v(r * d + c) = m(r, c);
        }
    }
    return v;
}

Eigen::MatrixXd sym_object(const ObjectSample& sample, int i) {
    const Eigen::MatrixXd m = sample.object_as_matrix(i);
    return 0.5 * (m + m.transpose());
}

FrechetMeanResult closed_form_result(const ObjectSample& sample, const Eigen::VectorXd& w,
                                     Eigen::VectorXd mean) {
    FrechetMeanResult result;
    result.mean = std::move(mean);
    result.objective = weighted_objective(sample, w, result.mean);
    result.iterations = 0;
    result.converged = true;
    return result;
}

// Unit sphere in R^d: tangent maps for gradient descent.
Eigen::VectorXd sphere_log(const Eigen::VectorXd& m, const Eigen::VectorXd& x) {
    const double c = std::min(1.0, std::max(-1.0, m.dot(x)));
    const Eigen::VectorXd u = x - c * m;
    const double un = u.norm();
    if (un < 1e-15) {
        return Eigen::VectorXd::Zero(m.size());
    }
    return (std::acos(c) / un) * u;
}

Eigen::VectorXd sphere_exp(const Eigen::VectorXd& m, const Eigen::VectorXd& v) {
    const double nv = v.norm();
    if (nv < 1e-15) {
        return m;
    }
    Eigen::VectorXd out = std::cos(nv) * m + (std::sin(nv) / nv) * v;
    return out / out.norm();
}

// Hyperboloid {z^2 = 1 + x^2 + y^2, z > 0} with coordinates (x, y, z) and
// Minkowski form <a,b> = a_z b_z - a_x b_x - a_y b_y.
double minkowski(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return a(2) * b(2) - a(0) * b(0) - a(1) * b(1);
}

Eigen::VectorXd hyper_log(const Eigen::VectorXd& m, const Eigen::VectorXd& x) {
    const double c = std::max(1.0, minkowski(m, x));
    const Eigen::VectorXd u = x - c * m;
    const double un = std::sqrt(std::max(c * c - 1.0, 0.0));
    if (un < 1e-15) {
        return Eigen::VectorXd::Zero(3);
    }
    return (std::acosh(c) / un) * u;
}

Eigen::VectorXd hyper_exp(const Eigen::VectorXd& m, const Eigen::VectorXd& v) {
    const double nv = std::sqrt(std::max(-minkowski(v, v), 0.0));
    if (nv < 1e-15) {
        return m;
    }
    Eigen::VectorXd out = std::cosh(nv) * m + (std::sinh(nv) / nv) * v;
    return out / std::sqrt(minkowski(out, out));
}

using TangentMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)>;
using TangentNorm = std::function<double(const Eigen::VectorXd&)>;

FrechetMeanResult manifold_descent(const ObjectSample& sample, const Eigen::VectorXd& w,
                                   Eigen::VectorXd init, const FrechetMeanOptions& options,
                                   const TangentMap& log_map, const TangentMap& exp_map,
                                   const TangentNorm& tangent_norm) {
    FrechetMeanResult result;
    result.mean = std::move(init);
    result.objective = weighted_objective(sample, w, result.mean);
    result.converged = false;

    for (int it = 1; it <= options.max_iter; ++it) {
        result.iterations = it;
        Eigen::VectorXd direction = Eigen::VectorXd::Zero(result.mean.size());
        for (int i = 0; i < sample.size(); ++i) {
            direction += w(i) * log_map(result.mean, sample.objects.row(i).transpose());
        }
        double step = 1.0;
        Eigen::VectorXd candidate;
        double candidate_objective = 0.0;
        bool accepted = false;
        for (int halving = 0; halving < 40; ++halving) {
            candidate = exp_map(result.mean, step * direction);
            candidate_objective = weighted_objective(sample, w, candidate);
            if (candidate_objective <= result.objective) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            result.converged = true;
            break;
        }
        const double moved = step * tangent_norm(direction);
        const double decrease = result.objective - candidate_objective;
        result.mean = candidate;
        result.objective = candidate_objective;
        if (moved < options.tol || decrease < options.tol) {
            result.converged = true;
            break;
        }
    }
    return result;
}

FrechetMeanResult sphere_mean(const ObjectSample& sample, const Eigen::VectorXd& w,
                              const FrechetMeanOptions& options) {
    Eigen::VectorXd init = weighted_row_sum(sample, w);
    if (init.norm() < 1e-12) {
        init = sample.objects.row(0).transpose();
    }
    init /= init.norm();
    return manifold_descent(
        sample, w, init, options, sphere_log, sphere_exp,
        [](const Eigen::VectorXd& v) { return v.norm(); });
}

FrechetMeanResult hyperboloid_mean(const ObjectSample& sample, const Eigen::VectorXd& w,
                                   const FrechetMeanOptions& options) {
    Eigen::VectorXd init = weighted_row_sum(sample, w);
    init /= std::sqrt(minkowski(init, init));
    return manifold_descent(
        sample, w, init, options, hyper_log, hyper_exp, [](const Eigen::VectorXd& v) {
            return std::sqrt(std::max(-minkowski(v, v), 0.0));
        });
}

FrechetMeanResult affine_invariant_mean(const ObjectSample& sample, const Eigen::VectorXd& w,
                                        const FrechetMeanOptions& options) {
    const int d = sample.space.dim;
    Eigen::MatrixXd log_sum = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < sample.size(); ++i) {
        log_sum += w(i) * spd_log(sym_object(sample, i));
    }
    Eigen::MatrixXd m = spd_exp(log_sum);

    FrechetMeanResult result;
    result.converged = false;
    for (int it = 1; it <= options.max_iter; ++it) {
        result.iterations = it;
        const Eigen::MatrixXd root = spd_sqrt(m);
        const Eigen::MatrixXd inv_root = spd_inv_sqrt(m);
        Eigen::MatrixXd tangent = Eigen::MatrixXd::Zero(d, d);
        for (int i = 0; i < sample.size(); ++i) {
            const Eigen::MatrixXd inner = inv_root * sym_object(sample, i) * inv_root;
            tangent += w(i) * spd_log(0.5 * (inner + inner.transpose()));
        }
        const Eigen::MatrixXd next = root * spd_exp(tangent) * root;
        m = 0.5 * (next + next.transpose());
        if (tangent.norm() < options.tol) {
            result.converged = true;
            break;
        }
    }
    result.mean = flatten_matrix(m);
    result.objective = weighted_objective(sample, w, result.mean);
    return result;
}

FrechetMeanResult bures_wasserstein_mean(const ObjectSample& sample, const Eigen::VectorXd& w,
                                         const FrechetMeanOptions& options) {
    const int d = sample.space.dim;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < sample.size(); ++i) {
        m += w(i) * sym_object(sample, i);
    }

    FrechetMeanResult result;
    result.converged = false;
    for (int it = 1; it <= options.max_iter; ++it) {
        result.iterations = it;
        const Eigen::MatrixXd root = spd_sqrt(m);
        const Eigen::MatrixXd inv_root = spd_inv_sqrt(m);
        Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(d, d);
        for (int i = 0; i < sample.size(); ++i) {
            const Eigen::MatrixXd inner = root * sym_object(sample, i) * root;
            cross += w(i) * spd_sqrt(0.5 * (inner + inner.transpose()));
        }
        const Eigen::MatrixXd next = inv_root * cross * cross * inv_root;
        const Eigen::MatrixXd symmetric_next = 0.5 * (next + next.transpose());
        const double moved = (symmetric_next - m).norm();
        m = symmetric_next;
        if (moved < options.tol) {
            result.converged = true;
            break;
        }
    }
    result.mean = flatten_matrix(m);
    result.objective = weighted_objective(sample, w, result.mean);
    return result;
}

FrechetMeanResult fisher_rao_mean(const ObjectSample& sample, const Eigen::VectorXd& w) {
    Eigen::VectorXd root_mean = Eigen::VectorXd::Zero(sample.space.dim);
    for (int i = 0; i < sample.size(); ++i) {
        root_mean += w(i) * sample.objects.row(i).transpose().cwiseMax(0.0).cwiseSqrt();
    }
    Eigen::VectorXd density = root_mean.array().square();
    const Eigen::VectorXd quad = trapezoid_weights(sample.space.dim);
    const double mass = quad.dot(density);
    if (mass <= 0) {
        throw InvalidInputError("frechet_mean: fisher-rao mean has zero mass");
    }
    return closed_form_result(sample, w, density / mass);
}

FrechetMeanResult spd_flat_mean(const ObjectSample& sample, const Eigen::VectorXd& w) {
    const int d = sample.space.dim;
    switch (sample.space.metric) {
    case SpdMetric::Frobenius:
        return closed_form_result(sample, w, weighted_row_sum(sample, w));
    case SpdMetric::LogEuclidean: {
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);
        for (int i = 0; i < sample.size(); ++i) {
            acc += w(i) * spd_log(sym_object(sample, i));
        }
        return closed_form_result(sample, w, flatten_matrix(spd_exp(acc)));
    }
    case SpdMetric::PowerFrobenius: {
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);
        for (int i = 0; i < sample.size(); ++i) {
            acc += w(i) * spd_pow(sym_object(sample, i), sample.space.power);
        }
        return closed_form_result(sample, w,
                                  flatten_matrix(spd_pow(acc, 1.0 / sample.space.power)));
    }
    case SpdMetric::Cholesky: {
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);
        for (int i = 0; i < sample.size(); ++i) {
            acc += w(i) * cholesky_lower(sym_object(sample, i));
        }
        return closed_form_result(sample, w, flatten_matrix(acc * acc.transpose()));
    }
    case SpdMetric::AffineInvariant:
    case SpdMetric::BuresWasserstein:
        break;
    }
    throw InvalidInputError("frechet_mean: metric is not a flat SPD metric");
}

} // namespace

double weighted_objective(const ObjectSample& sample, const Eigen::VectorXd& weights,
                          const Eigen::VectorXd& point) {
    std::vector<double> terms(static_cast<size_t>(sample.size()));
    for (int i = 0; i < sample.size(); ++i) {
        const double d = distance(sample.space, point, sample.objects.row(i).transpose());
        terms[static_cast<size_t>(i)] = weights(i) * d * d;
    }
    return pairwise_sum(terms);
}

FrechetMeanResult weighted_frechet_mean(const ObjectSample& sample, const Eigen::VectorXd& weights,
                                        const FrechetMeanOptions& options) {
    const int n = sample.size();
    if (n < 1) {
        throw InvalidInputError("frechet_mean: empty sample");
    }
    if (sample.objects.cols() != sample.space.object_length()) {
        throw InvalidInputError("frechet_mean: object length does not match space");
    }
    if (!sample.objects.allFinite()) {
        throw InvalidInputError("frechet_mean: objects contain non-finite entries");
    }
    const Eigen::VectorXd w = normalized_weights(n, weights);

    switch (sample.space.family) {
    case SpaceKind::Family::Euclidean:
    case SpaceKind::Family::Wasserstein1D:
        return closed_form_result(sample, w, weighted_row_sum(sample, w));
    case SpaceKind::Family::Sphere:
        return sphere_mean(sample, w, options);
    case SpaceKind::Family::Hyperbolic2:
        return hyperboloid_mean(sample, w, options);
    case SpaceKind::Family::FisherRao:
        return fisher_rao_mean(sample, w);
    case SpaceKind::Family::GaussianBW:
        return bures_wasserstein_mean(sample, w, options);
    case SpaceKind::Family::Spd:
        switch (sample.space.metric) {
        case SpdMetric::AffineInvariant:
            return affine_invariant_mean(sample, w, options);
        case SpdMetric::BuresWasserstein:
            return bures_wasserstein_mean(sample, w, options);
        default:
            return spd_flat_mean(sample, w);
        }
    }
    throw InvalidInputError("frechet_mean: unknown space");
}

FrechetMeanResult frechet_mean(const ObjectSample& sample, const FrechetMeanOptions& options) {
    const int n = sample.size();
    if (n < 1) {
        throw InvalidInputError("frechet_mean: empty sample");
    }
    return weighted_frechet_mean(sample, Eigen::VectorXd::Constant(n, 1.0 / n), options);
}

RestrictedMeanResult frechet_mean_restricted(const DistanceMatrix& dist) {
    const int n = static_cast<int>(dist.rows());
    if (n < 1 || dist.cols() != n) {
        throw InvalidInputError("frechet_mean_restricted: matrix must be square and nonempty");
    }
    RestrictedMeanResult best;
    best.index = -1;
    std::vector<double> terms(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            terms[static_cast<size_t>(i)] = dist(k, i) * dist(k, i);
        }
        const double objective = pairwise_sum(terms) / n;
        if (best.index < 0 || objective < best.objective) {
            best.index = k;
            best.objective = objective;
        }
    }
    return best;
}

} // namespace metricstats

#include "metricstats/distance.hpp"

#include "metricstats/errors.hpp"
#include "metricstats/stats.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <string>
#include <vector>

namespace metricstats {

namespace {

constexpr double kClampSlack = 1e-9;
constexpr double kEigenFloor = 1e-12;

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& a) {
    return 0.5 * (a + a.transpose());
}

void require_positive_spectrum(const SymEigenResult& eig, const char* what) {
    const double top = std::max(1.0, std::abs(eig.values(0)));
    if (eig.values(eig.values.size() - 1) < -kClampSlack * top) {
        throw InvalidInputError(std::string(what) + ": matrix has a negative eigenvalue");
    }
}

template <typename F>
Eigen::MatrixXd apply_spectral(const SymEigenResult& eig, F f) {
    Eigen::VectorXd mapped(eig.values.size());
    for (int k = 0; k < mapped.size(); ++k) {
        mapped(k) = f(eig.values(k));
    }
    return eig.vectors * mapped.asDiagonal() * eig.vectors.transpose();
}

double clamp_floor(double x) {
    return x < kEigenFloor ? kEigenFloor : x;
}

// Per-object state shared by distance() and distance_matrix() so single-pair
// and matrix evaluations go through identical arithmetic.
struct Prepared {
    Eigen::VectorXd flat;
    Eigen::MatrixXd mat;
    Eigen::MatrixXd aux;
    double trace = 0.0;
};

Eigen::VectorXd flattened(const Eigen::MatrixXd& m) {
    const int d = static_cast<int>(m.rows());
    Eigen::VectorXd v(d * d);
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
            v(r * d + c) = m(r, c);
        }
    }
    return v;
}

Eigen::MatrixXd unflattened(const Eigen::VectorXd& v, int d) {
    Eigen::MatrixXd m(d, d);
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
            m(r, c) = v(r * d + c);
        }
    }
    return m;
}

Prepared prepare(const SpaceKind& space, const Eigen::VectorXd& x) {
    Prepared p;
    switch (space.family) {
    case SpaceKind::Family::Euclidean:
    case SpaceKind::Family::Sphere:
    case SpaceKind::Family::Hyperbolic2:
    case SpaceKind::Family::Wasserstein1D:
    case SpaceKind::Family::FisherRao:
        p.flat = x;
        return p;
    case SpaceKind::Family::GaussianBW: {
        p.mat = symmetrized(unflattened(x, space.dim));
        p.aux = spd_sqrt(p.mat);
        p.trace = p.mat.trace();
        return p;
    }
    case SpaceKind::Family::Spd:
        break;
    }
    const Eigen::MatrixXd m = symmetrized(unflattened(x, space.dim));
    switch (space.metric) {
    case SpdMetric::Frobenius:
        p.flat = x;
        break;
    case SpdMetric::LogEuclidean:
        p.flat = flattened(spd_log(m));
        break;
    case SpdMetric::PowerFrobenius:
        p.flat = flattened(spd_pow(m, space.power));
        break;
    case SpdMetric::Cholesky:
        p.flat = flattened(cholesky_lower(m));
        break;
    case SpdMetric::AffineInvariant:
        p.mat = m;
        p.aux = spd_inv_sqrt(m);
        break;
    case SpdMetric::BuresWasserstein:
        p.mat = m;
        p.aux = spd_sqrt(m);
        p.trace = m.trace();
        break;
    }
    return p;
}

double bures_pair(const Prepared& a, const Prepared& b) {
    const Eigen::MatrixXd inner = symmetrized(a.aux * b.mat * a.aux);
    const SymEigenResult eig = sym_eigen(inner);
    double cross = 0.0;
    for (int k = 0; k < eig.values.size(); ++k) {
        cross += std::sqrt(std::max(eig.values(k), 0.0));
    }
    const double squared = a.trace + b.trace - 2.0 * cross;
    return std::sqrt(std::max(squared, 0.0));
}

double pair_distance(const SpaceKind& space, const Prepared& a, const Prepared& b,
                     const Eigen::VectorXd& weights) {
    switch (space.family) {
    case SpaceKind::Family::Euclidean:
        return (a.flat - b.flat).norm();
    case SpaceKind::Family::Sphere: {
        const double dot = a.flat.dot(b.flat);
        if (dot > 1.0 + kClampSlack || dot < -1.0 - kClampSlack) {
            throw InvalidInputError("sphere distance: inner product outside [-1, 1]");
        }
        return std::acos(std::min(1.0, std::max(-1.0, dot)));
    }
    case SpaceKind::Family::Hyperbolic2: {
        const double m =
            a.flat(2) * b.flat(2) - a.flat(0) * b.flat(0) - a.flat(1) * b.flat(1);
        if (m < 1.0 - kClampSlack) {
            throw InvalidInputError("hyperbolic distance: Minkowski product below 1");
        }
        return std::acosh(std::max(1.0, m));
    }
    case SpaceKind::Family::Wasserstein1D: {
        const double squared =
            (weights.array() * (a.flat - b.flat).array().square()).sum();
        return std::sqrt(std::max(squared, 0.0));
    }
    case SpaceKind::Family::FisherRao: {
        const double affinity =
            (weights.array() *
             (a.flat.array().max(0.0) * b.flat.array().max(0.0)).sqrt())
                .sum();
        if (affinity > 1.0 + kClampSlack) {
            throw InvalidInputError("fisher-rao distance: affinity exceeds 1");
        }
        return std::acos(std::min(1.0, affinity));
    }
    case SpaceKind::Family::GaussianBW:
        return bures_pair(a, b);
    case SpaceKind::Family::Spd:
        break;
    }
    switch (space.metric) {
    case SpdMetric::Frobenius:
    case SpdMetric::LogEuclidean:
    case SpdMetric::Cholesky:
        return (a.flat - b.flat).norm();
    case SpdMetric::PowerFrobenius:
        return (a.flat - b.flat).norm() / space.power;
    case SpdMetric::AffineInvariant: {
        const Eigen::MatrixXd inner = symmetrized(a.aux * b.mat * a.aux);
        const SymEigenResult eig = sym_eigen(inner);
        require_positive_spectrum(eig, "affine-invariant distance");
        double squared = 0.0;
        for (int k = 0; k < eig.values.size(); ++k) {
            const double lg = std::log(clamp_floor(eig.values(k)));
            squared += lg * lg;
        }
        return std::sqrt(squared);
    }
    case SpdMetric::BuresWasserstein:
        return bures_pair(a, b);
    }
    throw InvalidInputError("distance: unknown space");
}

Eigen::VectorXd grid_weights(const SpaceKind& space) {
    if (space.family == SpaceKind::Family::Wasserstein1D ||
        space.family == SpaceKind::Family::FisherRao) {
        return trapezoid_weights(space.dim);
    }
    return Eigen::VectorXd();
}

} // namespace

Eigen::MatrixXd spd_sqrt(const Eigen::MatrixXd& a) {
    const SymEigenResult eig = sym_eigen(a);
    require_positive_spectrum(eig, "spd_sqrt");
    return apply_spectral(eig, [](double x) { return std::sqrt(clamp_floor(x)); });
}

Eigen::MatrixXd spd_inv_sqrt(const Eigen::MatrixXd& a) {
    const SymEigenResult eig = sym_eigen(a);
    require_positive_spectrum(eig, "spd_inv_sqrt");
    return apply_spectral(eig, [](double x) { return 1.0 / std::sqrt(clamp_floor(x)); });
}

Eigen::MatrixXd spd_log(const Eigen::MatrixXd& a) {
    const SymEigenResult eig = sym_eigen(a);
    require_positive_spectrum(eig, "spd_log");
    return apply_spectral(eig, [](double x) { return std::log(clamp_floor(x)); });
}

Eigen::MatrixXd spd_exp(const Eigen::MatrixXd& a) {
    const SymEigenResult eig = sym_eigen(a);
    return apply_spectral(eig, [](double x) { return std::exp(x); });
}

Eigen::MatrixXd spd_pow(const Eigen::MatrixXd& a, double p) {
    const SymEigenResult eig = sym_eigen(a);
    require_positive_spectrum(eig, "spd_pow");
    return apply_spectral(eig, [p](double x) { return std::pow(clamp_floor(x), p); });
}

Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& a) {
    Eigen::LLT<Eigen::MatrixXd> llt(symmetrized(a));
    if (llt.info() != Eigen::Success) {
        throw InvalidInputError("cholesky_lower: matrix is not positive definite");
    }
    return llt.matrixL();
}

double distance(const SpaceKind& space, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const int len = space.object_length();
    if (x.size() != len || y.size() != len) {
        throw InvalidInputError("distance: object length does not match space " + space.name());
    }
    if (!x.allFinite() || !y.allFinite()) {
        throw InvalidInputError("distance: objects contain non-finite entries");
    }
    const Eigen::VectorXd weights = grid_weights(space);
    return pair_distance(space, prepare(space, x), prepare(space, y), weights);
}

DistanceMatrix distance_matrix(const ObjectSample& sample) {
    validate_sample(sample);
    const int n = sample.size();
    const Eigen::VectorXd weights = grid_weights(sample.space);

    std::vector<Prepared> prep;
    prep.reserve(n);
    for (int i = 0; i < n; ++i) {
        try {
            prep.push_back(prepare(sample.space, sample.objects.row(i)));
        } catch (const Error& e) {
            throw InvalidInputError("distance_matrix: object " + std::to_string(i) + ": " +
                                    e.what());
        }
    }

    DistanceMatrix values = DistanceMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double d = 0.0;
            try {
                d = pair_distance(sample.space, prep[i], prep[j], weights);
            } catch (const Error& e) {
                throw InvalidInputError("distance_matrix: pair (" + std::to_string(i) + ", " +
                                        std::to_string(j) + "): " + e.what());
            }
            values(i, j) = d;
            values(j, i) = d;
        }
    }
    return values;
}

} // namespace metricstats

#include "metricstats/spaces.hpp"

#include "metricstats/errors.hpp"
#include "metricstats/stats.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace metricstats {

namespace {

const char* family_label(SpaceKind::Family family) {
    switch (family) {
    case SpaceKind::Family::Euclidean:
        return "euclidean";
    case SpaceKind::Family::Sphere:
        return "sphere";
    case SpaceKind::Family::Hyperbolic2:
        return "hyperbolic2";
    case SpaceKind::Family::Spd:
        return "spd";
    case SpaceKind::Family::Wasserstein1D:
        return "w1d";
    case SpaceKind::Family::GaussianBW:
        return "gaussbw";
    case SpaceKind::Family::FisherRao:
        return "fisherrao";
    }
    return "?";
}

const char* spd_metric_label(SpdMetric metric) {
    switch (metric) {
    case SpdMetric::Frobenius:
        return "frobenius";
    case SpdMetric::LogEuclidean:
        return "log";
    case SpdMetric::PowerFrobenius:
        return "power";
    case SpdMetric::Cholesky:
        return "cholesky";
    case SpdMetric::AffineInvariant:
        return "affine";
    case SpdMetric::BuresWasserstein:
        return "bures";
    }
    return "?";
}

std::vector<std::string> split_colon(const std::string& text) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(text);
    while (std::getline(in, part, ':')) {
        parts.push_back(part);
    }
    return parts;
}

int parse_count(const std::string& text, int minimum, const std::string& what) {
    int value = 0;
    try {
        value = std::stoi(text);
    } catch (const std::exception&) {
        throw InvalidInputError("space: cannot parse " + what + " from '" + text + "'");
    }
    if (value < minimum) {
        throw InvalidInputError("space: " + what + " must be >= " + std::to_string(minimum));
    }
    return value;
}

} // namespace

SpaceKind SpaceKind::euclidean(int dim) {
    if (dim < 1) {
        throw InvalidInputError("euclidean: dim must be >= 1");
    }
    SpaceKind s;
    s.family = Family::Euclidean;
    s.dim = dim;
    return s;
}

SpaceKind SpaceKind::sphere(int dim) {
    if (dim < 1) {
        throw InvalidInputError("sphere: dim must be >= 1");
    }
    SpaceKind s;
    s.family = Family::Sphere;
    s.dim = dim;
    return s;
}

SpaceKind SpaceKind::hyperbolic2() {
    SpaceKind s;
    s.family = Family::Hyperbolic2;
    s.dim = 3;
    return s;
}

SpaceKind SpaceKind::spd(int dim, SpdMetric metric, double power) {
    if (dim < 1) {
        throw InvalidInputError("spd: dim must be >= 1");
    }
    if (metric == SpdMetric::PowerFrobenius && !(power > 0)) {
        throw InvalidInputError("spd: power exponent must be positive");
    }
    SpaceKind s;
    s.family = Family::Spd;
    s.dim = dim;
    s.metric = metric;
    s.power = power;
    return s;
}

SpaceKind SpaceKind::wasserstein1d(int grid_size) {
    if (grid_size < 2) {
        throw InvalidInputError("w1d: grid size must be >= 2");
    }
    SpaceKind s;
    s.family = Family::Wasserstein1D;
    s.dim = grid_size;
    return s;
}

SpaceKind SpaceKind::gaussian_bw(int dim) {
    if (dim < 1) {
        throw InvalidInputError("gaussbw: dim must be >= 1");
    }
    SpaceKind s;
    s.family = Family::GaussianBW;
    s.dim = dim;
    return s;
}

SpaceKind SpaceKind::fisher_rao(int grid_size) {
    if (grid_size < 2) {
        throw InvalidInputError("fisherrao: grid size must be >= 2");
    }
    SpaceKind s;
    s.family = Family::FisherRao;
    s.dim = grid_size;
    return s;
}

int SpaceKind::object_length() const {
    switch (family) {
    case Family::Euclidean:
    case Family::Sphere:
    case Family::Hyperbolic2:
    case Family::Wasserstein1D:
    case Family::FisherRao:
        return dim;
    case Family::Spd:
    case Family::GaussianBW:
        return dim * dim;
    }
    return dim;
}

std::string SpaceKind::name() const {
    std::ostringstream out;
    out << family_label(family);
    if (family == Family::Hyperbolic2) {
        return out.str();
    }
    out << ':' << dim;
    if (family == Family::Spd) {
        out << ':' << spd_metric_label(metric);
        if (metric == SpdMetric::PowerFrobenius) {
            out << ':' << power;
        }
    }
    return out.str();
}

SpaceKind SpaceKind::parse(const std::string& text) {
    const std::vector<std::string> parts = split_colon(text);
    if (parts.empty()) {
        throw InvalidInputError("space: empty descriptor");
    }
    const std::string& head = parts[0];
    if (head == "hyperbolic2") {
        if (parts.size() != 1) {
            throw InvalidInputError("space: hyperbolic2 takes no parameters");
        }
        return hyperbolic2();
    }
    if (head == "euclidean" || head == "sphere" || head == "w1d" || head == "gaussbw" ||
        head == "fisherrao") {
        if (parts.size() != 2) {
            throw InvalidInputError("space: '" + head + "' needs exactly one parameter, e.g. " +
                                    head + ":3");
        }
        const int dim = parse_count(parts[1], head == "w1d" || head == "fisherrao" ? 2 : 1,
                                    "dimension/grid size");
        if (head == "euclidean") {
            return euclidean(dim);
        }
        if (head == "sphere") {
            return sphere(dim);
        }
        if (head == "w1d") {
            return wasserstein1d(dim);
        }
        if (head == "gaussbw") {
            return gaussian_bw(dim);
        }
        return fisher_rao(dim);
    }
    if (head == "spd") {
        if (parts.size() < 3 || parts.size() > 4) {
            throw InvalidInputError("space: spd descriptor is spd:<dim>:<metric>[:power]");
        }
        const int dim = parse_count(parts[1], 1, "dimension");
        const std::string& metric = parts[2];
        if (metric == "power") {
            double alpha = 0.5;
            if (parts.size() == 4) {
                try {
                    alpha = std::stod(parts[3]);
                } catch (const std::exception&) {
                    throw InvalidInputError("space: cannot parse power exponent '" + parts[3] + "'");
                }
            }
            return spd(dim, SpdMetric::PowerFrobenius, alpha);
        }
        if (parts.size() == 4) {
            throw InvalidInputError("space: only spd:<dim>:power takes an exponent");
        }
        if (metric == "frobenius") {
            return spd(dim, SpdMetric::Frobenius);
        }
        if (metric == "log") {
            return spd(dim, SpdMetric::LogEuclidean);
        }
        if (metric == "cholesky") {
            return spd(dim, SpdMetric::Cholesky);
        }
        if (metric == "affine") {
            return spd(dim, SpdMetric::AffineInvariant);
        }
        if (metric == "bures") {
            return spd(dim, SpdMetric::BuresWasserstein);
        }
        throw InvalidInputError("space: unknown spd metric '" + metric + "'");
    }
    throw InvalidInputError("space: unknown family '" + head + "'");
}

bool SpaceKind::operator==(const SpaceKind& other) const {
    if (family != other.family || dim != other.dim) {
        return false;
    }
    if (family != Family::Spd) {
        return true;
    }
    if (metric != other.metric) {
        return false;
    }
    return metric != SpdMetric::PowerFrobenius || power == other.power;
}

Eigen::MatrixXd ObjectSample::object_as_matrix(int i) const {
    const int d = space.dim;
    if (space.object_length() != d * d) {
        throw InvalidInputError("object_as_matrix: space does not hold matrices");
    }
    Eigen::MatrixXd m(d, d);
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
            m(r, c) = objects(i, r * d + c);
        }
    }
    return m;
}

Eigen::VectorXd trapezoid_weights(int grid_size) {
    if (grid_size < 2) {
        throw InvalidInputError("trapezoid_weights: grid size must be >= 2");
    }
    const double h = 1.0 / (grid_size - 1);
    Eigen::VectorXd w = Eigen::VectorXd::Constant(grid_size, h);
    w(0) = 0.5 * h;
    w(grid_size - 1) = 0.5 * h;
    return w;
}

void validate_sample(const ObjectSample& sample) {
    const int n = sample.size();
    if (n < 2) {
        throw InvalidInputError("sample: need at least 2 objects");
    }
    if (sample.objects.cols() != sample.space.object_length()) {
        throw InvalidInputError("sample: object length " + std::to_string(sample.objects.cols()) +
                                " does not match space " + sample.space.name());
    }
    if (!sample.objects.allFinite()) {
        throw InvalidInputError("sample: objects contain non-finite entries");
    }

    const SpaceKind& space = sample.space;
    switch (space.family) {
    case SpaceKind::Family::Euclidean:
        break;
    case SpaceKind::Family::Sphere:
        for (int i = 0; i < n; ++i) {
            const double norm = sample.objects.row(i).norm();
            if (std::abs(norm - 1.0) > 1e-9) {
                throw InvalidInputError("sample: sphere object " + std::to_string(i) +
                                        " has norm " + std::to_string(norm));
            }
        }
        break;
    case SpaceKind::Family::Hyperbolic2:
        for (int i = 0; i < n; ++i) {
            const double x = sample.objects(i, 0);
            const double y = sample.objects(i, 1);
            const double z = sample.objects(i, 2);
            if (z <= 0 || std::abs(z * z - x * x - y * y - 1.0) > 1e-9 * std::max(1.0, z * z)) {
                throw InvalidInputError("sample: object " + std::to_string(i) +
                                        " is not on the hyperboloid z^2 = 1 + x^2 + y^2");
            }
        }
        break;
    case SpaceKind::Family::Spd:
    case SpaceKind::Family::GaussianBW:
        for (int i = 0; i < n; ++i) {
            const Eigen::MatrixXd m = sample.object_as_matrix(i);
            const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
            if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
                throw InvalidInputError("sample: matrix object " + std::to_string(i) +
                                        " is not symmetric");
            }
            const SymEigenResult eig = sym_eigen(m);
            if (eig.values(eig.values.size() - 1) <= 1e-12) {
                throw InvalidInputError("sample: matrix object " + std::to_string(i) +
                                        " is not positive definite");
            }
        }
        break;
    case SpaceKind::Family::Wasserstein1D:
        for (int i = 0; i < n; ++i) {
            const double scale = std::max(1.0, sample.objects.row(i).cwiseAbs().maxCoeff());
            for (int k = 0; k + 1 < space.dim; ++k) {
                if (sample.objects(i, k + 1) < sample.objects(i, k) - 1e-12 * scale) {
                    throw InvalidInputError("sample: quantile grid " + std::to_string(i) +
                                            " decreases at index " + std::to_string(k));
                }
            }
        }
        break;
    case SpaceKind::Family::FisherRao: {
        const Eigen::VectorXd w = trapezoid_weights(space.dim);
        for (int i = 0; i < n; ++i) {
            if (sample.objects.row(i).minCoeff() < -1e-12) {
                throw InvalidInputError("sample: density " + std::to_string(i) +
                                        " has negative entries");
            }
            const double mass = sample.objects.row(i) * w;
            if (std::abs(mass - 1.0) > 1e-6) {
                throw InvalidInputError("sample: density " + std::to_string(i) +
                                        " integrates to " + std::to_string(mass));
            }
        }
        break;
    }
    }
}

} // namespace metricstats

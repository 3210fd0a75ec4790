#pragma once

#include <Eigen/Dense>

#include <string>

namespace metricstats {

enum class SpdMetric {
    Frobenius,
    LogEuclidean,
    PowerFrobenius,
    Cholesky,
    AffineInvariant,
    BuresWasserstein,
};

// Tagged description of the metric space a sample lives in.
//
// dim is the vector dimension (Euclidean, Sphere), the matrix side length
// (Spd, GaussianBW), or the grid size (Wasserstein1D quantile grids,
// FisherRao density grids). Hyperbolic2 is the 2-D hyperboloid
// {(x, y, z) : z^2 = 1 + x^2 + y^2, z > 0} and always has dim 3 storage.
struct SpaceKind {
    enum class Family {
        Euclidean,
        Sphere,
        Hyperbolic2,
        Spd,
        Wasserstein1D,
        GaussianBW,
        FisherRao,
    };

    Family family = Family::Euclidean;
    int dim = 1;
    SpdMetric metric = SpdMetric::Frobenius;
    double power = 0.5; // exponent for SpdMetric::PowerFrobenius

    static SpaceKind euclidean(int dim);
    static SpaceKind sphere(int dim);
    static SpaceKind hyperbolic2();
    static SpaceKind spd(int dim, SpdMetric metric, double power = 0.5);
    static SpaceKind wasserstein1d(int grid_size = 1001);
    static SpaceKind gaussian_bw(int dim);
    static SpaceKind fisher_rao(int grid_size);

    // Flat storage length of one object in this space.
    int object_length() const;

    // Parseable name, e.g. "euclidean:3", "spd:3:affine", "spd:2:power:0.5".
    std::string name() const;
    static SpaceKind parse(const std::string& text);

    bool operator==(const SpaceKind& other) const;
};

// Homogeneous sample of metric objects. Each row of `objects` is one
// object flattened to object_length() reals; SPD matrices are stored
// row-major (indistinguishable from column-major by symmetry).
struct ObjectSample {
    SpaceKind space;
    Eigen::MatrixXd objects;

    int size() const { return static_cast<int>(objects.rows()); }

    // View of object i as a dim x dim matrix (Spd / GaussianBW spaces).
    Eigen::MatrixXd object_as_matrix(int i) const;
};

// Checks the per-space invariants (unit norms within 1e-9 for spheres,
// symmetry within 1e-9 and smallest eigenvalue > 1e-12 for SPD matrices,
// nondecreasing quantile grids, densities integrating to 1, hyperboloid
// membership). Throws InvalidInputError naming the first offending object.
void validate_sample(const ObjectSample& sample);

// Quadrature weights shared by Wasserstein1D and FisherRao grids:
// trapezoid rule on the uniform grid over [0, 1] with m nodes
// (h/2, h, ..., h, h/2), h = 1/(m-1); weights sum to 1.
Eigen::VectorXd trapezoid_weights(int grid_size);

} // namespace metricstats

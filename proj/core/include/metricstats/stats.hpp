#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>

namespace metricstats {

// Seeded random stream: xoshiro256++ (Blackman & Vigna) with splitmix64
// seeding. Stream derivation is a pure function of (seed, stream id):
// the splitmix64 state is initialized to mix(seed) XOR mix(stream), where
// mix(v) is one splitmix64 output step applied to v, and the four xoshiro
// state words are the next four splitmix64 outputs. Two streams with the
// same seed but different ids are statistically independent for simulation
// purposes. Instances are single-owner; split new streams instead of
// sharing one across workers.
class RngStream {
public:
    RngStream() : RngStream(0, 0) {}
    RngStream(std::uint64_t seed, std::uint64_t stream);

    // Derive an independent child stream; pure function of (this stream's
    // seed material, id).
    RngStream split(std::uint64_t id) const;

    std::uint64_t next_u64();

    // Uniform on [0, 1) with 53 random mantissa bits.
    double next_double();
    double uniform(double a, double b);

    // Unbiased integer in [0, n); rejection sampling on the top range.
    std::uint64_t uniform_index(std::uint64_t n);

    // Standard normal via the Marsaglia polar method (no trig calls).
    double next_normal();

    // Standard normal conditioned on |value| <= bound, by rejection.
    double next_truncated_normal(double bound);

private:
    std::uint64_t state_[4];
    std::uint64_t seed_material_;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

// One splitmix64 output step applied to v; the avalanche mixer used for
// seed and replicate derivation.
std::uint64_t mix64(std::uint64_t v);

// Standard normal distribution function, accurate to better than 1e-12
// through the complementary error function; saturates to 0/1 for large
// |x| without producing NaN.
double normal_cdf(double x);

// Inverse of normal_cdf on p in (0, 1): Acklam's rational approximation
// refined by one Halley step against erfc, giving near machine precision.
double normal_quantile(double p);

// Eigendecomposition of a symmetric matrix, eigenvalues in descending
// order with orthonormal eigenvectors as columns. Cyclic Jacobi sweeps;
// intended for the small (dim <= 16) matrices used throughout (2x2 and
// 3x3 in practice). The input is symmetrized as (A + A^T)/2 first.
struct SymEigenResult {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};
SymEigenResult sym_eigen(const Eigen::MatrixXd& a);

// Pairwise (tree) summation: deterministic reduction order independent of
// chunking, used wherever estimator sums must be reproducible.
double pairwise_sum(std::span<const double> values);

} // namespace metricstats

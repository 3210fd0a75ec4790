#include "metricstats/stats.hpp"

#include "metricstats/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace metricstats {

namespace {

// One splitmix64 step: advances *state and returns the mixed output.
std::uint64_t splitmix64_next(std::uint64_t* state) {
    std::uint64_t z = (*state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t splitmix64_mix(std::uint64_t v) {
    return splitmix64_next(&v);
}

std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

} // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) {
    seed_material_ = splitmix64_mix(seed) ^ splitmix64_mix(stream);
    std::uint64_t s = seed_material_;
    for (auto& word : state_) {
        word = splitmix64_next(&s);
    }
}

RngStream RngStream::split(std::uint64_t id) const {
    return RngStream(seed_material_, id);
}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RngStream::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double a, double b) {
    return a + (b - a) * next_double();
}

std::uint64_t RngStream::uniform_index(std::uint64_t n) {
    if (n == 0) {
        throw InvalidInputError("uniform_index: n must be positive");
    }
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t draw;
    do {
        draw = next_u64();
    } while (draw >= limit);
    return draw % n;
}

double RngStream::next_normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    double u, v, s;
    do {
        u = 2.0 * next_double() - 1.0;
        v = 2.0 * next_double() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    cached_normal_ = v * f;
    has_cached_normal_ = true;
    return u * f;
}

double RngStream::next_truncated_normal(double bound) {
    if (!(bound > 0)) {
        throw InvalidInputError("next_truncated_normal: bound must be positive");
    }
    double z;
    do {
        z = next_normal();
    } while (std::abs(z) > bound);
    return z;
}

std::uint64_t mix64(std::uint64_t v) {
    return splitmix64_mix(v);
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw InvalidInputError("normal_quantile: p must lie in (0, 1)");
    }

    // Acklam's rational approximation, three branches.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // One Halley refinement against the erfc-based CDF.
    const double two_pi = 6.283185307179586476925286766559;
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(two_pi) * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

SymEigenResult sym_eigen(const Eigen::MatrixXd& input) {
    if (input.rows() != input.cols() || input.rows() == 0) {
        throw InvalidInputError("sym_eigen: matrix must be square and non-empty");
    }
    const Eigen::Index n = input.rows();
    Eigen::MatrixXd a = 0.5 * (input + input.transpose());
    Eigen::MatrixXd q = Eigen::MatrixXd::Identity(n, n);

    const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
    const double stop = 1e-15 * scale;
    const int max_sweeps = 64;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = i + 1; j < n; ++j) {
                off = std::max(off, std::abs(a(i, j)));
            }
        }
        if (off <= stop) {
            break;
        }
        if (sweep + 1 == max_sweeps) {
            throw Error("sym_eigen: Jacobi sweeps did not converge");
        }
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index r = p + 1; r < n; ++r) {
                const double apr = a(p, r);
                if (std::abs(apr) <= stop * 1e-2) {
                    continue;
                }
                const double theta = (a(r, r) - a(p, p)) / (2.0 * apr);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double cos_v = 1.0 / std::sqrt(t * t + 1.0);
                const double sin_v = t * cos_v;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akr = a(k, r);
                    a(k, p) = cos_v * akp - sin_v * akr;
                    a(k, r) = sin_v * akp + cos_v * akr;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double ark = a(r, k);
                    a(p, k) = cos_v * apk - sin_v * ark;
                    a(r, k) = sin_v * apk + cos_v * ark;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double qkp = q(k, p);
                    const double qkr = q(k, r);
                    q(k, p) = cos_v * qkp - sin_v * qkr;
                    q(k, r) = sin_v * qkp + cos_v * qkr;
                }
            }
        }
    }

    SymEigenResult result;
    result.values.resize(n);
    result.vectors.resize(n, n);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        order[static_cast<std::size_t>(i)] = i;
    }
    std::sort(order.begin(), order.end(),
              [&a](Eigen::Index lhs, Eigen::Index rhs) { return a(lhs, lhs) > a(rhs, rhs); });
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index src = order[static_cast<std::size_t>(i)];
        result.values(i) = a(src, src);
        result.vectors.col(i) = q.col(src);
    }
    return result;
}

double pairwise_sum(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n == 0) {
        return 0.0;
    }
    if (n <= 8) {
        double total = 0.0;
        for (double v : values) {
            total += v;
        }
        return total;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

} // namespace metricstats

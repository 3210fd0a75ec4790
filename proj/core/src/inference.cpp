#include "metricstats/inference.hpp"

#include "metricstats/errors.hpp"
#include "metricstats/stats.hpp"

#include <cmath>
#include <limits>

namespace metricstats {

namespace {

constexpr double kSingularRatio = 1e-12;

void require_positive_vm(double v_m) {
    if (!(v_m > 0)) {
        throw DegenerateStatisticsError(
            "metric variance is not positive; the sample violates assumption (M2)/(A4)");
    }
}

Eigen::Vector2d rho_gradient(double v_m, double v_f) {
    return Eigen::Vector2d(-v_f / (v_m * v_m), 1.0 / v_m);
}

Ellipse make_ellipse(const DispersionEstimate& est, double alpha) {
    Ellipse ellipse;
    ellipse.center = Eigen::Vector2d(est.v_m, est.v_f);
    ellipse.shape = est.sigma / est.n;
    ellipse.radius2 = chi2_2_quantile(1.0 - alpha);
    const SymEigenResult eig = sym_eigen(ellipse.shape);
    const double top = eig.values(0);
    ellipse.singular = !(top > 0) || eig.values(1) <= kSingularRatio * top;
    return ellipse;
}

} // namespace

double rho_hat(double v_m, double v_f) {
    require_positive_vm(v_m);
    return v_f / v_m - 1.0;
}

double rho_prime_hat(double v_m, double v_f) {
    require_positive_vm(v_m);
    if (!(v_f > 0)) {
        throw DegenerateStatisticsError(
            "frechet variance is not positive; the sample violates assumption (M2)/(A4)");
    }
    return 1.0 / v_m - 1.0 / v_f;
}

double sigma_for_rho(const Eigen::Matrix2d& sigma, double v_m, double v_f) {
    require_positive_vm(v_m);
    const Eigen::Vector2d a = rho_gradient(v_m, v_f);
    const double quad = a.dot(sigma * a);
    return std::sqrt(std::max(0.0, quad));
}

CurvatureTestResult curvature_test(const DispersionEstimate& est, double alpha,
                                   Alternative alternative) {
    if (est.n < 2) {
        throw InvalidInputError("curvature_test: need n >= 2");
    }
    if (!(alpha > 0 && alpha < 1)) {
        throw InvalidInputError("curvature_test: alpha must lie in (0, 1)");
    }
    require_positive_vm(est.v_m);
    if (!(est.v_f > 0)) {
        throw DegenerateStatisticsError(
            "frechet variance is not positive; the sample violates assumption (M2)/(A4)");
    }

    CurvatureTestResult result;
    result.alternative = alternative;
    result.alpha = alpha;
    result.rho_hat = rho_hat(est.v_m, est.v_f);
    result.rho_prime_hat = rho_prime_hat(est.v_m, est.v_f);

    // The delta-method variance can cancel to zero (up to roundoff) when
    // sigma is rank-deficient along the gradient direction, which is the
    // signature of a flat sample; treat anything at roundoff scale as zero.
    const Eigen::Vector2d a = rho_gradient(est.v_m, est.v_f);
    const double quad = a.dot(est.sigma * a);
    const double magnitude = std::abs(a(0) * a(0) * est.sigma(0, 0)) +
                             std::abs(2.0 * a(0) * a(1) * est.sigma(0, 1)) +
                             std::abs(a(1) * a(1) * est.sigma(1, 1));
    if (quad <= 64.0 * std::numeric_limits<double>::epsilon() * magnitude) {
        throw DegenerateStatisticsError(
            "variance of the curvature statistic is zero at roundoff scale; "
            "assumption (M2)/(A4) fails for this sample");
    }
    result.sigma_hat = std::sqrt(quad);

    const double root_n = std::sqrt(static_cast<double>(est.n));
    result.t_n = root_n * result.rho_hat / result.sigma_hat;

    const double z_two = normal_quantile(1.0 - alpha / 2.0);
    const double half_width = z_two * result.sigma_hat / root_n;
    result.ci_lower = result.rho_hat - half_width;
    result.ci_upper = result.rho_hat + half_width;

    switch (alternative) {
    case Alternative::TwoSided:
        result.p_value = 2.0 * (1.0 - normal_cdf(std::abs(result.t_n)));
        // Rejection is read off the interval so the test/CI duality is exact.
        result.reject = result.ci_lower > 0.0 || result.ci_upper < 0.0;
        break;
    case Alternative::Positive:
        result.p_value = 1.0 - normal_cdf(result.t_n);
        result.reject = result.t_n > normal_quantile(1.0 - alpha);
        break;
    case Alternative::Negative:
        result.p_value = normal_cdf(result.t_n);
        result.reject = result.t_n < -normal_quantile(1.0 - alpha);
        break;
    }
    result.p_value = std::min(1.0, std::max(0.0, result.p_value));

    result.ellipse = make_ellipse(est, alpha);
    return result;
}

bool region_contains(const Ellipse& ellipse, const Eigen::Vector2d& eta) {
    const Eigen::Vector2d delta = ellipse.center - eta;
    const SymEigenResult eig = sym_eigen(ellipse.shape);
    const double cut = kSingularRatio * std::max(eig.values(0), 0.0);
    double quad = 0.0;
    for (int k = 0; k < 2; ++k) {
        if (eig.values(k) > cut && eig.values(k) > 0) {
            const double coef = eig.vectors.col(k).dot(delta);
            quad += coef * coef / eig.values(k);
        }
    }
    return quad <= ellipse.radius2 * (1.0 + 1e-9);
}

std::vector<Eigen::Vector2d> region_boundary(const Ellipse& ellipse, int k) {
    if (k < 3) {
        throw InvalidInputError("region_boundary: need at least 3 points");
    }
    const SymEigenResult eig = sym_eigen(ellipse.shape);
    const double r = std::sqrt(std::max(ellipse.radius2, 0.0));
    const double s0 = std::sqrt(std::max(eig.values(0), 0.0));
    const double s1 = std::sqrt(std::max(eig.values(1), 0.0));

    std::vector<Eigen::Vector2d> points;
    points.reserve(static_cast<size_t>(k));
    const double two_pi = 6.283185307179586476925286766559;
    for (int j = 0; j < k; ++j) {
        const double phi = two_pi * j / k;
        const Eigen::Vector2d offset = r * (s0 * std::cos(phi) * eig.vectors.col(0) +
                                            s1 * std::sin(phi) * eig.vectors.col(1));
        points.push_back(ellipse.center + offset);
    }
    return points;
}

double chi2_2_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw InvalidInputError("chi2_2_quantile: p must lie in (0, 1)");
    }
    return -2.0 * std::log1p(-p);
}

} // namespace metricstats

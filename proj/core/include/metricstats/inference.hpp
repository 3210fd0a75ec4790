#pragma once

#include "metricstats/dispersion.hpp"

#include <Eigen/Core>

#include <vector>

namespace metricstats {

enum class Alternative { TwoSided, Positive, Negative };

// Joint confidence region for (v_m, v_f): an ellipse centered at the point
// estimate with shape sigma/n and squared radius chi2_2_quantile(1 - alpha).
// Membership uses the closed region (quadratic form <= radius2). A singular
// shape switches the quadratic form to the pseudo-inverse and sets the flag.
struct Ellipse {
    Eigen::Vector2d center = Eigen::Vector2d::Zero();
    Eigen::Matrix2d shape = Eigen::Matrix2d::Zero();
    double radius2 = 0.0;
    bool singular = false;
};

struct CurvatureTestResult {
    double rho_hat = 0.0;
    double rho_prime_hat = 0.0;
    double sigma_hat = 0.0;
    double t_n = 0.0;
    double p_value = 1.0;
    Alternative alternative = Alternative::TwoSided;
    double ci_lower = 0.0;
    double ci_upper = 0.0;
    double alpha = 0.05;
    bool reject = false;
    Ellipse ellipse;
};

// Curvature statistic v_f / v_m - 1.
double rho_hat(double v_m, double v_f);

// Alternative curvature statistic 1/v_m - 1/v_f.
double rho_prime_hat(double v_m, double v_f);

// Delta-method standard deviation for rho: sqrt(max(0, a^T sigma a)) with
// a = (-v_f/v_m^2, 1/v_m).
double sigma_for_rho(const Eigen::Matrix2d& sigma, double v_m, double v_f);

// Normal test of H0: rho = 0 with t_n = sqrt(n) rho / sigma, the matching
// one- or two-sided decision, the two-sided confidence interval for rho,
// and the joint confidence ellipse for (v_m, v_f). Throws a degenerate
// statistics error when sigma vanishes (assumption (M2)/(A4) violated).
CurvatureTestResult curvature_test(const DispersionEstimate& est, double alpha,
                                   Alternative alternative);

bool region_contains(const Ellipse& ellipse, const Eigen::Vector2d& eta);

// k >= 3 points tracing the ellipse boundary, for plotting.
std::vector<Eigen::Vector2d> region_boundary(const Ellipse& ellipse, int k);

// Chi-square quantile with 2 degrees of freedom: -2 ln(1 - p).
double chi2_2_quantile(double p);

} // namespace metricstats

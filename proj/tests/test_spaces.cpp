#include "metricstats/distance.hpp"
#include "metricstats/errors.hpp"
#include "metricstats/spaces.hpp"
#include "metricstats/stats.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

using namespace metricstats;

namespace {

Eigen::VectorXd vec3(double x, double y, double z) {
    Eigen::VectorXd v(3);
    v << x, y, z;
    return v;
}

Eigen::VectorXd flat2x2(double a, double b, double c, double d) {
    Eigen::VectorXd v(4);
    v << a, b, c, d;
    return v;
}

} // namespace

TEST_CASE("space descriptors parse and print themselves", "[spaces]") {
    const std::string names[] = {"euclidean:3", "sphere:4",       "hyperbolic2",
                                 "spd:2:frobenius", "spd:3:log",  "spd:2:cholesky",
                                 "spd:2:affine",    "spd:2:bures", "spd:2:power:0.25",
                                 "w1d:101",         "gaussbw:2",   "fisherrao:51"};
    for (const std::string& name : names) {
        const SpaceKind space = SpaceKind::parse(name);
        CHECK(space.name() == name);
        CHECK(SpaceKind::parse(space.name()) == space);
    }
}

TEST_CASE("space descriptor errors name the problem", "[spaces]") {
    CHECK_THROWS_AS(SpaceKind::parse("banach:3"), InvalidInputError);
    CHECK_THROWS_AS(SpaceKind::parse("euclidean:0"), InvalidInputError);
    CHECK_THROWS_AS(SpaceKind::parse("spd:2"), InvalidInputError);
    CHECK_THROWS_AS(SpaceKind::parse("spd:2:nope"), InvalidInputError);
    CHECK_THROWS_AS(SpaceKind::parse("spd:2:frobenius:2"), InvalidInputError);
    CHECK_THROWS_AS(SpaceKind::parse("spd:2:power:-1"), InvalidInputError);
}

TEST_CASE("object_length reflects flat storage", "[spaces]") {
    CHECK(SpaceKind::euclidean(5).object_length() == 5);
    CHECK(SpaceKind::sphere(3).object_length() == 3);
    CHECK(SpaceKind::hyperbolic2().object_length() == 3);
    CHECK(SpaceKind::spd(3, SpdMetric::Frobenius).object_length() == 9);
    CHECK(SpaceKind::gaussian_bw(2).object_length() == 4);
    CHECK(SpaceKind::wasserstein1d(101).object_length() == 101);
    CHECK(SpaceKind::fisher_rao(51).object_length() == 51);
}

TEST_CASE("euclidean and sphere distances", "[distance]") {
    const SpaceKind e3 = SpaceKind::euclidean(3);
    CHECK(distance(e3, vec3(0, 0, 0), vec3(3, 4, 0)) == Catch::Approx(5.0).margin(1e-14));

    const SpaceKind s3 = SpaceKind::sphere(3);
    CHECK(distance(s3, vec3(1, 0, 0), vec3(0, 0, 1)) ==
          Catch::Approx(1.5707963267948966).margin(1e-12));
    CHECK(distance(s3, vec3(1, 0, 0), vec3(-1, 0, 0)) ==
          Catch::Approx(3.141592653589793).margin(1e-12));
    CHECK(distance(s3, vec3(1, 0, 0), vec3(1, 0, 0)) == 0.0);
    // Inner products just past +-1 are clamped; far outside the domain they
    // are rejected rather than silently clamped.
    CHECK_THROWS_AS(distance(s3, vec3(1.2, 0, 0), vec3(1.2, 0, 0)), InvalidInputError);
}

TEST_CASE("hyperboloid distance uses the minkowski form", "[distance]") {
    const SpaceKind h = SpaceKind::hyperbolic2();
    const double s = std::sinh(1.0);
    const double c = std::cosh(1.0);
    CHECK(distance(h, vec3(0, 0, 1), vec3(s, 0, c)) == Catch::Approx(1.0).margin(1e-12));
    CHECK(distance(h, vec3(0, 0, 1), vec3(0, 0, 1)) == 0.0);
}

TEST_CASE("spd metric closed forms on commuting pairs", "[distance][spd]") {
    const Eigen::VectorXd u = flat2x2(4, 0, 0, 1);
    const Eigen::VectorXd id = flat2x2(1, 0, 0, 1);

    CHECK(distance(SpaceKind::spd(2, SpdMetric::Frobenius), u, id) ==
          Catch::Approx(3.0).margin(1e-12));
    // log(diag(4,1)) = diag(ln4, 0).
    CHECK(distance(SpaceKind::spd(2, SpdMetric::LogEuclidean), u, id) ==
          Catch::Approx(std::log(4.0)).margin(1e-12));
    CHECK(distance(SpaceKind::spd(2, SpdMetric::AffineInvariant), u, id) ==
          Catch::Approx(std::log(4.0)).margin(1e-12));
    // Cholesky factors diag(2,1) and I.
    CHECK(distance(SpaceKind::spd(2, SpdMetric::Cholesky), u, id) ==
          Catch::Approx(1.0).margin(1e-12));
    // (1/alpha) |U^alpha - V^alpha| with alpha = 1/2: 2 |diag(2,1) - I|.
    CHECK(distance(SpaceKind::spd(2, SpdMetric::PowerFrobenius, 0.5), u, id) ==
          Catch::Approx(2.0).margin(1e-12));
    // Bures-Wasserstein on commuting matrices: |sqrt(U) - sqrt(V)|-type form
    // gives sqrt(sum (sqrt(4)-1)^2) = 1.
    CHECK(distance(SpaceKind::spd(2, SpdMetric::BuresWasserstein), u, id) ==
          Catch::Approx(1.0).margin(1e-10));
    CHECK(distance(SpaceKind::gaussian_bw(2), u, id) == Catch::Approx(1.0).margin(1e-10));
}

TEST_CASE("spd metrics agree with rotation invariance", "[distance][spd]") {
    const double theta = 0.7;
    Eigen::Matrix2d r;
    r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    Eigen::Matrix2d u;
    u << 4, 0, 0, 1;
    const Eigen::Matrix2d ru = r * u * r.transpose();

    Eigen::VectorXd u_flat = flat2x2(u(0, 0), u(0, 1), u(1, 0), u(1, 1));
    Eigen::VectorXd ru_flat = flat2x2(ru(0, 0), ru(0, 1), ru(1, 0), ru(1, 1));
    Eigen::VectorXd id = flat2x2(1, 0, 0, 1);

    // I is rotation invariant, so d(U, I) = d(RUR^T, I) for every metric that
    // is invariant under joint conjugation.
    for (const SpdMetric metric : {SpdMetric::Frobenius, SpdMetric::LogEuclidean,
                                   SpdMetric::AffineInvariant, SpdMetric::BuresWasserstein}) {
        const SpaceKind space = SpaceKind::spd(2, metric);
        CHECK(distance(space, u_flat, id) ==
              Catch::Approx(distance(space, ru_flat, id)).margin(1e-9));
    }
}

TEST_CASE("wasserstein distance of shifted quantile grids", "[distance][w1d]") {
    const int m = 101;
    const SpaceKind w = SpaceKind::wasserstein1d(m);
    Eigen::VectorXd q1(m);
    for (int i = 0; i < m; ++i) {
        const double p = std::min(1.0 - 1e-9, std::max(1e-9, static_cast<double>(i) / (m - 1)));
        q1(i) = normal_quantile(p);
    }
    const Eigen::VectorXd q2 = q1.array() + 2.0;
    // A pure location shift moves every quantile by the same amount, so the
    // L2(w) distance equals the shift no matter the grid.
    CHECK(distance(w, q1, q2) == Catch::Approx(2.0).margin(1e-12));
    CHECK(distance(w, q1, q1) == 0.0);
}

TEST_CASE("fisher-rao distance anchors", "[distance][fisherrao]") {
    const int m = 101;
    const SpaceKind fr = SpaceKind::fisher_rao(m);
    const Eigen::VectorXd w = trapezoid_weights(m);

    Eigen::VectorXd uniform = Eigen::VectorXd::Ones(m);
    CHECK(distance(fr, uniform, uniform) == 0.0);

    Eigen::VectorXd left = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd right = Eigen::VectorXd::Zero(m);
    for (int i = 0; i < m; ++i) {
        if (i < m / 2) {
            left(i) = 1.0;
        }
        if (i > m / 2) {
            right(i) = 1.0;
        }
    }
    left /= w.dot(left);
    right /= w.dot(right);
    // Disjoint supports give Bhattacharyya coefficient 0, hence arccos 0.
    CHECK(distance(fr, left, right) == Catch::Approx(1.5707963267948966).margin(1e-12));
}

TEST_CASE("trapezoid weights sum to one with half end weights", "[spaces]") {
    const Eigen::VectorXd w = trapezoid_weights(11);
    CHECK(w.sum() == Catch::Approx(1.0).margin(1e-14));
    CHECK(w(0) == Catch::Approx(0.05).margin(1e-14));
    CHECK(w(10) == Catch::Approx(0.05).margin(1e-14));
    CHECK(w(5) == Catch::Approx(0.1).margin(1e-14));
}

TEST_CASE("validate_sample flags the first broken object", "[spaces][validate]") {
    ObjectSample sphere;
    sphere.space = SpaceKind::sphere(3);
    sphere.objects.resize(2, 3);
    sphere.objects.row(0) << 1, 0, 0;
    sphere.objects.row(1) << 0.5, 0, 0;
    CHECK_THROWS_AS(validate_sample(sphere), InvalidInputError);

    ObjectSample spd;
    spd.space = SpaceKind::spd(2, SpdMetric::Frobenius);
    spd.objects.resize(2, 4);
    spd.objects.row(0) << 1, 0, 0, 1;
    spd.objects.row(1) << 1, 0.5, 0.4, 1; // asymmetric
    CHECK_THROWS_AS(validate_sample(spd), InvalidInputError);

    spd.objects.row(1) << 1, 2, 2, 1; // symmetric but indefinite
    CHECK_THROWS_AS(validate_sample(spd), InvalidInputError);

    ObjectSample quant;
    quant.space = SpaceKind::wasserstein1d(4);
    quant.objects.resize(2, 4);
    quant.objects.row(0) << 0, 1, 2, 3;
    quant.objects.row(1) << 0, 2, 1, 3; // not nondecreasing
    CHECK_THROWS_AS(validate_sample(quant), InvalidInputError);

    ObjectSample dens;
    dens.space = SpaceKind::fisher_rao(5);
    dens.objects.resize(2, 5);
    dens.objects.row(0) << 1, 1, 1, 1, 1;
    dens.objects.row(1) << 2, 2, 2, 2, 2; // integrates to 2
    CHECK_THROWS_AS(validate_sample(dens), InvalidInputError);

    ObjectSample hyper;
    hyper.space = SpaceKind::hyperbolic2();
    hyper.objects.resize(2, 3);
    hyper.objects.row(0) << 0, 0, 1;
    hyper.objects.row(1) << 1, 1, 1; // z^2 != 1 + x^2 + y^2
    CHECK_THROWS_AS(validate_sample(hyper), InvalidInputError);
}

TEST_CASE("validate_sample accepts well-formed samples", "[spaces][validate]") {
    ObjectSample sphere;
    sphere.space = SpaceKind::sphere(3);
    sphere.objects.resize(3, 3);
    sphere.objects.row(0) << 1, 0, 0;
    sphere.objects.row(1) << 0, 1, 0;
    sphere.objects.row(2) << 0, 0, 1;
    CHECK_NOTHROW(validate_sample(sphere));

    ObjectSample spd;
    spd.space = SpaceKind::spd(2, SpdMetric::AffineInvariant);
    spd.objects.resize(2, 4);
    spd.objects.row(0) << 2, 0.3, 0.3, 1;
    spd.objects.row(1) << 1, 0, 0, 1;
    CHECK_NOTHROW(validate_sample(spd));
}

TEST_CASE("object_as_matrix reshapes rows", "[spaces]") {
    ObjectSample sample;
    sample.space = SpaceKind::gaussian_bw(2);
    sample.objects.resize(1, 4);
    sample.objects.row(0) << 2, 0.5, 0.5, 1;
    const Eigen::MatrixXd m = sample.object_as_matrix(0);
    CHECK(m(0, 0) == 2.0);
    CHECK(m(0, 1) == 0.5);
    CHECK(m(1, 0) == 0.5);
    CHECK(m(1, 1) == 1.0);
}

TEST_CASE("distance_matrix is symmetric with zero diagonal", "[distance]") {
    ObjectSample sample;
    sample.space = SpaceKind::euclidean(2);
    sample.objects.resize(4, 2);
    sample.objects << 0, 0, 1, 0, 0, 1, 1, 1;
    const DistanceMatrix d = distance_matrix(sample);
    for (int i = 0; i < 4; ++i) {
        CHECK(d(i, i) == 0.0);
        for (int j = 0; j < 4; ++j) {
            CHECK(d(i, j) == d(j, i));
            CHECK(d(i, j) ==
                  Catch::Approx(distance(sample.space, sample.objects.row(i),
                                         sample.objects.row(j)))
                      .margin(1e-15));
        }
    }
    CHECK(d(0, 3) == Catch::Approx(std::sqrt(2.0)).margin(1e-15));
}

TEST_CASE("matrix functions invert each other", "[distance][spd]") {
    Eigen::Matrix2d a;
    a << 3, 1, 1, 2;
    const Eigen::MatrixXd s = spd_sqrt(a);
    CHECK((s * s - a).norm() <= 1e-10);
    CHECK((spd_inv_sqrt(a) * s - Eigen::Matrix2d::Identity()).norm() <= 1e-10);
    CHECK((spd_exp(spd_log(a)) - a).norm() <= 1e-10);
    CHECK((spd_pow(a, 0.5) - s).norm() <= 1e-12);

    const Eigen::MatrixXd l = cholesky_lower(a);
    CHECK((l * l.transpose() - a).norm() <= 1e-12);
    CHECK(l(0, 1) == 0.0);
    CHECK(l(0, 0) > 0.0);
    CHECK(l(1, 1) > 0.0);
}

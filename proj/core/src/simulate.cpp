#include "metricstats/simulate.hpp"

#include "metricstats/dispersion.hpp"
#include "metricstats/errors.hpp"
#include "metricstats/intrinsic.hpp"
#include "metricstats/stats.hpp"

#include <cmath>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace metricstats {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

double exponential_draw(RngStream& rng) {
    return -std::log1p(-rng.next_double());
}

// Beta(a, b) for integer shapes via sums of exponentials.
double beta_draw(RngStream& rng, int a, int b) {
    double g1 = 0.0;
    for (int k = 0; k < a; ++k) {
        g1 += exponential_draw(rng);
    }
    double g2 = 0.0;
    for (int k = 0; k < b; ++k) {
        g2 += exponential_draw(rng);
    }
    return g1 / (g1 + g2);
}

void add_gaussian_noise(Eigen::MatrixXd& objects, double sigma, RngStream& noise) {
    if (sigma <= 0) {
        return;
    }
    for (int i = 0; i < objects.rows(); ++i) {
        for (int k = 0; k < objects.cols(); ++k) {
            objects(i, k) += sigma * noise.next_normal();
        }
    }
}

void add_truncated_noise(Eigen::MatrixXd& objects, double sigma, double box, RngStream& noise) {
    if (sigma <= 0) {
        return;
    }
    const int cols = static_cast<int>(objects.cols());
    std::vector<double> draw(static_cast<size_t>(cols));
    for (int i = 0; i < objects.rows(); ++i) {
        bool inside = false;
        while (!inside) {
            inside = true;
            for (int k = 0; k < cols; ++k) {
                draw[static_cast<size_t>(k)] = sigma * noise.next_normal();
                if (std::abs(draw[static_cast<size_t>(k)]) > box) {
                    inside = false;
                }
            }
        }
        for (int k = 0; k < cols; ++k) {
            objects(i, k) += draw[static_cast<size_t>(k)];
        }
    }
}

void hemisphere_rows(Eigen::MatrixXd& objects, int n, RngStream& base) {
    for (int i = 0; i < n; ++i) {
        const double theta = base.uniform(0.0, 2.0 * kPi);
        const double psi = base.uniform(0.0, kPi / 2.0);
        objects(i, 0) = std::cos(theta) * std::sin(psi);
        objects(i, 1) = std::sin(theta) * std::sin(psi);
        objects(i, 2) = std::cos(psi);
    }
}

void require(bool condition, const std::string& message) {
    if (!condition) {
        throw InvalidInputError(message);
    }
}

} // namespace

std::string ScenarioSpec::design_name() const {
    switch (design) {
    case Design::Hemisphere:
        return "hemisphere";
    case Design::HemisphereTruncated:
        return "hemisphere-truncated";
    case Design::Hyperboloid:
        return "hyperboloid";
    case Design::Plane:
        return "plane";
    case Design::SphereCap:
        return "sphere-cap";
    case Design::RandomSpd:
        return "random-spd";
    case Design::RotatedGaussians:
        return "rotated-gaussians";
    case Design::SparseSphere:
        return "sparse-sphere";
    }
    return "?";
}

ObjectSample generate(const ScenarioSpec& spec) {
    require(spec.n >= 2, "generate: need n >= 2");
    require(spec.noise >= 0, "generate: noise must be nonnegative");

    RngStream base(spec.seed, 0);
    RngStream noise(spec.seed, 1);

    ObjectSample sample;
    switch (spec.design) {
    case ScenarioSpec::Design::Hemisphere:
    case ScenarioSpec::Design::HemisphereTruncated: {
        sample.space = SpaceKind::euclidean(3);
        sample.objects.resize(spec.n, 3);
        hemisphere_rows(sample.objects, spec.n, base);
        if (spec.design == ScenarioSpec::Design::Hemisphere) {
            add_gaussian_noise(sample.objects, spec.noise, noise);
        } else {
            add_truncated_noise(sample.objects, spec.noise, 1.5, noise);
        }
        return sample;
    }
    case ScenarioSpec::Design::Hyperboloid: {
        require(spec.trunc > 0, "generate: truncation bound must be positive");
        sample.space = SpaceKind::euclidean(3);
        sample.objects.resize(spec.n, 3);
        for (int i = 0; i < spec.n; ++i) {
            const double v = base.next_truncated_normal(spec.trunc);
            const double theta = base.uniform(0.0, kPi);
            const double ring = std::sqrt(1.0 + v * v);
            sample.objects(i, 0) = v;
            sample.objects(i, 1) = ring * std::cos(theta);
            sample.objects(i, 2) = ring * std::sin(theta);
        }
        add_gaussian_noise(sample.objects, spec.noise, noise);
        return sample;
    }
    case ScenarioSpec::Design::Plane: {
        sample.space = SpaceKind::euclidean(3);
        sample.objects.resize(spec.n, 3);
        for (int i = 0; i < spec.n; ++i) {
            sample.objects(i, 0) = base.next_double();
            sample.objects(i, 1) = base.next_double();
            sample.objects(i, 2) = 0.0;
        }
        add_gaussian_noise(sample.objects, spec.noise, noise);
        return sample;
    }
    case ScenarioSpec::Design::SphereCap: {
        require(spec.kappa >= 0 && spec.kappa <= 1, "generate: kappa must lie in [0, 1]");
        require(spec.noise == 0, "generate: the sphere-cap design takes no noise");
        sample.space = SpaceKind::euclidean(3);
        sample.objects.resize(spec.n, 3);
        if (spec.kappa == 0) {
            const double side = kPi / (2.0 * std::sqrt(2.0));
            for (int i = 0; i < spec.n; ++i) {
                sample.objects(i, 0) = base.uniform(0.0, side);
                sample.objects(i, 1) = base.uniform(0.0, side);
                sample.objects(i, 2) = 0.0;
            }
            return sample;
        }
        const double radius = 1.0 / std::sqrt(spec.kappa);
        const double z_min = radius * std::cos(kPi * std::sqrt(spec.kappa) / 4.0);
        for (int i = 0; i < spec.n; ++i) {
            // Uniform height over the cap is area-uniform on the sphere.
            const double z = base.uniform(z_min, radius);
            const double phi = base.uniform(0.0, 2.0 * kPi);
            const double ring = std::sqrt(std::max(radius * radius - z * z, 0.0));
            sample.objects(i, 0) = ring * std::cos(phi);
            sample.objects(i, 1) = ring * std::sin(phi);
            sample.objects(i, 2) = z;
        }
        return sample;
    }
    case ScenarioSpec::Design::RandomSpd: {
        require(spec.p >= 2, "generate: random-spd needs p >= 2");
        require(spec.beta >= 1 && spec.gamma >= 1, "generate: Beta shapes must be >= 1");
        require(spec.nu > 0, "generate: nu must be positive");
        require(spec.noise == 0, "generate: the random-spd design takes no noise");
        const int p = spec.p;
        sample.space = SpaceKind::spd(p, SpdMetric::Frobenius);
        sample.objects.resize(spec.n, p * p);
        for (int i = 0; i < spec.n; ++i) {
            Eigen::MatrixXd basis(p, p);
            for (int l = 0; l < p; ++l) {
                for (int r = 0; r < p; ++r) {
                    basis(r, l) = base.next_normal();
                }
                basis.col(l).normalize();
            }
            Eigen::VectorXd values(p);
            for (int l = 0; l < p; ++l) {
                values(l) = spec.nu * beta_draw(base, spec.beta, spec.gamma);
            }
            Eigen::MatrixXd x = basis * values.asDiagonal() * basis.transpose();
            x = 0.5 * (x + x.transpose()).eval();
            for (int r = 0; r < p; ++r) {
                for (int c = 0; c < p; ++c) {
                    sample.objects(i, r * p + c) = x(r, c);
                }
            }
        }
        return sample;
    }
    case ScenarioSpec::Design::RotatedGaussians: {
        require(spec.lambda1 > 0 && spec.lambda2 > 0, "generate: eigenvalues must be positive");
        require(spec.noise == 0, "generate: the rotated-gaussians design takes no noise");
        sample.space = SpaceKind::gaussian_bw(2);
        sample.objects.resize(spec.n, 4);
        for (int i = 0; i < spec.n; ++i) {
            const double theta = beta_draw(base, 2, 2);
            const double c = std::cos(theta);
            const double s = std::sin(theta);
            // R(theta) diag(lambda1, lambda2) R(theta)^T expanded.
            const double a = spec.lambda1 * c * c + spec.lambda2 * s * s;
            const double b = (spec.lambda1 - spec.lambda2) * c * s;
            const double d = spec.lambda1 * s * s + spec.lambda2 * c * c;
            sample.objects(i, 0) = a;
            sample.objects(i, 1) = b;
            sample.objects(i, 2) = b;
            sample.objects(i, 3) = d;
        }
        return sample;
    }
    case ScenarioSpec::Design::SparseSphere: {
        require(spec.p >= 3, "generate: sparse-sphere needs ambient dimension p >= 3");
        sample.space = SpaceKind::euclidean(spec.p);
        sample.objects = Eigen::MatrixXd::Zero(spec.n, spec.p);
        Eigen::MatrixXd surface(spec.n, 3);
        hemisphere_rows(surface, spec.n, base);
        sample.objects.leftCols(3) = surface;
        const double sigma = spec.snr_mode ? 3.0 / (10.0 * std::sqrt(spec.p)) : spec.noise;
        add_gaussian_noise(sample.objects, sigma, noise);
        return sample;
    }
    }
    throw InvalidInputError("generate: unknown design");
}

ScenarioSpec parse_scenario(std::istream& in) {
    ScenarioSpec spec;
    bool saw_design = false;
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const auto context = [line_number](const std::string& message) {
            return "scenario line " + std::to_string(line_number) + ": " + message;
        };

        const size_t comment = line.find('#');
        if (comment != std::string::npos) {
            line = line.substr(0, comment);
        }
        const auto trim = [](std::string s) {
            const char* ws = " \t\r\n";
            const size_t first = s.find_first_not_of(ws);
            if (first == std::string::npos) {
                return std::string();
            }
            return s.substr(first, s.find_last_not_of(ws) - first + 1);
        };
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw InvalidInputError(context("expected key=value"));
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw InvalidInputError(context("expected key=value"));
        }

        try {
            apply_scenario_setting(spec, key, value);
        } catch (const InvalidInputError& e) {
            throw InvalidInputError(context(e.what()));
        }
        if (key == "design") {
            saw_design = true;
        }
    }
    if (!saw_design) {
        throw InvalidInputError("scenario: missing required key 'design'");
    }
    return spec;
}

void apply_scenario_setting(ScenarioSpec& spec, const std::string& key, const std::string& value) {
    const auto as_int = [](const std::string& v) {
        try {
            return std::stoi(v);
        } catch (const std::exception&) {
            throw InvalidInputError("cannot parse integer '" + v + "'");
        }
    };
    const auto as_double = [](const std::string& v) {
        try {
            return std::stod(v);
        } catch (const std::exception&) {
            throw InvalidInputError("cannot parse number '" + v + "'");
        }
    };

    if (key == "design") {
        if (value == "hemisphere") {
            spec.design = ScenarioSpec::Design::Hemisphere;
        } else if (value == "hemisphere-truncated") {
            spec.design = ScenarioSpec::Design::HemisphereTruncated;
        } else if (value == "hyperboloid") {
            spec.design = ScenarioSpec::Design::Hyperboloid;
        } else if (value == "plane") {
            spec.design = ScenarioSpec::Design::Plane;
        } else if (value == "sphere-cap") {
            spec.design = ScenarioSpec::Design::SphereCap;
        } else if (value == "random-spd") {
            spec.design = ScenarioSpec::Design::RandomSpd;
        } else if (value == "rotated-gaussians") {
            spec.design = ScenarioSpec::Design::RotatedGaussians;
        } else if (value == "sparse-sphere") {
            spec.design = ScenarioSpec::Design::SparseSphere;
        } else {
            throw InvalidInputError("unknown design '" + value + "'");
        }
    } else if (key == "n") {
        spec.n = as_int(value);
    } else if (key == "noise") {
        spec.noise = as_double(value);
    } else if (key == "trunc") {
        spec.trunc = as_double(value);
    } else if (key == "kappa") {
        spec.kappa = as_double(value);
    } else if (key == "p") {
        spec.p = as_int(value);
    } else if (key == "beta") {
        spec.beta = as_int(value);
    } else if (key == "gamma") {
        spec.gamma = as_int(value);
    } else if (key == "nu") {
        spec.nu = as_double(value);
    } else if (key == "lambda1") {
        spec.lambda1 = as_double(value);
    } else if (key == "lambda2") {
        spec.lambda2 = as_double(value);
    } else if (key == "snr") {
        if (value == "true" || value == "1") {
            spec.snr_mode = true;
        } else if (value == "false" || value == "0") {
            spec.snr_mode = false;
        } else {
            throw InvalidInputError("snr must be true/false or 1/0");
        }
    } else if (key == "seed") {
        try {
            spec.seed = std::stoull(value);
        } catch (const std::exception&) {
            throw InvalidInputError("cannot parse seed '" + value + "'");
        }
    } else {
        throw InvalidInputError("unknown key '" + key + "'");
    }
}

ScenarioSpec parse_scenario_text(const std::string& text) {
    std::istringstream in(text);
    return parse_scenario(in);
}

std::uint64_t replicate_seed(std::uint64_t master, int replicate) {
    return mix64(mix64(master) +
                 mix64(static_cast<std::uint64_t>(replicate) + 0x9E3779B97F4A7C15ULL));
}

PowerCell monte_carlo_power_cell(const ScenarioSpec& spec, int runs, double alpha, PowerMode mode,
                                 double auto_radius_c) {
    require(runs >= 1, "monte_carlo_power: need runs >= 1");

    PowerCell cell;
    cell.spec = spec;
    cell.runs = runs;
    for (int r = 0; r < runs; ++r) {
        ScenarioSpec replicate = spec;
        replicate.seed = replicate_seed(spec.seed, r);
        const ObjectSample sample = generate(replicate);
        try {
            bool reject = false;
            if (mode == PowerMode::Intrinsic) {
                const IntrinsicResult result = intrinsic_curvature_test(
                    sample, RadiusSpec::auto_radius(auto_radius_c), alpha,
                    Alternative::TwoSided);
                reject = result.test.reject;
            } else {
                const CurvatureTestResult result =
                    curvature_test(dispersion(sample), alpha, Alternative::TwoSided);
                reject = result.reject;
            }
            ++cell.used;
            if (reject) {
                ++cell.rejections;
            }
        } catch (const DegenerateStatisticsError&) {
            ++cell.degenerate;
        }
    }
    if (cell.used > 0) {
        cell.rate = static_cast<double>(cell.rejections) / cell.used;
        cell.std_error = std::sqrt(cell.rate * (1.0 - cell.rate) / cell.used);
    }
    cell.degenerate_warning = cell.degenerate * 100 > runs;
    return cell;
}

std::vector<PowerCell> monte_carlo_power(const std::vector<ScenarioSpec>& cells, int runs,
                                         double alpha, PowerMode mode, double auto_radius_c) {
    std::vector<PowerCell> table;
    table.reserve(cells.size());
    for (const ScenarioSpec& spec : cells) {
        table.push_back(monte_carlo_power_cell(spec, runs, alpha, mode, auto_radius_c));
    }
    return table;
}

} // namespace metricstats

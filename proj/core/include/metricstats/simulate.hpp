#pragma once

#include "metricstats/inference.hpp"
#include "metricstats/spaces.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace metricstats {

// One simulation design with its parameters. Unused fields are ignored by
// generate(); parameter validity is checked per design.
struct ScenarioSpec {
    enum class Design {
        // Uniform angles on the open upper hemisphere (not area-uniform; the
        // polar angle itself is uniform), plus isotropic Gaussian noise.
        Hemisphere,
        // Same surface, noise truncated to the box [-1.5, 1.5]^3.
        HemisphereTruncated,
        // One-sheet hyperboloid patch (v, sqrt(1+v^2) cos t, sqrt(1+v^2) sin t)
        // with truncated-normal v, plus isotropic Gaussian noise.
        Hyperboloid,
        // Unit square in the z = 0 plane, plus isotropic Gaussian noise.
        Plane,
        // Area-uniform sample on a sphere cap of curvature kappa (kappa = 0
        // degenerates to a flat square); geodesic diameter pi/2 for all kappa.
        SphereCap,
        // X = V Lambda V^T with independently normalized (non-orthogonal)
        // Gaussian columns and eigenvalues nu * Beta(beta, gamma).
        RandomSpd,
        // Covariances R(theta) diag(lambda1, lambda2) R(theta)^T with
        // theta ~ Beta(2,2) radians, as Bures-Wasserstein objects.
        RotatedGaussians,
        // Hemisphere coordinates zero-padded to R^p with N_p(0, sigma^2 I)
        // noise; SNR mode fixes sigma = 3 / (10 sqrt(p)).
        SparseSphere,
    };

    Design design = Design::Hemisphere;
    int n = 2;
    double noise = 0.0;
    double trunc = 3.8729833462074170;
    double kappa = 0.0;
    int p = 3;
    int beta = 3;
    int gamma = 5;
    double nu = 100.0;
    double lambda1 = 4.0;
    double lambda2 = 1.0;
    bool snr_mode = false;
    std::uint64_t seed = 0;

    std::string design_name() const;
};

// Deterministic sample for the given spec: the surface draws come from RNG
// stream 0 and the additive noise from stream 1, so the noiseless sample is
// a prefix-independent component of the noisy one.
ObjectSample generate(const ScenarioSpec& spec);

// Key=value scenario text ('#' comments and blank lines allowed). Errors
// carry the offending line number.
ScenarioSpec parse_scenario(std::istream& in);
ScenarioSpec parse_scenario_text(const std::string& text);

// Applies one scenario setting; shared by the file parser and the power
// grid's per-cell overrides.
void apply_scenario_setting(ScenarioSpec& spec, const std::string& key, const std::string& value);

// Pure derivation of the seed for replicate r of a master seed.
std::uint64_t replicate_seed(std::uint64_t master, int replicate);

enum class PowerMode { Ambient, Intrinsic };

struct PowerCell {
    ScenarioSpec spec;
    int runs = 0;
    int used = 0;
    int rejections = 0;
    int degenerate = 0;
    double rate = 0.0;
    double std_error = 0.0;
    bool degenerate_warning = false;
};

// Monte Carlo rejection rate of the two-sided curvature test over
// independently seeded replicates. Degenerate replicates are excluded from
// the denominator and flagged when they exceed 1% of the runs.
PowerCell monte_carlo_power_cell(const ScenarioSpec& spec, int runs, double alpha, PowerMode mode,
                                 double auto_radius_c = 1.0);

std::vector<PowerCell> monte_carlo_power(const std::vector<ScenarioSpec>& cells, int runs,
                                         double alpha, PowerMode mode,
                                         double auto_radius_c = 1.0);

} // namespace metricstats

#pragma once

#include "metricstats/dispersion.hpp"
#include "metricstats/inference.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace metricstats::cli {

struct IntrinsicSummary {
    double radius = 0.0;
    int escalations = 0;
    int components = 0;
    std::int64_t edge_count = 0;
};

struct GeodesicStep {
    double t = 0.0;
    Eigen::VectorXd object;
    // Spectral summary for matrix-valued steps (plot-ready): eigenvalues in
    // descending order plus the leading-eigenvector angle for 2x2 matrices.
    std::vector<double> eigenvalues;
    double angle = 0.0;
    bool has_spectrum = false;
};

struct SimulationSummary {
    std::string design;
    std::string space;
    int n = 0;
    std::uint64_t seed = 0;
    std::string output_path;
    std::string output_digest;
};

struct PowerRow {
    std::string design;
    int n = 0;
    double kappa = 0.0;
    double noise = 0.0;
    std::uint64_t seed = 0;
    int runs = 0;
    int used = 0;
    int rejections = 0;
    int degenerate = 0;
    double rate = 0.0;
    double std_error = 0.0;
    bool degenerate_warning = false;
};

// Machine-readable output of every subcommand. Sections are present only
// when the subcommand produced them; serialization rejects non-finite
// numbers and round-trips bit-for-bit.
struct ResultDocument {
    int schema = 1;
    std::string command;
    std::string input_digest;
    std::vector<std::string> warnings;
    std::optional<DispersionEstimate> dispersion;
    std::optional<CurvatureTestResult> test;
    std::optional<IntrinsicSummary> intrinsic;
    std::string geodesic_mode;
    std::vector<GeodesicStep> geodesic;
    std::optional<SimulationSummary> simulation;
    std::vector<PowerRow> power;
};

std::uint64_t fnv1a64(std::string_view bytes);

// "fnv1a64:" plus 16 hex digits of the byte fingerprint.
std::string digest_string(std::string_view bytes);

std::string alternative_name(Alternative alternative);
Alternative parse_alternative(const std::string& name);

std::string to_json_text(const ResultDocument& doc);
ResultDocument result_from_json_text(const std::string& text);

} // namespace metricstats::cli

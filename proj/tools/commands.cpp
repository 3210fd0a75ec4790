#include "commands.hpp"

#include "io.hpp"
#include "resultdoc.hpp"

#include "metricstats/dispersion.hpp"
#include "metricstats/errors.hpp"
#include "metricstats/geodesics.hpp"
#include "metricstats/inference.hpp"
#include "metricstats/intrinsic.hpp"
#include "metricstats/simulate.hpp"
#include "metricstats/stats.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

namespace metricstats::cli {

namespace {

std::string join_args(int argc, const char* const* argv) {
    std::string out;
    for (int i = 1; i < argc; ++i) {
        if (i > 1) {
            out += ' ';
        }
        out += argv[i];
    }
    return out;
}

struct LoadedSample {
    std::string bytes;
    ObjectSample sample;
};

LoadedSample load_sample(const std::string& space_text, const std::string& input_path,
                         const std::string& format_text) {
    LoadedSample loaded;
    const SpaceKind space = SpaceKind::parse(space_text);
    loaded.bytes = read_file_bytes(input_path);
    loaded.sample = parse_sample_text(loaded.bytes, space, parse_format(format_text));
    return loaded;
}

void collect_estimate_warnings(const DispersionEstimate& est, std::vector<std::string>& warnings) {
    if (est.sigma_clamped) {
        warnings.push_back("negative variance estimate clamped to zero");
    }
    if (!est.mean_converged) {
        warnings.push_back("Frechet mean iteration stopped before convergence");
    }
}

std::int64_t edge_count(const NeighborGraph& graph) {
    std::int64_t total = 0;
    for (const auto& adjacency : graph.edges) {
        total += static_cast<std::int64_t>(adjacency.size());
    }
    return total / 2;
}

bool matrix_space(const SpaceKind& space) {
    return space.family == SpaceKind::Family::Spd ||
           space.family == SpaceKind::Family::GaussianBW;
}

void attach_spectrum(GeodesicStep& step, const SpaceKind& space) {
    if (!matrix_space(space)) {
        return;
    }
    const int d = space.dim;
    Eigen::MatrixXd m(d, d);
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
            m(r, c) = step.object(r * d + c);
        }
    }
    const SymEigenResult eigen = sym_eigen(m);
    step.has_spectrum = true;
    step.eigenvalues.assign(eigen.values.data(), eigen.values.data() + d);
    if (d == 2) {
        double angle = std::atan2(eigen.vectors(1, 0), eigen.vectors(0, 0));
        if (angle < 0) {
            angle += 3.1415926535897932384626433832795;
        }
        step.angle = angle;
    }
}

Eigen::VectorXd flatten_matrix(const Eigen::MatrixXd& m) {
    Eigen::VectorXd flat(m.rows() * m.cols());
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            flat(r * m.cols() + c) = m(r, c);
        }
    }
    return flat;
}

void print_document(const ResultDocument& doc) {
    std::cout << to_json_text(doc);
}

struct RadiusOptions {
    double radius = 0.0;
    double auto_c = 1.0;
    // One --radius option per subcommand that offers it; only the parsed
    // subcommand's option can have a nonzero count.
    std::vector<const CLI::Option*> fixed_options;

    RadiusSpec resolve() const {
        for (const CLI::Option* fixed : fixed_options) {
            if (fixed->count() > 0) {
                return RadiusSpec::fixed(radius);
            }
        }
        return RadiusSpec::auto_radius(auto_c);
    }
};

void add_radius_options(CLI::App* cmd, RadiusOptions& options) {
    CLI::Option* fixed =
        cmd->add_option("--radius", options.radius, "Fixed neighbor ball radius")
            ->check(CLI::PositiveNumber);
    CLI::Option* autoc =
        cmd->add_option("--auto-radius-c", options.auto_c,
                        "Heuristic radius constant c (default 1), escalated until connected")
            ->check(CLI::PositiveNumber);
    fixed->excludes(autoc);
    options.fixed_options.push_back(fixed);
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Dispersion and curvature inference for metric-space samples"};
    app.require_subcommand(1);
    const std::string command_echo = join_args(argc, argv);

    std::string space_text;
    std::string input_path;
    std::string format_text = "auto";
    double alpha = 0.05;
    std::string alternative_text = "two-sided";
    RadiusOptions radius_options;

    auto add_data_options = [&](CLI::App* cmd) {
        cmd->add_option("--space", space_text,
                        "Space kind, e.g. euclidean:3, sphere:3, hyperbolic2, "
                        "spd:2:bures, gaussbw:2, w1d:1001, fisherrao:101")
            ->required();
        cmd->add_option("--input", input_path, "Sample file (one object per line)")->required();
        cmd->add_option("--format", format_text, "Input format: csv, jsonl, or auto");
    };
    auto add_test_options = [&](CLI::App* cmd) {
        cmd->add_option("--alpha", alpha, "Test level")->check(CLI::Range(1e-12, 1.0 - 1e-12));
        cmd->add_option("--alternative", alternative_text,
                        "Alternative hypothesis: two-sided, positive, or negative");
    };

    CLI::App* dispersion_cmd =
        app.add_subcommand("dispersion", "Metric and Frechet variance with joint covariance");
    add_data_options(dispersion_cmd);
    dispersion_cmd->final_callback([&] {
        LoadedSample loaded = load_sample(space_text, input_path, format_text);
        const DispersionEstimate est = dispersion(loaded.sample);
        ResultDocument doc;
        doc.command = command_echo;
        doc.input_digest = digest_string(loaded.bytes);
        collect_estimate_warnings(est, doc.warnings);
        doc.dispersion = est;
        print_document(doc);
    });

    CLI::App* test_cmd =
        app.add_subcommand("curvature-test", "Test H0: no curvature signal (V_M = V_F)");
    add_data_options(test_cmd);
    add_test_options(test_cmd);
    test_cmd->final_callback([&] {
        LoadedSample loaded = load_sample(space_text, input_path, format_text);
        const DispersionEstimate est = dispersion(loaded.sample);
        const CurvatureTestResult test =
            curvature_test(est, alpha, parse_alternative(alternative_text));
        ResultDocument doc;
        doc.command = command_echo;
        doc.input_digest = digest_string(loaded.bytes);
        collect_estimate_warnings(est, doc.warnings);
        doc.dispersion = est;
        doc.test = test;
        print_document(doc);
    });

    CLI::App* intrinsic_cmd = app.add_subcommand(
        "intrinsic-test", "Curvature test on graph-geodesic (intrinsic) distances");
    add_data_options(intrinsic_cmd);
    add_test_options(intrinsic_cmd);
    add_radius_options(intrinsic_cmd, radius_options);
    intrinsic_cmd->final_callback([&] {
        LoadedSample loaded = load_sample(space_text, input_path, format_text);
        const IntrinsicResult result = intrinsic_curvature_test(
            loaded.sample, radius_options.resolve(), alpha, parse_alternative(alternative_text));
        ResultDocument doc;
        doc.command = command_echo;
        doc.input_digest = digest_string(loaded.bytes);
        collect_estimate_warnings(result.est, doc.warnings);
        if (result.escalations > 0) {
            doc.warnings.push_back("heuristic radius escalated " +
                                   std::to_string(result.escalations) +
                                   " step(s) to connect the graph");
        }
        doc.dispersion = result.est;
        doc.test = result.test;
        IntrinsicSummary summary;
        summary.radius = result.radius_used;
        summary.escalations = result.escalations;
        summary.components = result.graph.component_count;
        summary.edge_count = edge_count(result.graph);
        doc.intrinsic = summary;
        print_document(doc);
    });

    int from_index = 0;
    int to_index = 0;
    int steps = 5;
    int target_dim = 1;
    double bandwidth = 0.0;
    std::string geodesic_mode = "isomap";
    std::string inverse_text = "weighted";
    CLI::App* geodesic_cmd =
        app.add_subcommand("geodesic", "Reconstruct the geodesic between two sample objects");
    add_data_options(geodesic_cmd);
    add_radius_options(geodesic_cmd, radius_options);
    geodesic_cmd->add_option("--from", from_index, "Start object index (0-based)")->required();
    geodesic_cmd->add_option("--to", to_index, "End object index (0-based)")->required();
    geodesic_cmd->add_option("--steps", steps, "Number of path points including endpoints")
        ->check(CLI::Range(2, 100000));
    geodesic_cmd->add_option("--q", target_dim, "Embedding dimension for isomap mode")
        ->check(CLI::PositiveNumber);
    geodesic_cmd->add_option("--bandwidth", bandwidth,
                             "Kernel bandwidth for the inverse map (default: median "
                             "nearest-neighbor embedding distance)")
        ->check(CLI::PositiveNumber);
    geodesic_cmd->add_option("--mode", geodesic_mode, "isomap or wasserstein")
        ->check(CLI::IsMember({"isomap", "wasserstein"}));
    geodesic_cmd->add_option("--inverse", inverse_text,
                             "Inverse map for isomap mode: weighted or nearest")
        ->check(CLI::IsMember({"weighted", "nearest"}));
    geodesic_cmd->final_callback([&] {
        LoadedSample loaded = load_sample(space_text, input_path, format_text);
        const int n = loaded.sample.size();
        if (from_index < 0 || from_index >= n || to_index < 0 || to_index >= n) {
            throw InvalidInputError("--from/--to must index sample objects (n = " +
                                    std::to_string(n) + ")");
        }
        ResultDocument doc;
        doc.command = command_echo;
        doc.input_digest = digest_string(loaded.bytes);
        doc.geodesic_mode = geodesic_mode;

        if (geodesic_mode == "wasserstein") {
            if (!matrix_space(loaded.sample.space)) {
                throw InvalidInputError(
                    "wasserstein mode needs a covariance space (spd:D:... or gaussbw:D)");
            }
            const Eigen::MatrixXd u = loaded.sample.object_as_matrix(from_index);
            const Eigen::MatrixXd v = loaded.sample.object_as_matrix(to_index);
            for (int k = 0; k < steps; ++k) {
                const double t = static_cast<double>(k) / (steps - 1);
                GeodesicStep step;
                step.t = t;
                step.object = flatten_matrix(gaussian_wasserstein_geodesic(u, v, t));
                attach_spectrum(step, loaded.sample.space);
                doc.geodesic.push_back(std::move(step));
            }
        } else {
            const DistanceMatrix ambient = distance_matrix(loaded.sample);
            const ResolvedGraph resolved =
                resolve_neighbor_graph(ambient, radius_options.resolve());
            const EmbeddingModel model =
                isomap_embed(loaded.sample, dijkstra_all_pairs(resolved.graph), target_dim);
            if (model.deficient) {
                doc.warnings.push_back(
                    "embedding is rank-deficient: --q exceeds the detected dimension");
            }
            const double h = bandwidth > 0 ? bandwidth : default_bandwidth(model);
            const InverseMapMode inverse_mode = inverse_text == "nearest"
                                                    ? InverseMapMode::NearestSample
                                                    : InverseMapMode::WeightedMean;
            for (int k = 0; k < steps; ++k) {
                const double t = static_cast<double>(k) / (steps - 1);
                GeodesicStep step;
                step.t = t;
                step.object = inverse_map(
                    model, interpolate_representation(model, from_index, to_index, t), h,
                    inverse_mode);
                attach_spectrum(step, loaded.sample.space);
                doc.geodesic.push_back(std::move(step));
            }
        }
        print_document(doc);
    });

    std::string scenario_path;
    std::string out_path;
    std::uint64_t seed = 0;
    CLI::App* simulate_cmd =
        app.add_subcommand("simulate", "Generate a sample from a scenario file");
    simulate_cmd->add_option("--scenario", scenario_path, "Scenario key=value file")->required();
    simulate_cmd->add_option("--out", out_path, "Output sample path")->required();
    CLI::Option* seed_option =
        simulate_cmd->add_option("--seed", seed, "Seed override (default: scenario seed)");
    simulate_cmd->add_option("--format", format_text, "Output format: csv, jsonl, or auto");
    simulate_cmd->final_callback([&] {
        const std::string scenario_bytes = read_file_bytes(scenario_path);
        ScenarioSpec spec = parse_scenario_text(scenario_bytes);
        if (seed_option->count() > 0) {
            spec.seed = seed;
        }
        const ObjectSample sample = generate(spec);
        const std::string out_bytes = format_sample_text(sample, parse_format(format_text));
        write_file_bytes(out_path, out_bytes);

        ResultDocument doc;
        doc.command = command_echo;
        doc.input_digest = digest_string(scenario_bytes);
        SimulationSummary summary;
        summary.design = spec.design_name();
        summary.space = sample.space.name();
        summary.n = sample.size();
        summary.seed = spec.seed;
        summary.output_path = out_path;
        summary.output_digest = digest_string(out_bytes);
        doc.simulation = summary;
        print_document(doc);
    });

    std::string grid_path;
    int runs = 500;
    std::string power_mode_text = "ambient";
    double power_auto_c = 1.0;
    CLI::App* power_cmd =
        app.add_subcommand("power", "Monte Carlo rejection rates over a scenario grid");
    power_cmd->add_option("--scenario", scenario_path, "Base scenario file")->required();
    power_cmd->add_option("--grid", grid_path, "Grid file: one line of key=value overrides per cell")
        ->required();
    power_cmd->add_option("--runs", runs, "Replicates per cell")->check(CLI::PositiveNumber);
    power_cmd->add_option("--alpha", alpha, "Test level")->check(CLI::Range(1e-12, 1.0 - 1e-12));
    power_cmd->add_option("--mode", power_mode_text, "Distance pipeline: ambient or intrinsic")
        ->check(CLI::IsMember({"ambient", "intrinsic"}));
    power_cmd->add_option("--auto-radius-c", power_auto_c,
                          "Heuristic radius constant for intrinsic mode")
        ->check(CLI::PositiveNumber);
    CLI::Option* power_seed_option =
        power_cmd->add_option("--seed", seed, "Seed override for the base scenario");
    power_cmd->final_callback([&] {
        const std::string scenario_bytes = read_file_bytes(scenario_path);
        const std::string grid_bytes = read_file_bytes(grid_path);
        ScenarioSpec base = parse_scenario_text(scenario_bytes);
        if (power_seed_option->count() > 0) {
            base.seed = seed;
        }
        const std::vector<ScenarioSpec> cells = parse_power_grid_text(grid_bytes, base);
        const PowerMode mode =
            power_mode_text == "intrinsic" ? PowerMode::Intrinsic : PowerMode::Ambient;
        const std::vector<PowerCell> results =
            monte_carlo_power(cells, runs, alpha, mode, power_auto_c);

        ResultDocument doc;
        doc.command = command_echo;
        doc.input_digest = digest_string(scenario_bytes + grid_bytes);
        for (const PowerCell& cell : results) {
            PowerRow row;
            row.design = cell.spec.design_name();
            row.n = cell.spec.n;
            row.kappa = cell.spec.kappa;
            row.noise = cell.spec.noise;
            row.seed = cell.spec.seed;
            row.runs = cell.runs;
            row.used = cell.used;
            row.rejections = cell.rejections;
            row.degenerate = cell.degenerate;
            row.rate = cell.rate;
            row.std_error = cell.std_error;
            row.degenerate_warning = cell.degenerate_warning;
            if (cell.degenerate_warning) {
                doc.warnings.push_back("cell " + row.design + " n=" + std::to_string(row.n) +
                                       ": more than 1% of replicates were degenerate");
            }
            doc.power.push_back(std::move(row));
        }
        print_document(doc);
    });

    try {
        app.parse(argc, argv);
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const DegenerateStatisticsError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DisconnectedGraphError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace metricstats::cli

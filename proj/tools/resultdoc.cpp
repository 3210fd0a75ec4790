#include "resultdoc.hpp"

#include "metricstats/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>

namespace metricstats::cli {

namespace {

using Json = nlohmann::ordered_json;

double fin(double value, const char* field) {
    if (!std::isfinite(value)) {
        throw Error(std::string("non-finite value in result field '") + field + "'");
    }
    return value;
}

Json vector_json(const Eigen::VectorXd& v, const char* field) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(fin(v(i), field));
    }
    return out;
}

Json matrix2_json(const Eigen::Matrix2d& m, const char* field) {
    Json out = Json::array();
    for (int r = 0; r < 2; ++r) {
        Json row = Json::array();
        for (int c = 0; c < 2; ++c) {
            row.push_back(fin(m(r, c), field));
        }
        out.push_back(row);
    }
    return out;
}

Eigen::VectorXd vector_from_json(const Json& node) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(node.size()));
    Eigen::Index i = 0;
    for (const auto& entry : node) {
        v(i++) = entry.get<double>();
    }
    return v;
}

Eigen::Matrix2d matrix2_from_json(const Json& node) {
    Eigen::Matrix2d m;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            m(r, c) = node.at(static_cast<size_t>(r)).at(static_cast<size_t>(c)).get<double>();
        }
    }
    return m;
}

Json dispersion_json(const DispersionEstimate& est) {
    Json out;
    out["n"] = est.n;
    out["v_m"] = fin(est.v_m, "v_m");
    out["v_f"] = fin(est.v_f, "v_f");
    out["sigma"] = matrix2_json(est.sigma, "sigma");
    out["sigma_clamped"] = est.sigma_clamped;
    out["mean_index"] = est.mean_index;
    out["mean_converged"] = est.mean_converged;
    if (est.mean_object.size() > 0) {
        out["mean"] = vector_json(est.mean_object, "mean");
    }
    return out;
}

DispersionEstimate dispersion_from_json(const Json& node) {
    DispersionEstimate est;
    est.n = node.at("n").get<int>();
    est.v_m = node.at("v_m").get<double>();
    est.v_f = node.at("v_f").get<double>();
    est.sigma = matrix2_from_json(node.at("sigma"));
    est.sigma_clamped = node.at("sigma_clamped").get<bool>();
    est.mean_index = node.at("mean_index").get<int>();
    est.mean_converged = node.at("mean_converged").get<bool>();
    if (node.contains("mean")) {
        est.mean_object = vector_from_json(node.at("mean"));
    }
    return est;
}

Json test_json(const CurvatureTestResult& test) {
    Json out;
    out["rho_hat"] = fin(test.rho_hat, "rho_hat");
    out["rho_prime_hat"] = fin(test.rho_prime_hat, "rho_prime_hat");
    out["sigma_hat"] = fin(test.sigma_hat, "sigma_hat");
    out["t"] = fin(test.t_n, "t");
    out["p_value"] = fin(test.p_value, "p_value");
    out["alternative"] = alternative_name(test.alternative);
    out["alpha"] = fin(test.alpha, "alpha");
    out["ci"] = Json::array({fin(test.ci_lower, "ci"), fin(test.ci_upper, "ci")});
    out["reject"] = test.reject;

    Json ellipse;
    ellipse["center"] = Json::array({fin(test.ellipse.center(0), "ellipse.center"),
                                     fin(test.ellipse.center(1), "ellipse.center")});
    ellipse["shape"] = matrix2_json(test.ellipse.shape, "ellipse.shape");
    ellipse["radius2"] = fin(test.ellipse.radius2, "ellipse.radius2");
    ellipse["singular"] = test.ellipse.singular;
    Json boundary = Json::array();
    for (const Eigen::Vector2d& point : region_boundary(test.ellipse, 64)) {
        boundary.push_back(Json::array(
            {fin(point(0), "ellipse.boundary"), fin(point(1), "ellipse.boundary")}));
    }
    ellipse["boundary"] = boundary;
    out["ellipse"] = ellipse;
    return out;
}

CurvatureTestResult test_from_json(const Json& node) {
    CurvatureTestResult test;
    test.rho_hat = node.at("rho_hat").get<double>();
    test.rho_prime_hat = node.at("rho_prime_hat").get<double>();
    test.sigma_hat = node.at("sigma_hat").get<double>();
    test.t_n = node.at("t").get<double>();
    test.p_value = node.at("p_value").get<double>();
    test.alternative = parse_alternative(node.at("alternative").get<std::string>());
    test.alpha = node.at("alpha").get<double>();
    test.ci_lower = node.at("ci").at(0).get<double>();
    test.ci_upper = node.at("ci").at(1).get<double>();
    test.reject = node.at("reject").get<bool>();

    const Json& ellipse = node.at("ellipse");
    test.ellipse.center(0) = ellipse.at("center").at(0).get<double>();
    test.ellipse.center(1) = ellipse.at("center").at(1).get<double>();
    test.ellipse.shape = matrix2_from_json(ellipse.at("shape"));
    test.ellipse.radius2 = ellipse.at("radius2").get<double>();
    test.ellipse.singular = ellipse.at("singular").get<bool>();
    return test;
}

} // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t hash = 14695981039346656037ULL;
    for (unsigned char byte : bytes) {
        hash ^= byte;
        hash *= 1099511628211ULL;
    }
    return hash;
}

std::string digest_string(std::string_view bytes) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "fnv1a64:%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buffer;
}

std::string alternative_name(Alternative alternative) {
    switch (alternative) {
    case Alternative::TwoSided:
        return "two-sided";
    case Alternative::Positive:
        return "positive";
    case Alternative::Negative:
        return "negative";
    }
    return "?";
}

Alternative parse_alternative(const std::string& name) {
    if (name == "two-sided") {
        return Alternative::TwoSided;
    }
    if (name == "positive") {
        return Alternative::Positive;
    }
    if (name == "negative") {
        return Alternative::Negative;
    }
    throw InvalidInputError("unknown alternative '" + name +
                            "' (expected two-sided, positive, or negative)");
}

std::string to_json_text(const ResultDocument& doc) {
    Json j;
    j["schema"] = doc.schema;
    j["command"] = doc.command;
    j["input_digest"] = doc.input_digest;
    j["warnings"] = doc.warnings;
    if (doc.dispersion) {
        j["dispersion"] = dispersion_json(*doc.dispersion);
    }
    if (doc.test) {
        j["test"] = test_json(*doc.test);
    }
    if (doc.intrinsic) {
        Json node;
        node["radius"] = fin(doc.intrinsic->radius, "intrinsic.radius");
        node["escalations"] = doc.intrinsic->escalations;
        node["components"] = doc.intrinsic->components;
        node["edge_count"] = doc.intrinsic->edge_count;
        j["intrinsic"] = node;
    }
    if (!doc.geodesic.empty()) {
        j["geodesic_mode"] = doc.geodesic_mode;
        Json steps = Json::array();
        for (const GeodesicStep& step : doc.geodesic) {
            Json node;
            node["t"] = fin(step.t, "geodesic.t");
            node["object"] = vector_json(step.object, "geodesic.object");
            if (step.has_spectrum) {
                Json values = Json::array();
                for (double value : step.eigenvalues) {
                    values.push_back(fin(value, "geodesic.eigenvalues"));
                }
                node["eigenvalues"] = values;
                node["angle"] = fin(step.angle, "geodesic.angle");
            }
            steps.push_back(node);
        }
        j["geodesic"] = steps;
    }
    if (doc.simulation) {
        Json node;
        node["design"] = doc.simulation->design;
        node["space"] = doc.simulation->space;
        node["n"] = doc.simulation->n;
        node["seed"] = doc.simulation->seed;
        node["output_path"] = doc.simulation->output_path;
        node["output_digest"] = doc.simulation->output_digest;
        j["simulation"] = node;
    }
    if (!doc.power.empty()) {
        Json rows = Json::array();
        for (const PowerRow& row : doc.power) {
            Json node;
            node["design"] = row.design;
            node["n"] = row.n;
            node["kappa"] = fin(row.kappa, "power.kappa");
            node["noise"] = fin(row.noise, "power.noise");
            node["seed"] = row.seed;
            node["runs"] = row.runs;
            node["used"] = row.used;
            node["rejections"] = row.rejections;
            node["degenerate"] = row.degenerate;
            node["rate"] = fin(row.rate, "power.rate");
            node["std_error"] = fin(row.std_error, "power.std_error");
            node["degenerate_warning"] = row.degenerate_warning;
            rows.push_back(node);
        }
        j["power"] = rows;
    }
    return j.dump(2) + "\n";
}

ResultDocument result_from_json_text(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInputError(std::string("result document: ") + e.what());
    }
    ResultDocument doc;
    doc.schema = j.at("schema").get<int>();
    doc.command = j.at("command").get<std::string>();
    doc.input_digest = j.at("input_digest").get<std::string>();
    doc.warnings = j.at("warnings").get<std::vector<std::string>>();
    if (j.contains("dispersion")) {
        doc.dispersion = dispersion_from_json(j.at("dispersion"));
    }
    if (j.contains("test")) {
        doc.test = test_from_json(j.at("test"));
    }
    if (j.contains("intrinsic")) {
        const Json& node = j.at("intrinsic");
        IntrinsicSummary summary;
        summary.radius = node.at("radius").get<double>();
        summary.escalations = node.at("escalations").get<int>();
        summary.components = node.at("components").get<int>();
        summary.edge_count = node.at("edge_count").get<std::int64_t>();
        doc.intrinsic = summary;
    }
    if (j.contains("geodesic")) {
        doc.geodesic_mode = j.at("geodesic_mode").get<std::string>();
        for (const Json& node : j.at("geodesic")) {
            GeodesicStep step;
            step.t = node.at("t").get<double>();
            step.object = vector_from_json(node.at("object"));
            if (node.contains("eigenvalues")) {
                step.has_spectrum = true;
                step.eigenvalues = node.at("eigenvalues").get<std::vector<double>>();
                step.angle = node.at("angle").get<double>();
            }
            doc.geodesic.push_back(std::move(step));
        }
    }
    if (j.contains("simulation")) {
        const Json& node = j.at("simulation");
        SimulationSummary summary;
        summary.design = node.at("design").get<std::string>();
        summary.space = node.at("space").get<std::string>();
        summary.n = node.at("n").get<int>();
        summary.seed = node.at("seed").get<std::uint64_t>();
        summary.output_path = node.at("output_path").get<std::string>();
        summary.output_digest = node.at("output_digest").get<std::string>();
        doc.simulation = summary;
    }
    if (j.contains("power")) {
        for (const Json& node : j.at("power")) {
            PowerRow row;
            row.design = node.at("design").get<std::string>();
            row.n = node.at("n").get<int>();
            row.kappa = node.at("kappa").get<double>();
            row.noise = node.at("noise").get<double>();
            row.seed = node.at("seed").get<std::uint64_t>();
            row.runs = node.at("runs").get<int>();
            row.used = node.at("used").get<int>();
            row.rejections = node.at("rejections").get<int>();
            row.degenerate = node.at("degenerate").get<int>();
            row.rate = node.at("rate").get<double>();
            row.std_error = node.at("std_error").get<double>();
            row.degenerate_warning = node.at("degenerate_warning").get<bool>();
            doc.power.push_back(std::move(row));
        }
    }
    return doc;
}

} // namespace metricstats::cli

#include "io.hpp"

#include "metricstats/errors.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace metricstats::cli {

namespace {

std::string trimmed(const std::string& s) {
    const char* ws = " \t\r\n";
    const size_t first = s.find_first_not_of(ws);
    if (first == std::string::npos) {
        return std::string();
    }
    return s.substr(first, s.find_last_not_of(ws) - first + 1);
}

std::string line_context(const char* what, int line_number, const std::string& message) {
    return std::string(what) + " line " + std::to_string(line_number) + ": " + message;
}

std::vector<double> parse_csv_fields(const std::string& line, int line_number) {
    std::vector<double> values;
    std::string token;
    std::istringstream fields(line);
    // Accept both comma- and whitespace-separated fields.
    while (std::getline(fields, token, ',')) {
        std::istringstream inner(token);
        std::string piece;
        while (inner >> piece) {
            size_t used = 0;
            double value = 0.0;
            try {
                value = std::stod(piece, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != piece.size()) {
                throw InvalidInputError(
                    line_context("csv", line_number, "cannot parse number '" + piece + "'"));
            }
            values.push_back(value);
        }
    }
    return values;
}

std::vector<double> json_number_array(const nlohmann::json& node, const char* key,
                                      int line_number) {
    if (!node.is_array()) {
        throw InvalidInputError(
            line_context("jsonl", line_number, std::string("'") + key + "' must be an array"));
    }
    std::vector<double> values;
    values.reserve(node.size());
    for (const auto& entry : node) {
        if (!entry.is_number()) {
            throw InvalidInputError(line_context("jsonl", line_number,
                                                 std::string("'") + key +
                                                     "' must contain only numbers"));
        }
        values.push_back(entry.get<double>());
    }
    return values;
}

std::vector<double> parse_jsonl_record(const std::string& line, const SpaceKind& space,
                                       int line_number) {
    nlohmann::json record;
    try {
        record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInputError(line_context("jsonl", line_number, e.what()));
    }
    if (!record.is_object()) {
        throw InvalidInputError(line_context("jsonl", line_number, "record must be an object"));
    }

    const bool matrix_space = space.family == SpaceKind::Family::Spd ||
                              space.family == SpaceKind::Family::GaussianBW;
    if (matrix_space) {
        if (!record.contains("values")) {
            throw InvalidInputError(line_context("jsonl", line_number, "missing 'values'"));
        }
        if (record.contains("dim")) {
            const auto& dim = record["dim"];
            if (!dim.is_number_integer() || dim.get<int>() != space.dim) {
                throw InvalidInputError(line_context(
                    "jsonl", line_number,
                    "'dim' must equal " + std::to_string(space.dim) + " for this space"));
            }
        }
        return json_number_array(record["values"], "values", line_number);
    }
    if (space.family == SpaceKind::Family::Wasserstein1D) {
        const char* key = record.contains("quantiles") ? "quantiles" : "values";
        if (!record.contains(key)) {
            throw InvalidInputError(line_context("jsonl", line_number, "missing 'quantiles'"));
        }
        return json_number_array(record[key], key, line_number);
    }
    if (space.family == SpaceKind::Family::FisherRao) {
        const char* key = record.contains("density") ? "density" : "values";
        if (!record.contains(key)) {
            throw InvalidInputError(line_context("jsonl", line_number, "missing 'density'"));
        }
        return json_number_array(record[key], key, line_number);
    }
    if (!record.contains("values")) {
        throw InvalidInputError(line_context("jsonl", line_number, "missing 'values'"));
    }
    return json_number_array(record["values"], "values", line_number);
}

void append_number(std::string& out, double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    out += buffer;
}

} // namespace

InputFormat parse_format(const std::string& name) {
    if (name == "csv") {
        return InputFormat::Csv;
    }
    if (name == "jsonl") {
        return InputFormat::Jsonl;
    }
    if (name == "auto" || name.empty()) {
        return InputFormat::Auto;
    }
    throw InvalidInputError("unknown format '" + name + "' (expected csv or jsonl)");
}

InputFormat default_format(const SpaceKind& space) {
    switch (space.family) {
    case SpaceKind::Family::Euclidean:
    case SpaceKind::Family::Sphere:
    case SpaceKind::Family::Hyperbolic2:
        return InputFormat::Csv;
    default:
        return InputFormat::Jsonl;
    }
}

std::string read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidInputError("cannot open '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

ObjectSample parse_sample_text(const std::string& text, const SpaceKind& space,
                               InputFormat format) {
    if (format == InputFormat::Auto) {
        format = default_format(space);
    }
    const int width = space.object_length();
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (format == InputFormat::Csv) {
            const size_t comment = line.find('#');
            if (comment != std::string::npos) {
                line = line.substr(0, comment);
            }
        }
        line = trimmed(line);
        if (line.empty()) {
            continue;
        }
        std::vector<double> values = format == InputFormat::Csv
                                         ? parse_csv_fields(line, line_number)
                                         : parse_jsonl_record(line, space, line_number);
        if (static_cast<int>(values.size()) != width) {
            throw InvalidInputError(line_context(
                format == InputFormat::Csv ? "csv" : "jsonl", line_number,
                "expected " + std::to_string(width) + " values for space '" + space.name() +
                    "', got " + std::to_string(values.size())));
        }
        rows.push_back(std::move(values));
    }
    if (rows.size() < 2) {
        throw InvalidInputError("input needs at least 2 objects, got " +
                                std::to_string(rows.size()));
    }

    ObjectSample sample;
    sample.space = space;
    sample.objects.resize(static_cast<Eigen::Index>(rows.size()), width);
    for (size_t i = 0; i < rows.size(); ++i) {
        for (int k = 0; k < width; ++k) {
            sample.objects(static_cast<Eigen::Index>(i), k) = rows[i][static_cast<size_t>(k)];
        }
    }
    validate_sample(sample);
    return sample;
}

ObjectSample read_sample(const std::string& path, const SpaceKind& space, InputFormat format) {
    return parse_sample_text(read_file_bytes(path), space, format);
}

std::string format_sample_text(const ObjectSample& sample, InputFormat format) {
    if (format == InputFormat::Auto) {
        format = default_format(sample.space);
    }
    const int width = static_cast<int>(sample.objects.cols());
    std::string out;
    for (int i = 0; i < sample.objects.rows(); ++i) {
        if (format == InputFormat::Csv) {
            for (int k = 0; k < width; ++k) {
                if (k > 0) {
                    out += ',';
                }
                append_number(out, sample.objects(i, k));
            }
        } else {
            nlohmann::ordered_json record;
            const char* key = "values";
            switch (sample.space.family) {
            case SpaceKind::Family::Spd:
            case SpaceKind::Family::GaussianBW:
                record["dim"] = sample.space.dim;
                break;
            case SpaceKind::Family::Wasserstein1D:
                key = "quantiles";
                break;
            case SpaceKind::Family::FisherRao:
                key = "density";
                break;
            default:
                break;
            }
            auto& values = record[key];
            values = nlohmann::json::array();
            for (int k = 0; k < width; ++k) {
                values.push_back(sample.objects(i, k));
            }
            out += record.dump();
        }
        out += '\n';
    }
    return out;
}

void write_file_bytes(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw InvalidInputError("cannot write '" + path + "'");
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw InvalidInputError("write to '" + path + "' failed");
    }
}

std::vector<ScenarioSpec> parse_power_grid_text(const std::string& text,
                                                const ScenarioSpec& base) {
    std::vector<ScenarioSpec> cells;
    std::istringstream in(text);
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const size_t comment = line.find('#');
        if (comment != std::string::npos) {
            line = line.substr(0, comment);
        }
        line = trimmed(line);
        if (line.empty()) {
            continue;
        }
        ScenarioSpec cell = base;
        std::istringstream tokens(line);
        std::string token;
        while (tokens >> token) {
            const size_t eq = token.find('=');
            if (eq == std::string::npos || eq == 0 || eq + 1 == token.size()) {
                throw InvalidInputError(
                    line_context("grid", line_number, "expected key=value, got '" + token + "'"));
            }
            try {
                apply_scenario_setting(cell, token.substr(0, eq), token.substr(eq + 1));
            } catch (const InvalidInputError& e) {
                throw InvalidInputError(line_context("grid", line_number, e.what()));
            }
        }
        cells.push_back(cell);
    }
    if (cells.empty()) {
        throw InvalidInputError("grid: no cells found");
    }
    return cells;
}

} // namespace metricstats::cli

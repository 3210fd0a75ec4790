#pragma once

#include "metricstats/simulate.hpp"
#include "metricstats/spaces.hpp"

#include <string>
#include <vector>

namespace metricstats::cli {

enum class InputFormat { Auto, Csv, Jsonl };

InputFormat parse_format(const std::string& name);

// Csv for coordinate spaces, Jsonl for matrix and grid spaces.
InputFormat default_format(const SpaceKind& space);

std::string read_file_bytes(const std::string& path);

// Parses one object per line. Csv lines are comma- or whitespace-separated
// reals; Jsonl lines are single JSON records with "values" + "dim" (matrix
// spaces), "quantiles", "density", or plain "values" (coordinate spaces).
// Errors carry 1-based line numbers.
ObjectSample parse_sample_text(const std::string& text, const SpaceKind& space,
                               InputFormat format);

ObjectSample read_sample(const std::string& path, const SpaceKind& space, InputFormat format);

// Inverse of parse_sample_text; output bytes are deterministic for a given
// sample and round-trip through the parser bit-for-bit.
std::string format_sample_text(const ObjectSample& sample, InputFormat format);

void write_file_bytes(const std::string& path, const std::string& bytes);

// Power grid: one cell per line, each line a whitespace-separated list of
// key=value scenario overrides applied to the base spec. Blank lines and
// '#' comments are skipped; an empty grid is an error.
std::vector<ScenarioSpec> parse_power_grid_text(const std::string& text,
                                                const ScenarioSpec& base);

} // namespace metricstats::cli

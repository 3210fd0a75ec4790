#pragma once

#include <stdexcept>
#include <string>

namespace metricstats {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed inputs: shape mismatches, out-of-domain parameters, broken
// invariants (non-unit sphere vectors, non-SPD matrices, ...).
class InvalidInputError : public Error {
public:
    explicit InvalidInputError(const std::string& what) : Error(what) {}
};

// A variance estimate required by a test is zero (or numerically
// indistinguishable from zero), so the normalized statistic is undefined.
class DegenerateStatisticsError : public Error {
public:
    explicit DegenerateStatisticsError(const std::string& what) : Error(what) {}
};

// The neighbor graph has more than one connected component, so graph
// shortest-path distances do not exist for all pairs. Carries the smallest
// ball radius that would connect the graph (the longest edge of a minimum
// spanning tree of the ambient distance matrix) so callers can retry.
class DisconnectedGraphError : public Error {
public:
    DisconnectedGraphError(const std::string& what, double connecting_radius, int components)
        : Error(what), connecting_radius(connecting_radius), components(components) {}

    double connecting_radius;
    int components;
};

// The inverse representation map was evaluated so far outside the embedded
// sample that every kernel weight underflowed.
class ExtrapolationError : public Error {
public:
    explicit ExtrapolationError(const std::string& what) : Error(what) {}
};

} // namespace metricstats

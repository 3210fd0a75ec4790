#pragma once

#include "metricstats/dispersion.hpp"
#include "metricstats/inference.hpp"
#include "metricstats/spaces.hpp"

#include <utility>
#include <vector>

namespace metricstats {

// Epsilon-ball graph over a sample: nodes are sample indices, an edge joins
// i != j whenever dist(i,j) <= radius, weighted by the ambient distance.
// Zero weights (duplicate points) are allowed. connecting_radius holds the
// smallest radius that would connect the graph (the longest edge of a
// minimum spanning tree of the ambient matrix); it is computed only when
// the graph is disconnected and is 0 otherwise.
struct NeighborGraph {
    int n = 0;
    double radius = 0.0;
    std::vector<std::vector<std::pair<int, double>>> edges;
    int component_count = 0;
    double connecting_radius = 0.0;
};

// c * (max over i of min over j != i of dist(i,j))^(2/3).
double ball_radius_heuristic(const DistanceMatrix& dist, double c);

NeighborGraph build_neighbor_graph(const DistanceMatrix& dist, double radius);

// All-pairs shortest path lengths by one binary-heap Dijkstra run per
// source. Throws a disconnection error carrying the smallest connecting
// radius when component_count > 1.
DistanceMatrix dijkstra_all_pairs(const NeighborGraph& graph);

// Ball radius selection: a fixed radius, or the heuristic with constant c
// escalated through multipliers 1.0, 1.25, 1.5, ... until the graph
// connects.
struct RadiusSpec {
    enum class Mode { Fixed, Auto };
    Mode mode = Mode::Auto;
    double value = 0.0;
    double c = 1.0;

    static RadiusSpec fixed(double radius) {
        RadiusSpec spec;
        spec.mode = Mode::Fixed;
        spec.value = radius;
        return spec;
    }
    static RadiusSpec auto_radius(double c = 1.0) {
        RadiusSpec spec;
        spec.mode = Mode::Auto;
        spec.c = c;
        return spec;
    }
};

struct ResolvedGraph {
    NeighborGraph graph;
    double radius_used = 0.0;
    // Number of ladder steps taken beyond the base heuristic radius (0 when
    // the heuristic already connected the graph, or the radius was fixed).
    int escalations = 0;
};

// Applies the radius spec: builds the graph at the fixed radius as-is, or
// walks the heuristic ladder until the graph connects.
ResolvedGraph resolve_neighbor_graph(const DistanceMatrix& dist, const RadiusSpec& radius);

struct IntrinsicResult {
    DistanceMatrix d_i;
    NeighborGraph graph;
    CurvatureTestResult test;
    int mean_index = 0;
    double radius_used = 0.0;
    int escalations = 0;
    DispersionEstimate est;
};

// Full intrinsic pipeline on a precomputed ambient distance matrix: resolve
// the radius, build the graph, run Dijkstra, take the sample-restricted
// mean of the intrinsic distances, and test the curvature statistic.
IntrinsicResult intrinsic_curvature_test(const DistanceMatrix& dist, const RadiusSpec& radius,
                                         double alpha, Alternative alternative);

// Same pipeline starting from a sample (computes the ambient matrix first).
IntrinsicResult intrinsic_curvature_test(const ObjectSample& sample, const RadiusSpec& radius,
                                         double alpha, Alternative alternative);

} // namespace metricstats

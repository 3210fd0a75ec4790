#include "metricstats/intrinsic.hpp"

#include "metricstats/distance.hpp"
#include "metricstats/errors.hpp"
#include "metricstats/frechet.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

namespace metricstats {

namespace {

void check_square(const DistanceMatrix& dist, const char* what) {
    const int n = static_cast<int>(dist.rows());
    if (n < 2 || dist.cols() != n) {
        throw InvalidInputError(std::string(what) + ": need a square matrix with n >= 2");
    }
    if (!dist.allFinite()) {
        throw InvalidInputError(std::string(what) + ": matrix has non-finite entries");
    }
}

struct UnionFind {
    std::vector<int> parent;

    explicit UnionFind(int n) : parent(static_cast<size_t>(n)) {
        for (int i = 0; i < n; ++i) {
            parent[static_cast<size_t>(i)] = i;
        }
    }
    int find(int x) {
        while (parent[static_cast<size_t>(x)] != x) {
            parent[static_cast<size_t>(x)] =
                parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
            x = parent[static_cast<size_t>(x)];
        }
        return x;
    }
    bool unite(int a, int b) {
        const int ra = find(a);
        const int rb = find(b);
        if (ra == rb) {
            return false;
        }
        parent[static_cast<size_t>(ra)] = rb;
        return true;
    }
};

// Longest edge of a minimum spanning tree of the full ambient matrix: the
// smallest ball radius whose graph is connected. Prim's algorithm on the
// dense matrix, O(n^2).
double mst_max_edge(const DistanceMatrix& dist) {
    const int n = static_cast<int>(dist.rows());
    std::vector<double> best(static_cast<size_t>(n), std::numeric_limits<double>::infinity());
    std::vector<bool> in_tree(static_cast<size_t>(n), false);
    best[0] = 0.0;
    double longest = 0.0;
    for (int step = 0; step < n; ++step) {
        int pick = -1;
        for (int i = 0; i < n; ++i) {
            if (!in_tree[static_cast<size_t>(i)] &&
                (pick < 0 || best[static_cast<size_t>(i)] < best[static_cast<size_t>(pick)])) {
                pick = i;
            }
        }
        in_tree[static_cast<size_t>(pick)] = true;
        longest = std::max(longest, best[static_cast<size_t>(pick)]);
        for (int i = 0; i < n; ++i) {
            if (!in_tree[static_cast<size_t>(i)]) {
                best[static_cast<size_t>(i)] =
                    std::min(best[static_cast<size_t>(i)], dist(pick, i));
            }
        }
    }
    return longest;
}

} // namespace

double ball_radius_heuristic(const DistanceMatrix& dist, double c) {
    check_square(dist, "ball_radius_heuristic");
    if (!(c > 0)) {
        throw InvalidInputError("ball_radius_heuristic: c must be positive");
    }
    const int n = static_cast<int>(dist.rows());
    double max_min = 0.0;
    for (int i = 0; i < n; ++i) {
        double nearest = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) {
            if (j != i) {
                nearest = std::min(nearest, dist(i, j));
            }
        }
        max_min = std::max(max_min, nearest);
    }
    return c * std::pow(max_min, 2.0 / 3.0);
}

NeighborGraph build_neighbor_graph(const DistanceMatrix& dist, double radius) {
    check_square(dist, "build_neighbor_graph");
    if (!(radius > 0)) {
        throw InvalidInputError("build_neighbor_graph: radius must be positive");
    }
    const int n = static_cast<int>(dist.rows());

    NeighborGraph graph;
    graph.n = n;
    graph.radius = radius;
    graph.edges.resize(static_cast<size_t>(n));

    UnionFind components(n);
    int component_count = n;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (dist(i, j) <= radius) {
                graph.edges[static_cast<size_t>(i)].emplace_back(j, dist(i, j));
                graph.edges[static_cast<size_t>(j)].emplace_back(i, dist(i, j));
                if (components.unite(i, j)) {
                    --component_count;
                }
            }
        }
    }
    graph.component_count = component_count;
    if (component_count > 1) {
        graph.connecting_radius = mst_max_edge(dist);
    }
    return graph;
}

DistanceMatrix dijkstra_all_pairs(const NeighborGraph& graph) {
    if (graph.component_count != 1) {
        throw DisconnectedGraphError(
            "neighbor graph has " + std::to_string(graph.component_count) +
                " components at radius " + std::to_string(graph.radius) +
                "; the smallest connecting radius is " +
                std::to_string(graph.connecting_radius),
            graph.connecting_radius, graph.component_count);
    }
    const int n = graph.n;

    // Flatten the adjacency lists so the per-source loops touch contiguous
    // memory; the all-pairs run dominates the pipeline's cost.
    std::vector<int> offsets(static_cast<size_t>(n) + 1, 0);
    for (int i = 0; i < n; ++i) {
        offsets[static_cast<size_t>(i) + 1] =
            offsets[static_cast<size_t>(i)] + static_cast<int>(graph.edges[static_cast<size_t>(i)].size());
    }
    const int m = offsets[static_cast<size_t>(n)];
    std::vector<int> targets(static_cast<size_t>(m));
    std::vector<double> weights(static_cast<size_t>(m));
    for (int i = 0; i < n; ++i) {
        int at = offsets[static_cast<size_t>(i)];
        for (const auto& [j, w] : graph.edges[static_cast<size_t>(i)]) {
            targets[static_cast<size_t>(at)] = j;
            weights[static_cast<size_t>(at)] = w;
            ++at;
        }
    }

    DistanceMatrix result(n, n);
    std::vector<double> dist(static_cast<size_t>(n));
    using Entry = std::pair<double, int>;
    for (int source = 0; source < n; ++source) {
        std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
        dist[static_cast<size_t>(source)] = 0.0;
        std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;
        queue.emplace(0.0, source);
        while (!queue.empty()) {
            const auto [d, u] = queue.top();
            queue.pop();
            if (d > dist[static_cast<size_t>(u)]) {
                continue;
            }
            const int end = offsets[static_cast<size_t>(u) + 1];
            for (int e = offsets[static_cast<size_t>(u)]; e < end; ++e) {
                const int v = targets[static_cast<size_t>(e)];
                const double candidate = d + weights[static_cast<size_t>(e)];
                if (candidate < dist[static_cast<size_t>(v)]) {
                    dist[static_cast<size_t>(v)] = candidate;
                    queue.emplace(candidate, v);
                }
            }
        }
        for (int j = 0; j < n; ++j) {
            result(source, j) = dist[static_cast<size_t>(j)];
        }
    }

    // Symmetrize exactly: tie-breaking inside the heap can differ between
    // directions by one rounding step on some platforms.
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double d = std::min(result(i, j), result(j, i));
            result(i, j) = d;
            result(j, i) = d;
        }
    }
    return result;
}

ResolvedGraph resolve_neighbor_graph(const DistanceMatrix& dist, const RadiusSpec& radius) {
    check_square(dist, "resolve_neighbor_graph");

    ResolvedGraph resolved;
    if (radius.mode == RadiusSpec::Mode::Fixed) {
        if (!(radius.value > 0)) {
            throw InvalidInputError("resolve_neighbor_graph: fixed radius must be positive");
        }
        resolved.radius_used = radius.value;
        resolved.graph = build_neighbor_graph(dist, radius.value);
        return resolved;
    }

    const double base = ball_radius_heuristic(dist, radius.c);
    if (!(base > 0)) {
        throw InvalidInputError(
            "resolve_neighbor_graph: radius heuristic degenerated to zero "
            "(duplicate-only sample)");
    }
    for (int step = 0;; ++step) {
        const double candidate = base * (1.0 + 0.25 * step);
        resolved.graph = build_neighbor_graph(dist, candidate);
        if (resolved.graph.component_count == 1) {
            resolved.radius_used = candidate;
            resolved.escalations = step;
            return resolved;
        }
        // The ladder always terminates: a radius at least the longest
        // minimum-spanning-tree edge connects the graph.
        if (candidate >= resolved.graph.connecting_radius) {
            throw DisconnectedGraphError(
                "neighbor graph stayed disconnected through the radius ladder; "
                "the smallest connecting radius is " +
                    std::to_string(resolved.graph.connecting_radius),
                resolved.graph.connecting_radius, resolved.graph.component_count);
        }
    }
}

IntrinsicResult intrinsic_curvature_test(const DistanceMatrix& dist, const RadiusSpec& radius,
                                         double alpha, Alternative alternative) {
    ResolvedGraph resolved = resolve_neighbor_graph(dist, radius);

    IntrinsicResult result;
    result.graph = std::move(resolved.graph);
    result.radius_used = resolved.radius_used;
    result.escalations = resolved.escalations;
    result.d_i = dijkstra_all_pairs(result.graph);
    const RestrictedMeanResult mean = frechet_mean_restricted(result.d_i);
    result.mean_index = mean.index;
    result.est = dispersion_from_matrix(result.d_i, mean.index);
    result.test = curvature_test(result.est, alpha, alternative);
    return result;
}

IntrinsicResult intrinsic_curvature_test(const ObjectSample& sample, const RadiusSpec& radius,
                                         double alpha, Alternative alternative) {
    return intrinsic_curvature_test(distance_matrix(sample), radius, alpha, alternative);
}

} // namespace metricstats

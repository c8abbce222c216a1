#include "tgcut/graph_cut.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "tgcut/error.hpp"

namespace tgcut {

void GraphParams::validate() const {
    if (k < 3) throw ArgumentError("k must be >= 3", "invalid-params");
    if (n < 2) throw ArgumentError("n must be >= 2", "invalid-params");
    if (delta < 0 || delta > kMaxDelta) {
        throw ArgumentError("delta must lie in [0, " + std::to_string(kMaxDelta) + "]", "invalid-params");
    }
    if (!(t_weight > 0.0) || !std::isfinite(t_weight)) {
        throw ArgumentError("t_weight must be positive", "invalid-params");
    }
    if (!(sf > 0.0) || !std::isfinite(sf)) throw ArgumentError("sf must be positive", "invalid-params");
}

CostMatrix node_costs(const NodeGrid& grid, double t_weight) {
    CostMatrix c(grid.k, grid.n);
    for (std::size_t i = 0; i < grid.k; ++i) {
        double previous = grid.seed_grey;
        for (std::size_t j = 0; j < grid.n; ++j) {
            const double g = grid.grey_at(i, j);
            c(i, j) = std::exp(-t_weight * std::abs(g - previous));
            previous = g;
        }
    }
    return c;
}

FlowGraph build_graph(const CostMatrix& costs, int delta) {
    const std::size_t k = costs.k;
    const std::size_t n = costs.n;
    if (k < 3 || n < 2 || costs.values.size() != k * n) {
        throw ArgumentError("cost matrix must be at least 3 x 2 and consistently sized");
    }
    if (delta < 0) throw ArgumentError("delta must be non-negative", "invalid-params");

    double max_cap = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double w = j == 0 ? costs(i, 0) : costs(i, j) - costs(i, j - 1);
            if (!std::isfinite(w)) throw ArgumentError("node costs must be finite");
            max_cap = std::max(max_cap, std::abs(w));
        }
    }
    const double inf = 2.0 * (static_cast<double>(k * n) * max_cap + 1.0);
    if (!std::isfinite(inf)) throw InternalError("INF sentinel overflowed");

    const std::size_t source = k * n;
    const std::size_t sink = k * n + 1;
    FlowGraph g(k * n + 2, source, sink, inf);
    const auto d = static_cast<std::size_t>(delta);

    for (std::size_t i = 0; i < k; ++i) {
        // seed anchor: every ray keeps at least its first node
        g.add_inf_arc(source, node_id(n, i, 0));
        for (std::size_t j = 1; j < n; ++j) g.add_inf_arc(node_id(n, i, j), node_id(n, i, j - 1));
    }
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t next = (i + 1) % k;
        const std::size_t prev = (i + k - 1) % k;
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t lower = j > d ? j - d : 0;
            g.add_inf_arc(node_id(n, i, j), node_id(n, next, lower));
            g.add_inf_arc(node_id(n, i, j), node_id(n, prev, lower));
        }
    }
    for (std::size_t i = 0; i < k; ++i) {
        g.add_arc(node_id(n, i, 0), sink, costs(i, 0));
        for (std::size_t j = 1; j < n; ++j) {
            const double w = costs(i, j) - costs(i, j - 1);
            if (w < 0.0) {
                g.add_arc(source, node_id(n, i, j), -w);
            } else {
                g.add_arc(node_id(n, i, j), sink, w);
            }
        }
    }
    return g;
}

std::vector<int> boundary_from_partition(std::size_t k, std::size_t n, const std::vector<bool>& source_side) {
    if (source_side.size() < k * n) throw InternalError("partition is smaller than the node grid");
    std::vector<int> b(k);
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t count = 0;
        while (count < n && source_side[node_id(n, i, count)]) ++count;
        for (std::size_t j = count; j < n; ++j) {
            if (source_side[node_id(n, i, j)]) {
                throw InternalError("source set on ray " + std::to_string(i) + " is not downward closed");
            }
        }
        if (count == 0) throw InternalError("ray " + std::to_string(i) + " lost its seed anchor");
        b[i] = static_cast<int>(count) - 1;
    }
    return b;
}

void check_feasible(const std::vector<int>& boundary, std::size_t n, int delta) {
    const std::size_t k = boundary.size();
    for (std::size_t i = 0; i < k; ++i) {
        const int b = boundary[i];
        if (b < 0 || b >= static_cast<int>(n)) {
            throw InternalError("boundary index " + std::to_string(b) + " out of range on ray " + std::to_string(i));
        }
        if (std::abs(b - boundary[(i + 1) % k]) > delta) {
            throw InternalError("delta constraint violated between rays " + std::to_string(i) + " and " +
                                std::to_string((i + 1) % k));
        }
    }
}

namespace {

CutResult cut_from_flow(std::size_t k, std::size_t n, const MaxFlowResult& flow, int delta, double inf) {
    if (!(flow.flow < inf)) throw InternalError("maximum flow reached the INF sentinel");
    CutResult r;
    r.boundary = boundary_from_partition(k, n, flow.source_side);
    check_feasible(r.boundary, n, delta);
    r.cut_cost = flow.cut_capacity;
    r.flow_value = flow.flow;
    return r;
}

} // namespace

CutResult extract_cut(const NodeGrid& grid, const MaxFlowResult& flow, int delta, double inf_capacity) {
    CutResult r = cut_from_flow(grid.k, grid.n, flow, delta, inf_capacity);
    r.contour.reserve(grid.k);
    for (std::size_t i = 0; i < grid.k; ++i) {
        r.contour.push_back(grid.position(i, static_cast<std::size_t>(r.boundary[i])));
    }
    return r;
}

CutResult min_cut_boundary(const CostMatrix& costs, int delta) {
    const FlowGraph g = build_graph(costs, delta);
    return cut_from_flow(costs.k, costs.n, max_flow(g), delta, g.inf_capacity());
}

double boundary_cost(const CostMatrix& costs, const std::vector<int>& boundary) {
    double sum = 0.0;
    for (std::size_t i = 0; i < boundary.size(); ++i) sum += costs(i, static_cast<std::size_t>(boundary[i]));
    return sum;
}

SliceTrace trace_one_slice(const Slice2D& slice, const Template& tmpl, const SeedPoint& seed,
                           const GraphParams& params) {
    params.validate();
    SliceTrace t;
    t.fan = cast_rays(tmpl, seed, params.k);
    t.grid = sample_node_grid(t.fan, params.n, slice);
    t.costs = node_costs(t.grid, params.t_weight);
    const FlowGraph g = build_graph(t.costs, params.delta);
    t.cut = extract_cut(t.grid, max_flow(g), params.delta, g.inf_capacity());
    return t;
}

CutResult segment_one_slice(const Slice2D& slice, const Template& tmpl, const SeedPoint& seed,
                            const GraphParams& params) {
    return trace_one_slice(slice, tmpl, seed, params).cut;
}

} // namespace tgcut

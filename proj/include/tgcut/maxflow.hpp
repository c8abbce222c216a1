#pragma once

#include <cstddef>
#include <vector>

namespace tgcut {

struct FlowArc {
    std::size_t from = 0;
    std::size_t to = 0;
    double capacity = 0.0;
    bool infinite = false;  // carries the graph's INF sentinel capacity
};

/// Directed s-t network. Terminal arcs (touching source or sink) are
/// ordinary arcs here; the solver folds them into terminal capacities.
class FlowGraph {
public:
    FlowGraph() = default;
    FlowGraph(std::size_t node_count, std::size_t source, std::size_t sink, double inf_capacity = 0.0);

    void add_arc(std::size_t from, std::size_t to, double capacity);
    void add_inf_arc(std::size_t from, std::size_t to);

    std::size_t node_count() const { return node_count_; }
    std::size_t source() const { return source_; }
    std::size_t sink() const { return sink_; }
    double inf_capacity() const { return inf_; }
    const std::vector<FlowArc>& arcs() const { return arcs_; }

private:
    std::size_t node_count_ = 2;
    std::size_t source_ = 0;
    std::size_t sink_ = 1;
    double inf_ = 0.0;
    std::vector<FlowArc> arcs_;
};

struct MaxFlowResult {
    double flow = 0.0;
    /// Per node: reachable from the source in the final residual graph.
    std::vector<bool> source_side;
    /// Total capacity of finite arcs leaving the source side.
    double cut_capacity = 0.0;
};

/// Exact maximum flow by Boykov-Kolmogorov augmenting search trees.
/// Throws InternalError if an INF arc crosses the resulting cut.
MaxFlowResult max_flow(const FlowGraph& g);

} // namespace tgcut

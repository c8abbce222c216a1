#include "tgcut/maxflow.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "tgcut/error.hpp"

namespace tgcut {

FlowGraph::FlowGraph(std::size_t node_count, std::size_t source, std::size_t sink, double inf_capacity)
    : node_count_(node_count), source_(source), sink_(sink), inf_(inf_capacity) {
    if (source >= node_count || sink >= node_count || source == sink) {
        throw ArgumentError("source and sink must be distinct nodes of the graph");
    }
}

void FlowGraph::add_arc(std::size_t from, std::size_t to, double capacity) {
    if (from >= node_count_ || to >= node_count_) throw ArgumentError("arc endpoint out of range");
    if (!(capacity >= 0.0) || !std::isfinite(capacity)) {
        throw ArgumentError("arc capacity must be finite and non-negative");
    }
    arcs_.push_back({from, to, capacity, false});
}

void FlowGraph::add_inf_arc(std::size_t from, std::size_t to) {
    if (from >= node_count_ || to >= node_count_) throw ArgumentError("arc endpoint out of range");
    if (!(inf_ > 0.0) || !std::isfinite(inf_)) throw InternalError("INF sentinel is not a positive finite value");
    arcs_.push_back({from, to, inf_, true});
}

namespace {

// Search-tree max-flow over the non-terminal nodes. Parent links point along
// the arc from a node towards its parent in the tree.
class BkSolver {
public:
    static constexpr int kNone = -1;
    static constexpr int kTerminal = -2;
    static constexpr int kOrphan = -3;

    explicit BkSolver(std::size_t n) : nodes_(n) {}

    void add_edge(int u, int v, double cap) {
        const int a = static_cast<int>(arcs_.size());
        arcs_.push_back({v, nodes_[u].first, a + 1, cap});
        nodes_[u].first = a;
        arcs_.push_back({u, nodes_[v].first, a, 0.0});
        nodes_[v].first = a + 1;
    }

    void add_terminal(int u, double to_source, double to_sink) {
        src_cap_.resize(nodes_.size(), 0.0);
        sink_cap_.resize(nodes_.size(), 0.0);
        src_cap_[u] += to_source;
        sink_cap_[u] += to_sink;
    }

    double solve() {
        src_cap_.resize(nodes_.size(), 0.0);
        sink_cap_.resize(nodes_.size(), 0.0);
        double flow = 0.0;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            flow += std::min(src_cap_[i], sink_cap_[i]);
            nodes_[i].tr_cap = src_cap_[i] - sink_cap_[i];
        }
        flow_ = flow;

        for (int i = 0; i < static_cast<int>(nodes_.size()); ++i) {
            Node& nd = nodes_[i];
            if (nd.tr_cap != 0.0) {
                nd.is_sink = nd.tr_cap < 0.0;
                nd.parent = kTerminal;
                nd.ts = 0;
                nd.dist = 1;
                set_active(i);
            }
        }

        for (int i = next_active(); i != kNone; i = next_active()) {
            while (nodes_[i].parent != kNone) {
                const int middle = grow(i);
                if (middle == kNone) break;
                ++time_;
                augment(middle);
                adopt_orphans();
            }
        }
        return flow_;
    }

    // Residual reachability from the source.
    std::vector<bool> source_set() const {
        std::vector<bool> seen(nodes_.size(), false);
        std::deque<int> queue;
        for (int i = 0; i < static_cast<int>(nodes_.size()); ++i) {
            if (nodes_[i].tr_cap > 0.0) {
                seen[i] = true;
                queue.push_back(i);
            }
        }
        while (!queue.empty()) {
            const int i = queue.front();
            queue.pop_front();
            for (int a = nodes_[i].first; a != kNone; a = arcs_[a].next) {
                const int j = arcs_[a].head;
                if (!seen[j] && arcs_[a].r_cap > 0.0) {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        return seen;
    }

private:
    struct Node {
        int first = kNone;
        int parent = kNone;
        bool is_sink = false;
        bool queued = false;
        long ts = 0;
        int dist = 0;
        double tr_cap = 0.0;
    };
    struct Arc {
        int head;
        int next;
        int sister;
        double r_cap;
    };

    void set_active(int i) {
        if (!nodes_[i].queued) {
            nodes_[i].queued = true;
            active_.push_back(i);
        }
    }

    int next_active() {
        while (!active_.empty()) {
            const int i = active_.front();
            active_.pop_front();
            nodes_[i].queued = false;
            if (nodes_[i].parent != kNone) return i;
        }
        return kNone;
    }

    // Grows the tree of `i` by one layer. Returns the arc linking the two
    // trees (oriented source tree -> sink tree), or kNone.
    int grow(int i) {
        Node& ni = nodes_[i];
        for (int a = ni.first; a != kNone; a = arcs_[a].next) {
            const int sister = arcs_[a].sister;
            const double cap = ni.is_sink ? arcs_[sister].r_cap : arcs_[a].r_cap;
            if (cap <= 0.0) continue;
            const int j = arcs_[a].head;
            Node& nj = nodes_[j];
            if (nj.parent == kNone) {
                nj.is_sink = ni.is_sink;
                nj.parent = sister;
                nj.ts = ni.ts;
                nj.dist = ni.dist + 1;
                set_active(j);
            } else if (nj.is_sink != ni.is_sink) {
                return ni.is_sink ? sister : a;
            } else if (nj.ts <= ni.ts && nj.dist > ni.dist) {
                nj.parent = sister;
                nj.ts = ni.ts;
                nj.dist = ni.dist + 1;
            }
        }
        return kNone;
    }

    void set_orphan_front(int i) {
        nodes_[i].parent = kOrphan;
        orphans_.push_front(i);
    }
    void set_orphan_rear(int i) {
        nodes_[i].parent = kOrphan;
        orphans_.push_back(i);
    }

    void augment(int middle) {
        double bottleneck = arcs_[middle].r_cap;
        int i = arcs_[arcs_[middle].sister].head;
        for (int a = nodes_[i].parent; a != kTerminal; a = nodes_[i].parent) {
            bottleneck = std::min(bottleneck, arcs_[arcs_[a].sister].r_cap);
            i = arcs_[a].head;
        }
        bottleneck = std::min(bottleneck, nodes_[i].tr_cap);
        i = arcs_[middle].head;
        for (int a = nodes_[i].parent; a != kTerminal; a = nodes_[i].parent) {
            bottleneck = std::min(bottleneck, arcs_[a].r_cap);
            i = arcs_[a].head;
        }
        bottleneck = std::min(bottleneck, -nodes_[i].tr_cap);

        arcs_[arcs_[middle].sister].r_cap += bottleneck;
        arcs_[middle].r_cap -= bottleneck;

        i = arcs_[arcs_[middle].sister].head;
        for (int a = nodes_[i].parent; a != kTerminal; a = nodes_[i].parent) {
            const int sister = arcs_[a].sister;
            arcs_[a].r_cap += bottleneck;
            arcs_[sister].r_cap -= bottleneck;
            const int up = arcs_[a].head;
            if (arcs_[sister].r_cap <= 0.0) set_orphan_front(i);
            i = up;
        }
        nodes_[i].tr_cap -= bottleneck;
        if (nodes_[i].tr_cap <= 0.0) set_orphan_front(i);

        i = arcs_[middle].head;
        for (int a = nodes_[i].parent; a != kTerminal; a = nodes_[i].parent) {
            arcs_[arcs_[a].sister].r_cap += bottleneck;
            arcs_[a].r_cap -= bottleneck;
            const int up = arcs_[a].head;
            if (arcs_[a].r_cap <= 0.0) set_orphan_front(i);
            i = up;
        }
        nodes_[i].tr_cap += bottleneck;
        if (nodes_[i].tr_cap >= 0.0) set_orphan_front(i);

        flow_ += bottleneck;
    }

    void adopt_orphans() {
        while (!orphans_.empty()) {
            const int i = orphans_.front();
            orphans_.pop_front();
            process_orphan(i);
        }
    }

    // Distance from `start` to its terminal, or -1 if the chain hits an orphan.
    int origin_distance(int start) {
        int d = 0;
        for (int j = start;;) {
            if (nodes_[j].ts == time_) return d + nodes_[j].dist;
            const int a = nodes_[j].parent;
            ++d;
            if (a == kTerminal) {
                nodes_[j].ts = time_;
                nodes_[j].dist = 1;
                return d;
            }
            if (a == kOrphan) return -1;
            j = arcs_[a].head;
        }
    }

    void process_orphan(int i) {
        const bool sink_tree = nodes_[i].is_sink;
        // capacity of the arc that would carry flow from neighbour j into i
        // (source tree) or from i into j (sink tree)
        auto feeds = [&](int a0) {
            return sink_tree ? arcs_[a0].r_cap > 0.0 : arcs_[arcs_[a0].sister].r_cap > 0.0;
        };

        int best_arc = kNone;
        int best_d = std::numeric_limits<int>::max();
        for (int a0 = nodes_[i].first; a0 != kNone; a0 = arcs_[a0].next) {
            if (!feeds(a0)) continue;
            const int j = arcs_[a0].head;
            if (nodes_[j].is_sink != sink_tree || nodes_[j].parent == kNone) continue;
            int d = origin_distance(j);
            if (d < 0) continue;
            if (d < best_d) {
                best_arc = a0;
                best_d = d;
            }
            for (int m = j; nodes_[m].ts != time_; m = arcs_[nodes_[m].parent].head) {
                nodes_[m].ts = time_;
                nodes_[m].dist = d--;
            }
        }

        if (best_arc != kNone) {
            nodes_[i].parent = best_arc;
            nodes_[i].ts = time_;
            nodes_[i].dist = best_d + 1;
            return;
        }

        nodes_[i].parent = kNone;
        for (int a0 = nodes_[i].first; a0 != kNone; a0 = arcs_[a0].next) {
            const int j = arcs_[a0].head;
            const int a = nodes_[j].parent;
            if (nodes_[j].is_sink != sink_tree || a == kNone) continue;
            if (feeds(a0)) set_active(j);
            if (a != kTerminal && a != kOrphan && arcs_[a].head == i) set_orphan_rear(j);
        }
    }

    std::vector<Node> nodes_;
    std::vector<Arc> arcs_;
    std::vector<double> src_cap_;
    std::vector<double> sink_cap_;
    std::deque<int> active_;
    std::deque<int> orphans_;
    long time_ = 0;
    double flow_ = 0.0;
};

} // namespace

MaxFlowResult max_flow(const FlowGraph& g) {
    const std::size_t s = g.source();
    const std::size_t t = g.sink();

    // Dense re-indexing of the non-terminal nodes.
    std::vector<int> inner(g.node_count(), -1);
    int count = 0;
    for (std::size_t v = 0; v < g.node_count(); ++v) {
        if (v != s && v != t) inner[v] = count++;
    }

    BkSolver solver(static_cast<std::size_t>(count));
    double direct = 0.0;
    for (const auto& arc : g.arcs()) {
        if (arc.from == arc.to || arc.to == s || arc.from == t) continue;
        if (arc.from == s && arc.to == t) {
            direct += arc.capacity;
        } else if (arc.from == s) {
            solver.add_terminal(inner[arc.to], arc.capacity, 0.0);
        } else if (arc.to == t) {
            solver.add_terminal(inner[arc.from], 0.0, arc.capacity);
        } else {
            solver.add_edge(inner[arc.from], inner[arc.to], arc.capacity);
        }
    }

    MaxFlowResult result;
    result.flow = solver.solve() + direct;

    const auto inner_side = solver.source_set();
    result.source_side.assign(g.node_count(), false);
    result.source_side[s] = true;
    for (std::size_t v = 0; v < g.node_count(); ++v) {
        if (inner[v] >= 0) result.source_side[v] = inner_side[static_cast<std::size_t>(inner[v])];
    }

    for (const auto& arc : g.arcs()) {
        if (!result.source_side[arc.from] || result.source_side[arc.to]) continue;
        if (arc.infinite) {
            throw InternalError("INF arc " + std::to_string(arc.from) + " -> " + std::to_string(arc.to) +
                                " crosses the minimum cut");
        }
        result.cut_capacity += arc.capacity;
    }
    return result;
}

} // namespace tgcut

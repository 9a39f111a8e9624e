#ifndef ANICV_MAXFLOW_HPP
#define ANICV_MAXFLOW_HPP

#include <vector>

namespace anicv {

/// s-t flow network with real capacities. Nodes are 0..n-1; the caller
/// designates source and sink. Deterministic for a fixed arc insertion order.
class FlowNetwork {
public:
    explicit FlowNetwork(int node_count);

    int node_count() const { return static_cast<int>(head_.size()); }
    /// Directed arc u -> v with the given capacity (and a zero-capacity
    /// residual twin). Zero-capacity arcs are accepted and inert.
    void add_arc(int u, int v, double cap);

    /// Exact maximum flow from s to t (Dinic). Safe to call once per network.
    double max_flow(int s, int t);

    /// After max_flow: nodes reachable from s in the residual graph. This is
    /// the source side of the minimal minimum cut.
    std::vector<bool> min_cut_source_side(int s) const;
    /// After max_flow: complement of the nodes that reach t in the residual
    /// graph; source side of the maximal minimum cut.
    std::vector<bool> max_cut_source_side(int t) const;

private:
    struct Arc {
        int to;
        int next;
        double cap;
    };
    std::vector<Arc> arcs_;
    std::vector<int> head_;
    std::vector<int> level_, iter_;

    bool bfs(int s, int t);
    double dfs(int u, int t, double pushed);

    static constexpr double kResidualEps = 1e-12;
};

} // namespace anicv

#endif

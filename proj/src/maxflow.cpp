#include "anicv/maxflow.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace anicv {

FlowNetwork::FlowNetwork(int node_count) : head_(node_count, -1) {
    if (node_count < 2) throw std::invalid_argument("network needs at least two nodes");
}

void FlowNetwork::add_arc(int u, int v, double cap) {
    if (u < 0 || v < 0 || u >= node_count() || v >= node_count() || u == v)
        throw std::invalid_argument("bad arc endpoints");
    if (cap < 0) throw std::invalid_argument("arc capacity must be non-negative");
    arcs_.push_back({v, head_[u], cap});
    head_[u] = static_cast<int>(arcs_.size()) - 1;
    arcs_.push_back({u, head_[v], 0.0});
    head_[v] = static_cast<int>(arcs_.size()) - 1;
}

bool FlowNetwork::bfs(int s, int t) {
    level_.assign(node_count(), -1);
    level_[s] = 0;
    std::vector<int> queue = {s};
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        int u = queue[qi];
        for (int a = head_[u]; a >= 0; a = arcs_[a].next) {
            if (arcs_[a].cap > kResidualEps && level_[arcs_[a].to] < 0) {
                level_[arcs_[a].to] = level_[u] + 1;
                queue.push_back(arcs_[a].to);
            }
        }
    }
    return level_[t] >= 0;
}

double FlowNetwork::dfs(int u, int t, double pushed) {
    if (u == t) return pushed;
    for (int& a = iter_[u]; a >= 0; a = arcs_[a].next) {
        Arc& arc = arcs_[a];
        if (arc.cap > kResidualEps && level_[arc.to] == level_[u] + 1) {
            double got = dfs(arc.to, t, std::min(pushed, arc.cap));
            if (got > 0) {
                arc.cap -= got;
                arcs_[a ^ 1].cap += got;
                return got;
            }
        }
    }
    return 0;
}

double FlowNetwork::max_flow(int s, int t) {
    if (s == t) throw std::invalid_argument("source equals sink");
    double flow = 0;
    while (bfs(s, t)) {
        iter_ = head_;
        while (double pushed = dfs(s, t, std::numeric_limits<double>::infinity()))
            flow += pushed;
    }
    return flow;
}

std::vector<bool> FlowNetwork::min_cut_source_side(int s) const {
    std::vector<bool> seen(node_count(), false);
    seen[s] = true;
    std::vector<int> queue = {s};
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        int u = queue[qi];
        for (int a = head_[u]; a >= 0; a = arcs_[a].next)
            if (arcs_[a].cap > kResidualEps && !seen[arcs_[a].to]) {
                seen[arcs_[a].to] = true;
                queue.push_back(arcs_[a].to);
            }
    }
    return seen;
}

std::vector<bool> FlowNetwork::max_cut_source_side(int t) const {
    // Backward reachability to t over arcs with residual capacity.
    std::vector<bool> reaches_t(node_count(), false);
    reaches_t[t] = true;
    std::vector<int> queue = {t};
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        int u = queue[qi];
        for (int a = head_[u]; a >= 0; a = arcs_[a].next) {
            // Arc (u -> to) in storage pairs with its twin (to -> u) at a^1;
            // `to` reaches t through that twin iff the twin has residual capacity.
            int v = arcs_[a].to;
            if (!reaches_t[v] && arcs_[a ^ 1].cap > kResidualEps) {
                reaches_t[v] = true;
                queue.push_back(v);
            }
        }
    }
    std::vector<bool> side(node_count());
    for (int i = 0; i < node_count(); ++i) side[i] = !reaches_t[i];
    return side;
}

} // namespace anicv

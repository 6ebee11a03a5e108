#include "clusterforge/graphs.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "clusterforge/errors.hpp"

namespace clusterforge {

bool is_connected(const EdgeSet& g) {
    if (g.n <= 1) return true;
    std::vector<std::vector<int>> adj(g.n);
    for (auto [i, j] : g.edges) {
        adj[i].push_back(j);
        adj[j].push_back(i);
    }
    std::vector<char> seen(g.n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : adj[v]) {
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                stack.push_back(w);
            }
        }
    }
    return count == g.n;
}

ConnectedGraphStream::ConnectedGraphStream(int n) : n_(n) {
    if (n < 1 || n > kMaxVertices)
        throw capacity_error("connected-graph enumeration supports 1 <= n <= 9");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            slots_.emplace_back(i, j);
    end_ = std::uint64_t{1} << slots_.size();
}

std::optional<EdgeSet> ConnectedGraphStream::next() {
    while (!done_) {
        std::uint64_t m = mask_;
        if (++mask_ == end_) done_ = true;
        EdgeSet g{n_, {}};
        for (std::size_t s = 0; s < slots_.size(); ++s)
            if (m >> s & 1) g.edges.push_back(slots_[s]);
        if (is_connected(g)) return g;
    }
    return std::nullopt;
}

TreeStream::TreeStream(int n) : n_(n) {
    if (n < 1 || n > kMaxVertices)
        throw capacity_error("tree enumeration supports 1 <= n <= 10");
    reset();
}

void TreeStream::reset() {
    done_ = false;
    pruefer_.assign(std::max(0, n_ - 2), 0);
}

EdgeSet TreeStream::decode() const {
    EdgeSet g{n_, {}};
    if (n_ == 1) return g;
    std::vector<int> degree(n_, 1);
    for (int v : pruefer_) ++degree[v];
    std::set<int> leaves;
    for (int v = 0; v < n_; ++v)
        if (degree[v] == 1) leaves.insert(v);
    for (int v : pruefer_) {
        int leaf = *leaves.begin();
        leaves.erase(leaves.begin());
        g.edges.emplace_back(std::min(leaf, v), std::max(leaf, v));
        if (--degree[v] == 1) leaves.insert(v);
    }
    int a = *leaves.begin();
    int b = *std::next(leaves.begin());
    g.edges.emplace_back(std::min(a, b), std::max(a, b));
    std::sort(g.edges.begin(), g.edges.end());
    return g;
}

bool TreeStream::advance() {
    for (int k = static_cast<int>(pruefer_.size()) - 1; k >= 0; --k) {
        if (++pruefer_[k] < n_) return true;
        pruefer_[k] = 0;
    }
    return false;
}

std::optional<EdgeSet> TreeStream::next() {
    if (done_) return std::nullopt;
    EdgeSet g = decode();
    if (!advance()) done_ = true;
    return g;
}

RootedForestStream::RootedForestStream(std::vector<int> roots, std::vector<int> others)
    : roots_(std::move(roots)), others_(std::move(others)) {
    if (roots_.empty()) throw std::invalid_argument("root set must be nonempty");
    std::sort(roots_.begin(), roots_.end());
    std::sort(others_.begin(), others_.end());
    for (int r : roots_)
        if (std::binary_search(others_.begin(), others_.end(), r))
            throw std::invalid_argument("root and non-root sets must be disjoint");
    if (roots_.size() + others_.size() > kMaxVertices)
        throw capacity_error("rooted-forest enumeration supports |I|+|J| <= 10");
    std::vector<int> all(roots_);
    all.insert(all.end(), others_.begin(), others_.end());
    std::sort(all.begin(), all.end());
    n_labels_ = all.empty() ? 0 : all.back() + 1;
    for (int j : others_) {
        std::vector<int> cand;
        for (int v : all)
            if (v != j) cand.push_back(v);
        candidates_.push_back(std::move(cand));
    }
    reset();
}

void RootedForestStream::reset() {
    done_ = false;
    first_ = true;
    choice_.assign(others_.size(), 0);
}

bool RootedForestStream::acyclic() const {
    // Follow parents from each vertex of J; a walk that never reaches a root
    // is trapped in a cycle within J.
    for (std::size_t start = 0; start < others_.size(); ++start) {
        std::size_t cur = start;
        for (std::size_t steps = 0; steps <= others_.size(); ++steps) {
            int parent = candidates_[cur][choice_[cur]];
            auto it = std::lower_bound(others_.begin(), others_.end(), parent);
            if (it == others_.end() || *it != parent) break; // reached a root
            cur = static_cast<std::size_t>(it - others_.begin());
            if (steps == others_.size()) return false;
        }
    }
    return true;
}

EdgeSet RootedForestStream::build() const {
    EdgeSet g{n_labels_, {}};
    for (std::size_t k = 0; k < others_.size(); ++k) {
        int j = others_[k];
        int p = candidates_[k][choice_[k]];
        g.edges.emplace_back(std::min(j, p), std::max(j, p));
    }
    std::sort(g.edges.begin(), g.edges.end());
    return g;
}

bool RootedForestStream::advance() {
    for (int k = static_cast<int>(choice_.size()) - 1; k >= 0; --k) {
        if (++choice_[k] < static_cast<int>(candidates_[k].size())) return true;
        choice_[k] = 0;
    }
    return false;
}

std::optional<EdgeSet> RootedForestStream::next() {
    if (done_) return std::nullopt;
    if (others_.empty()) {
        done_ = true;
        return EdgeSet{n_labels_, {}};
    }
    for (;;) {
        if (!first_ && !advance()) {
            done_ = true;
            return std::nullopt;
        }
        first_ = false;
        if (acyclic()) return build();
    }
}

} // namespace clusterforge

#ifndef CLUSTERFORGE_GRAPHS_HPP
#define CLUSTERFORGE_GRAPHS_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace clusterforge {

// A simple undirected graph on vertices 0..n-1, stored as a sorted edge list
// with i < j for each edge. No self-loops, no duplicates.
struct EdgeSet {
    int n = 0;
    std::vector<std::pair<int, int>> edges;

    bool operator==(const EdgeSet&) const = default;
};

bool is_connected(const EdgeSet& g);

// Streams each connected graph on {0..n-1} exactly once, in increasing order
// of the edge bitstring (edge slots ordered (0,1),(0,2),...,(n-2,n-1)).
// Restartable; state is instance-local.
class ConnectedGraphStream {
public:
    static constexpr int kMaxVertices = 9;

    explicit ConnectedGraphStream(int n);

    std::optional<EdgeSet> next();
    void reset() { mask_ = 0; done_ = false; }

private:
    int n_;
    std::uint64_t mask_ = 0;
    std::uint64_t end_ = 0;
    bool done_ = false;
    std::vector<std::pair<int, int>> slots_;
};

// Streams each labeled tree on {0..n-1} exactly once. Order is lexicographic
// on the Pruefer sequence (plain edge-subset order would force scanning all
// 2^(n(n-1)/2) masks, which the n=10 cap rules out).
class TreeStream {
public:
    static constexpr int kMaxVertices = 10;

    explicit TreeStream(int n);

    std::optional<EdgeSet> next();
    void reset();

private:
    int n_;
    bool done_ = false;
    std::vector<int> pruefer_; // n-2 entries in 0..n-1

    EdgeSet decode() const;
    bool advance();
};

// Streams each forest on I ∪ J in which every tree contains exactly one
// vertex of I (the roots). Vertices are arbitrary labels; the EdgeSet uses
// n = max label + 1. Enumeration walks parent assignments of J lexicographically.
class RootedForestStream {
public:
    static constexpr int kMaxVertices = 10;

    RootedForestStream(std::vector<int> roots, std::vector<int> others);

    std::optional<EdgeSet> next();
    void reset();

private:
    std::vector<int> roots_;
    std::vector<int> others_;
    std::vector<std::vector<int>> candidates_; // parent choices per element of others_
    int n_labels_ = 0;
    bool done_ = false;
    bool first_ = true;
    std::vector<int> choice_; // index into candidates per element of others_

    bool acyclic() const;
    EdgeSet build() const;
    bool advance();
};

} // namespace clusterforge

#endif

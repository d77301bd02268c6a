#ifndef BIHULL_GRAPH_HPP
#define BIHULL_GRAPH_HPP

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bihull/errors.hpp"
#include "bihull/prng.hpp"
#include "bihull/rational.hpp"

namespace bihull {

struct Edge {
    int i = 0;  // i <= j, vertices are 1-based
    int j = 0;
    Rat weight;
};

/// Edge-weighted graph; equivalently the bilinear function
/// f(x) = sum over edges of a_ij x_i x_j. Loops (i == i) are admitted only in
/// QP mode, where a_ii carries a squared term. Immutable after construction.
class WeightedGraph {
public:
    WeightedGraph() = default;

    static WeightedGraph from_edge_list(int n, std::vector<Edge> edges, bool allow_loops = false) {
        if (n < 0) fail(Errc::IndexOutOfRange, "negative vertex count");
        std::set<std::pair<int, int>> seen;
        for (auto& e : edges) {
            e.weight.canonicalize();
            if (e.i > e.j) std::swap(e.i, e.j);
            if (e.i < 1 || e.j > n) fail(Errc::IndexOutOfRange, "edge endpoint out of range");
            if (e.i == e.j && !allow_loops) fail(Errc::IndexOutOfRange, "loop edge without loop mode");
            if (e.weight == 0) fail(Errc::ZeroWeight, "zero edge weight");
            if (!seen.insert({e.i, e.j}).second) fail(Errc::DuplicateEdge, "duplicate edge");
        }
        std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
            return std::pair(a.i, a.j) < std::pair(b.i, b.j);
        });
        WeightedGraph g;
        g.n_ = n;
        g.edges_ = std::move(edges);
        g.allow_loops_ = allow_loops;
        return g;
    }

    int n() const { return n_; }
    int m() const { return static_cast<int>(edges_.size()); }
    bool allow_loops() const { return allow_loops_; }
    const std::vector<Edge>& edges() const { return edges_; }

    bool has_edge(int i, int j) const {
        if (i > j) std::swap(i, j);
        return std::binary_search(edges_.begin(), edges_.end(), std::pair(i, j),
                                  [](const auto& a, const auto& b) {
                                      auto key = [](const auto& e) {
                                          if constexpr (std::is_same_v<std::decay_t<decltype(e)>, Edge>)
                                              return std::pair(e.i, e.j);
                                          else
                                              return e;
                                      };
                                      return key(a) < key(b);
                                  });
    }

    const Rat* weight(int i, int j) const {
        if (i > j) std::swap(i, j);
        auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair(i, j),
                                   [](const Edge& e, const std::pair<int, int>& k) {
                                       return std::pair(e.i, e.j) < k;
                                   });
        if (it == edges_.end() || std::pair(it->i, it->j) != std::pair(i, j)) return nullptr;
        return &it->weight;
    }

    std::vector<std::vector<int>> adjacency() const {
        std::vector<std::vector<int>> adj(n_ + 1);
        for (const auto& e : edges_) {
            if (e.i == e.j) continue;
            adj[e.i].push_back(e.j);
            adj[e.j].push_back(e.i);
        }
        for (auto& row : adj) std::sort(row.begin(), row.end());
        return adj;
    }

private:
    int n_ = 0;
    std::vector<Edge> edges_;
    bool allow_loops_ = false;
};

/// A point of the box [0,1]^n.
struct PointX {
    std::vector<Rat> x;

    PointX() = default;
    explicit PointX(std::vector<Rat> coords) : x(std::move(coords)) {
        for (auto& xi : x) {
            xi.canonicalize();
            if (xi < 0 || xi > 1) fail(Errc::IndexOutOfRange, "coordinate outside [0,1]");
        }
    }
    int dim() const { return static_cast<int>(x.size()); }
    const Rat& operator[](int i) const { return x[static_cast<std::size_t>(i) - 1]; }  // 1-based
};

inline Rat evaluate(const WeightedGraph& g, const PointX& p) {
    if (p.dim() != g.n()) fail(Errc::DimensionMismatch, "point dimension != vertex count");
    Rat v = 0;
    for (const auto& e : g.edges()) v += e.weight * p[e.i] * p[e.j];
    return v;
}

inline Rat evaluate_bits(const WeightedGraph& g, std::uint32_t bits) {
    Rat v = 0;
    for (const auto& e : g.edges())
        if ((bits >> (e.i - 1) & 1u) && (bits >> (e.j - 1) & 1u)) v += e.weight;
    return v;
}

/// Sign data of a chordless cycle C_n in the paper's indexing: edge i joins
/// vertices i and i+1 (edge n joins 1 and n). e_plus/e_minus partition edge
/// indices by weight sign; v_plus/v_minus hold the junction vertices where two
/// positive (resp. two negative) edges meet.
struct SignPartition {
    std::vector<int> e_plus, e_minus;
    std::vector<int> v_plus, v_minus;
    std::vector<int> d_set;  // odd subset chosen for the cycle inequality, when any
};

/// Requires the literal C_n layout: vertices 1..n, edges {i,i+1} and {1,n}.
inline std::vector<Rat> cycle_weights(const WeightedGraph& g) {
    int n = g.n();
    if (n < 3 || g.m() != n) fail(Errc::NotACycle, "not a C_n edge set");
    std::vector<Rat> a(static_cast<std::size_t>(n) + 1);  // 1-based, a[i] on edge {i, i+1 mod n}
    for (int i = 1; i < n; ++i) {
        const Rat* w = g.weight(i, i + 1);
        if (!w) fail(Errc::NotACycle, "missing cycle edge");
        a[static_cast<std::size_t>(i)] = *w;
    }
    const Rat* w = g.weight(1, n);
    if (!w) fail(Errc::NotACycle, "missing closing edge");
    a[static_cast<std::size_t>(n)] = *w;
    return a;
}

inline SignPartition sign_partition(const WeightedGraph& g) {
    auto a = cycle_weights(g);
    int n = g.n();
    SignPartition sp;
    for (int i = 1; i <= n; ++i) (a[static_cast<std::size_t>(i)] > 0 ? sp.e_plus : sp.e_minus).push_back(i);
    auto sign_of = [&](int edge) { return a[static_cast<std::size_t>(edge)] > 0; };
    for (int v = 1; v <= n; ++v) {
        int in_edge = (v == 1) ? n : v - 1;  // edge {v-1, v}
        int out_edge = v;                    // edge {v, v+1}
        if (sign_of(in_edge) && sign_of(out_edge)) sp.v_plus.push_back(v);
        if (!sign_of(in_edge) && !sign_of(out_edge)) sp.v_minus.push_back(v);
    }
    return sp;
}

/// G(n, p) with independent N(0,1) weights, converted exactly to dyadic
/// rationals so everything downstream stays exact. Reproducible from the seed.
inline WeightedGraph erdos_renyi(int n, double p, std::uint64_t seed) {
    if (!(p > 0.0 && p < 1.0)) fail(Errc::IndexOutOfRange, "p must lie strictly between 0 and 1");
    Prng rng(seed);
    std::vector<Edge> edges;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            if (rng.unit() < p) {
                double w;
                do {
                    w = rng.normal();
                } while (w == 0.0);
                edges.push_back({i, j, rat_from_double(w)});
            }
    return WeightedGraph::from_edge_list(n, std::move(edges));
}

// --- edge-list text format: "n m" then m lines "i j num/den" ---

inline void write_edge_list(std::ostream& os, const WeightedGraph& g) {
    os << g.n() << " " << g.m() << "\n";
    for (const auto& e : g.edges()) os << e.i << " " << e.j << " " << e.weight.get_str() << "\n";
}

inline WeightedGraph read_edge_list(std::istream& is, bool allow_loops = false) {
    int n, m;
    if (!(is >> n >> m)) fail(Errc::ParseError, "expected header 'n m'");
    std::vector<Edge> edges;
    for (int k = 0; k < m; ++k) {
        int i, j;
        std::string w;
        if (!(is >> i >> j >> w)) fail(Errc::ParseError, "truncated edge list");
        edges.push_back({i, j, parse_rational(w)});
    }
    return WeightedGraph::from_edge_list(n, std::move(edges), allow_loops);
}

// --- stock graphs used throughout ---

inline WeightedGraph complete_graph(int n, const Rat& w = 1) {
    std::vector<Edge> edges;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) edges.push_back({i, j, w});
    return WeightedGraph::from_edge_list(n, std::move(edges));
}

/// K_n minus the edge {n-1, n}.
inline WeightedGraph almost_complete_graph(int n, const Rat& w = 1) {
    std::vector<Edge> edges;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            if (!(i == n - 1 && j == n)) edges.push_back({i, j, w});
    return WeightedGraph::from_edge_list(n, std::move(edges));
}

/// C_n with weight a[i] on edge {i, i+1} (a is 1-based, a[n] on {1, n}).
inline WeightedGraph cycle_graph(const std::vector<Rat>& a1based) {
    int n = static_cast<int>(a1based.size()) - 1;
    std::vector<Edge> edges;
    for (int i = 1; i < n; ++i) edges.push_back({i, i + 1, a1based[static_cast<std::size_t>(i)]});
    edges.push_back({1, n, a1based[static_cast<std::size_t>(n)]});
    return WeightedGraph::from_edge_list(n, std::move(edges));
}

/// Wheel W_n: cycle 1..n plus spokes to hub n+1.
inline WeightedGraph wheel_graph(int n, const Rat& w = 1) {
    std::vector<Edge> edges;
    for (int i = 1; i < n; ++i) edges.push_back({i, i + 1, w});
    edges.push_back({1, n, w});
    for (int i = 1; i <= n; ++i) edges.push_back({i, n + 1, w});
    return WeightedGraph::from_edge_list(n + 1, std::move(edges));
}

}  // namespace bihull

#endif

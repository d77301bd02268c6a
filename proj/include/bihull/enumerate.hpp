#ifndef BIHULL_ENUMERATE_HPP
#define BIHULL_ENUMERATE_HPP

#include <functional>
#include <vector>

#include "bihull/graph.hpp"

namespace bihull {

/// Streams every clique with size in [k_min, k_max], each exactly once, as a
/// sorted vertex vector in lexicographic order. Memory stays O(k_max).
template <typename Fn>
void for_each_clique(const WeightedGraph& g, int k_min, int k_max, Fn&& yield) {
    if (k_min < 3 || k_min > k_max || k_max > g.n())
        fail(Errc::IndexOutOfRange, "clique size range must satisfy 3 <= k_min <= k_max <= n");
    auto adj = g.adjacency();
    std::vector<int> current;
    std::vector<std::vector<int>> candidates(1);
    for (int v = 1; v <= g.n(); ++v) candidates[0].push_back(v);

    std::function<void(int)> grow = [&](int depth) {
        for (std::size_t idx = 0; idx < candidates[static_cast<std::size_t>(depth)].size(); ++idx) {
            int v = candidates[static_cast<std::size_t>(depth)][idx];
            current.push_back(v);
            if (static_cast<int>(current.size()) >= k_min) yield(const_cast<const std::vector<int>&>(current));
            if (static_cast<int>(current.size()) < k_max) {
                if (static_cast<int>(candidates.size()) <= depth + 1) candidates.emplace_back();
                auto& next = candidates[static_cast<std::size_t>(depth) + 1];
                next.clear();
                // extensions: common neighbors of `current` beyond v, kept sorted
                const auto& pool = candidates[static_cast<std::size_t>(depth)];
                const auto& nb = adj[static_cast<std::size_t>(v)];
                std::size_t pi = idx + 1, ni = 0;
                while (pi < pool.size() && ni < nb.size()) {
                    if (pool[pi] == nb[ni]) {
                        next.push_back(pool[pi]);
                        ++pi;
                        ++ni;
                    } else if (pool[pi] < nb[ni]) {
                        ++pi;
                    } else {
                        ++ni;
                    }
                }
                grow(depth + 1);
            }
            current.pop_back();
        }
    };
    grow(0);
}

inline std::vector<std::vector<int>> enumerate_cliques(const WeightedGraph& g, int k_min, int k_max) {
    std::vector<std::vector<int>> out;
    for_each_clique(g, k_min, k_max, [&](const std::vector<int>& q) { out.push_back(q); });
    return out;
}

/// Streams every simple cycle with length in [k_min, k_max] exactly once, as
/// a canonical vertex sequence: smallest vertex first, smaller of its two
/// cycle neighbors second.
template <typename Fn>
void for_each_cycle_impl(const WeightedGraph& g, int k_min, int k_max, Fn&& yield) {
    auto adj = g.adjacency();
    int n = g.n();
    std::vector<int> path;
    std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);

    std::function<void(int, int)> extend = [&](int root, int v) {
        for (int w : adj[static_cast<std::size_t>(v)]) {
            if (w == root && static_cast<int>(path.size()) >= k_min) {
                if (path[1] < path.back()) yield(const_cast<const std::vector<int>&>(path));
            }
            if (w <= root || used[static_cast<std::size_t>(w)]) continue;
            if (static_cast<int>(path.size()) >= k_max) continue;
            used[static_cast<std::size_t>(w)] = true;
            path.push_back(w);
            extend(root, w);
            path.pop_back();
            used[static_cast<std::size_t>(w)] = false;
        }
    };

    for (int root = 1; root <= n; ++root) {
        path.assign(1, root);
        used[static_cast<std::size_t>(root)] = true;
        extend(root, root);
        used[static_cast<std::size_t>(root)] = false;
    }
}

template <typename Fn>
void for_each_cycle(const WeightedGraph& g, int k_min, int k_max, Fn&& yield) {
    if (k_min < 4 || k_min > k_max || k_max > g.n())
        fail(Errc::IndexOutOfRange, "cycle length range must satisfy 4 <= k_min <= k_max <= n");
    for_each_cycle_impl(g, k_min, k_max, yield);
}

inline std::vector<std::vector<int>> enumerate_cycles(const WeightedGraph& g, int k_min, int k_max) {
    std::vector<std::vector<int>> out;
    for_each_cycle(g, k_min, k_max, [&](const std::vector<int>& c) { out.push_back(c); });
    return out;
}

}  // namespace bihull

#endif

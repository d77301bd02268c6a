#ifndef BIHULL_FAMILIES_HPP
#define BIHULL_FAMILIES_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bihull/constraints.hpp"
#include "bihull/enumerate.hpp"
#include "bihull/graph.hpp"

namespace bihull {

// ---------------------------------------------------------------- McCormick

inline std::vector<LinearConstraint> mccormick(int i, int j) {
    if (i > j) std::swap(i, j);
    const auto X = [](int v) { return VarRef::X(v); };
    const auto Y = [](int a, int b) { return VarRef::Y(a, b); };
    std::vector<LinearConstraint> out;
    out.push_back(LinearConstraint::make({{Y(i, j), Rat(-1)}}, Rat(0), {"mccormick", {i, j, 1}}));
    out.push_back(LinearConstraint::make({{Y(i, j), Rat(1)}, {X(i), Rat(-1)}}, Rat(0), {"mccormick", {i, j, 2}}));
    out.push_back(LinearConstraint::make({{Y(i, j), Rat(1)}, {X(j), Rat(-1)}}, Rat(0), {"mccormick", {i, j, 3}}));
    if (i == j)
        out.push_back(LinearConstraint::make({{X(i), Rat(2)}, {Y(i, j), Rat(-1)}}, Rat(1), {"mccormick", {i, j, 4}}));
    else
        out.push_back(LinearConstraint::make({{X(i), Rat(1)}, {X(j), Rat(1)}, {Y(i, j), Rat(-1)}}, Rat(1),
                                             {"mccormick", {i, j, 4}}));
    return out;
}

// ----------------------------------------------------------------- triangle

inline std::vector<LinearConstraint> triangle(int i, int j, int k) {
    if (i == j || i == k || j == k) fail(Errc::IndexOutOfRange, "triangle needs distinct vertices");
    const auto X = [](int v) { return VarRef::X(v); };
    const auto Y = [](int a, int b) { return VarRef::Y(a, b); };
    std::vector<LinearConstraint> out;
    out.push_back(LinearConstraint::make(
        {{X(i), Rat(1)}, {X(j), Rat(1)}, {X(k), Rat(1)}, {Y(i, j), Rat(-1)}, {Y(i, k), Rat(-1)}, {Y(j, k), Rat(-1)}},
        Rat(1), {"triangle", {i, j, k, 1}}));
    out.push_back(LinearConstraint::make(
        {{X(i), Rat(-1)}, {Y(i, j), Rat(1)}, {Y(i, k), Rat(1)}, {Y(j, k), Rat(-1)}}, Rat(0),
        {"triangle", {i, j, k, 2}}));
    out.push_back(LinearConstraint::make(
        {{X(j), Rat(-1)}, {Y(i, j), Rat(1)}, {Y(i, k), Rat(-1)}, {Y(j, k), Rat(1)}}, Rat(0),
        {"triangle", {i, j, k, 3}}));
    out.push_back(LinearConstraint::make(
        {{X(k), Rat(-1)}, {Y(i, j), Rat(-1)}, {Y(i, k), Rat(1)}, {Y(j, k), Rat(1)}}, Rat(0),
        {"triangle", {i, j, k, 4}}));
    return out;
}

// ------------------------------------------------------------------- clique

/// alpha * x(S) - y(E(S)) <= alpha(alpha+1)/2 over the full pair universe of S.
inline LinearConstraint clique_inequality(const std::vector<int>& S, int alpha) {
    if (static_cast<int>(S.size()) < 3) fail(Errc::BadAlpha, "clique set needs |S| >= 3");
    if (alpha < 1 || alpha > static_cast<int>(S.size()) - 2) fail(Errc::BadAlpha, "alpha outside 1..|S|-2");
    std::map<VarRef, Rat> terms;
    for (int v : S) terms[VarRef::X(v)] += alpha;
    for (std::size_t a = 0; a < S.size(); ++a)
        for (std::size_t b = a + 1; b < S.size(); ++b) terms[VarRef::Y(S[a], S[b])] += Rat(-1);
    ConstraintLabel label{"clique", {alpha}};
    label.params.insert(label.params.end(), S.begin(), S.end());
    return LinearConstraint::make(terms, rat(static_cast<long>(alpha) * (alpha + 1), 2), std::move(label));
}

// ---------------------------------------------------------------------- cut

namespace detail {
inline void check_cut_sets(const std::vector<int>& S, const std::vector<int>& T) {
    if (S.empty() || static_cast<int>(T.size()) < 2) fail(Errc::Overlap, "cut needs |S| >= 1, |T| >= 2");
    std::set<int> s(S.begin(), S.end());
    for (int v : T)
        if (s.count(v)) fail(Errc::Overlap, "cut sets overlap");
}

inline void add_pairs(std::map<VarRef, Rat>& terms, const std::vector<int>& A, const Rat& c) {
    for (std::size_t a = 0; a < A.size(); ++a)
        for (std::size_t b = a + 1; b < A.size(); ++b) terms[VarRef::Y(A[a], A[b])] += c;
}

inline void add_cross(std::map<VarRef, Rat>& terms, const std::vector<int>& A, const std::vector<int>& B,
                      const Rat& c) {
    for (int u : A)
        for (int v : B) terms[VarRef::Y(u, v)] += c;
}

inline ConstraintLabel two_set_label(std::string family, const std::vector<int>& S, const std::vector<int>& T) {
    ConstraintLabel label{std::move(family), {}};
    label.params.insert(label.params.end(), S.begin(), S.end());
    label.params.push_back(0);  // separator; vertices are 1-based
    label.params.insert(label.params.end(), T.begin(), T.end());
    return label;
}
}  // namespace detail

/// -x(S) - y(E(S)) + y(E(S:T)) - y(E(T)) <= 0.
inline LinearConstraint cut_inequality(const std::vector<int>& S, const std::vector<int>& T) {
    detail::check_cut_sets(S, T);
    std::map<VarRef, Rat> terms;
    for (int v : S) terms[VarRef::X(v)] += Rat(-1);
    detail::add_pairs(terms, S, Rat(-1));
    detail::add_cross(terms, S, T, Rat(1));
    detail::add_pairs(terms, T, Rat(-1));
    return LinearConstraint::make(terms, Rat(0), detail::two_set_label("cut", S, T));
}

/// (s-t) x(S) + (t-s-1) x(T) - y(E(S)) + y(E(S:T)) - y(E(T)) <= (t-s)(t-s-1)/2.
inline LinearConstraint generalized_cut(const std::vector<int>& S, const std::vector<int>& T) {
    detail::check_cut_sets(S, T);
    long s = static_cast<long>(S.size()), t = static_cast<long>(T.size());
    std::map<VarRef, Rat> terms;
    for (int v : S) terms[VarRef::X(v)] += Rat(s - t);
    for (int v : T) terms[VarRef::X(v)] += Rat(t - s - 1);
    detail::add_pairs(terms, S, Rat(-1));
    detail::add_cross(terms, S, T, Rat(1));
    detail::add_pairs(terms, T, Rat(-1));
    return LinearConstraint::make(terms, rat((t - s) * (t - s - 1), 2), detail::two_set_label("gcut", S, T));
}

// ---------------------------------------------------------------- odd cycle

/// Edge list of the cycle through `seq` in order (closing edge included).
inline std::vector<std::pair<int, int>> cycle_edges_of(const std::vector<int>& seq) {
    std::vector<std::pair<int, int>> edges;
    for (std::size_t k = 0; k < seq.size(); ++k) {
        int u = seq[k], v = seq[(k + 1) % seq.size()];
        edges.emplace_back(std::min(u, v), std::max(u, v));
    }
    return edges;
}

/// x(V0) - x(V1) + y(C\D) - y(D) <= (|D|-1)/2, where V0 collects the vertices
/// where two D-edges meet and V1 those where two non-D edges meet. D is given
/// by positions into C and must have odd size.
inline LinearConstraint odd_cycle(const std::vector<std::pair<int, int>>& C, const std::vector<int>& d_positions) {
    if (C.size() < 3) fail(Errc::NotACycle, "cycle needs at least 3 edges");
    std::map<int, std::vector<std::size_t>> incident;
    for (std::size_t k = 0; k < C.size(); ++k) {
        auto [u, v] = C[k];
        if (u == v) fail(Errc::NotACycle, "loop edge in cycle");
        incident[u].push_back(k);
        incident[v].push_back(k);
    }
    for (const auto& [v, inc] : incident) {
        (void)v;
        if (inc.size() != 2) fail(Errc::NotACycle, "vertex degree != 2 in cycle");
    }
    if (incident.size() != C.size()) fail(Errc::NotACycle, "edge/vertex count mismatch");
    // connectivity: walk from edge 0
    {
        std::set<std::size_t> seen{0};
        int cur = C[0].second, start = C[0].first;
        std::size_t cur_edge = 0;
        while (cur != start) {
            const auto& inc = incident[cur];
            std::size_t next = inc[0] == cur_edge ? inc[1] : inc[0];
            cur = C[next].first == cur ? C[next].second : C[next].first;
            cur_edge = next;
            if (!seen.insert(next).second) fail(Errc::NotACycle, "disconnected cycle edges");
        }
        if (seen.size() != C.size()) fail(Errc::NotACycle, "cycle edges form more than one cycle");
    }
    std::vector<bool> in_d(C.size(), false);
    for (int p : d_positions) {
        if (p < 0 || p >= static_cast<int>(C.size())) fail(Errc::IndexOutOfRange, "D position outside cycle");
        if (in_d[static_cast<std::size_t>(p)]) fail(Errc::IndexOutOfRange, "duplicate D position");
        in_d[static_cast<std::size_t>(p)] = true;
    }
    if (d_positions.size() % 2 == 0) fail(Errc::EvenD, "|D| must be odd");

    std::map<VarRef, Rat> terms;
    for (const auto& [v, inc] : incident) {
        bool a = in_d[inc[0]], b = in_d[inc[1]];
        if (a && b) terms[VarRef::X(v)] += Rat(1);
        if (!a && !b) terms[VarRef::X(v)] += Rat(-1);
    }
    for (std::size_t k = 0; k < C.size(); ++k)
        terms[VarRef::Y(C[k].first, C[k].second)] += in_d[k] ? Rat(-1) : Rat(1);

    ConstraintLabel label{"odd-cycle", {}};
    for (const auto& [u, v] : C) {
        label.params.push_back(u);
        label.params.push_back(v);
    }
    label.params.push_back(0);
    for (int p : d_positions) label.params.push_back(p + 1);
    return LinearConstraint::make(terms, rat(static_cast<long>(d_positions.size()) - 1, 2), std::move(label));
}

// ------------------------------------------------- cycle inequalities (pair)

enum class CycleVertexSemantics { Junction, Literal };

/// The two cycle inequalities for a cycle visiting `seq` inside g, emitted
/// only when the corresponding sign class has odd cardinality: D = negative
/// edges for the first, D = positive edges for the second.
inline std::vector<LinearConstraint> cycle_pair_for_sequence(const WeightedGraph& g, const std::vector<int>& seq) {
    auto C = cycle_edges_of(seq);
    std::vector<int> neg, pos;
    for (std::size_t k = 0; k < C.size(); ++k) {
        const Rat* w = g.weight(C[k].first, C[k].second);
        if (!w) fail(Errc::NotACycle, "cycle uses a missing edge");
        (*w < 0 ? neg : pos).push_back(static_cast<int>(k));
    }
    std::vector<LinearConstraint> out;
    if (neg.size() % 2 == 1) {
        auto c = odd_cycle(C, neg);
        c.label.family = "cycle-1";
        out.push_back(std::move(c));
    }
    if (pos.size() % 2 == 1) {
        auto c = odd_cycle(C, pos);
        c.label.family = "cycle-2";
        out.push_back(std::move(c));
    }
    return out;
}

/// Theorem pair for a standalone C_n in the paper's labeling. The Junction
/// semantics realizes both rows through the odd-cycle family with D = E^-
/// (resp. E^+); Literal uses the verbatim V^± = {i : {i-1,i} in E^±} sets (it
/// is kept behind this flag for comparison; tests show it is not valid).
inline std::vector<LinearConstraint> cycle_theorem_pair(const WeightedGraph& g,
                                                        CycleVertexSemantics semantics = CycleVertexSemantics::Junction) {
    auto a = cycle_weights(g);  // validates the C_n shape
    int n = g.n();
    std::vector<int> seq(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) seq[static_cast<std::size_t>(i)] = i + 1;
    if (semantics == CycleVertexSemantics::Junction) return cycle_pair_for_sequence(g, seq);

    auto sp = sign_partition(g);
    std::vector<int> v_minus_lit, v_plus_lit;
    for (int v = 1; v <= n; ++v) {
        int in_edge = (v == 1) ? n : v - 1;
        (a[static_cast<std::size_t>(in_edge)] < 0 ? v_minus_lit : v_plus_lit).push_back(v);
    }
    auto build = [&](const std::vector<int>& vpos, const std::vector<int>& vneg, const std::vector<int>& eplus,
                     const std::vector<int>& eminus, long bound, const char* name) {
        std::map<VarRef, Rat> terms;
        for (int v : vpos) terms[VarRef::X(v)] += Rat(1);
        for (int v : vneg) terms[VarRef::X(v)] += Rat(-1);
        auto edge_pair = [&](int e) { return e < n ? std::pair(e, e + 1) : std::pair(1, n); };
        for (int e : eplus) terms[VarRef::Y(edge_pair(e).first, edge_pair(e).second)] += Rat(1);
        for (int e : eminus) terms[VarRef::Y(edge_pair(e).first, edge_pair(e).second)] += Rat(-1);
        return LinearConstraint::make(terms, Rat(bound), {name, {n}});
    };
    std::vector<LinearConstraint> out;
    if (sp.e_minus.size() % 2 == 1)
        out.push_back(build(v_minus_lit, v_plus_lit, sp.e_plus, sp.e_minus,
                            static_cast<long>(sp.e_minus.size()) / 2, "cycle-1-literal"));
    if (sp.e_plus.size() % 2 == 1)
        out.push_back(build(v_plus_lit, v_minus_lit, sp.e_minus, sp.e_plus,
                            static_cast<long>(sp.e_plus.size()) / 2, "cycle-2-literal"));
    return out;
}

// --------------------------------------------- almost-complete (K_n minus e)

/// Extended formulation for unit-weight K_n minus the edge {n-1, n}:
/// McCormick on every pair of K_n plus the 3n-10 special clique rows. The
/// special rows carry labels ("clique-minus", {family, s}).
inline ConstraintSystem kn_minus_system(int n) {
    if (n < 5) fail(Errc::TooSmall, "kn_minus_system needs n >= 5");
    auto sys = ConstraintSystem::over_all_pairs(n, "kn-minus-" + std::to_string(n));
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) sys.add_all(mccormick(i, j));
    std::vector<int> S1, S2, V;
    for (int v = 1; v <= n - 1; ++v) S1.push_back(v);
    for (int v = 1; v <= n - 2; ++v) S2.push_back(v);
    S2.push_back(n);
    for (int v = 1; v <= n; ++v) V.push_back(v);
    for (int s = 1; s <= n - 3; ++s) {
        auto c1 = clique_inequality(S1, s);
        c1.label = {"clique-minus", {1, s}};
        sys.add(std::move(c1));
    }
    for (int s = 1; s <= n - 3; ++s) {
        auto c2 = clique_inequality(S2, s);
        c2.label = {"clique-minus", {2, s}};
        sys.add(std::move(c2));
    }
    for (int s = 2; s <= n - 3; ++s) {
        auto c3 = clique_inequality(V, s);  // includes the non-edge variable y_{n-1,n}
        c3.label = {"clique-minus", {3, s}};
        sys.add(std::move(c3));
    }
    return sys;
}

// -------------------------------------------------------------------- wheel

/// The one (even n) or two (odd n) extra wheel rows for W_n; y(E) runs over
/// all wheel edges (rim and spokes).
inline std::vector<LinearConstraint> wheel_inequalities(int n) {
    if (n < 4) fail(Errc::BadIndex, "wheel inequalities need n >= 4");
    auto rim_and_spokes = [&]() {
        std::vector<std::pair<int, int>> edges;
        for (int i = 1; i < n; ++i) edges.emplace_back(i, i + 1);
        edges.emplace_back(1, n);
        for (int i = 1; i <= n; ++i) edges.emplace_back(i, n + 1);
        return edges;
    }();
    std::vector<LinearConstraint> out;
    {
        std::map<VarRef, Rat> terms;
        terms[VarRef::X(n + 1)] += Rat(n / 2);
        for (int i = 1; i <= n; ++i) terms[VarRef::X(i)] += Rat(1);
        for (const auto& [u, v] : rim_and_spokes) terms[VarRef::Y(u, v)] += Rat(-1);
        out.push_back(LinearConstraint::make(terms, Rat(n / 2), {"wheel-a", {n}}));
    }
    if (n % 2 == 1) {
        std::map<VarRef, Rat> terms;
        terms[VarRef::X(n + 1)] += Rat((n + 1) / 2);
        for (int i = 1; i <= n; ++i) terms[VarRef::X(i)] += Rat(2);
        for (const auto& [u, v] : rim_and_spokes) terms[VarRef::Y(u, v)] += Rat(-1);
        out.push_back(LinearConstraint::make(terms, Rat(n), {"wheel-b", {n}}));
    }
    return out;
}

// --------------------------------------------------------- relaxation zoo

enum class RelaxClass { M, MT, MQ, MC, MG, MO };

inline RelaxClass parse_class_tag(const std::string& tag) {
    if (tag == "M" || tag == "m") return RelaxClass::M;
    if (tag == "MT" || tag == "mt") return RelaxClass::MT;
    if (tag == "MQ" || tag == "mq") return RelaxClass::MQ;
    if (tag == "MC" || tag == "mc") return RelaxClass::MC;
    if (tag == "MG" || tag == "mg") return RelaxClass::MG;
    if (tag == "MO" || tag == "mo") return RelaxClass::MO;
    fail(Errc::BadClass, "unknown relaxation class tag: " + tag);
}

inline std::string class_name(RelaxClass c) {
    switch (c) {
        case RelaxClass::M: return "M";
        case RelaxClass::MT: return "MT";
        case RelaxClass::MQ: return "MQ";
        case RelaxClass::MC: return "MC";
        case RelaxClass::MG: return "MG";
        case RelaxClass::MO: return "MO";
    }
    return "?";
}

namespace detail {

/// Cliques feeding the clique/cut/generalized-cut classes: all cliques of
/// size >= 4 when k is absent, otherwise exactly the k-cliques.
template <typename Fn>
void for_each_source_clique(const WeightedGraph& g, std::optional<int> k, Fn&& yield) {
    int kmin = k ? *k : 4;
    int kmax = k ? *k : g.n();
    if (kmax < kmin || g.n() < kmin) return;
    for_each_clique(g, kmin, kmax, yield);
}

inline std::set<std::vector<int>> clique_subsets(const WeightedGraph& g, std::optional<int> k, int min_size) {
    std::set<std::vector<int>> subsets;
    for_each_source_clique(g, k, [&](const std::vector<int>& q) {
        int sz = static_cast<int>(q.size());
        for (std::uint32_t mask = 1; mask < (1u << sz); ++mask) {
            if (__builtin_popcount(mask) < min_size) continue;
            std::vector<int> sub;
            for (int b = 0; b < sz; ++b)
                if (mask >> b & 1u) sub.push_back(q[static_cast<std::size_t>(b)]);
            subsets.insert(std::move(sub));
        }
    });
    return subsets;
}

template <typename Fn>
void for_each_split(const std::vector<int>& w, Fn&& yield) {
    int sz = static_cast<int>(w.size());
    for (std::uint32_t mask = 1; mask + 1 < (1u << sz); ++mask) {
        if (sz - __builtin_popcount(mask) < 2) continue;
        std::vector<int> S, T;
        for (int b = 0; b < sz; ++b) (mask >> b & 1u ? S : T).push_back(w[static_cast<std::size_t>(b)]);
        yield(S, T);
    }
}

}  // namespace detail

/// Assembles one of the named relaxations of Definition-style classes: always
/// McCormick on the edges of g, plus the class family. k restricts clique or
/// cycle sources to cardinality exactly k (k >= 4).
inline ConstraintSystem relaxation_system(const WeightedGraph& g, RelaxClass cls, std::optional<int> k = {}) {
    if (g.allow_loops()) fail(Errc::BadClass, "relaxation classes are defined for loop-free graphs");
    if (k && (*k < 4)) fail(Errc::BadClass, "class subscript must be at least 4");
    std::string name = class_name(cls);
    if (k) name += "_" + std::to_string(*k);
    auto sys = ConstraintSystem::over_graph(g, name);
    for (const auto& e : g.edges()) sys.add_all(mccormick(e.i, e.j));
    switch (cls) {
        case RelaxClass::M:
            break;
        case RelaxClass::MT: {
            if (g.n() >= 3)
                for_each_clique(g, 3, 3,
                                [&](const std::vector<int>& t) { sys.add_all(triangle(t[0], t[1], t[2])); });
            break;
        }
        case RelaxClass::MQ: {
            for (const auto& S : detail::clique_subsets(g, k, 3))
                for (int alpha = 1; alpha <= static_cast<int>(S.size()) - 2; ++alpha)
                    sys.add(clique_inequality(S, alpha));
            break;
        }
        case RelaxClass::MC: {
            for (const auto& W : detail::clique_subsets(g, k, 4))
                detail::for_each_split(W, [&](const std::vector<int>& S, const std::vector<int>& T) {
                    sys.add_dedup(cut_inequality(S, T));
                });
            break;
        }
        case RelaxClass::MG: {
            for (const auto& W : detail::clique_subsets(g, k, 4))
                detail::for_each_split(W, [&](const std::vector<int>& S, const std::vector<int>& T) {
                    sys.add_dedup(generalized_cut(S, T));
                });
            break;
        }
        case RelaxClass::MO: {
            int kmin = k ? *k : 4;
            int kmax = k ? *k : g.n();
            if (kmax >= kmin && g.n() >= kmin)
                for_each_cycle(g, kmin, kmax, [&](const std::vector<int>& seq) {
                    for (auto& c : cycle_pair_for_sequence(g, seq)) sys.add(std::move(c));
                });
            break;
        }
    }
    return sys;
}

/// Generator count c_P: edges for M, triangles for MT, source cliques for
/// MQ/MC/MG, cycles for MO (k-restricted when k is given).
inline long relaxation_sources(const WeightedGraph& g, RelaxClass cls, std::optional<int> k = {}) {
    long count = 0;
    switch (cls) {
        case RelaxClass::M:
            return g.m();
        case RelaxClass::MT:
            if (g.n() >= 3) for_each_clique(g, 3, 3, [&](const std::vector<int>&) { ++count; });
            return count;
        case RelaxClass::MQ:
        case RelaxClass::MC:
        case RelaxClass::MG:
            detail::for_each_source_clique(g, k, [&](const std::vector<int>&) { ++count; });
            return count;
        case RelaxClass::MO: {
            int kmin = k ? *k : 4;
            int kmax = k ? *k : g.n();
            if (kmax >= kmin && g.n() >= kmin) for_each_cycle(g, kmin, kmax, [&](const std::vector<int>&) { ++count; });
            return count;
        }
    }
    return 0;
}

}  // namespace bihull

#endif

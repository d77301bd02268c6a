#ifndef BIHULL_CERTIFICATES_HPP
#define BIHULL_CERTIFICATES_HPP

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "bihull/graph.hpp"
#include "bihull/intervals.hpp"

namespace bihull {

// ----------------------------------------------------------- clique (K_n)

/// Wrap-around construction: concatenates intervals of lengths x_1..x_n
/// modulo 1. Every point of [0,1) is covered by exactly s or s+1 sets,
/// s = floor(sum x), which certifies vex on unit-weight K_n.
inline std::vector<IntervalSet> clique_construction(const std::vector<Rat>& x) {
    std::vector<IntervalSet> sets;
    Rat cursor = 0;
    for (Rat xi : x) {
        xi.canonicalize();
        if (xi < 0 || xi > 1) fail(Errc::IndexOutOfRange, "coordinate outside [0,1]");
        Rat end = cursor + xi;
        if (end <= 1) {
            sets.push_back(IntervalSet::from_pairs({{cursor, end}}));
            cursor = end == 1 ? Rat(0) : end;
        } else {
            Rat wrap = end - 1;
            sets.push_back(IntervalSet::from_pairs({{cursor, Rat(1)}, {Rat(0), wrap}}));
            cursor = wrap;
        }
    }
    return sets;
}

// ------------------------------------------------------ almost complete K_n^-

struct KnMinusCertificate {
    std::vector<IntervalSet> sets;  // in original vertex order
    Rat terminal_a, terminal_b;     // final sweep state (b == 1 marks case 1)
    std::vector<int> order;         // order[k] = original vertex placed at slot k+1
};

/// Interval sets certifying vex for unit-weight K_n minus the edge {n-1, n}.
/// Slots n and n-1 start at [0, x); slots 1..n-2 are laid out by a sweep that
/// keeps state (a, b) and wraps twice at most per step. Inputs are permuted
/// so that slot values satisfy x_n <= x_{n-1} and x_1 >= ... >= x_{n-2}
/// (the graph is symmetric under exactly these permutations).
inline KnMinusCertificate kn_minus_construction(const std::vector<Rat>& x_in) {
    int n = static_cast<int>(x_in.size());
    if (n < 3) fail(Errc::TooSmall, "construction needs n >= 3");
    std::vector<Rat> x = x_in;
    for (auto& xi : x) {
        xi.canonicalize();
        if (xi < 0 || xi > 1) fail(Errc::IndexOutOfRange, "coordinate outside [0,1]");
    }

    KnMinusCertificate cert;
    cert.order.resize(static_cast<std::size_t>(n));
    std::iota(cert.order.begin(), cert.order.end(), 1);
    // slots n-1, n take the larger resp. smaller of the last two coordinates
    if (x[static_cast<std::size_t>(n - 2)] < x[static_cast<std::size_t>(n - 1)])
        std::swap(cert.order[static_cast<std::size_t>(n - 2)], cert.order[static_cast<std::size_t>(n - 1)]);
    std::stable_sort(cert.order.begin(), cert.order.end() - 2, [&](int u, int v) {
        return x[static_cast<std::size_t>(u - 1)] > x[static_cast<std::size_t>(v - 1)];
    });
    auto slot_value = [&](int slot) { return x[static_cast<std::size_t>(cert.order[static_cast<std::size_t>(slot - 1)] - 1)]; };

    std::vector<IntervalSet> slot_sets(static_cast<std::size_t>(n));
    slot_sets[static_cast<std::size_t>(n - 1)] = IntervalSet::from_pairs({{Rat(0), slot_value(n)}});
    slot_sets[static_cast<std::size_t>(n - 2)] = IntervalSet::from_pairs({{Rat(0), slot_value(n - 1)}});
    Rat a = slot_value(n), b = slot_value(n - 1);
    for (int k = 1; k <= n - 2; ++k) {
        Rat xk = slot_value(k);
        if (xk <= 1 - b) {
            slot_sets[static_cast<std::size_t>(k - 1)] = IntervalSet::from_pairs({{b, b + xk}});
            b += xk;
        } else if (xk <= 1 - a) {
            Rat stop = a + xk + b - 1;
            slot_sets[static_cast<std::size_t>(k - 1)] = IntervalSet::from_pairs({{b, Rat(1)}, {a, stop}});
            a = stop;
            b = 1;
        } else {
            Rat wrap = xk + a - 1;
            slot_sets[static_cast<std::size_t>(k - 1)] = IntervalSet::from_pairs({{a, Rat(1)}, {Rat(0), wrap}});
            a = wrap;
        }
    }
    cert.terminal_a = a;
    cert.terminal_b = b;
    cert.sets.resize(static_cast<std::size_t>(n));
    for (int slot = 1; slot <= n; ++slot)
        cert.sets[static_cast<std::size_t>(cert.order[static_cast<std::size_t>(slot - 1)] - 1)] =
            slot_sets[static_cast<std::size_t>(slot - 1)];
    return cert;
}

// ----------------------------------------------------------------- bucket

/// Fills a set of measure `amount` from the reservoirs in order, leftmost
/// pieces first within each reservoir. The reservoirs must partition [0,1).
inline IntervalSet bucket(const IntervalSet& y1, const IntervalSet& y2, const IntervalSet& y3, const IntervalSet& y4,
                          const Rat& amount) {
    const IntervalSet* res[4] = {&y1, &y2, &y3, &y4};
    Rat total = 0;
    for (const auto* r : res) total += r->measure();
    if (total != 1) fail(Errc::BadPartition, "reservoir measures must sum to 1");
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (!res[i]->set_intersect(*res[j]).empty()) fail(Errc::BadPartition, "reservoirs overlap");
    if (amount < 0 || amount > 1) fail(Errc::TooMuch, "bucket capacity outside [0,1]");

    IntervalSet out;
    Rat remaining = amount;
    for (const auto* r : res) {
        if (remaining == 0) break;
        Rat take = rat_min(r->measure(), remaining);
        out = out.set_union(r->take_measure(take));
        remaining -= take;
    }
    return out;
}

// ---------------------------------------------------------- signed cycles

/// Working data of the signed-cycle construction, in rotated indexing (the
/// smallest-|a| edge is edge n). mu/eta/delta/y are 1-based.
struct CycleContext {
    std::vector<Rat> x;       // rotated coordinates
    std::vector<Rat> a;       // rotated weights
    std::vector<Rat> mu;      // mu_i  = min(x_i, x_{i+1})
    std::vector<Rat> eta;     // eta_i = max(0, x_i + x_{i+1} - 1)
    std::vector<Rat> y;       // y_i = mu(X_i n X_{i+1})
    std::vector<Rat> delta;   // defects delta_2..delta_n (delta[1] unused)
    Rat A;                    // x(V+) - x(V-) + floor(|E-| / 2), junction sets
    std::vector<int> e_plus, e_minus;
};

struct CycleCertificate {
    std::vector<IntervalSet> sets;  // in original vertex order
    CycleContext ctx;
    int rotation = 0;  // original edge (rotation + i - 1) mod n + 1 = rotated edge i
    Rat value;         // sum a_i mu(X_i n X_{i+1}), an exact cav certificate
};

namespace detail {

/// Core of the construction on plain (x, a) sequences; n >= 2. Builds the
/// sets left to right: the bucket order for X_i is driven by the sign of
/// a_{i-1} (keep or avoid X_{i-1}) and the parity of the remaining negative
/// edges (aim toward or away from X_1).
inline std::vector<IntervalSet> cycle_sets_for_sequence(const std::vector<Rat>& x, const std::vector<Rat>& a) {
    int n = static_cast<int>(x.size());
    if (n < 2 || static_cast<int>(a.size()) != n) fail(Errc::NotACycle, "sequence construction needs n >= 2");
    std::vector<int> neg_suffix(static_cast<std::size_t>(n) + 2, 0);
    for (int i = n; i >= 1; --i)
        neg_suffix[static_cast<std::size_t>(i)] =
            neg_suffix[static_cast<std::size_t>(i) + 1] + (a[static_cast<std::size_t>(i - 1)] < 0 ? 1 : 0);

    std::vector<IntervalSet> X(static_cast<std::size_t>(n));
    X[0] = IntervalSet::from_pairs({{Rat(0), x[0]}});
    X[1] = a[0] > 0 ? IntervalSet::from_pairs({{Rat(0), x[1]}})
                    : IntervalSet::from_pairs({{Rat(1) - x[1], Rat(1)}});
    for (int i = 3; i <= n; ++i) {
        const IntervalSet& prev = X[static_cast<std::size_t>(i - 2)];
        const IntervalSet& first = X[0];
        IntervalSet r1 = prev.set_minus(first);
        IntervalSet r2 = prev.set_intersect(first);
        IntervalSet r3 = first.set_union(prev).complement();
        IntervalSet r4 = first.set_minus(prev);
        bool prev_positive = a[static_cast<std::size_t>(i - 2)] > 0;
        bool odd = neg_suffix[static_cast<std::size_t>(i)] % 2 == 1;
        const Rat& cap = x[static_cast<std::size_t>(i - 1)];
        IntervalSet xi;
        if (prev_positive && odd)
            xi = bucket(r1, r2, r3, r4, cap);
        else if (prev_positive && !odd)
            xi = bucket(r2, r1, r4, r3, cap);
        else if (!prev_positive && odd)
            xi = bucket(r3, r4, r1, r2, cap);
        else
            xi = bucket(r4, r3, r2, r1, cap);
        X[static_cast<std::size_t>(i - 1)] = std::move(xi);
    }
    return X;
}

inline std::vector<Rat> cycle_deltas(const std::vector<IntervalSet>& X, const std::vector<Rat>& x,
                                     const std::vector<Rat>& a) {
    int n = static_cast<int>(x.size());
    std::vector<int> neg_suffix(static_cast<std::size_t>(n) + 2, 0);
    for (int i = n; i >= 1; --i)
        neg_suffix[static_cast<std::size_t>(i)] =
            neg_suffix[static_cast<std::size_t>(i) + 1] + (a[static_cast<std::size_t>(i - 1)] < 0 ? 1 : 0);
    std::vector<Rat> delta(static_cast<std::size_t>(n) + 1, Rat(0));
    for (int i = 2; i <= n; ++i) {
        Rat cap = X[0].set_intersect(X[static_cast<std::size_t>(i - 1)]).measure();
        if (neg_suffix[static_cast<std::size_t>(i)] % 2 == 1)
            delta[static_cast<std::size_t>(i)] = cap - rat_max(Rat(0), x[0] + x[static_cast<std::size_t>(i - 1)] - 1);
        else
            delta[static_cast<std::size_t>(i)] = rat_min(x[static_cast<std::size_t>(i - 1)], x[0]) - cap;
    }
    return delta;
}

}  // namespace detail

/// Rotation putting the smallest-|a| edge last (ties: smallest index).
inline int cycle_rotation(const std::vector<Rat>& a1based) {
    int n = static_cast<int>(a1based.size()) - 1;
    int best = 1;
    for (int i = 2; i <= n; ++i)
        if (rat_abs(a1based[static_cast<std::size_t>(i)]) < rat_abs(a1based[static_cast<std::size_t>(best)])) best = i;
    return best % n;  // rotated edge i = original edge ((rotation + i - 1) mod n) + 1
}

/// Interval certificate for cav of a signed chordless cycle. The returned
/// value equals UB_P of the two-row cycle system, hence cav itself.
inline CycleCertificate cycle_construction(const WeightedGraph& g, const PointX& p) {
    auto a_orig = cycle_weights(g);
    int n = g.n();
    if (p.dim() != n) fail(Errc::DimensionMismatch, "point dimension != cycle length");

    CycleCertificate cert;
    cert.rotation = cycle_rotation(a_orig);
    int r = cert.rotation;
    auto old_edge = [&](int i) { return (r + i - 1) % n + 1; };
    auto old_vertex = [&](int i) { return (r + i - 1) % n + 1; };

    auto& ctx = cert.ctx;
    ctx.x.resize(static_cast<std::size_t>(n));
    ctx.a.resize(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        ctx.x[static_cast<std::size_t>(i - 1)] = p[old_vertex(i)];
        ctx.a[static_cast<std::size_t>(i - 1)] = a_orig[static_cast<std::size_t>(old_edge(i))];
    }

    auto X = detail::cycle_sets_for_sequence(ctx.x, ctx.a);
    ctx.delta = detail::cycle_deltas(X, ctx.x, ctx.a);

    ctx.mu.resize(static_cast<std::size_t>(n));
    ctx.eta.resize(static_cast<std::size_t>(n));
    ctx.y.resize(static_cast<std::size_t>(n));
    cert.value = 0;
    for (int i = 1; i <= n; ++i) {
        const Rat& xi = ctx.x[static_cast<std::size_t>(i - 1)];
        const Rat& xj = ctx.x[static_cast<std::size_t>(i % n)];
        ctx.mu[static_cast<std::size_t>(i - 1)] = rat_min(xi, xj);
        ctx.eta[static_cast<std::size_t>(i - 1)] = rat_max(Rat(0), xi + xj - 1);
        ctx.y[static_cast<std::size_t>(i - 1)] =
            X[static_cast<std::size_t>(i - 1)].set_intersect(X[static_cast<std::size_t>(i % n)]).measure();
        cert.value += ctx.a[static_cast<std::size_t>(i - 1)] * ctx.y[static_cast<std::size_t>(i - 1)];
        (ctx.a[static_cast<std::size_t>(i - 1)] > 0 ? ctx.e_plus : ctx.e_minus).push_back(i);
    }
    // junction vertex sets of the rotated cycle
    ctx.A = rat(static_cast<long>(ctx.e_minus.size()) / 2, 1);
    for (int v = 1; v <= n; ++v) {
        const Rat& in = ctx.a[static_cast<std::size_t>((v + n - 2) % n)];
        const Rat& out = ctx.a[static_cast<std::size_t>(v - 1)];
        if (in > 0 && out > 0) ctx.A += ctx.x[static_cast<std::size_t>(v - 1)];
        if (in < 0 && out < 0) ctx.A -= ctx.x[static_cast<std::size_t>(v - 1)];
    }

    cert.sets.resize(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) cert.sets[static_cast<std::size_t>(old_vertex(i) - 1)] = X[static_cast<std::size_t>(i - 1)];
    return cert;
}

// ------------------------------------------------------- defect book-keeping

struct DefectReport {
    bool ok = true;
    std::vector<std::string> mismatches;
};

/// Replays the defect lemmas on a constructed context: defects nonnegative
/// and nonincreasing, edge intersections pinned to mu/eta away from edge n,
/// and (when delta_n > 0) the closed form
/// delta_n = sum_{E+} mu - sum_{E-} eta - A.
inline DefectReport defect_formula_check(const CycleContext& ctx) {
    DefectReport rep;
    auto flag = [&](std::string msg) {
        rep.ok = false;
        rep.mismatches.push_back(std::move(msg));
    };
    int n = static_cast<int>(ctx.x.size());
    for (int i = 1; i <= n; ++i) {
        if (ctx.eta[static_cast<std::size_t>(i - 1)] > ctx.mu[static_cast<std::size_t>(i - 1)])
            flag("eta > mu at edge " + std::to_string(i));
        if (i >= 2 && ctx.delta[static_cast<std::size_t>(i)] < 0) flag("negative defect at " + std::to_string(i));
        if (i >= 3 && ctx.delta[static_cast<std::size_t>(i)] > ctx.delta[static_cast<std::size_t>(i - 1)])
            flag("defect increased at " + std::to_string(i));
        if (i < n) {
            bool positive = ctx.a[static_cast<std::size_t>(i - 1)] > 0;
            const Rat& expect = positive ? ctx.mu[static_cast<std::size_t>(i - 1)] : ctx.eta[static_cast<std::size_t>(i - 1)];
            if (ctx.y[static_cast<std::size_t>(i - 1)] != expect)
                flag("edge value differs from mu/eta at " + std::to_string(i));
        }
    }
    const Rat& dn = ctx.delta[static_cast<std::size_t>(n)];
    if (dn > 0) {
        Rat gamma = -ctx.A;
        for (int i : ctx.e_plus) gamma += ctx.mu[static_cast<std::size_t>(i - 1)];
        for (int i : ctx.e_minus) gamma -= ctx.eta[static_cast<std::size_t>(i - 1)];
        if (dn != gamma) flag("closed form for delta_n failed");
    }
    return rep;
}

// ------------------------------------------------------- dual certificates

enum class CertSide { UB, LB };

/// Explicit dual solution matching the primal certificate value exactly: the
/// alpha = |a_n| assignment when delta_n > 0, the plain McCormick prices
/// (alpha = 0) otherwise. The LB side runs the machinery on -f and reports
/// negated values.
struct CycleDualCertificate {
    CertSide side = CertSide::UB;
    Rat alpha;
    std::vector<Rat> z, w;  // rotated edge indexing, 1-based at offset 0
    Rat objective;          // equals the primal certificate value
    int rotation = 0;
};

inline CycleDualCertificate cycle_dual_certificate(const WeightedGraph& g, const PointX& p, CertSide side) {
    WeightedGraph work = g;
    if (side == CertSide::LB) {
        std::vector<Edge> negated = g.edges();
        for (auto& e : negated) e.weight = -e.weight;
        work = WeightedGraph::from_edge_list(g.n(), std::move(negated));
    }
    auto cert = cycle_construction(work, p);
    const auto& ctx = cert.ctx;
    int n = static_cast<int>(ctx.x.size());

    CycleDualCertificate dual;
    dual.side = side;
    dual.rotation = cert.rotation;
    dual.z.assign(static_cast<std::size_t>(n), Rat(0));
    dual.w.assign(static_cast<std::size_t>(n), Rat(0));
    const Rat& an = ctx.a[static_cast<std::size_t>(n - 1)];
    const Rat& dn = ctx.delta[static_cast<std::size_t>(n)];
    if (dn > 0) {
        dual.alpha = rat_abs(an);
        for (int i : ctx.e_plus) dual.z[static_cast<std::size_t>(i - 1)] = ctx.a[static_cast<std::size_t>(i - 1)] - dual.alpha;
        for (int i : ctx.e_minus) dual.w[static_cast<std::size_t>(i - 1)] = -ctx.a[static_cast<std::size_t>(i - 1)] - dual.alpha;
    } else {
        dual.alpha = 0;
        for (int i : ctx.e_plus) dual.z[static_cast<std::size_t>(i - 1)] = ctx.a[static_cast<std::size_t>(i - 1)];
        for (int i : ctx.e_minus) dual.w[static_cast<std::size_t>(i - 1)] = -ctx.a[static_cast<std::size_t>(i - 1)];
    }
    dual.objective = dual.alpha * ctx.A;
    for (int i = 1; i <= n; ++i)
        dual.objective += ctx.mu[static_cast<std::size_t>(i - 1)] * dual.z[static_cast<std::size_t>(i - 1)] -
                          ctx.eta[static_cast<std::size_t>(i - 1)] * dual.w[static_cast<std::size_t>(i - 1)];
    if (side == CertSide::LB) dual.objective = -dual.objective;
    return dual;
}

}  // namespace bihull

#endif

#ifndef BIHULL_ENVELOPES_HPP
#define BIHULL_ENVELOPES_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "bihull/constraints.hpp"
#include "bihull/graph.hpp"
#include "bihull/simplex.hpp"

namespace bihull {

struct EnvelopeOptions {
    int cap = 16;  // largest n for the 2^n-column envelope LP
};

/// Convex-combination witness: weights over 0/1 points given as bit masks.
using VertexWitness = std::vector<std::pair<std::uint32_t, Rat>>;

namespace detail {

inline std::pair<Rat, VertexWitness> envelope_lp(const WeightedGraph& g, const PointX& x, OptDir dir,
                                                 const EnvelopeOptions& opts) {
    int n = g.n();
    if (x.dim() != n) fail(Errc::DimensionMismatch, "point dimension != vertex count");
    if (n > opts.cap || n > 30) fail(Errc::TooLarge, "envelope oracle capped at n <= " + std::to_string(opts.cap));
    const std::uint32_t count = 1u << n;

    LpProblem p;
    p.direction = dir;
    for (std::uint32_t k = 0; k < count; ++k) p.add_var(Rat(0), std::nullopt);
    for (int i = 1; i <= n; ++i) {
        std::vector<std::pair<int, Rat>> coeffs;
        coeffs.reserve(count / 2);
        for (std::uint32_t k = 0; k < count; ++k)
            if (k >> (i - 1) & 1u) coeffs.push_back({static_cast<int>(k), Rat(1)});
        p.add_row(std::move(coeffs), RowSense::EQ, x[i]);
    }
    {
        std::vector<std::pair<int, Rat>> ones;
        ones.reserve(count);
        for (std::uint32_t k = 0; k < count; ++k) ones.push_back({static_cast<int>(k), Rat(1)});
        p.add_row(std::move(ones), RowSense::EQ, Rat(1));
    }
    for (std::uint32_t k = 0; k < count; ++k) {
        Rat fk = evaluate_bits(g, k);
        if (fk != 0) p.objective.push_back({static_cast<int>(k), std::move(fk)});
    }

    // Feasible starting basis from the threshold representation of x: the
    // top-t coordinate sets (x sorted descending) always form a nonsingular
    // column system carrying x as a convex combination.
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i + 1;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return x[a] > x[b]; });
    std::vector<int> basis;
    std::uint32_t mask = 0;
    basis.push_back(0);
    for (int t = 0; t < n; ++t) {
        mask |= 1u << (order[static_cast<std::size_t>(t)] - 1);
        basis.push_back(static_cast<int>(mask));
    }
    auto sol = lp_solve_with_basis(p, basis);
    if (sol.status != LpStatus::Optimal)
        fail(Errc::MalformedProblem, "internal: envelope LP must be solvable inside the box");

    VertexWitness witness;
    for (std::uint32_t k = 0; k < count; ++k)
        if (sol.primal[k] != 0) witness.push_back({k, sol.primal[k]});
    return {sol.value, std::move(witness)};
}

}  // namespace detail

inline std::pair<Rat, VertexWitness> vex_exact(const WeightedGraph& g, const PointX& x,
                                               const EnvelopeOptions& opts = {}) {
    return detail::envelope_lp(g, x, OptDir::Min, opts);
}

/// Exact concave envelope; when every weight is positive this agrees with
/// sum a_ij min(x_i, x_j) (checked in tests).
inline std::pair<Rat, VertexWitness> cav_exact(const WeightedGraph& g, const PointX& x,
                                               const EnvelopeOptions& opts = {}) {
    return detail::envelope_lp(g, x, OptDir::Max, opts);
}

/// Closed form for positive-weight graphs: cav = sum a_ij min(x_i, x_j).
inline Rat cav_positive_formula(const WeightedGraph& g, const PointX& x) {
    Rat v = 0;
    for (const auto& e : g.edges()) v += e.weight * rat_min(x[e.i], x[e.j]);
    return v;
}

struct EnvelopeResult {
    Rat vex, cav;
    VertexWitness vex_witness, cav_witness;
};

inline EnvelopeResult envelope(const WeightedGraph& g, const PointX& x, const EnvelopeOptions& opts = {}) {
    auto [lo, wlo] = vex_exact(g, x, opts);
    auto [hi, whi] = cav_exact(g, x, opts);
    return {std::move(lo), std::move(hi), std::move(wlo), std::move(whi)};
}

// ------------------------------------------------------- fixed-x relaxation

struct FixedXSolution {
    Rat value;
    std::vector<std::pair<std::pair<int, int>, Rat>> y;  // optimal y over the universe
};

namespace detail {

struct SubstitutedRow {
    std::vector<std::pair<int, Rat>> coeffs;  // over y indices
    Rat rhs;
};

/// Optimizes a sparse y-objective over a ConstraintSystem at fixed x. Rows
/// reducing to a single y variable tighten its bounds; remaining rows enter
/// the LP. Systems beyond `activation_threshold` rows are solved by lazy row
/// activation: optimize over an active subset, pull in violated rows, repeat
/// until the full row set is satisfied (the result is then the exact optimum
/// of the full system).
inline FixedXSolution fixed_x_optimize(const ConstraintSystem& sys, const PointX& x,
                                       const std::map<std::pair<int, int>, Rat>& objective, OptDir dir) {
    if (x.dim() != sys.n()) fail(Errc::DimensionMismatch, "point dimension != system dimension");
    for (int i = 1; i <= sys.n(); ++i)
        if (x[i] < 0 || x[i] > 1) fail(Errc::IndexOutOfRange, "x outside the box");

    const auto& uni = sys.y_universe();
    std::map<std::pair<int, int>, int> index;
    for (std::size_t k = 0; k < uni.size(); ++k) index[uni[k]] = static_cast<int>(k);

    std::vector<Rat> lo(uni.size(), Rat(0)), up(uni.size(), Rat(1));
    std::vector<SubstitutedRow> rows;
    std::vector<Rat> xv(static_cast<std::size_t>(sys.n()) + 1);
    for (int i = 1; i <= sys.n(); ++i) xv[static_cast<std::size_t>(i)] = x[i];

    for (const auto& c : sys.constraints()) {
        Rat rhs = c.rhs;
        std::vector<std::pair<int, Rat>> ycoeffs;
        for (const auto& [v, q] : c.coeffs) {
            if (v.is_x())
                rhs -= q * xv[static_cast<std::size_t>(v.i)];
            else
                ycoeffs.push_back({index.at({v.i, v.j}), q});
        }
        if (ycoeffs.empty()) {
            if (rhs < 0) fail(Errc::InfeasibleAtX, "system empty at x (constant row violated)");
        } else if (ycoeffs.size() == 1) {
            auto [yi, q] = ycoeffs.front();
            Rat bound = rhs / q;
            if (q > 0)
                up[static_cast<std::size_t>(yi)] = rat_min(up[static_cast<std::size_t>(yi)], bound);
            else
                lo[static_cast<std::size_t>(yi)] = rat_max(lo[static_cast<std::size_t>(yi)], bound);
        } else {
            rows.push_back({std::move(ycoeffs), std::move(rhs)});
        }
    }
    for (std::size_t k = 0; k < uni.size(); ++k)
        if (lo[k] > up[k]) fail(Errc::InfeasibleAtX, "system empty at x (crossed y bounds)");

    auto build = [&](const std::vector<std::size_t>& active) {
        LpProblem p;
        p.direction = dir;
        for (std::size_t k = 0; k < uni.size(); ++k) p.add_var(lo[k], up[k]);
        for (std::size_t r : active) p.add_row(rows[r].coeffs, RowSense::LE, rows[r].rhs);
        for (const auto& [pair, w] : objective) {
            auto it = index.find(pair);
            if (it == index.end()) fail(Errc::IndexOutOfRange, "objective edge outside y universe");
            if (w != 0) p.objective.push_back({it->second, w});
        }
        return p;
    };
    auto row_violation = [&](const SubstitutedRow& r, const std::vector<Rat>& y) {
        Rat lhs = 0;
        for (const auto& [yi, q] : r.coeffs) lhs += q * y[static_cast<std::size_t>(yi)];
        return Rat(lhs - r.rhs);  // positive = violated
    };

    const std::size_t activation_threshold = 64;
    LpSolution sol;
    if (rows.size() <= activation_threshold) {
        sol = lp_solve(build([&] {
            std::vector<std::size_t> all(rows.size());
            for (std::size_t r = 0; r < rows.size(); ++r) all[r] = r;
            return all;
        }()));
        if (sol.status == LpStatus::Infeasible) fail(Errc::InfeasibleAtX, "system empty at x");
        if (sol.status != LpStatus::Optimal) fail(Errc::MalformedProblem, "internal: box LP unbounded");
    } else {
        std::vector<std::size_t> active;
        std::vector<bool> is_active(rows.size(), false);
        const std::size_t batch = 24;
        for (;;) {
            sol = lp_solve(build(active));
            if (sol.status == LpStatus::Infeasible) fail(Errc::InfeasibleAtX, "system empty at x");
            if (sol.status != LpStatus::Optimal) fail(Errc::MalformedProblem, "internal: box LP unbounded");
            std::vector<std::pair<Rat, std::size_t>> violated;
            for (std::size_t r = 0; r < rows.size(); ++r) {
                if (is_active[r]) continue;
                Rat v = row_violation(rows[r], sol.primal);
                if (v > 0) violated.push_back({std::move(v), r});
            }
            if (violated.empty()) break;
            std::sort(violated.begin(), violated.end(), [](const auto& a, const auto& b) {
                return a.first != b.first ? a.first > b.first : a.second < b.second;
            });
            for (std::size_t k = 0; k < violated.size() && k < batch; ++k) {
                active.push_back(violated[k].second);
                is_active[violated[k].second] = true;
            }
        }
    }

    FixedXSolution out;
    out.value = sol.value;
    for (std::size_t k = 0; k < uni.size(); ++k) out.y.push_back({uni[k], sol.primal[k]});
    return out;
}

inline std::map<std::pair<int, int>, Rat> edge_objective(const WeightedGraph& g) {
    std::map<std::pair<int, int>, Rat> obj;
    for (const auto& e : g.edges()) obj[{e.i, e.j}] += e.weight;
    return obj;
}

}  // namespace detail

/// Optimum of a sparse y-objective over sys with x pinned.
inline FixedXSolution fix_x_and_solve(const ConstraintSystem& sys, const PointX& x,
                                      const std::map<std::pair<int, int>, Rat>& objective, OptDir dir) {
    return detail::fixed_x_optimize(sys, x, objective, dir);
}

inline Rat lb_relax(const ConstraintSystem& sys, const WeightedGraph& g, const PointX& x) {
    return detail::fixed_x_optimize(sys, x, detail::edge_objective(g), OptDir::Min).value;
}

inline Rat ub_relax(const ConstraintSystem& sys, const WeightedGraph& g, const PointX& x) {
    return detail::fixed_x_optimize(sys, x, detail::edge_objective(g), OptDir::Max).value;
}

/// (cav - LB_P) / (cav - vex); fails with DegenerateGap when cav == vex.
inline Rat gap_ratio(const ConstraintSystem& sys, const WeightedGraph& g, const PointX& x,
                     const EnvelopeOptions& opts = {}) {
    auto [lo, wl] = vex_exact(g, x, opts);
    auto [hi, wh] = cav_exact(g, x, opts);
    (void)wl;
    (void)wh;
    if (hi == lo) fail(Errc::DegenerateGap, "gap_X vanishes at this point");
    Rat lb = lb_relax(sys, g, x);
    return (hi - lb) / (hi - lo);
}

// ------------------------------------------------------------- verification

struct SampleRow {
    Rat vex, cav, lb, ub;
    std::optional<Rat> ratio;  // absent when gap_X = 0
};

struct VerifyReport {
    bool pass = true;
    std::size_t checked = 0;
    std::vector<SampleRow> rows;
    // first counterexample, when any
    std::optional<std::size_t> failed_index;
    std::optional<PointX> failed_x;
    std::string detail;
};

/// Checks LB = vex and UB = cav exactly at each sample.
inline VerifyReport verify_extension(const WeightedGraph& g, const ConstraintSystem& sys,
                                     const std::vector<PointX>& samples, const EnvelopeOptions& opts = {}) {
    VerifyReport rep;
    for (std::size_t idx = 0; idx < samples.size(); ++idx) {
        const auto& x = samples[idx];
        auto [lo, wl] = vex_exact(g, x, opts);
        auto [hi, wh] = cav_exact(g, x, opts);
        (void)wl;
        (void)wh;
        Rat lb = lb_relax(sys, g, x);
        Rat ub = ub_relax(sys, g, x);
        SampleRow row{lo, hi, lb, ub, std::nullopt};
        if (hi != lo) row.ratio = (hi - lb) / (hi - lo);
        rep.rows.push_back(row);
        ++rep.checked;
        if (lb != lo || ub != hi) {
            rep.pass = false;
            rep.failed_index = idx;
            rep.failed_x = x;
            rep.detail = lb != lo ? "LB != vex (LB " + rat_to_string(lb) + ", vex " + rat_to_string(lo) + ")"
                                  : "UB != cav (UB " + rat_to_string(ub) + ", cav " + rat_to_string(hi) + ")";
            return rep;
        }
    }
    return rep;
}

/// Vertices touched by at least one edge.
inline std::vector<int> vertex_support(const WeightedGraph& g) {
    std::set<int> s;
    for (const auto& e : g.edges()) {
        s.insert(e.i);
        s.insert(e.j);
    }
    return {s.begin(), s.end()};
}

/// Verifies that two exact extensions compose when their graphs share at most
/// one vertex: the union system must be exact for the sum function.
inline VerifyReport combine_check(const WeightedGraph& gf, const ConstraintSystem& sysf, const WeightedGraph& gg,
                                  const ConstraintSystem& sysg, const std::vector<PointX>& samples,
                                  const EnvelopeOptions& opts = {}) {
    if (gf.n() != gg.n()) fail(Errc::DimensionMismatch, "graphs must share the ambient vertex set");
    auto sf = vertex_support(gf);
    auto sg = vertex_support(gg);
    std::vector<int> shared;
    std::set_intersection(sf.begin(), sf.end(), sg.begin(), sg.end(), std::back_inserter(shared));
    if (shared.size() > 1) fail(Errc::SharedTooMuch, "graphs share more than one vertex");

    std::vector<Edge> merged = gf.edges();
    for (const auto& e : gg.edges()) merged.push_back(e);
    auto sum = WeightedGraph::from_edge_list(gf.n(), std::move(merged));

    std::vector<std::pair<int, int>> uni = sysf.y_universe();
    for (const auto& p : sysg.y_universe()) uni.push_back(p);
    ConstraintSystem both(sum.n(), std::move(uni), sysf.name() + "+" + sysg.name());
    for (const auto& c : sysf.constraints()) both.add(c);
    for (const auto& c : sysg.constraints()) both.add(c);
    return verify_extension(sum, both, samples, opts);
}

/// CSV report: one row per sample with the exact bounds and the gap ratio.
inline void write_report_csv(std::ostream& os, const VerifyReport& rep) {
    os << "sample,vex,cav,lb,ub,ratio\n";
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& r = rep.rows[i];
        os << i << "," << rat_to_string(r.vex) << "," << rat_to_string(r.cav) << "," << rat_to_string(r.lb) << ","
           << rat_to_string(r.ub) << ",";
        if (r.ratio) os << rat_to_string(*r.ratio);
        os << "\n";
    }
}

}  // namespace bihull

#endif

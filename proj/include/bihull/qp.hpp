#ifndef BIHULL_QP_HPP
#define BIHULL_QP_HPP

#include <algorithm>
#include <chrono>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bihull/enumerate.hpp"
#include "bihull/families.hpp"
#include "bihull/lp_format.hpp"
#include "bihull/prng.hpp"
#include "bihull/simplex.hpp"

namespace bihull {

/// Box-constrained quadratic program over [0,1]^n:
///   minimize    q0(x) + c0 . x
///   subject to  qk(x) + ck . x <= bk        (k = 1..K)
///               sum x = 1 when the simplex flag is set.
/// Quadratic forms are stored upper-triangular: q[{i,j}] with i <= j is the
/// full coefficient of x_i x_j (diagonal entries are squared terms).
struct QpInstance {
    struct Block {
        std::map<std::pair<int, int>, Rat> q;
        std::map<int, Rat> c;
        Rat b;  // unused for the objective block
    };

    int n = 0;
    bool simplex_constraint = false;
    Block objective;
    std::vector<Block> constraints;

    void validate() const {
        auto check_block = [&](const Block& blk) {
            for (const auto& [pair, v] : blk.q) {
                if (pair.first < 1 || pair.first > pair.second || pair.second > n)
                    fail(Errc::MalformedInstance, "quadratic index out of range");
                if (v == 0) fail(Errc::MalformedInstance, "zero stored quadratic coefficient");
            }
            for (const auto& [i, v] : blk.c) {
                (void)v;
                if (i < 1 || i > n) fail(Errc::MalformedInstance, "linear index out of range");
            }
        };
        if (n < 1) fail(Errc::MalformedInstance, "instance needs n >= 1");
        check_block(objective);
        for (const auto& blk : constraints) check_block(blk);
    }
};

// --- plain text instance format: header "n |K| s", then per block a "Qk"
// --- sparse-triple section, a "ck" pair section and (k >= 1) a "bk" line ---

inline void write_qp_instance(std::ostream& os, const QpInstance& inst) {
    os << inst.n << " " << inst.constraints.size() << " " << (inst.simplex_constraint ? 1 : 0) << "\n";
    auto write_block = [&os](const QpInstance::Block& blk, std::size_t k, bool with_b) {
        os << "Q" << k << "\n";
        for (const auto& [pair, v] : blk.q) os << pair.first << " " << pair.second << " " << rat_to_string(v) << "\n";
        os << "end\n";
        os << "c" << k << "\n";
        for (const auto& [i, v] : blk.c) os << i << " " << rat_to_string(v) << "\n";
        os << "end\n";
        if (with_b) os << "b" << k << " " << rat_to_string(blk.b) << "\n";
    };
    write_block(inst.objective, 0, false);
    for (std::size_t k = 0; k < inst.constraints.size(); ++k) write_block(inst.constraints[k], k + 1, true);
}

inline QpInstance read_qp_instance(std::istream& is) {
    QpInstance inst;
    std::size_t num_k = 0;
    int s = 0;
    if (!(is >> inst.n >> num_k >> s)) fail(Errc::ParseError, "expected header 'n |K| s'");
    if (s != 0 && s != 1) fail(Errc::MalformedInstance, "simplex flag must be 0 or 1");
    inst.simplex_constraint = s == 1;
    std::string tok;
    auto read_block = [&](QpInstance::Block& blk, std::size_t k, bool with_b) {
        if (!(is >> tok) || tok != "Q" + std::to_string(k)) fail(Errc::ParseError, "expected section Q" + std::to_string(k));
        while (is >> tok && tok != "end") {
            int i = std::stoi(tok), j;
            std::string val;
            if (!(is >> j >> val)) fail(Errc::ParseError, "truncated quadratic triple");
            if (i > j) std::swap(i, j);
            blk.q[{i, j}] += parse_rational(val);
        }
        if (!(is >> tok) || tok != "c" + std::to_string(k)) fail(Errc::ParseError, "expected section c" + std::to_string(k));
        while (is >> tok && tok != "end") {
            int i = std::stoi(tok);
            std::string val;
            if (!(is >> val)) fail(Errc::ParseError, "truncated linear pair");
            blk.c[i] += parse_rational(val);
        }
        if (with_b) {
            if (!(is >> tok) || tok != "b" + std::to_string(k)) fail(Errc::ParseError, "expected b" + std::to_string(k));
            std::string val;
            if (!(is >> val)) fail(Errc::ParseError, "missing rhs value");
            blk.b = parse_rational(val);
        }
    };
    read_block(inst.objective, 0, false);
    for (std::size_t k = 1; k <= num_k; ++k) {
        QpInstance::Block blk;
        read_block(blk, k, true);
        inst.constraints.push_back(std::move(blk));
    }
    for (auto* blk : [&] {
             std::vector<QpInstance::Block*> all{&inst.objective};
             for (auto& b : inst.constraints) all.push_back(&b);
             return all;
         }()) {
        for (auto it = blk->q.begin(); it != blk->q.end();) it = it->second == 0 ? blk->q.erase(it) : std::next(it);
        for (auto it = blk->c.begin(); it != blk->c.end();) it = it->second == 0 ? blk->c.erase(it) : std::next(it);
    }
    inst.validate();
    return inst;
}

namespace detail {

/// Loop-free support triangles of a quadratic block.
inline std::vector<std::vector<int>> block_triangles(const QpInstance& inst, const QpInstance::Block& blk) {
    std::vector<Edge> edges;
    for (const auto& [pair, v] : blk.q) {
        (void)v;
        if (pair.first != pair.second) edges.push_back({pair.first, pair.second, Rat(1)});
    }
    if (edges.empty()) return {};
    auto g = WeightedGraph::from_edge_list(inst.n, std::move(edges));
    if (g.n() < 3) return {};
    return enumerate_cliques(g, 3, 3);
}

struct LinearizationSpace {
    std::map<std::pair<int, int>, int> y_index;  // includes loops (i, i)
    std::vector<std::pair<int, int>> y_pairs;
};

}  // namespace detail

namespace detail {

inline LpProblem qp_linearization_impl(const QpInstance& inst, bool with_triangles) {
    inst.validate();
    LpProblem p;
    p.direction = OptDir::Min;
    for (int i = 1; i <= inst.n; ++i) p.add_var(Rat(0), Rat(1), VarRef::X(i).name());

    LinearizationSpace space;
    auto blocks = [&] {
        std::vector<const QpInstance::Block*> all{&inst.objective};
        for (const auto& b : inst.constraints) all.push_back(&b);
        return all;
    }();
    for (const auto* blk : blocks)
        for (const auto& [pair, v] : blk->q) {
            (void)v;
            if (!space.y_index.count(pair)) {
                space.y_index[pair] = p.add_var(Rat(0), Rat(1), VarRef::Y(pair.first, pair.second).name());
                space.y_pairs.push_back(pair);
            }
        }

    for (const auto& [pair, v] : inst.objective.q) p.objective.push_back({space.y_index.at(pair), v});
    for (const auto& [i, v] : inst.objective.c) p.objective.push_back({i - 1, v});

    for (const auto& blk : inst.constraints) {
        std::vector<std::pair<int, Rat>> coeffs;
        for (const auto& [pair, v] : blk.q) coeffs.push_back({space.y_index.at(pair), v});
        for (const auto& [i, v] : blk.c) coeffs.push_back({i - 1, v});
        p.add_row(std::move(coeffs), RowSense::LE, blk.b);
    }

    // MT(Q^k) blocks, deduplicated across k
    std::set<std::pair<std::vector<std::pair<VarRef, Rat>>, Rat>> seen;
    auto add_cut = [&](const LinearConstraint& c) {
        if (!seen.insert(c.canonical_key()).second) return;
        std::vector<std::pair<int, Rat>> coeffs;
        for (const auto& [v, q] : c.coeffs)
            coeffs.push_back({v.is_x() ? v.i - 1 : space.y_index.at({v.i, v.j}), q});
        p.add_row(std::move(coeffs), RowSense::LE, c.rhs);
    };
    for (const auto* blk : blocks) {
        for (const auto& [pair, v] : blk->q) {
            (void)v;
            for (auto& c : mccormick(pair.first, pair.second)) add_cut(c);
        }
        if (with_triangles)
            for (const auto& tri : block_triangles(inst, *blk))
                for (auto& c : triangle(tri[0], tri[1], tri[2])) add_cut(c);
    }

    if (inst.simplex_constraint) {
        std::vector<std::pair<int, Rat>> coeffs;
        for (int i = 1; i <= inst.n; ++i) coeffs.push_back({i - 1, Rat(1)});
        p.add_row(std::move(coeffs), RowSense::EQ, Rat(1));
    }
    return p;
}

}  // namespace detail

/// The linearized relaxation ([QC]QP-L): products become y variables, every
/// block contributes its McCormick rows (loops included) and the triangle
/// rows of its loop-free support, deduplicated across blocks.
inline LpProblem build_qp_linearization(const QpInstance& inst) {
    return detail::qp_linearization_impl(inst, /*with_triangles=*/true);
}

/// The convexified relaxation ([QC]QP-C) as an LP-format model: negative
/// diagonal terms stay linearized through y_ii, positive diagonal terms are
/// kept as squared variables; the MT block sees only the off-diagonal support
/// plus negative-diagonal loops.
inline LpFile build_qp_convexification(const QpInstance& inst) {
    inst.validate();
    LpFile f;
    f.direction = OptDir::Min;
    f.comments.push_back("convexified relaxation: positive diagonal kept quadratic");
    f.comments.push_back("bound ordering: linearized optimum <= this optimum <= exact optimum");

    std::set<std::pair<int, int>> y_pairs;  // off-diagonal plus negative-diagonal loops
    auto blocks = [&] {
        std::vector<const QpInstance::Block*> all{&inst.objective};
        for (const auto& b : inst.constraints) all.push_back(&b);
        return all;
    }();
    for (const auto* blk : blocks)
        for (const auto& [pair, v] : blk->q)
            if (pair.first != pair.second || v < 0) y_pairs.insert(pair);

    auto split_terms = [&](const QpInstance::Block& blk, std::vector<std::pair<std::string, Rat>>& linear,
                           std::vector<std::pair<std::string, Rat>>& quadratic) {
        for (const auto& [pair, v] : blk.q) {
            if (pair.first != pair.second || v < 0)
                linear.push_back({VarRef::Y(pair.first, pair.second).name(), v});
            else
                quadratic.push_back({VarRef::X(pair.first).name(), v});
        }
        for (const auto& [i, v] : blk.c) linear.push_back({VarRef::X(i).name(), v});
    };
    split_terms(inst.objective, f.objective_linear, f.objective_quadratic);

    std::size_t rowno = 0;
    for (const auto& blk : inst.constraints) {
        LpFile::FileRow row;
        row.name = "g" + std::to_string(++rowno);
        split_terms(blk, row.linear, row.quadratic);
        row.sense = RowSense::LE;
        row.rhs = blk.b;
        f.rows.push_back(std::move(row));
    }

    std::set<std::pair<std::vector<std::pair<VarRef, Rat>>, Rat>> seen;
    auto add_cut = [&](const LinearConstraint& c) {
        if (!seen.insert(c.canonical_key()).second) return;
        LpFile::FileRow row;
        row.name = "mt" + std::to_string(++rowno);
        for (const auto& [v, q] : c.coeffs) row.linear.push_back({v.name(), q});
        row.sense = RowSense::LE;
        row.rhs = c.rhs;
        f.rows.push_back(std::move(row));
    };
    for (const auto* blk : blocks) {
        for (const auto& [pair, v] : blk->q)
            if (pair.first != pair.second || v < 0)
                for (auto& c : mccormick(pair.first, pair.second)) add_cut(c);
        for (const auto& tri : detail::block_triangles(inst, *blk))
            for (auto& c : triangle(tri[0], tri[1], tri[2])) add_cut(c);
    }
    if (inst.simplex_constraint) {
        LpFile::FileRow row;
        row.name = "simplex";
        for (int i = 1; i <= inst.n; ++i) row.linear.push_back({VarRef::X(i).name(), Rat(1)});
        row.sense = RowSense::EQ;
        row.rhs = Rat(1);
        f.rows.push_back(std::move(row));
    }
    for (int i = 1; i <= inst.n; ++i) f.bounds.push_back({VarRef::X(i).name(), Rat(0), Rat(1)});
    for (const auto& [i, j] : y_pairs) f.bounds.push_back({VarRef::Y(i, j).name(), Rat(0), Rat(1)});
    return f;
}

inline void emit_qp_convexification(const QpInstance& inst, std::ostream& os) {
    if (!os) fail(Errc::IoFailure, "cannot write convexified relaxation");
    write_lp_file(os, build_qp_convexification(inst));
    if (!os) fail(Errc::IoFailure, "write failed");
}

// ------------------------------------------------ triangle sampling curve

struct CurvePoint {
    double fraction = 0;
    std::size_t triangles_used = 0;
    Rat bound;
    double solve_seconds = 0;
};

/// Solves the linearization with nested random subsets of the triangle rows:
/// the sample for a larger fraction contains every smaller sample, so the
/// bounds are monotone nondecreasing along the curve.
inline std::vector<CurvePoint> triangle_sampling_curve(const QpInstance& inst, const std::vector<double>& fractions,
                                                       std::uint64_t seed) {
    inst.validate();
    for (double f : fractions)
        if (f < 0.0 || f > 1.0) fail(Errc::MalformedInstance, "fractions must lie in [0,1]");

    // union of triangles over every block, in one deterministic shuffle
    std::set<std::vector<int>> tri_set;
    auto blocks = [&] {
        std::vector<const QpInstance::Block*> all{&inst.objective};
        for (const auto& b : inst.constraints) all.push_back(&b);
        return all;
    }();
    for (const auto* blk : blocks)
        for (auto& t : detail::block_triangles(inst, *blk)) tri_set.insert(t);
    std::vector<std::vector<int>> triangles(tri_set.begin(), tri_set.end());
    Prng rng(seed);
    for (std::size_t i = triangles.size(); i > 1; --i)
        std::swap(triangles[i - 1], triangles[rng.below(i)]);

    std::vector<CurvePoint> out;
    for (double frac : fractions) {
        std::size_t count = static_cast<std::size_t>(std::ceil(frac * static_cast<double>(triangles.size())));
        if (count > triangles.size()) count = triangles.size();

        LpProblem p;
        {
            // the McCormick-and-rows core, then the sampled triangle prefix
            p = detail::qp_linearization_impl(inst, /*with_triangles=*/false);
            std::map<std::string, int> by_name;
            for (int j = 0; j < p.num_vars; ++j) by_name[p.var_names[static_cast<std::size_t>(j)]] = j;
            std::set<std::pair<std::vector<std::pair<VarRef, Rat>>, Rat>> seen;
            for (std::size_t t = 0; t < count; ++t) {
                const auto& tri = triangles[t];
                for (auto& c : triangle(tri[0], tri[1], tri[2])) {
                    if (!seen.insert(c.canonical_key()).second) continue;
                    std::vector<std::pair<int, Rat>> coeffs;
                    bool ok = true;
                    for (const auto& [v, q] : c.coeffs) {
                        auto it = by_name.find(v.name());
                        if (it == by_name.end()) {
                            ok = false;
                            break;
                        }
                        coeffs.push_back({it->second, q});
                    }
                    if (ok) p.add_row(std::move(coeffs), RowSense::LE, c.rhs);
                }
            }
        }
        auto start = std::chrono::steady_clock::now();
        auto sol = lp_solve(p);
        auto stop = std::chrono::steady_clock::now();
        if (sol.status != LpStatus::Optimal) fail(Errc::MalformedInstance, "linearized relaxation not solvable");
        out.push_back({frac, count, sol.value, std::chrono::duration<double>(stop - start).count()});
    }
    return out;
}

}  // namespace bihull

#endif

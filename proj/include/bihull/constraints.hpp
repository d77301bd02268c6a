#ifndef BIHULL_CONSTRAINTS_HPP
#define BIHULL_CONSTRAINTS_HPP

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bihull/errors.hpp"
#include "bihull/graph.hpp"
#include "bihull/rational.hpp"

namespace bihull {

/// Reference to an original variable x_i or a product variable y_ij (i <= j;
/// i == j only for squared terms in QP loop mode).
struct VarRef {
    int i = 0;
    int j = 0;  // 0 marks an x variable

    static VarRef X(int i) { return {i, 0}; }
    static VarRef Y(int i, int j) {
        if (i > j) std::swap(i, j);
        return {i, j};
    }
    bool is_x() const { return j == 0; }
    friend auto operator<=>(const VarRef&, const VarRef&) = default;

    std::string name() const {
        return is_x() ? "x" + std::to_string(i) : "y_" + std::to_string(i) + "_" + std::to_string(j);
    }
};

struct ConstraintLabel {
    std::string family;
    std::vector<int> params;

    friend auto operator<=>(const ConstraintLabel&, const ConstraintLabel&) = default;
    std::string to_string() const {
        std::ostringstream os;
        os << family;
        for (std::size_t k = 0; k < params.size(); ++k) os << (k ? "," : "(") << params[k];
        if (!params.empty()) os << ")";
        return os.str();
    }
};

/// Sparse rational inequality  sum coeffs <= rhs. Coefficients are sorted by
/// variable and never zero.
struct LinearConstraint {
    std::vector<std::pair<VarRef, Rat>> coeffs;
    Rat rhs;
    ConstraintLabel label;

    static LinearConstraint make(const std::map<VarRef, Rat>& terms, Rat rhs, ConstraintLabel label) {
        LinearConstraint c;
        for (const auto& [v, q] : terms)
            if (q != 0) {
                c.coeffs.push_back({v, q});
                c.coeffs.back().second.canonicalize();
            }
        c.rhs = std::move(rhs);
        c.rhs.canonicalize();
        c.label = std::move(label);
        return c;
    }

    /// LHS value at a point given by x values (1-based) and a y lookup.
    template <typename YFn>
    Rat lhs_at(const std::vector<Rat>& x1based, YFn&& y) const {
        Rat v = 0;
        for (const auto& [var, c] : coeffs)
            v += c * (var.is_x() ? x1based[static_cast<std::size_t>(var.i)] : y(var.i, var.j));
        return v;
    }

    /// LHS at a 0/1 point with y_ij = bit_i * bit_j (loops: y_ii = bit_i).
    Rat lhs_at_bits(std::uint32_t bits) const {
        Rat v = 0;
        for (const auto& [var, c] : coeffs) {
            bool bi = bits >> (var.i - 1) & 1u;
            bool on = var.is_x() ? bi : (bi && (bits >> (var.j - 1) & 1u));
            if (on) v += c;
        }
        return v;
    }

    /// Scale-normalized (coeffs, rhs) key; two constraints with the same key
    /// cut the same halfspace.
    std::pair<std::vector<std::pair<VarRef, Rat>>, Rat> canonical_key() const {
        std::vector<std::pair<VarRef, Rat>> cs = coeffs;
        Rat r = rhs;
        if (!cs.empty()) {
            Rat scale = rat_abs(cs.front().second);
            for (auto& [v, q] : cs) q /= scale;
            r /= scale;
        }
        return {cs, r};
    }
};

/// A named relaxation: constraints over x_1..x_n and a declared y universe.
/// The ambient box 0 <= x_i <= 1, 0 <= y_ij <= 1 is implied and not stored.
class ConstraintSystem {
public:
    ConstraintSystem() = default;
    ConstraintSystem(int n, std::vector<std::pair<int, int>> y_universe, std::string name)
        : n_(n), name_(std::move(name)) {
        for (auto& [i, j] : y_universe) {
            if (i > j) std::swap(i, j);
            if (i < 1 || j > n) fail(Errc::IndexOutOfRange, "y universe outside vertex range");
        }
        std::sort(y_universe.begin(), y_universe.end());
        y_universe.erase(std::unique(y_universe.begin(), y_universe.end()), y_universe.end());
        universe_ = std::move(y_universe);
    }

    static ConstraintSystem over_graph(const WeightedGraph& g, std::string name) {
        std::vector<std::pair<int, int>> uni;
        for (const auto& e : g.edges()) uni.push_back({e.i, e.j});
        return ConstraintSystem(g.n(), std::move(uni), std::move(name));
    }

    static ConstraintSystem over_all_pairs(int n, std::string name) {
        std::vector<std::pair<int, int>> uni;
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j) uni.push_back({i, j});
        return ConstraintSystem(n, std::move(uni), std::move(name));
    }

    int n() const { return n_; }
    const std::string& name() const { return name_; }
    const std::vector<std::pair<int, int>>& y_universe() const { return universe_; }
    const std::vector<LinearConstraint>& constraints() const { return constraints_; }

    bool in_universe(int i, int j) const {
        if (i > j) std::swap(i, j);
        return std::binary_search(universe_.begin(), universe_.end(), std::pair(i, j));
    }

    void add(LinearConstraint c) {
        validate(c);
        constraints_.push_back(std::move(c));
    }

    /// Adds unless an equivalent halfspace (up to positive scaling) exists.
    bool add_dedup(LinearConstraint c) {
        validate(c);
        auto key = c.canonical_key();
        if (!seen_.insert(std::move(key)).second) return false;
        constraints_.push_back(std::move(c));
        return true;
    }

    void add_all(std::vector<LinearConstraint> cs) {
        for (auto& c : cs) add(std::move(c));
    }

    /// Drops the first constraint whose label matches; returns whether found.
    bool drop_labeled(const ConstraintLabel& label) {
        for (auto it = constraints_.begin(); it != constraints_.end(); ++it)
            if (it->label == label) {
                constraints_.erase(it);
                return true;
            }
        return false;
    }

private:
    void validate(const LinearConstraint& c) const {
        for (const auto& [v, q] : c.coeffs) {
            (void)q;
            if (v.i < 1 || (v.is_x() ? v.i > n_ : v.j > n_))
                fail(Errc::IndexOutOfRange, "constraint variable outside system");
            if (!v.is_x() && v.i != v.j && !in_universe(v.i, v.j))
                fail(Errc::IndexOutOfRange, "y variable outside declared universe: " + v.name());
            if (!v.is_x() && v.i == v.j && !in_universe(v.i, v.j))
                fail(Errc::IndexOutOfRange, "loop variable outside declared universe");
        }
    }

    int n_ = 0;
    std::vector<std::pair<int, int>> universe_;
    std::vector<LinearConstraint> constraints_;
    std::set<std::pair<std::vector<std::pair<VarRef, Rat>>, Rat>> seen_;
    std::string name_;
};

}  // namespace bihull

#endif

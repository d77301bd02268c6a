#ifndef BIHULL_INTERVALS_HPP
#define BIHULL_INTERVALS_HPP

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bihull/errors.hpp"
#include "bihull/graph.hpp"
#include "bihull/rational.hpp"

namespace bihull {

/// Finite union of half-open intervals [a, b) inside [0, 1), kept canonical:
/// sorted, pairwise disjoint, non-adjacent, nonempty. Values are immutable;
/// every operation returns a fresh canonical set.
class IntervalSet {
public:
    IntervalSet() = default;

    static IntervalSet from_pairs(std::vector<std::pair<Rat, Rat>> raw) {
        for (auto& [a, b] : raw) {
            a.canonicalize();
            b.canonicalize();
            if (a > b) fail(Errc::ParseError, "interval with a > b");
            if (a < 0 || b > 1) fail(Errc::ParseError, "interval outside [0,1)");
        }
        std::sort(raw.begin(), raw.end());
        IntervalSet s;
        for (auto& [a, b] : raw) {
            if (a == b) continue;
            if (!s.iv_.empty() && a <= s.iv_.back().second)
                s.iv_.back().second = rat_max(s.iv_.back().second, b);
            else
                s.iv_.emplace_back(a, b);
        }
        return s;
    }

    static IntervalSet interval(const Rat& a, const Rat& b) { return from_pairs({{a, b}}); }
    static IntervalSet full() { return interval(0, 1); }

    const std::vector<std::pair<Rat, Rat>>& intervals() const { return iv_; }
    bool empty() const { return iv_.empty(); }

    Rat measure() const {
        Rat m = 0;
        for (const auto& [a, b] : iv_) m += b - a;
        return m;
    }

    bool operator==(const IntervalSet& other) const { return iv_ == other.iv_; }
    bool operator!=(const IntervalSet& other) const { return !(*this == other); }

    IntervalSet set_union(const IntervalSet& other) const {
        std::vector<std::pair<Rat, Rat>> raw = iv_;
        raw.insert(raw.end(), other.iv_.begin(), other.iv_.end());
        return from_pairs(std::move(raw));
    }

    IntervalSet set_intersect(const IntervalSet& other) const {
        std::vector<std::pair<Rat, Rat>> out;
        std::size_t i = 0, j = 0;
        while (i < iv_.size() && j < other.iv_.size()) {
            Rat lo = rat_max(iv_[i].first, other.iv_[j].first);
            Rat hi = rat_min(iv_[i].second, other.iv_[j].second);
            if (lo < hi) out.emplace_back(lo, hi);
            if (iv_[i].second <= other.iv_[j].second)
                ++i;
            else
                ++j;
        }
        return from_pairs(std::move(out));
    }

    IntervalSet complement() const {
        std::vector<std::pair<Rat, Rat>> out;
        Rat cursor = 0;
        for (const auto& [a, b] : iv_) {
            if (cursor < a) out.emplace_back(cursor, a);
            cursor = b;
        }
        if (cursor < 1) out.emplace_back(cursor, Rat(1));
        return from_pairs(std::move(out));
    }

    IntervalSet set_minus(const IntervalSet& other) const { return set_intersect(other.complement()); }

    /// Leftmost sub-collection with exactly the requested measure.
    IntervalSet take_measure(const Rat& amount) const {
        if (amount < 0 || amount > measure()) fail(Errc::TooMuch, "take_measure amount out of range");
        std::vector<std::pair<Rat, Rat>> out;
        Rat remaining = amount;
        for (const auto& [a, b] : iv_) {
            if (remaining == 0) break;
            Rat len = b - a;
            if (len <= remaining) {
                out.emplace_back(a, b);
                remaining -= len;
            } else {
                out.emplace_back(a, a + remaining);
                remaining = 0;
            }
        }
        return from_pairs(std::move(out));
    }

    bool contains(const Rat& t) const {
        for (const auto& [a, b] : iv_) {
            if (t < a) return false;
            if (t < b) return true;
        }
        return false;
    }

private:
    std::vector<std::pair<Rat, Rat>> iv_;
};

inline Rat measure(const IntervalSet& s) { return s.measure(); }

/// Measures of the cells R_xi cut out by n sets: for each pattern xi in
/// {0,1}^n, the measure of the points lying in exactly the sets with xi_i = 1.
/// Only nonzero cells are reported; the measures sum to 1. Works over the
/// elementary intervals induced by all endpoints, so the cost is
/// output-sensitive rather than 2^n.
inline std::map<std::uint32_t, Rat> atoms(const std::vector<IntervalSet>& sets) {
    if (sets.size() > 32) fail(Errc::TooLarge, "atoms supports at most 32 sets");
    std::vector<Rat> cuts{Rat(0), Rat(1)};
    for (const auto& s : sets)
        for (const auto& [a, b] : s.intervals()) {
            cuts.push_back(a);
            cuts.push_back(b);
        }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::map<std::uint32_t, Rat> out;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const Rat& lo = cuts[k];
        std::uint32_t pattern = 0;
        for (std::size_t i = 0; i < sets.size(); ++i)
            if (sets[i].contains(lo)) pattern |= (1u << i);
        out[pattern] += cuts[k + 1] - lo;
    }
    for (auto it = out.begin(); it != out.end();)
        it = (it->second == 0) ? out.erase(it) : std::next(it);
    return out;
}

/// Objective value of an interval certificate: sum over edges of
/// a_ij * mu(X_i n X_j). With mu(X_i) = x_i this is an upper-bound witness for
/// vex[f](x) and a lower-bound witness for cav[f](x).
inline Rat certificate_value(const std::vector<IntervalSet>& sets, const WeightedGraph& g) {
    if (static_cast<int>(sets.size()) != g.n())
        fail(Errc::DimensionMismatch, "one interval set per vertex required");
    Rat v = 0;
    for (const auto& e : g.edges()) {
        if (e.i == e.j) {
            v += e.weight * sets[static_cast<std::size_t>(e.i) - 1].measure();
            continue;
        }
        v += e.weight *
             sets[static_cast<std::size_t>(e.i) - 1].set_intersect(sets[static_cast<std::size_t>(e.j) - 1]).measure();
    }
    return v;
}

/// Inverse of `atoms`: lays the weighted 0/1 points out as consecutive
/// intervals and assembles X_i as the union of intervals whose point has
/// coordinate i set.
inline std::vector<IntervalSet> from_convex_combination(
    int n, const std::vector<std::pair<std::uint32_t, Rat>>& lambda) {
    Rat total = 0;
    for (const auto& [bits, w] : lambda) {
        (void)bits;
        if (w < 0) fail(Errc::BadWeights, "negative weight");
        total += w;
    }
    if (total != 1) fail(Errc::BadWeights, "weights must sum to 1");
    std::vector<std::vector<std::pair<Rat, Rat>>> pieces(static_cast<std::size_t>(n));
    Rat cursor = 0;
    for (const auto& [bits, w] : lambda) {
        if (w == 0) continue;
        Rat next = cursor + w;
        for (int i = 0; i < n; ++i)
            if (bits >> i & 1u) pieces[static_cast<std::size_t>(i)].emplace_back(cursor, next);
        cursor = next;
    }
    std::vector<IntervalSet> sets;
    sets.reserve(static_cast<std::size_t>(n));
    for (auto& p : pieces) sets.push_back(IntervalSet::from_pairs(std::move(p)));
    return sets;
}

// --- certificate file format: first line n, then one line per set holding
// --- its "a b" endpoint pairs (empty line = empty set) ---

inline void write_certificate(std::ostream& os, const std::vector<IntervalSet>& sets) {
    os << sets.size() << "\n";
    for (const auto& s : sets) {
        bool first = true;
        for (const auto& [a, b] : s.intervals()) {
            if (!first) os << " ";
            os << rat_to_string(a) << " " << rat_to_string(b);
            first = false;
        }
        os << "\n";
    }
}

inline std::vector<IntervalSet> read_certificate(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) fail(Errc::ParseError, "missing certificate header");
    int n = 0;
    try {
        n = std::stoi(line);
    } catch (const std::exception&) {
        fail(Errc::ParseError, "bad certificate header");
    }
    std::vector<IntervalSet> sets;
    for (int i = 0; i < n; ++i) {
        if (!std::getline(is, line)) fail(Errc::ParseError, "truncated certificate file");
        std::istringstream ls(line);
        std::vector<std::pair<Rat, Rat>> raw;
        std::string a, b;
        while (ls >> a) {
            if (!(ls >> b)) fail(Errc::ParseError, "odd endpoint count in certificate line");
            raw.emplace_back(parse_rational(a), parse_rational(b));
        }
        sets.push_back(IntervalSet::from_pairs(std::move(raw)));
    }
    return sets;
}

}  // namespace bihull

#endif

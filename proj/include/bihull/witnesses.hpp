#ifndef BIHULL_WITNESSES_HPP
#define BIHULL_WITNESSES_HPP

#include <map>
#include <utility>
#include <vector>

#include "bihull/envelopes.hpp"
#include "bihull/families.hpp"

namespace bihull {

enum class WitnessKind {
    Verified,    // drops the row's bound strictly below vex (checked in tests)
    PaperTable,  // the literature's printed table, kept for reference; it does
                 // not separate (see the necessity notes in the test suite)
};

struct MinimalityWitness {
    PointX x;
    std::map<std::pair<int, int>, Rat> y;  // over all pairs of K_n
    ConstraintLabel certifies;             // the special row being probed
    WitnessKind kind = WitnessKind::Verified;
};

namespace detail {

/// Optimal y of min z over the system with the probed row removed; feasible
/// for everything else by construction, and it violates the probed row
/// whenever the drop enlarges the projection at x.
inline std::map<std::pair<int, int>, Rat> argmin_y(int n, const ConstraintLabel& dropped_row, const PointX& x) {
    auto sys = kn_minus_system(n);
    sys.drop_labeled(dropped_row);
    auto sol = fix_x_and_solve(sys, x, edge_objective(almost_complete_graph(n)), OptDir::Min);
    std::map<std::pair<int, int>, Rat> y;
    for (const auto& [pair, v] : sol.y) y[pair] = v;
    return y;
}

}  // namespace detail

/// A point certifying that the (family, s) special row of kn_minus_system is
/// necessary: it satisfies every other row and projects strictly below vex.
///
/// Families 1 and 2 at s = 1 and s = n-3 use in-repo constructions (margins
/// 1/10 and 1/20). For 2 <= s <= n-4 no separating point appears to exist:
/// the printed literature table is returned as-is (kind PaperTable, it
/// satisfies the probed row and breaks a McCormick row instead), and extensive
/// exact search finds alternate optimal certificates at every sampled point.
/// Family 3 uses the literature construction, which checks out exactly.
inline MinimalityWitness minimality_witness(int n, int family, int s) {
    if (n < 5) fail(Errc::TooSmall, "minimality witness needs n >= 5");
    bool fam12 = family == 1 || family == 2;
    if (!(fam12 || family == 3)) fail(Errc::BadIndex, "family must be 1, 2 or 3");
    if (fam12 && (s < 1 || s > n - 3)) fail(Errc::BadIndex, "s outside 1..n-3");
    if (family == 3 && (s < 2 || s > n - 3)) fail(Errc::BadIndex, "s outside 2..n-3");

    MinimalityWitness w;
    w.certifies = {"clique-minus", {family, s}};
    std::vector<Rat> x(static_cast<std::size_t>(n), Rat(0));
    auto yset = [&](int i, int j, Rat v) {
        if (i > j) std::swap(i, j);
        w.y[{i, j}] = std::move(v);
    };
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) yset(i, j, Rat(0));

    if (family == 3) {
        for (int i = 1; i <= n - 2; ++i) x[static_cast<std::size_t>(i - 1)] = rat(2L * s - 1, 2L * (n - 2));
        x[static_cast<std::size_t>(n - 2)] = Rat(1, 2);
        x[static_cast<std::size_t>(n - 1)] = Rat(1, 2);
        Rat yin = rat(static_cast<long>(s - 1) * (s - 1) + 1, static_cast<long>(n - 2) * (n - 3));
        Rat yout = rat(s - 2, 2L * (n - 2));
        for (int i = 1; i <= n - 2; ++i)
            for (int j = i + 1; j <= n - 2; ++j) yset(i, j, yin);
        for (int i = 1; i <= n - 2; ++i) {
            yset(i, n - 1, yout);
            yset(i, n, yout);
        }
        yset(n - 1, n, Rat(1, 2));
        w.x = PointX(std::move(x));
        return w;
    }

    // family 1 keeps the clique on {1..n-1}; family 2 mirrors n-1 and n
    int inside = family == 1 ? n - 1 : n;   // special vertex inside the probed clique
    int outside = family == 1 ? n : n - 1;  // the vertex the clique omits

    if (s == 1) {
        x[0] = Rat(3, 5);
        x[1] = Rat(1, 4);
        x[static_cast<std::size_t>(inside - 1)] = Rat(9, 10);
        x[static_cast<std::size_t>(outside - 1)] = Rat(1, 10);
        w.x = PointX(std::move(x));
        w.y = detail::argmin_y(n, w.certifies, w.x);
        return w;
    }
    if (s == n - 3) {
        for (int i = 1; i <= s - 1; ++i) x[static_cast<std::size_t>(i - 1)] = 1;
        x[static_cast<std::size_t>(s - 1)] = Rat(9, 20);
        x[static_cast<std::size_t>(s)] = Rat(9, 20);
        x[static_cast<std::size_t>(inside - 1)] = Rat(1, 4);
        x[static_cast<std::size_t>(outside - 1)] = Rat(9, 10);
        w.x = PointX(std::move(x));
        w.y = detail::argmin_y(n, w.certifies, w.x);
        return w;
    }

    // middle s: the printed literature table
    w.kind = WitnessKind::PaperTable;
    for (int i = 1; i <= s - 1; ++i) x[static_cast<std::size_t>(i - 1)] = 1;
    x[static_cast<std::size_t>(s - 1)] = Rat(4, 5);
    x[static_cast<std::size_t>(s)] = Rat(1, 5);
    x[static_cast<std::size_t>(inside - 1)] = Rat(3, 5);
    x[static_cast<std::size_t>(outside - 1)] = Rat(2, 5);
    for (int i = 1; i <= s - 1; ++i)
        for (int j = i + 1; j <= s - 1; ++j) yset(i, j, Rat(1));
    for (int i = 1; i <= s - 1; ++i) yset(i, s, Rat(4, 5));
    for (int i = 1; i <= s - 1; ++i) yset(i, s + 1, Rat(1, 5));
    for (int i = 1; i <= s; ++i) yset(i, inside, Rat(3, 5));
    for (int i = 1; i <= s - 1; ++i) yset(i, outside, Rat(2, 5));
    w.x = PointX(std::move(x));
    return w;
}

}  // namespace bihull

#endif

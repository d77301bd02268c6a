#include <catch2/catch_amalgamated.hpp>

#include <optional>
#include <vector>

#include "bihull/prng.hpp"
#include "bihull/simplex.hpp"

using namespace bihull;

namespace {

// Independent oracle for box-bounded LPs: enumerate every intersection of n
// tight constraints (rows as equalities plus bounds), keep feasible ones, and
// take the best objective. Complete because a nonempty feasible set over a
// finite box has an optimal vertex.
std::optional<Rat> brute_force_lp(const LpProblem& p) {
    int n = p.num_vars;
    struct Plane {
        std::vector<Rat> a;
        Rat b;
    };
    std::vector<Plane> planes;
    for (const auto& row : p.rows) {
        Plane pl;
        pl.a.assign(static_cast<std::size_t>(n), Rat(0));
        for (const auto& [j, c] : row.coeffs) pl.a[static_cast<std::size_t>(j)] += c;
        pl.b = row.rhs;
        planes.push_back(pl);
    }
    for (int j = 0; j < n; ++j) {
        Plane lo, up;
        lo.a.assign(static_cast<std::size_t>(n), Rat(0));
        up.a.assign(static_cast<std::size_t>(n), Rat(0));
        lo.a[static_cast<std::size_t>(j)] = 1;
        up.a[static_cast<std::size_t>(j)] = 1;
        lo.b = *p.lower[static_cast<std::size_t>(j)];
        up.b = *p.upper[static_cast<std::size_t>(j)];
        planes.push_back(lo);
        planes.push_back(up);
    }
    auto feasible = [&](const std::vector<Rat>& x) {
        for (int j = 0; j < n; ++j)
            if (x[static_cast<std::size_t>(j)] < *p.lower[static_cast<std::size_t>(j)] ||
                x[static_cast<std::size_t>(j)] > *p.upper[static_cast<std::size_t>(j)])
                return false;
        for (const auto& row : p.rows) {
            Rat lhs = 0;
            for (const auto& [j, c] : row.coeffs) lhs += c * x[static_cast<std::size_t>(j)];
            switch (row.sense) {
                case RowSense::LE:
                    if (lhs > row.rhs) return false;
                    break;
                case RowSense::GE:
                    if (lhs < row.rhs) return false;
                    break;
                case RowSense::EQ:
                    if (lhs != row.rhs) return false;
                    break;
            }
        }
        return true;
    };
    auto objective = [&](const std::vector<Rat>& x) {
        Rat v = 0;
        for (const auto& [j, c] : p.objective) v += c * x[static_cast<std::size_t>(j)];
        return v;
    };

    std::optional<Rat> best;
    std::vector<int> pick(static_cast<std::size_t>(n));
    int total = static_cast<int>(planes.size());
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == n) {
            // solve the n x n system by Gaussian elimination
            std::vector<std::vector<Rat>> mat(static_cast<std::size_t>(n),
                                              std::vector<Rat>(static_cast<std::size_t>(n) + 1, Rat(0)));
            for (int r = 0; r < n; ++r) {
                for (int cidx = 0; cidx < n; ++cidx)
                    mat[static_cast<std::size_t>(r)][static_cast<std::size_t>(cidx)] =
                        planes[static_cast<std::size_t>(pick[static_cast<std::size_t>(r)])].a[static_cast<std::size_t>(cidx)];
                mat[static_cast<std::size_t>(r)][static_cast<std::size_t>(n)] =
                    planes[static_cast<std::size_t>(pick[static_cast<std::size_t>(r)])].b;
            }
            for (int col = 0; col < n; ++col) {
                int piv = -1;
                for (int r = col; r < n; ++r)
                    if (mat[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] != 0) {
                        piv = r;
                        break;
                    }
                if (piv < 0) return;  // singular
                std::swap(mat[static_cast<std::size_t>(col)], mat[static_cast<std::size_t>(piv)]);
                Rat d = mat[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
                for (int c2 = col; c2 <= n; ++c2) mat[static_cast<std::size_t>(col)][static_cast<std::size_t>(c2)] /= d;
                for (int r = 0; r < n; ++r) {
                    if (r == col) continue;
                    Rat f = mat[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
                    if (f == 0) continue;
                    for (int c2 = col; c2 <= n; ++c2)
                        mat[static_cast<std::size_t>(r)][static_cast<std::size_t>(c2)] -=
                            f * mat[static_cast<std::size_t>(col)][static_cast<std::size_t>(c2)];
                }
            }
            std::vector<Rat> x(static_cast<std::size_t>(n));
            for (int r = 0; r < n; ++r) x[static_cast<std::size_t>(r)] = mat[static_cast<std::size_t>(r)][static_cast<std::size_t>(n)];
            if (!feasible(x)) return;
            Rat v = objective(x);
            bool better = !best || (p.direction == OptDir::Min ? v < *best : v > *best);
            if (better) best = v;
            return;
        }
        for (int i = start; i < total; ++i) {
            pick[static_cast<std::size_t>(depth)] = i;
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
    return best;
}

LpProblem mccormick_fixed_x(const Rat& x1, const Rat& x2, OptDir dir) {
    LpProblem p;
    int y = p.add_var(Rat(0), std::nullopt);
    p.add_row({{y, Rat(1)}}, RowSense::LE, x1);
    p.add_row({{y, Rat(1)}}, RowSense::LE, x2);
    p.add_row({{y, Rat(1)}}, RowSense::GE, x1 + x2 - 1);
    p.objective = {{y, Rat(1)}};
    p.direction = dir;
    return p;
}

}  // namespace

TEST_CASE("McCormick y-range at fixed x") {
    auto pmin = mccormick_fixed_x(Rat(1, 2), Rat(3, 4), OptDir::Min);
    auto smin = lp_solve(pmin);
    REQUIRE(smin.status == LpStatus::Optimal);
    CHECK(smin.value == Rat(1, 4));

    auto pmax = mccormick_fixed_x(Rat(1, 2), Rat(3, 4), OptDir::Max);
    auto smax = lp_solve(pmax);
    REQUIRE(smax.status == LpStatus::Optimal);
    CHECK(smax.value == Rat(1, 2));
}

TEST_CASE("infeasible and unbounded verdicts") {
    LpProblem p;
    int x = p.add_var(std::nullopt, Rat(1));
    p.add_row({{x, Rat(1)}}, RowSense::GE, Rat(2));
    p.objective = {{x, Rat(1)}};
    CHECK(lp_solve(p).status == LpStatus::Infeasible);

    LpProblem q;
    int z = q.add_var(Rat(0), std::nullopt);
    q.objective = {{z, Rat(1)}};
    q.direction = OptDir::Max;
    CHECK(lp_solve(q).status == LpStatus::Unbounded);
}

TEST_CASE("empty objective solves to zero") {
    LpProblem p;
    int x = p.add_var(Rat(0), Rat(1));
    p.add_row({{x, Rat(1)}}, RowSense::LE, Rat(1));
    auto s = lp_solve(p);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.value == 0);
}

TEST_CASE("Beale's degenerate instance terminates under Bland") {
    LpProblem p;
    int x1 = p.add_var(Rat(0), std::nullopt);
    int x2 = p.add_var(Rat(0), std::nullopt);
    int x3 = p.add_var(Rat(0), std::nullopt);
    int x4 = p.add_var(Rat(0), std::nullopt);
    p.add_row({{x1, Rat(1, 4)}, {x2, Rat(-60)}, {x3, Rat(-1, 25)}, {x4, Rat(9)}}, RowSense::LE, Rat(0));
    p.add_row({{x1, Rat(1, 2)}, {x2, Rat(-90)}, {x3, Rat(-1, 50)}, {x4, Rat(3)}}, RowSense::LE, Rat(0));
    p.add_row({{x3, Rat(1)}}, RowSense::LE, Rat(1));
    p.objective = {{x1, Rat(-3, 4)}, {x2, Rat(150)}, {x3, Rat(-1, 50)}, {x4, Rat(6)}};
    auto s = lp_solve(p);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.value == Rat(-1, 20));
    CHECK(s.pivots < 100);
}

TEST_CASE("equality rows pass through phase one") {
    LpProblem p;
    int x = p.add_var(Rat(0), Rat(5));
    int y = p.add_var(Rat(0), Rat(5));
    p.add_row({{x, Rat(1)}, {y, Rat(1)}}, RowSense::EQ, Rat(3));
    p.objective = {{x, Rat(2)}, {y, Rat(1)}};
    auto s = lp_solve(p);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.value == Rat(3));
    CHECK(s.primal[0] == 0);
    CHECK(s.primal[1] == 3);
}

TEST_CASE("determinism: identical input, identical run") {
    auto p = mccormick_fixed_x(Rat(1, 3), Rat(2, 3), OptDir::Max);
    auto a = lp_solve(p);
    auto b = lp_solve(p);
    CHECK(a.value == b.value);
    CHECK(a.pivots == b.pivots);
    CHECK(a.primal == b.primal);
    CHECK(a.dual == b.dual);
}

TEST_CASE("random LPs agree with vertex-enumeration oracle") {
    Prng rng(20240817);
    int solved = 0, infeasible = 0;
    for (int trial = 0; trial < 300; ++trial) {
        int n = 1 + static_cast<int>(rng.below(3));
        int m = static_cast<int>(rng.below(4));
        LpProblem p;
        for (int j = 0; j < n; ++j) p.add_var(Rat(0), Rat(1 + static_cast<long>(rng.below(2))));
        for (int i = 0; i < m; ++i) {
            std::vector<std::pair<int, Rat>> coeffs;
            for (int j = 0; j < n; ++j) {
                long c = static_cast<long>(rng.below(7)) - 3;
                if (c != 0) coeffs.push_back({j, Rat(c)});
            }
            RowSense sense = rng.below(4) == 0 ? RowSense::EQ : (rng.below(2) ? RowSense::LE : RowSense::GE);
            Rat rhs = rat(static_cast<long>(rng.below(9)) - 4, 2);
            p.add_row(std::move(coeffs), sense, rhs);
        }
        for (int j = 0; j < n; ++j) {
            long c = static_cast<long>(rng.below(9)) - 4;
            if (c != 0) p.objective.push_back({j, rat(c, 2)});
        }
        p.direction = rng.below(2) ? OptDir::Min : OptDir::Max;

        auto expected = brute_force_lp(p);
        auto got = lp_solve(p);
        if (expected) {
            ++solved;
            REQUIRE(got.status == LpStatus::Optimal);
            REQUIRE(got.value == *expected);
        } else {
            ++infeasible;
            REQUIRE(got.status == LpStatus::Infeasible);
        }
    }
    CHECK(solved > 100);
    CHECK(infeasible > 10);
}

TEST_CASE("duals satisfy sign conditions and complementary slackness") {
    Prng rng(7);
    for (int trial = 0; trial < 120; ++trial) {
        int n = 2 + static_cast<int>(rng.below(2));
        LpProblem p;
        for (int j = 0; j < n; ++j) p.add_var(Rat(0), Rat(2));
        int m = 1 + static_cast<int>(rng.below(3));
        for (int i = 0; i < m; ++i) {
            std::vector<std::pair<int, Rat>> coeffs;
            for (int j = 0; j < n; ++j) {
                long c = static_cast<long>(rng.below(5)) - 2;
                if (c != 0) coeffs.push_back({j, Rat(c)});
            }
            p.add_row(std::move(coeffs), rng.below(2) ? RowSense::LE : RowSense::GE,
                      Rat(static_cast<long>(rng.below(7)) - 2));
        }
        for (int j = 0; j < n; ++j) p.objective.push_back({j, Rat(static_cast<long>(rng.below(7)) - 3)});
        p.direction = rng.below(2) ? OptDir::Min : OptDir::Max;
        auto s = lp_solve(p);
        if (s.status != LpStatus::Optimal) continue;
        for (std::size_t i = 0; i < p.rows.size(); ++i) {
            Rat lhs = 0;
            for (const auto& [j, c] : p.rows[i].coeffs) lhs += c * s.primal[static_cast<std::size_t>(j)];
            bool tight = lhs == p.rows[i].rhs;
            const Rat& y = s.dual[i];
            if (!tight) CHECK(y == 0);
            bool le = p.rows[i].sense == RowSense::LE;
            bool minimize = p.direction == OptDir::Min;
            if (y != 0) {
                // relaxing a <= row can only help; sign depends on direction
                if (le)
                    CHECK((minimize ? y <= 0 : y >= 0));
                else
                    CHECK((minimize ? y >= 0 : y <= 0));
            }
        }
    }
}

#include <catch2/catch_amalgamated.hpp>

#include "bihull/certificates.hpp"
#include "bihull/envelopes.hpp"
#include "bihull/families.hpp"
#include "bihull/prng.hpp"

using namespace bihull;

namespace {

IntervalSet iv(std::vector<std::pair<const char*, const char*>> raw) {
    std::vector<std::pair<Rat, Rat>> out;
    for (auto [a, b] : raw) out.emplace_back(parse_rational(a), parse_rational(b));
    return IntervalSet::from_pairs(std::move(out));
}

std::vector<Rat> rats(std::vector<const char*> vals) {
    std::vector<Rat> out;
    for (auto* v : vals) out.push_back(parse_rational(v));
    return out;
}

WeightedGraph signed_cycle(const std::vector<Rat>& a_no_pad) {
    std::vector<Rat> a{Rat(0)};
    a.insert(a.end(), a_no_pad.begin(), a_no_pad.end());
    return cycle_graph(a);
}

std::vector<Rat> random_signs(Prng& rng, int n) {
    std::vector<Rat> a;
    for (int i = 0; i < n; ++i) {
        long mag = 1 + static_cast<long>(rng.below(8));
        a.push_back(rng.below(2) ? rat(mag, 2) : rat(-mag, 2));
    }
    return a;
}

}  // namespace

TEST_CASE("clique construction covers with s or s+1 sets") {
    auto sets = clique_construction(rats({"0.6", "0.3", "0.3", "0.9", "0.4"}));
    CHECK(certificate_value(sets, complete_graph(5)) == 2);

    auto all_ones = clique_construction(std::vector<Rat>(4, Rat(1)));
    for (const auto& s : all_ones) CHECK(s == IntervalSet::full());
    CHECK(certificate_value(all_ones, complete_graph(4)) == 6);

    auto small = clique_construction(rats({"0.2", "0.3", "0.4"}));
    CHECK(certificate_value(small, complete_graph(3)) == 0);

    Prng rng(15);
    for (int t = 0; t < 40; ++t) {
        int n = 3 + static_cast<int>(rng.below(5));
        auto x = rng.rational_point(static_cast<std::size_t>(n), 16);
        auto cs = clique_construction(x);
        Rat sum = 0;
        for (int i = 0; i < n; ++i) {
            CHECK(cs[static_cast<std::size_t>(i)].measure() == x[static_cast<std::size_t>(i)]);
            sum += x[static_cast<std::size_t>(i)];
        }
        long s = rat_floor(sum);
        Rat high_weight = 0;  // mass covered s+1 times
        for (const auto& [pattern, mu] : atoms(cs)) {
            int cnt = __builtin_popcount(pattern);
            if (sum == s) {
                CHECK(cnt == s);
            } else {
                CHECK((cnt == s || cnt == s + 1));
            }
            if (cnt == s + 1) high_weight += mu;
        }
        CHECK(high_weight == sum - Rat(s));
        CHECK(certificate_value(cs, complete_graph(n)) == Rat(s) * sum - rat(s * (s + 1), 2));
    }
}

TEST_CASE("kn-minus construction reproduces both sweep outcomes") {
    // first reference vector: ends with b = 1
    auto c1 = kn_minus_construction(rats({"0.9", "0.6", "0.2", "0.1", "0.6", "0.4"}));
    CHECK(c1.terminal_b == 1);
    CHECK(c1.sets[0] == iv({{"0", "0.3"}, {"0.4", "1"}}));
    CHECK(c1.sets[1] == iv({{"0.3", "0.5"}, {"0.6", "1"}}));
    CHECK(c1.sets[2] == iv({{"0.5", "0.7"}}));
    CHECK(c1.sets[3] == iv({{"0.7", "0.8"}}));
    CHECK(c1.sets[4] == iv({{"0", "0.6"}}));
    CHECK(c1.sets[5] == iv({{"0", "0.4"}}));

    // second reference vector: ends with b < 1
    auto c2 = kn_minus_construction(rats({"0.9", "0.8", "0.2", "0.1", "0.6", "0.4"}));
    CHECK(c2.terminal_b == Rat(9, 10));
    CHECK(c2.terminal_a == Rat(1, 10));
    CHECK(c2.sets[0] == iv({{"0", "0.3"}, {"0.4", "1"}}));
    CHECK(c2.sets[1] == iv({{"0", "0.1"}, {"0.3", "1"}}));
    CHECK(c2.sets[2] == iv({{"0.6", "0.8"}}));
    CHECK(c2.sets[3] == iv({{"0.8", "0.9"}}));
    CHECK(c2.sets[4] == iv({{"0", "0.6"}}));
    CHECK(c2.sets[5] == iv({{"0", "0.4"}}));
}

TEST_CASE("kn-minus certificate equals the relaxation lower bound") {
    Prng rng(29);
    for (int n : {5, 6, 7}) {
        auto g = almost_complete_graph(n);
        auto sys = kn_minus_system(n);
        for (int t = 0; t < 8; ++t) {
            PointX x(rng.rational_point(static_cast<std::size_t>(n), 20));
            auto cert = kn_minus_construction(x.x);
            for (int i = 0; i < n; ++i)
                CHECK(cert.sets[static_cast<std::size_t>(i)].measure() == x.x[static_cast<std::size_t>(i)]);
            CHECK(certificate_value(cert.sets, g) == lb_relax(sys, g, x));
        }
        // integral points give f exactly
        PointX ones(std::vector<Rat>(static_cast<std::size_t>(n), Rat(1)));
        auto cert = kn_minus_construction(ones.x);
        CHECK(certificate_value(cert.sets, g) == evaluate(g, ones));
    }
}

TEST_CASE("bucket fills reservoirs in order") {
    auto y1 = iv({{"0", "0.2"}});
    auto y2 = iv({{"0.2", "0.5"}});
    auto y3 = iv({{"0.5", "0.9"}});
    auto y4 = iv({{"0.9", "1"}});
    CHECK(bucket(y1, y2, y3, y4, Rat(2, 5)) == iv({{"0", "0.4"}}));
    CHECK(bucket(y1, y2, y3, y4, Rat(1, 10)) == iv({{"0", "0.1"}}));  // inside y1
    CHECK(bucket(y1, y2, y3, y4, Rat(1)) == IntervalSet::full());
    CHECK(bucket(y1, y2, y3, y4, Rat(0)).empty());

    // scattered reservoirs still fill leftmost-first within each
    auto z1 = iv({{"0.4", "0.5"}, {"0.9", "1"}});
    auto z2 = iv({{"0", "0.4"}, {"0.5", "0.9"}});
    CHECK(bucket(z1, z2, IntervalSet(), IntervalSet(), Rat(3, 10)) ==
          iv({{"0.4", "0.5"}, {"0.9", "1"}, {"0", "0.1"}}));

    CHECK_THROWS_AS(bucket(y1, y2, y3, y3, Rat(1, 2)), Error);          // overlap
    CHECK_THROWS_AS(bucket(y1, y2, y3, IntervalSet(), Rat(1, 2)), Error);  // gap
}

TEST_CASE("cycle construction reference instance") {
    // C_8 with signs (+,-,+,-,-,+,+,+) and unit magnitudes
    auto g = signed_cycle(rats({"1", "-1", "1", "-1", "-1", "1", "1", "1"}));
    PointX x(rats({"0.6", "0.5", "0.3", "0.5", "0.4", "0.6", "0.5", "0.6"}));
    auto cert = cycle_construction(g, x);
    CHECK(cert.value == Rat(23, 10));
    for (int i = 1; i <= 8; ++i)
        CHECK(cert.sets[static_cast<std::size_t>(i - 1)].measure() == x[i]);
    auto rep = defect_formula_check(cert.ctx);
    CHECK(rep.ok);
    // cav equals the certificate (theorem-level check at the reference point)
    CHECK(cav_exact(g, x).first == Rat(23, 10));
}

TEST_CASE("even negative count forces zero defects") {
    Prng rng(31);
    for (int t = 0; t < 30; ++t) {
        int n = 4 + static_cast<int>(rng.below(5));
        std::vector<Rat> a;
        int negs = 0;
        for (int i = 0; i < n; ++i) {
            bool neg = rng.below(2) && negs < n - 1;
            if (neg) ++negs;
            a.push_back(neg ? Rat(-1 - static_cast<long>(rng.below(3))) : Rat(1 + static_cast<long>(rng.below(3))));
        }
        if (negs % 2 == 1) a[static_cast<std::size_t>(n - 1)] = rat_abs(a[static_cast<std::size_t>(n - 1)]) * (a[static_cast<std::size_t>(n - 1)] < 0 ? 1 : -1), negs += (a[static_cast<std::size_t>(n - 1)] < 0 ? 1 : -1);
        // recount to be safe
        negs = 0;
        for (const auto& w : a)
            if (w < 0) ++negs;
        if (negs % 2 == 1) continue;
        auto g = signed_cycle(a);
        PointX x(rng.rational_point(static_cast<std::size_t>(n), 16));
        auto cert = cycle_construction(g, x);
        for (int i = 2; i <= n; ++i) CHECK(cert.ctx.delta[static_cast<std::size_t>(i)] == 0);
    }
}

TEST_CASE("two-element base cases of the defect recursion") {
    // a_2 < 0 < a_1: delta_2 = mu_1 - eta_2
    {
        std::vector<Rat> x{Rat(7, 10), Rat(3, 5)};
        std::vector<Rat> a{Rat(1), Rat(-1)};
        auto X = detail::cycle_sets_for_sequence(x, a);
        auto delta = detail::cycle_deltas(X, x, a);
        CHECK(delta[2] == rat_min(x[0], x[1]) - rat_max(Rat(0), x[0] + x[1] - 1));
    }
    // a_1 < 0 < a_2: delta_2 = mu_2 - eta_1
    {
        std::vector<Rat> x{Rat(7, 10), Rat(3, 5)};
        std::vector<Rat> a{Rat(-1), Rat(1)};
        auto X = detail::cycle_sets_for_sequence(x, a);
        auto delta = detail::cycle_deltas(X, x, a);
        CHECK(delta[2] == rat_min(x[0], x[1]) - rat_max(Rat(0), x[0] + x[1] - 1));
    }
}

TEST_CASE("defect lemmas hold on random signed cycles") {
    Prng rng(57);
    for (int t = 0; t < 150; ++t) {
        int n = 4 + static_cast<int>(rng.below(5));
        auto g = signed_cycle(random_signs(rng, n));
        PointX x(rng.rational_point(static_cast<std::size_t>(n), 16));
        auto cert = cycle_construction(g, x);
        auto rep = defect_formula_check(cert.ctx);
        INFO((rep.mismatches.empty() ? "" : rep.mismatches.front()));
        REQUIRE(rep.ok);
    }
}

TEST_CASE("dual certificates match primal values and are feasible") {
    Prng rng(91);
    for (int t = 0; t < 120; ++t) {
        int n = 4 + static_cast<int>(rng.below(5));
        auto a = random_signs(rng, n);
        auto g = signed_cycle(a);
        PointX x(rng.rational_point(static_cast<std::size_t>(n), 16));

        auto cert = cycle_construction(g, x);
        auto dual = cycle_dual_certificate(g, x, CertSide::UB);
        CHECK(dual.objective == cert.value);
        CHECK(dual.alpha >= 0);
        const auto& ctx = cert.ctx;
        for (int i = 1; i <= n; ++i) {
            CHECK(dual.z[static_cast<std::size_t>(i - 1)] >= 0);
            CHECK(dual.w[static_cast<std::size_t>(i - 1)] >= 0);
            Rat lhs = dual.z[static_cast<std::size_t>(i - 1)] - dual.w[static_cast<std::size_t>(i - 1)];
            if (ctx.a[static_cast<std::size_t>(i - 1)] > 0)
                CHECK(lhs + dual.alpha >= ctx.a[static_cast<std::size_t>(i - 1)]);
            else
                CHECK(lhs - dual.alpha >= ctx.a[static_cast<std::size_t>(i - 1)]);
        }

        // LB side mirrors through negated weights
        std::vector<Rat> neg;
        for (const auto& w : a) neg.push_back(-w);
        auto lb_primal = cycle_construction(signed_cycle(neg), x);
        auto lb_dual = cycle_dual_certificate(g, x, CertSide::LB);
        CHECK(lb_dual.objective == -lb_primal.value);
    }
}

TEST_CASE("all-positive unit cycle: alpha = |a_n| assignment stays feasible") {
    auto g = signed_cycle(std::vector<Rat>(6, Rat(1)));
    PointX x(rats({"0.6", "0.4", "0.7", "0.3", "0.5", "0.8"}));
    auto cert = cycle_construction(g, x);
    CHECK(cert.ctx.delta[6] == 0);
    // the degenerate alpha = 1 prices satisfy the dual rows even though the
    // returned certificate uses the tight alpha = 0 one
    for (int i = 1; i <= 6; ++i) {
        Rat z = cert.ctx.a[static_cast<std::size_t>(i - 1)] - 1;  // a_i - a_n
        CHECK(z >= 0);
        CHECK(z - 0 + 1 >= cert.ctx.a[static_cast<std::size_t>(i - 1)]);
    }
    auto dual = cycle_dual_certificate(g, x, CertSide::UB);
    CHECK(dual.alpha == 0);
    CHECK(dual.objective == cert.value);
}

TEST_CASE("interval certificates sit between the envelopes") {
    Prng rng(77);
    for (int t = 0; t < 25; ++t) {
        int n = 4 + static_cast<int>(rng.below(3));
        auto g = erdos_renyi(n, 0.6, 7000 + static_cast<std::uint64_t>(t));
        if (g.m() == 0) continue;
        // random interval sets with prescribed measures
        std::vector<Rat> x = rng.rational_point(static_cast<std::size_t>(n), 16);
        std::vector<IntervalSet> sets;
        for (int i = 0; i < n; ++i) {
            Rat offset = rng.unit_rational(16);
            Rat end = offset + x[static_cast<std::size_t>(i)];
            sets.push_back(end <= 1 ? IntervalSet::from_pairs({{offset, end}})
                                    : IntervalSet::from_pairs({{offset, Rat(1)}, {Rat(0), end - 1}}));
        }
        PointX px(x);
        Rat v = certificate_value(sets, g);
        CHECK(vex_exact(g, px).first <= v);
        CHECK(v <= cav_exact(g, px).first);
    }
}

TEST_CASE("cycle certificate equals cav on random instances") {
    Prng rng(123);
    for (int t = 0; t < 25; ++t) {
        int n = 4 + static_cast<int>(rng.below(4));
        auto g = signed_cycle(random_signs(rng, n));
        PointX x(rng.rational_point(static_cast<std::size_t>(n), 12));
        auto cert = cycle_construction(g, x);
        CHECK(cert.value == cav_exact(g, x).first);
        // vex side via negated weights
        std::vector<Edge> neg = g.edges();
        for (auto& e : neg) e.weight = -e.weight;
        auto gneg = WeightedGraph::from_edge_list(n, std::move(neg));
        auto lb_cert = cycle_construction(gneg, x);
        CHECK(-lb_cert.value == vex_exact(g, x).first);
    }
}

#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <sstream>

#include "bihull/enumerate.hpp"
#include "bihull/graph.hpp"

using namespace bihull;

namespace {

long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// n!/(2k(n-k)!) distinct k-cycles in K_n
long kn_cycles(int n, int k) {
    long r = 1;
    for (int i = n - k + 1; i <= n; ++i) r *= i;
    return r / (2 * k);
}

}  // namespace

TEST_CASE("from_edge_list validates and canonicalizes") {
    auto k3 = WeightedGraph::from_edge_list(3, {{1, 2, Rat(1)}, {2, 3, Rat(1)}, {1, 3, Rat(1)}});
    CHECK(k3.m() == 3);
    CHECK(complete_graph(5).m() == 10);
    CHECK_THROWS_AS(WeightedGraph::from_edge_list(2, {{1, 2, Rat(0)}}), Error);
    CHECK_THROWS_AS(WeightedGraph::from_edge_list(2, {{1, 2, Rat(1)}, {2, 1, Rat(2)}}), Error);
    CHECK_THROWS_AS(WeightedGraph::from_edge_list(2, {{1, 3, Rat(1)}}), Error);
    CHECK_THROWS_AS(WeightedGraph::from_edge_list(2, {{1, 1, Rat(1)}}), Error);
    CHECK(WeightedGraph::from_edge_list(2, {{1, 1, Rat(1)}}, true).m() == 1);
}

TEST_CASE("evaluate is exact") {
    auto k3 = complete_graph(3);
    CHECK(evaluate(k3, PointX({Rat(1), Rat(1), Rat(1)})) == 3);
    CHECK(evaluate(k3, PointX({Rat(0), Rat(0), Rat(0)})) == 0);

    auto k5 = complete_graph(5);
    PointX x({Rat(1, 2), Rat(1, 2), Rat(1, 2), Rat(3, 4), Rat(1, 4)});
    // oracle: direct expansion over the ten pairs
    Rat expect = 0;
    for (const auto& e : k5.edges()) expect += x[e.i] * x[e.j];
    CHECK(evaluate(k5, x) == expect);
    CHECK(evaluate(k5, x) == Rat(39, 16));
    CHECK_THROWS_AS(evaluate(k5, PointX({Rat(1)})), Error);
}

TEST_CASE("evaluate scales linearly in a single coordinate") {
    auto g = erdos_renyi(6, 0.6, 99);
    PointX x({Rat(1, 3), Rat(1, 2), Rat(2, 3), Rat(1, 4), Rat(3, 4), Rat(1, 5)});
    for (int v = 1; v <= 6; ++v) {
        PointX x0 = x, x2 = x;
        x0.x[static_cast<std::size_t>(v - 1)] = 0;
        x2.x[static_cast<std::size_t>(v - 1)] = x.x[static_cast<std::size_t>(v - 1)] / 2;
        // halving one coordinate halves the incident contribution
        CHECK(evaluate(g, x2) - evaluate(g, x0) == (evaluate(g, x) - evaluate(g, x0)) / 2);
    }
}

TEST_CASE("sign partition of a signed cycle") {
    // C_8 with signs (+,-,+,-,-,+,+,+)
    std::vector<Rat> a{Rat(0), Rat(1), Rat(-1), Rat(1), Rat(-1), Rat(-1), Rat(1), Rat(1), Rat(1)};
    auto c8 = cycle_graph(a);
    auto sp = sign_partition(c8);
    CHECK(sp.e_minus == std::vector<int>{2, 4, 5});
    CHECK(sp.e_plus == std::vector<int>{1, 3, 6, 7, 8});
    // junction vertices: both incident edges share the sign
    CHECK(sp.v_minus == std::vector<int>{5});
    CHECK(sp.v_plus == std::vector<int>{1, 7, 8});

    auto c4 = cycle_graph({Rat(0), Rat(1), Rat(1), Rat(1), Rat(1)});
    CHECK(sign_partition(c4).e_minus.empty());
    auto c5 = cycle_graph({Rat(0), Rat(-1), Rat(-2), Rat(-1), Rat(-1), Rat(-3)});
    CHECK(sign_partition(c5).e_plus.empty());
    CHECK(sign_partition(c5).e_minus.size() == 5);

    CHECK_THROWS_AS(sign_partition(complete_graph(4)), Error);
}

TEST_CASE("erdos_renyi is reproducible and in-range") {
    auto a = erdos_renyi(10, 0.3, 42);
    auto b = erdos_renyi(10, 0.3, 42);
    REQUIRE(a.m() == b.m());
    for (int k = 0; k < a.m(); ++k) {
        CHECK(a.edges()[static_cast<std::size_t>(k)].i == b.edges()[static_cast<std::size_t>(k)].i);
        CHECK(a.edges()[static_cast<std::size_t>(k)].weight == b.edges()[static_cast<std::size_t>(k)].weight);
    }
    auto c = erdos_renyi(10, 0.3, 43);
    bool differs = a.m() != c.m();
    if (!differs)
        for (int k = 0; k < a.m(); ++k)
            if (a.edges()[static_cast<std::size_t>(k)].weight != c.edges()[static_cast<std::size_t>(k)].weight)
                differs = true;
    CHECK(differs);
    CHECK_THROWS_AS(erdos_renyi(10, 0.0, 1), Error);
    CHECK_THROWS_AS(erdos_renyi(10, 1.0, 1), Error);

    // empirical edge frequency sanity: mean over seeds near p * C(10,2)
    long total = 0;
    for (std::uint64_t s = 0; s < 40; ++s) total += erdos_renyi(10, 0.3, 1000 + s).m();
    double avg = static_cast<double>(total) / 40.0;
    CHECK(avg > 9.0);
    CHECK(avg < 18.0);
}

TEST_CASE("clique enumeration matches binomial counts on K_n") {
    for (int n = 4; n <= 8; ++n) {
        auto kn = complete_graph(n);
        for (int k = 3; k <= n; ++k)
            CHECK(static_cast<long>(enumerate_cliques(kn, k, k).size()) == binom(n, k));
    }
    auto k5 = complete_graph(5);
    CHECK(enumerate_cliques(k5, 4, 5).size() == 6);  // five 4-cliques + one 5-clique

    auto lex = enumerate_cliques(k5, 3, 3);
    CHECK(std::is_sorted(lex.begin(), lex.end()));

    auto c6 = cycle_graph({Rat(0), Rat(1), Rat(1), Rat(1), Rat(1), Rat(1), Rat(1)});
    CHECK(enumerate_cliques(c6, 3, 6).empty());
}

TEST_CASE("cycle enumeration matches closed-form counts on K_n") {
    for (int n = 4; n <= 7; ++n) {
        auto kn = complete_graph(n);
        for (int k = 4; k <= n; ++k)
            CHECK(static_cast<long>(enumerate_cycles(kn, k, k).size()) == kn_cycles(n, k));
    }
    auto k4 = complete_graph(4);
    auto cycles4 = enumerate_cycles(k4, 4, 4);
    CHECK(cycles4.size() == 3);
    std::set<std::vector<int>> uniq(cycles4.begin(), cycles4.end());
    CHECK(uniq.size() == 3);
    for (const auto& c : cycles4) {
        CHECK(c[0] == 1);          // smallest vertex first
        CHECK(c[1] < c.back());    // reflection canonicalized
    }
    auto c8 = cycle_graph(std::vector<Rat>(9, Rat(1)));
    CHECK(enumerate_cycles(c8, 4, 8).size() == 1);
}

TEST_CASE("edge list text format round-trips") {
    auto g = erdos_renyi(7, 0.5, 5);
    std::stringstream ss;
    write_edge_list(ss, g);
    auto h = read_edge_list(ss);
    REQUIRE(h.n() == g.n());
    REQUIRE(h.m() == g.m());
    for (int k = 0; k < g.m(); ++k)
        CHECK(g.edges()[static_cast<std::size_t>(k)].weight == h.edges()[static_cast<std::size_t>(k)].weight);
}

#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "bihull/qp.hpp"

using namespace bihull;

namespace {

// K = 0 instance: unit bilinear terms on a triangle plus one negative loop
QpInstance demo_qp() {
    QpInstance inst;
    inst.n = 3;
    inst.objective.q[{1, 2}] = Rat(1);
    inst.objective.q[{1, 3}] = Rat(1);
    inst.objective.q[{2, 3}] = Rat(1);
    inst.objective.q[{1, 1}] = Rat(-2);
    inst.objective.c[2] = Rat(1, 2);
    return inst;
}

QpInstance demo_qcqp() {
    QpInstance inst;
    inst.n = 4;
    inst.objective.q[{1, 2}] = Rat(-3, 2);
    inst.objective.q[{3, 3}] = Rat(2);
    inst.objective.c[4] = Rat(-1);
    QpInstance::Block g1;
    g1.q[{1, 3}] = Rat(1);
    g1.q[{2, 4}] = Rat(1, 3);
    g1.c[1] = Rat(1);
    g1.b = Rat(2);
    inst.constraints.push_back(g1);
    inst.simplex_constraint = true;
    return inst;
}

}  // namespace

TEST_CASE("instance file round-trips") {
    for (const auto& inst : {demo_qp(), demo_qcqp()}) {
        std::stringstream ss;
        write_qp_instance(ss, inst);
        auto back = read_qp_instance(ss);
        CHECK(back.n == inst.n);
        CHECK(back.simplex_constraint == inst.simplex_constraint);
        CHECK(back.objective.q == inst.objective.q);
        CHECK(back.objective.c == inst.objective.c);
        REQUIRE(back.constraints.size() == inst.constraints.size());
        for (std::size_t k = 0; k < inst.constraints.size(); ++k) {
            CHECK(back.constraints[k].q == inst.constraints[k].q);
            CHECK(back.constraints[k].c == inst.constraints[k].c);
            CHECK(back.constraints[k].b == inst.constraints[k].b);
        }
    }
    std::stringstream bad("3 0 7\nQ0\nend\nc0\nend\n");
    CHECK_THROWS_AS(read_qp_instance(bad), Error);
}

TEST_CASE("linearization structure") {
    auto p = build_qp_linearization(demo_qp());
    // vars: 3 x + 4 y (three pairs + one loop)
    CHECK(p.num_vars == 7);
    // solving gives a finite lower bound
    auto sol = lp_solve(p);
    REQUIRE(sol.status == LpStatus::Optimal);
}

TEST_CASE("diagonal-only instance has no triangle rows") {
    QpInstance diag;
    diag.n = 2;
    diag.objective.q[{1, 1}] = Rat(1);
    diag.objective.q[{2, 2}] = Rat(-1);
    auto p = build_qp_linearization(diag);
    // rows: loop McCormick only (4 per loop, one duplicate y<=x dropped by dedup)
    CHECK(p.num_vars == 4);
    for (const auto& row : p.rows) CHECK(row.coeffs.size() <= 2);
    auto sol = lp_solve(p);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.value == -1);  // y_22 = 1, y_11 = 0 at x = (0, 1)
}

TEST_CASE("convexification splits the diagonal by sign") {
    auto f = build_qp_convexification(demo_qcqp());
    // positive diagonal (3,3) stays quadratic; no negative loops here
    REQUIRE(f.objective_quadratic.size() == 1);
    CHECK(f.objective_quadratic[0].first == "x3");
    CHECK(f.objective_quadratic[0].second == Rat(2));

    // all-negative diagonal: convexification equals the linearization shape
    QpInstance neg;
    neg.n = 2;
    neg.objective.q[{1, 1}] = Rat(-1);
    neg.objective.q[{1, 2}] = Rat(1);
    auto fneg = build_qp_convexification(neg);
    CHECK(fneg.objective_quadratic.empty());

    QpInstance pos;
    pos.n = 2;
    pos.objective.q[{1, 1}] = Rat(1);
    pos.objective.q[{2, 2}] = Rat(2);
    auto fpos = build_qp_convexification(pos);
    CHECK(fpos.objective_quadratic.size() == 2);
    CHECK(fpos.objective_linear.empty());

    // emitted text round-trips exactly
    std::stringstream ss;
    emit_qp_convexification(demo_qcqp(), ss);
    auto back = parse_lp_file(ss);
    CHECK(back == f);
}

TEST_CASE("triangle sampling curve is monotone under nested samples") {
    QpInstance inst;
    inst.n = 5;
    // complete bilinear part with mixed signs
    long sign = 1;
    for (int i = 1; i <= 5; ++i)
        for (int j = i + 1; j <= 5; ++j) {
            inst.objective.q[{i, j}] = Rat(sign);
            sign = -sign;
        }
    inst.objective.c[1] = Rat(-1, 2);
    auto curve = triangle_sampling_curve(inst, {0.0, 0.3, 0.6, 1.0}, 99);
    REQUIRE(curve.size() == 4);
    CHECK(curve[0].triangles_used == 0);
    CHECK(curve[3].triangles_used == 10);  // C(5,3)
    for (std::size_t i = 1; i < curve.size(); ++i) CHECK(curve[i - 1].bound <= curve[i].bound);

    // fraction 1 equals the full MT linearization
    auto full = lp_solve(build_qp_linearization(inst));
    CHECK(curve[3].bound == full.value);

    CHECK_THROWS_AS(triangle_sampling_curve(inst, {1.5}, 1), Error);

    // determinism
    auto again = triangle_sampling_curve(inst, {0.3}, 99);
    CHECK(again[0].bound == curve[1].bound);
}

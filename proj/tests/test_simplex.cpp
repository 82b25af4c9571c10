#include <catch2/catch_amalgamated.hpp>

#include "lp_brute.hpp"
#include "planted_lp.hpp"
#include "sirpfl/generator.hpp"
#include "sirpfl/simplex.hpp"

using namespace sirpfl;
using testing::plant_lp;
using testing::PlantedLp;

namespace {

LpModel free_model(int nvars) {
    LpModel m;
    for (int j = 0; j < nvars; ++j) m.add_var({VarTag::Z, j}, Rational(0), CostFamily::None);
    return m;
}

}  // namespace

TEST_CASE("simplex: min x subject to x >= 1") {
    LpModel m = free_model(1);
    m.vars[0].obj = Rational(1);
    m.add_ge({{0, Rational(1)}}, Rational(1));
    SimplexResult r = simplex_solve(m);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.x[0] == 1);
    CHECK(r.objective == 1);
}

TEST_CASE("simplex: detects infeasibility and unboundedness") {
    LpModel infes = free_model(1);
    infes.vars[0].obj = Rational(1);
    infes.add_ge({{0, Rational(1)}}, Rational(1));
    infes.add_ge({{0, Rational(-1)}}, Rational(0));  // x <= 0
    CHECK(simplex_solve(infes).status == LpStatus::Infeasible);

    LpModel unb = free_model(1);
    unb.vars[0].obj = Rational(-1);
    CHECK(simplex_solve(unb).status == LpStatus::Unbounded);
}

TEST_CASE("simplex: equality rows") {
    LpModel m = free_model(2);
    m.vars[0].obj = Rational(3);
    m.vars[1].obj = Rational(1);
    m.add_eq({{0, Rational(1)}, {1, Rational(1)}}, Rational(4));
    m.add_ge({{0, Rational(1)}}, Rational(1));
    SimplexResult r = simplex_solve(m);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.objective == Rational(6));  // x0=1, x1=3
}

TEST_CASE("simplex: Bland's rule terminates on Beale's cycling instance") {
    LpModel m = testing::beale_cycling_lp();
    SimplexResult r = simplex_solve(m);
    REQUIRE(r.status == LpStatus::Optimal);
    auto brute = testing::brute_force_lp_min(m);
    REQUIRE(brute.has_value());
    CHECK(r.objective == *brute);
    CHECK(r.objective == make_rational(-1, 20));
}

TEST_CASE("simplex: exact agreement on planted-optimum LPs") {
    Rng rng(20240817);
    for (int k = 0; k < 60; ++k) {
        PlantedLp p = plant_lp(rng);
        SimplexResult r = simplex_solve(p.model);
        REQUIRE(r.status == LpStatus::Optimal);
        CHECK(r.objective == p.optimum);
        CHECK(lp_feasible(p.model, r.x));
    }
}

TEST_CASE("simplex: agreement with exhaustive basis enumeration") {
    Rng rng(99);
    for (int k = 0; k < 25; ++k) {
        PlantedLp p = plant_lp(rng);
        auto brute = testing::brute_force_lp_min(p.model);
        REQUIRE(brute.has_value());
        CHECK(simplex_solve(p.model).objective == *brute);
    }
}

TEST_CASE("simplex: status and optimum agree with enumeration on arbitrary LPs") {
    Rng rng(0xBEEF);
    for (int k = 0; k < 400; ++k) {
        int n = static_cast<int>(rng.range(1, 5)), m = static_cast<int>(rng.range(1, 5));
        LpModel model;
        for (int j = 0; j < n; ++j)
            model.add_var({VarTag::Z, j}, make_rational(rng.range(-4, 6), rng.range(1, 3)),
                          CostFamily::None);
        for (int i = 0; i < m; ++i) {
            std::vector<LpTerm> terms;
            for (int j = 0; j < n; ++j) {
                long c = rng.range(-3, 3);
                if (c) terms.push_back({j, Rational(c)});
            }
            Rational rhs(rng.range(-5, 5));
            if (rng.chance_ppm(250000))
                model.add_eq(std::move(terms), rhs);
            else
                model.add_ge(std::move(terms), rhs);
        }
        SimplexResult res = simplex_solve(model);
        auto brute = testing::brute_force_lp_min(model);
        INFO("case " << k);
        if (res.status == LpStatus::Infeasible) {
            CHECK(!brute.has_value());
        } else if (res.status == LpStatus::Unbounded) {
            CHECK(brute.has_value());  // feasible, just no finite optimum
        } else {
            REQUIRE(brute.has_value());
            CHECK(res.objective == *brute);
            CHECK(lp_feasible(model, res.x));
        }
    }
}

TEST_CASE("simplex: deterministic") {
    Rng rng(5);
    PlantedLp p = plant_lp(rng);
    SimplexResult a = simplex_solve(p.model);
    SimplexResult b = simplex_solve(p.model);
    CHECK(a.x == b.x);
}

TEST_CASE("simplex: scaling the objective scales the optimum") {
    Rng rng(31337);
    for (int k = 0; k < 10; ++k) {
        PlantedLp p = plant_lp(rng);
        Rational base = simplex_solve(p.model).objective;
        LpModel scaled = p.model;
        Rational c = make_rational(7, 3);
        for (auto& v : scaled.vars) v.obj *= c;
        CHECK(simplex_solve(scaled).objective == base * c);
    }
}

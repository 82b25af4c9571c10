#include <catch2/catch_amalgamated.hpp>

#include "sirpfl/generator.hpp"
#include "sirpfl/oracle.hpp"
#include "sirpfl/simplex.hpp"

using namespace sirpfl;

namespace {

IapInstance uncap_iap(Rational distance, int horizon, std::vector<IapDemand> demands,
                      std::map<int, std::vector<Rational>> holding) {
    IapInstance ins;
    ins.distance = std::move(distance);
    ins.horizon = horizon;
    ins.demands = std::move(demands);
    ins.holding = std::move(holding);
    return ins;
}

/// Independent oracle: enumerate every nonempty visit-day subset; each demand
/// picks its cheapest feasible visit. Shares nothing with the DP.
Rational enum_uncap_iap(const IapInstance& ins) {
    REQUIRE(ins.horizon <= 14);
    Rational best(-1);
    for (unsigned mask = 1; mask < (1u << ins.horizon); ++mask) {
        Rational cost(0);
        for (int s = 1; s <= ins.horizon; ++s)
            if (mask & (1u << (s - 1))) cost += ins.distance;
        bool feasible = true;
        for (const auto& dp : ins.demands) {
            bool served = false;
            Rational cheapest(0);
            for (int s = 1; s <= dp.t; ++s) {
                if (!(mask & (1u << (s - 1)))) continue;
                Rational h = dp.d * ins.h(s, dp.t);
                if (!served || h < cheapest) cheapest = h;
                served = true;
            }
            if (!served) {
                feasible = false;
                break;
            }
            cost += cheapest;
        }
        if (feasible && (best < 0 || cost < best)) best = cost;
    }
    REQUIRE(best >= 0);
    return best;
}

}  // namespace

TEST_CASE("ww_dp: one visit covers both demands when trips are dear") {
    auto ins = uncap_iap(Rational(10), 2, {{1, Rational(1)}, {2, Rational(1)}},
                         {{1, {Rational(0)}}, {2, {Rational(3), Rational(0)}}});
    OracleResult res = ww_dp(ins);
    CHECK(res.optimum == 13);
    CHECK(res.witness.deliveries.size() == 1);
    CHECK(check_schedule(ins, res.witness).empty());
}

TEST_CASE("ww_dp: linear holding, three unit demands") {
    auto ins = uncap_iap(Rational(4), 3,
                         {{1, Rational(1)}, {2, Rational(1)}, {3, Rational(1)}},
                         {{1, {Rational(0)}},
                          {2, {Rational(1), Rational(0)}},
                          {3, {Rational(2), Rational(1), Rational(0)}}});
    CHECK(ww_dp(ins).optimum == 7);
}

TEST_CASE("ww_dp: zero holding collapses to a single day-1 visit") {
    auto ins = uncap_iap(Rational(9), 4, {{2, Rational(3)}, {4, Rational(1)}},
                         {{2, {Rational(0), Rational(0)}},
                          {4, {Rational(0), Rational(0), Rational(0), Rational(0)}}});
    CHECK(ww_dp(ins).optimum == 9);
}

TEST_CASE("ww_dp: rejects capacitated instances") {
    auto ins = uncap_iap(Rational(1), 1, {{1, Rational(1)}}, {{1, {Rational(0)}}});
    ins.variant = Variant::CapSplit;
    ins.capacity = Rational(1);
    CHECK_THROWS_AS(ww_dp(ins), std::invalid_argument);
}

TEST_CASE("ww_dp matches exhaustive visit-set enumeration") {
    IapGenParams p;
    p.horizon = 6;
    p.demand_density = 0.8;
    p.slope_max = 4;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        IapInstance ins = generate_random_iap(p, seed);
        OracleResult res = ww_dp(ins);
        CHECK(res.optimum == enum_uncap_iap(ins));
        CHECK(check_schedule(ins, res.witness).empty());
        CHECK(res.witness.total() == res.optimum);
    }
}

TEST_CASE("partition_exists") {
    CHECK(partition_exists({1, 2, 3, 4}));
    CHECK(!partition_exists({2, 2, 2}));
    CHECK(partition_exists({}));  // both halves empty
    CHECK(!partition_exists({1}));
    CHECK(partition_exists({5, 5}));
    CHECK(!partition_exists({1, 2, 4}));  // odd total
    CHECK_THROWS_AS(partition_exists({0, 1}), std::invalid_argument);
}

TEST_CASE("exact_iap splittable: split across days beats early delivery") {
    IapInstance ins;
    ins.distance = Rational(1);
    ins.horizon = 2;
    ins.variant = Variant::CapSplit;
    ins.capacity = Rational(1);
    ins.demands = {{1, Rational(1)}, {2, Rational(1)}};
    ins.holding[1] = {Rational(0)};
    ins.holding[2] = {Rational(10), Rational(0)};
    OracleResult res = exact_iap(ins);
    CHECK(res.optimum == 2);
    CHECK(res.method == OracleMethod::TripEnum);
    CHECK(check_schedule(ins, res.witness).empty());
    CHECK(res.witness.total() == res.optimum);
}

TEST_CASE("exact_iap: partition gadgets") {
    IapInstance yes = make_partition_gadget({1, 2, 3, 4}, Rational(7));
    OracleResult r1 = exact_iap(yes);
    CHECK(r1.optimum == 14);
    CHECK(r1.method == OracleMethod::PackEnum);
    CHECK(check_schedule(yes, r1.witness).empty());

    IapInstance no = make_partition_gadget({2, 2, 2}, Rational(1));
    OracleResult r2 = exact_iap(no);
    CHECK(r2.optimum == 3);
    CHECK(check_schedule(no, r2.witness).empty());

    // splittable relaxation of the same data is cheaper or equal
    CHECK(exact_iap(no, Variant::CapSplit).optimum <= r2.optimum);
    CHECK(exact_iap(no, Variant::CapSplit).optimum == 2);
}

TEST_CASE("reduction soundness on small multisets") {
    // every multiset over {1..5} with up to 4 elements and max <= sum/2
    std::vector<std::vector<long>> stack{{}};
    for (int round = 0; round < 4; ++round) {
        std::vector<std::vector<long>> next;
        for (const auto& s : stack)
            for (long a = s.empty() ? 1 : s.back(); a <= 5; ++a) {
                auto t = s;
                t.push_back(a);
                next.push_back(t);
            }
        for (const auto& s : next) {
            long total = 0, mx = 0;
            for (long a : s) {
                total += a;
                mx = std::max(mx, a);
            }
            if (2 * mx > total) continue;
            IapInstance g = make_partition_gadget(s, Rational(3));
            bool cheap = exact_iap(g).optimum == Rational(6);
            CHECK(cheap == partition_exists(s));
        }
        stack = std::move(next);
    }
}

TEST_CASE("splittable optimum never exceeds the unsplittable one") {
    IapGenParams p;
    p.horizon = 4;
    p.demand_density = 0.8;
    p.variant = Variant::CapUnsplit;
    p.capacity = make_rational(7, 2);
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        IapInstance ins = generate_random_iap(p, seed);
        OracleResult split = exact_iap(ins, Variant::CapSplit);
        OracleResult unsplit = exact_iap(ins, Variant::CapUnsplit);
        CHECK(split.optimum <= unsplit.optimum);
        CHECK(check_schedule(ins, unsplit.witness).empty());
    }
}

TEST_CASE("reduction soundness on sampled 7- and 8-element multisets") {
    Rng rng(777);
    for (int k = 0; k < 60; ++k) {
        int count = 7 + static_cast<int>(rng.range(0, 1));
        std::vector<long> s;
        long total = 0, mx = 0;
        for (int i = 0; i < count; ++i) {
            long a = rng.range(1, 9);
            s.push_back(a);
            total += a;
            mx = std::max(mx, a);
        }
        if (2 * mx > total) continue;
        IapInstance g = make_partition_gadget(s, Rational(2));
        CHECK((exact_iap(g).optimum == Rational(4)) == partition_exists(s));
    }
}

TEST_CASE("exact_sirpfl: hand-checked optima") {
    Instance one;
    one.n = 1;
    one.horizon = 1;
    one.weights = {{Rational(0)}};
    one.facility_costs = {Rational(5)};
    one.demands = {{0, 1, Rational(1)}};
    one.holding = {{Rational(0)}};
    OracleResult r1 = exact_sirpfl(one);
    CHECK(r1.optimum == 5);
    CHECK(check_schedule(one, r1.witness).empty());

    Instance two;
    two.n = 2;
    two.horizon = 1;
    two.weights = {{Rational(0), Rational(2)}, {Rational(2), Rational(0)}};
    two.facility_costs = {Rational(1), Rational(100)};
    two.demands = {{1, 1, Rational(1)}};
    two.holding = {{Rational(0)}};
    OracleResult r2 = exact_sirpfl(two);
    CHECK(r2.optimum == 3);
    CHECK(r2.witness.opened == std::vector<int>{0});
}

TEST_CASE("oracle optimum dominates the LP relaxation") {
    GenParams p;
    p.n = 3;
    p.horizon = 3;
    p.demand_density = 0.6;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        Instance ins = generate_random(p, seed);
        Rational lp = solve_lp(build_usirpfl_lp(ins)).objective;
        OracleResult res = exact_sirpfl(ins);
        CHECK(res.optimum >= lp);
        CHECK(check_schedule(ins, res.witness).empty());
        CHECK(res.witness.total() == res.optimum);
    }
    p.variant = Variant::CapSplit;
    p.capacity = Rational(3);
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        Instance ins = generate_random(p, seed);
        Rational lp = solve_lp(build_cssirpfl_lp(ins)).objective;
        OracleResult split = exact_sirpfl(ins);
        CHECK(split.optimum >= lp);
        Instance uns = ins;
        uns.variant = Variant::CapUnsplit;
        OracleResult unsplit = exact_sirpfl(uns);
        CHECK(unsplit.optimum >= split.optimum);  // relaxation ordering
        CHECK(check_schedule(uns, unsplit.witness).empty());
    }
}

TEST_CASE("oracle size gates are hard errors") {
    GenParams p;
    p.n = 6;
    p.horizon = 2;
    p.demand_density = 0.5;
    CHECK_THROWS_AS(exact_sirpfl(generate_random(p, 1)), OracleTooLarge);

    IapGenParams q;
    q.horizon = 7;
    q.variant = Variant::CapSplit;
    q.capacity = Rational(2);
    CHECK_THROWS_AS(exact_iap(generate_random_iap(q, 1)), OracleTooLarge);
}

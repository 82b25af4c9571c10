#include <catch2/catch_amalgamated.hpp>

#include "sirpfl/harness.hpp"

using namespace sirpfl;

namespace {

ExperimentConfig small_uncap() {
    ExperimentConfig cfg;
    cfg.variant = Variant::Uncap;
    cfg.seeds = {0, 1, 2, 3, 4};
    cfg.n_min = 2;
    cfg.n_max = 4;
    cfg.t_min = 1;
    cfg.t_max = 3;
    cfg.density = 0.6;
    cfg.max_demands = 6;
    return cfg;
}

}  // namespace

TEST_CASE("certify: uncapacitated family passes and keeps seed order") {
    RatioReport report = certify(small_uncap());
    REQUIRE(report.rows.size() == 5);
    CHECK(report.all_pass);
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const RatioRow& row = report.rows[i];
        CHECK(row.seed == i);
        CHECK(row.pass);
        CHECK(row.has_lp);
        CHECK(row.rounded_total >= row.lp_obj);
        REQUIRE(row.oracle_opt.has_value());
        CHECK(*row.oracle_opt >= row.lp_obj);
    }
    CHECK(report.max_ratio_vs_lp.has_value());
    CHECK(*report.max_ratio_vs_lp <= 12);
}

TEST_CASE("certify: deterministic, also across thread counts") {
    ExperimentConfig cfg = small_uncap();
    std::string a = report_csv(certify(cfg));
    std::string b = report_csv(certify(cfg));
    CHECK(a == b);
    setenv("SIRPFL_THREADS", "1", 1);
    std::string serial = report_csv(certify(cfg));
    unsetenv("SIRPFL_THREADS");
    CHECK(serial == a);
}

TEST_CASE("certify: empty seed list yields an empty passing report") {
    ExperimentConfig cfg = small_uncap();
    cfg.seeds.clear();
    RatioReport report = certify(cfg);
    CHECK(report.rows.empty());
    CHECK(report.all_pass);
    CHECK(!report.max_ratio_vs_lp.has_value());
}

TEST_CASE("certify: capacitated unsplittable IAP with repack checks") {
    ExperimentConfig cfg;
    cfg.iap = true;
    cfg.variant = Variant::CapUnsplit;
    cfg.capacity = make_rational(5, 2);
    cfg.t_min = 2;
    cfg.t_max = 6;
    cfg.density = 0.7;
    for (std::uint64_t s = 0; s < 10; ++s) cfg.seeds.push_back(s);
    RatioReport report = certify(cfg);
    CHECK(report.all_pass);
    for (const auto& row : report.rows) {
        CHECK(row.pass);
        if (row.ratio_vs_lp) CHECK(*row.ratio_vs_lp <= 6);
    }
}

TEST_CASE("csv schema is stable") {
    ExperimentConfig cfg = small_uncap();
    cfg.seeds = {1};
    std::string csv = report_csv(certify(cfg));
    CHECK(csv.rfind("seed,variant,n,T,num_demands,lp_obj,f_lp,r_lp,h_lp,rounded_total,"
                    "f_used_factor,r_used_factor,h_used_factor,oracle_opt,ratio_vs_lp,"
                    "ratio_vs_opt,pass\n",
                    0) == 0);
    // one header plus one row
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
    // cells carry exact value with decimal approximation
    CHECK(csv.find("(") != std::string::npos);
}

TEST_CASE("oracle column is blank when the instance is gated") {
    ExperimentConfig cfg = small_uncap();
    cfg.seeds = {3};
    cfg.n_min = cfg.n_max = 6;  // above the exact_sirpfl gate
    cfg.t_min = cfg.t_max = 2;
    RatioReport report = certify(cfg);
    REQUIRE(report.rows.size() == 1);
    CHECK(!report.rows[0].oracle_opt.has_value());
    CHECK(report.rows[0].pass);  // gating is not a failure
}

TEST_CASE("config parsing") {
    Json j = Json::parse(R"({
        "kind": "iap",
        "variant": "CAP_SPLIT",
        "num_seeds": 3,
        "T": [2, 6],
        "density": 0.7,
        "capacity": "5/2",
        "checks": ["feasibility", "components"],
        "output": "out.csv"
    })");
    ExperimentConfig cfg = config_from_json(j);
    CHECK(cfg.iap);
    CHECK(cfg.variant == Variant::CapSplit);
    CHECK(cfg.seeds == std::vector<std::uint64_t>{0, 1, 2});
    CHECK(cfg.t_max == 6);
    CHECK(*cfg.capacity == make_rational(5, 2));
    CHECK(cfg.checks.feasibility);
    CHECK(cfg.checks.components);
    CHECK(!cfg.checks.oracle);
    CHECK(cfg.output == "out.csv");

    j["checks"] = {"no_such_suite"};
    CHECK_THROWS_AS(config_from_json(j), ParseError);
    j.erase("checks");
    j.erase("capacity");
    CHECK_THROWS_AS(config_from_json(j), ParseError);  // capacitated without capacity
}

TEST_CASE("a planted violation turns the row and report red") {
    // certify against a family whose capacity makes validate fail is awkward;
    // instead check the factor bookkeeping directly
    RatioRow row;
    auto used = detail::used_factor(row, "routing", Rational(5), Rational(1), 3);
    REQUIRE(used.has_value());
    CHECK(*used == 5);
    CHECK(!row.pass);
    REQUIRE(!row.failures.empty());
    CHECK(row.failures[0].find("routing") != std::string::npos);
}

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "sirpfl/generator.hpp"
#include "sirpfl/io.hpp"
#include "sirpfl/oracle.hpp"
#include "sirpfl/rounding.hpp"

namespace sirpfl {

struct CheckSet {
    bool anchors = true;
    bool ball_mass = true;
    bool feasibility = true;
    bool components = true;
    bool repack = true;
    bool oracle = true;
};

/// One certification family: a seeded instance generator plus the invariant
/// suites to run on every instance.
struct ExperimentConfig {
    bool iap = false;
    Variant variant = Variant::Uncap;
    std::vector<std::uint64_t> seeds;
    int n_min = 2, n_max = 5;
    int t_min = 1, t_max = 4;
    double density = 0.6;
    long weight_range = 10;
    long facility_min = 0, facility_max = 10;
    long slope_min = 0, slope_max = 3;
    long demand_levels = 5;
    int max_demands = 8;
    long distance_min = 1, distance_max = 10;
    std::optional<Rational> capacity;
    bool compare_oracle = true;
    CheckSet checks;
    std::string output;  // CSV path; empty writes nothing
};

/// Proven per-component factors being certified, by variant and problem kind.
struct FactorTable {
    long holding = 2, routing = 12, facility = 4, total = 12;
};

inline FactorTable factors_for(bool iap, Variant variant) {
    if (iap) {
        if (variant == Variant::CapSplit) return {2, 3, 1, 3};
        if (variant == Variant::CapUnsplit) return {2, 6, 1, 6};
        return {1, 1, 1, 1};  // uncapacitated IAP is solved exactly
    }
    if (variant == Variant::Uncap) return {2, 12, 4, 12};
    if (variant == Variant::CapSplit) return {2, 24, 4, 24};
    return {2, 48, 4, 48};
}

struct RatioRow {
    std::uint64_t seed = 0;
    std::string variant;
    int n = 1, horizon = 1, num_demands = 0;
    bool has_lp = false;
    Rational lp_obj, f_lp, r_lp, h_lp;
    Rational rounded_total;
    std::optional<Rational> f_used, r_used, h_used;  // component / lp component
    std::optional<Rational> oracle_opt;              // blank when size-gated
    std::optional<Rational> ratio_vs_lp, ratio_vs_opt;
    bool pass = true;
    std::vector<std::string> failures;
};

struct RatioReport {
    std::vector<RatioRow> rows;
    bool all_pass = true;
    std::optional<Rational> max_ratio_vs_lp;
    std::optional<Rational> mean_ratio_vs_lp;
};

namespace detail {

inline void fail(RatioRow& row, const std::string& why) {
    row.pass = false;
    row.failures.push_back(why);
}

/// used = component / bound-side; 0/0 counts as within any factor.
inline std::optional<Rational> used_factor(RatioRow& row, const char* name, const Rational& comp,
                                           const Rational& lp_comp, long factor) {
    if (lp_comp == 0) {
        if (comp != 0) {
            fail(row, std::string(name) + " positive while its LP component is zero");
            return std::nullopt;
        }
        return Rational(0);
    }
    Rational used = comp / lp_comp;
    if (used > factor)
        fail(row, std::string(name) + " factor " + rat_str(used) + " exceeds " + std::to_string(factor));
    return used;
}

inline bool anchors_disjoint(const VisitPlan& plan, const std::vector<int>& deadlines) {
    for (std::size_t a = 0; a < plan.anchors.size(); ++a)
        for (std::size_t b = a + 1; b < plan.anchors.size(); ++b) {
            int p = plan.anchors[a], q = plan.anchors[b];
            if (std::max(plan.s_star.at(p), plan.s_star.at(q)) <=
                std::min(deadlines[p], deadlines[q]))
                return false;
        }
    return true;
}

template <typename AnyIns>
inline void check_trace(RatioRow& row, const AnyIns& ins, const SolveTrace& trace,
                        const CheckSet& checks, const FactorTable& factors) {
    const Schedule& sched = trace.schedule;
    row.rounded_total = sched.total();
    if (checks.feasibility) {
        auto report = check_schedule(ins, sched);
        for (const auto& line : report) fail(row, "schedule: " + line);
        if (trace.split_schedule) {
            // the intermediate schedule may split demands; check it under splittable rules
            AnyIns relaxed = ins;
            relaxed.variant = Variant::CapSplit;
            for (const auto& line : check_schedule(relaxed, *trace.split_schedule))
                fail(row, "split schedule: " + line);
        }
    }
    if (checks.anchors) {
        std::vector<int> deadlines;
        for (const auto& dp : ins.demands) deadlines.push_back(dp.t);
        for (const auto& plan : trace.plans)
            if (!anchors_disjoint(plan, deadlines)) fail(row, "anchor intervals overlap");
    }
    if (trace.lp) {
        const LpSolution& lp = *trace.lp;
        row.has_lp = true;
        row.lp_obj = lp.objective;
        row.f_lp = lp.facility_cost;
        row.r_lp = lp.routing_cost;
        row.h_lp = lp.holding_cost;
        if (checks.components) {
            row.h_used = used_factor(row, "holding", sched.holding_cost, lp.holding_cost, factors.holding);
            row.r_used = used_factor(row, "routing", sched.routing_cost, lp.routing_cost, factors.routing);
            row.f_used = used_factor(row, "facility", sched.facility_cost, lp.facility_cost, factors.facility);
            if (sched.total() > factors.total * lp.objective)
                fail(row, "total exceeds " + std::to_string(factors.total) + " x LP");
            if (sched.total() < lp.objective) fail(row, "rounded total below the LP optimum");
            if (lp.objective != 0) row.ratio_vs_lp = sched.total() / lp.objective;
        }
    }
    if (checks.ball_mass && trace.balls && trace.lp) {
        for (int i : trace.balls->selected) {
            Rational mass(0);
            for (int u : trace.balls->balls[i].members) mass += trace.lp->z(u);
            if (4 * mass < 1) fail(row, "selected ball z-mass below 1/4");
        }
    }
    if (checks.repack && trace.split_schedule) {
        const Schedule& split = *trace.split_schedule;
        if (sched.holding_cost != split.holding_cost) fail(row, "repacking changed the holding cost");
        if (sched.total() > 2 * split.total()) fail(row, "unsplittable total above twice the splittable");
        for (const auto& del : sched.deliveries)
            if (static_cast<long>(del.trips.size()) > 2 * split.trips_on(del.client, del.day))
                fail(row, "repacked trips above twice the splittable count");
    }
}

inline std::optional<OracleResult> gated_oracle(const Instance& ins) {
    try {
        return exact_sirpfl(ins);
    } catch (const OracleTooLarge&) {
        return std::nullopt;
    }
}

inline std::optional<OracleResult> gated_oracle(const IapInstance& ins) {
    try {
        return exact_iap(ins);
    } catch (const OracleTooLarge&) {
        return std::nullopt;
    }
}

template <typename AnyIns>
inline void check_oracle(RatioRow& row, const AnyIns& ins, const FactorTable& factors) {
    auto oracle = gated_oracle(ins);
    if (!oracle) return;
    row.oracle_opt = oracle->optimum;
    if (row.rounded_total < oracle->optimum) fail(row, "rounded schedule beats the exact optimum");
    if (row.has_lp && oracle->optimum < row.lp_obj) fail(row, "oracle optimum below the LP relaxation");
    if (oracle->optimum != 0) {
        row.ratio_vs_opt = row.rounded_total / oracle->optimum;
        if (*row.ratio_vs_opt > factors.total)
            fail(row, "end-to-end ratio above the proven factor");
    } else if (row.rounded_total != 0) {
        fail(row, "positive cost on a zero-optimum instance");
    }
}

inline GenParams to_gen_params(const ExperimentConfig& cfg, Rng& rng) {
    GenParams p;
    p.n = static_cast<int>(rng.range(cfg.n_min, cfg.n_max));
    p.horizon = static_cast<int>(rng.range(cfg.t_min, cfg.t_max));
    p.demand_density = cfg.density;
    p.weight_range = cfg.weight_range;
    p.facility_min = cfg.facility_min;
    p.facility_max = cfg.facility_max;
    p.slope_min = cfg.slope_min;
    p.slope_max = cfg.slope_max;
    p.demand_levels = cfg.demand_levels;
    p.max_demands = cfg.max_demands;
    p.capacity = cfg.capacity;
    p.variant = cfg.variant;
    return p;
}

inline IapGenParams to_iap_params(const ExperimentConfig& cfg, Rng& rng) {
    IapGenParams p;
    p.horizon = static_cast<int>(rng.range(cfg.t_min, cfg.t_max));
    p.demand_density = cfg.density;
    p.distance_min = cfg.distance_min;
    p.distance_max = cfg.distance_max;
    p.slope_min = cfg.slope_min;
    p.slope_max = cfg.slope_max;
    p.demand_levels = cfg.demand_levels;
    p.capacity = cfg.capacity;
    p.variant = cfg.variant;
    return p;
}

}  // namespace detail

/// Certifies one seed end to end: generate, validate, solve the LP, round,
/// run every enabled invariant suite, optionally compare with the exact
/// oracle. Pure function of (config, seed).
inline RatioRow certify_one(const ExperimentConfig& cfg, std::uint64_t seed) {
    RatioRow row;
    row.seed = seed;
    row.variant = variant_str(cfg.variant);
    FactorTable factors = factors_for(cfg.iap, cfg.variant);
    Rng shape_rng(seed ^ 0x5eedada7a11ceULL);
    try {
        if (cfg.iap) {
            IapInstance ins = generate_random_iap(detail::to_iap_params(cfg, shape_rng), seed);
            row.n = 1;
            row.horizon = ins.horizon;
            row.num_demands = static_cast<int>(ins.demands.size());
            for (const auto& line : validate(ins)) detail::fail(row, "validate: " + line);
            SolveTrace trace = solve_trace(ins);
            detail::check_trace(row, ins, trace, cfg.checks, factors);
            if (cfg.compare_oracle && cfg.checks.oracle) detail::check_oracle(row, ins, factors);
        } else {
            Instance ins = generate_random(detail::to_gen_params(cfg, shape_rng), seed);
            row.n = ins.n;
            row.horizon = ins.horizon;
            row.num_demands = static_cast<int>(ins.demands.size());
            for (const auto& line : validate(ins)) detail::fail(row, "validate: " + line);
            SolveTrace trace = solve_trace(ins);
            detail::check_trace(row, ins, trace, cfg.checks, factors);
            if (cfg.compare_oracle && cfg.checks.oracle) detail::check_oracle(row, ins, factors);
        }
    } catch (const std::exception& e) {
        detail::fail(row, std::string("exception: ") + e.what());
    }
    return row;
}

inline int certify_threads() {
    if (const char* env = std::getenv("SIRPFL_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs every seed (concurrently; rows stay in seed order) and aggregates.
inline RatioReport certify(const ExperimentConfig& cfg) {
    RatioReport report;
    report.rows.resize(cfg.seeds.size());
    const int threads = std::min<int>(certify_threads(), std::max<std::size_t>(cfg.seeds.size(), 1));
    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = cursor.fetch_add(1);
            if (i >= cfg.seeds.size()) return;
            report.rows[i] = certify_one(cfg, cfg.seeds[i]);
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    Rational sum(0);
    long counted = 0;
    for (const auto& row : report.rows) {
        report.all_pass = report.all_pass && row.pass;
        if (row.ratio_vs_lp) {
            if (!report.max_ratio_vs_lp || *row.ratio_vs_lp > *report.max_ratio_vs_lp)
                report.max_ratio_vs_lp = row.ratio_vs_lp;
            sum += *row.ratio_vs_lp;
            ++counted;
        }
    }
    if (counted > 0) report.mean_ratio_vs_lp = sum / counted;
    return report;
}

// ---------------------------------------------------------------------------
// CSV report. Value cells carry the exact rational followed by a 6-decimal
// approximation; pass/fail always comes from the rational comparison.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string csv_cell(const Rational& q) { return rat_str(q) + " (" + rat_approx6(q) + ")"; }

inline std::string csv_cell(const std::optional<Rational>& q) {
    return q ? csv_cell(*q) : std::string();
}

}  // namespace detail

inline std::string report_csv(const RatioReport& report) {
    std::string out =
        "seed,variant,n,T,num_demands,lp_obj,f_lp,r_lp,h_lp,rounded_total,"
        "f_used_factor,r_used_factor,h_used_factor,oracle_opt,ratio_vs_lp,ratio_vs_opt,pass\n";
    for (const auto& row : report.rows) {
        out += std::to_string(row.seed) + "," + row.variant + "," + std::to_string(row.n) + "," +
               std::to_string(row.horizon) + "," + std::to_string(row.num_demands) + ",";
        if (row.has_lp)
            out += detail::csv_cell(row.lp_obj) + "," + detail::csv_cell(row.f_lp) + "," +
                   detail::csv_cell(row.r_lp) + "," + detail::csv_cell(row.h_lp) + ",";
        else
            out += ",,,,";
        out += detail::csv_cell(row.rounded_total) + "," + detail::csv_cell(row.f_used) + "," +
               detail::csv_cell(row.r_used) + "," + detail::csv_cell(row.h_used) + "," +
               detail::csv_cell(row.oracle_opt) + "," + detail::csv_cell(row.ratio_vs_lp) + "," +
               detail::csv_cell(row.ratio_vs_opt) + "," + (row.pass ? "1" : "0") + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Config file parsing (same conventions as the instance format).
// ---------------------------------------------------------------------------

inline ExperimentConfig config_from_json(const Json& j) {
    ExperimentConfig cfg;
    if (j.contains("kind")) {
        std::string kind = j.at("kind").get<std::string>();
        if (kind != "sirpfl" && kind != "iap") throw ParseError("kind: expected 'sirpfl' or 'iap'");
        cfg.iap = kind == "iap";
    }
    auto var = parse_variant(detail::member(j, "variant", "config").get<std::string>());
    if (!var) throw ParseError("variant: must be UNCAP, CAP_SPLIT or CAP_UNSPLIT");
    cfg.variant = *var;
    if (j.contains("seeds")) {
        for (const auto& s : j.at("seeds")) cfg.seeds.push_back(s.get<std::uint64_t>());
    } else if (j.contains("num_seeds")) {
        for (std::uint64_t s = 0; s < j.at("num_seeds").get<std::uint64_t>(); ++s)
            cfg.seeds.push_back(s);
    } else {
        throw ParseError("config: needs 'seeds' or 'num_seeds'");
    }
    auto range = [&](const char* key, long& lo, long& hi) {
        if (!j.contains(key)) return;
        const Json& r = j.at(key);
        if (!r.is_array() || r.size() != 2) throw ParseError(std::string(key) + ": expected [lo, hi]");
        lo = r[0].get<long>();
        hi = r[1].get<long>();
        if (hi < lo) throw ParseError(std::string(key) + ": hi < lo");
    };
    long nlo = cfg.n_min, nhi = cfg.n_max;
    range("n", nlo, nhi);
    cfg.n_min = static_cast<int>(nlo);
    cfg.n_max = static_cast<int>(nhi);
    long tlo = cfg.t_min, thi = cfg.t_max;
    range("T", tlo, thi);
    cfg.t_min = static_cast<int>(tlo);
    cfg.t_max = static_cast<int>(thi);
    if (j.contains("density")) cfg.density = j.at("density").get<double>();
    if (j.contains("weight_range")) cfg.weight_range = j.at("weight_range").get<long>();
    range("facility_range", cfg.facility_min, cfg.facility_max);
    range("slope_range", cfg.slope_min, cfg.slope_max);
    range("distance_range", cfg.distance_min, cfg.distance_max);
    if (j.contains("demand_levels")) cfg.demand_levels = j.at("demand_levels").get<long>();
    if (j.contains("max_demands")) cfg.max_demands = j.at("max_demands").get<int>();
    if (j.contains("capacity") && !j.at("capacity").is_null())
        cfg.capacity = detail::json_rat(j.at("capacity"), "capacity");
    if (cfg.variant != Variant::Uncap && !cfg.capacity)
        throw ParseError("capacity: required for capacitated variants");
    if (j.contains("compare_oracle")) cfg.compare_oracle = j.at("compare_oracle").get<bool>();
    if (j.contains("checks")) {
        cfg.checks = CheckSet{false, false, false, false, false, false};
        for (const auto& c : j.at("checks")) {
            std::string name = c.get<std::string>();
            if (name == "anchors") cfg.checks.anchors = true;
            else if (name == "ball_mass") cfg.checks.ball_mass = true;
            else if (name == "feasibility") cfg.checks.feasibility = true;
            else if (name == "components") cfg.checks.components = true;
            else if (name == "repack") cfg.checks.repack = true;
            else if (name == "oracle") cfg.checks.oracle = true;
            else throw ParseError("checks: unknown suite '" + name + "'");
        }
    }
    if (j.contains("output")) cfg.output = j.at("output").get<std::string>();
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    Json j;
    try {
        j = Json::parse(ss.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("not valid JSON: ") + e.what());
    }
    return config_from_json(j);
}

}  // namespace sirpfl

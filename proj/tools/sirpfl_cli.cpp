// Command-line front end: instance generation, solving, exact oracles,
// certification runs and timing tables.

#include <chrono>
#include <iostream>
#include <variant>

#include <CLI11.hpp>

#include "sirpfl/harness.hpp"
#include "sirpfl/io.hpp"
#include "sirpfl/oracle.hpp"
#include "sirpfl/rounding.hpp"

namespace {

using namespace sirpfl;

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 1;
constexpr int kExitBoundViolation = 2;
constexpr int kExitOracleGate = 3;

void emit(const std::string& path, const std::string& text) {
    if (path.empty())
        std::cout << text;
    else
        write_file(path, text);
}

void print_costs(const Schedule& sched) {
    auto line = [](const char* name, const Rational& q) {
        std::cout << name << ": " << rat_str(q) << " (" << rat_approx6(q) << ")\n";
    };
    line("facility", sched.facility_cost);
    line("routing", sched.routing_cost);
    line("holding", sched.holding_cost);
    line("total", sched.total());
}

struct GenerateOptions {
    GenParams sirpfl;
    IapGenParams iap;
    bool is_iap = false;
    std::uint64_t seed = 0;
    std::string variant = "UNCAP";
    std::string capacity;
    std::string output;
};

int run_generate(const GenerateOptions& opt) {
    auto variant = parse_variant(opt.variant);
    if (!variant) {
        std::cerr << "error: unknown variant " << opt.variant << "\n";
        return kExitInvalidInput;
    }
    std::optional<Rational> capacity;
    if (!opt.capacity.empty()) capacity = parse_rational_or_throw(opt.capacity, "--capacity");
    if (opt.is_iap) {
        IapGenParams p = opt.iap;
        p.variant = *variant;
        p.capacity = capacity;
        emit(opt.output, serialize(generate_random_iap(p, opt.seed)));
    } else {
        GenParams p = opt.sirpfl;
        p.variant = *variant;
        p.capacity = capacity;
        emit(opt.output, serialize(generate_random(p, opt.seed)));
    }
    return kExitOk;
}

int run_solve(const std::string& input, const std::string& variant_flag, const std::string& output,
              const std::string& csv_path, const std::string& lp_export_path) {
    AnyInstance any = load_instance(input);
    if (!variant_flag.empty()) {
        auto variant = parse_variant(variant_flag);
        if (!variant) {
            std::cerr << "error: unknown variant " << variant_flag << "\n";
            return kExitInvalidInput;
        }
        std::visit([&](auto& ins) { ins.variant = *variant; }, any);
        std::visit(
            [&](auto& ins) {
                auto report = validate(ins);
                if (!report.empty()) throw ParseError("after --variant override: " + report.front());
            },
            any);
    }
    SolveTrace trace = std::visit([](const auto& ins) { return solve_trace(ins); }, any);
    if (!lp_export_path.empty()) {
        std::visit(
            [&](const auto& ins) {
                using T = std::decay_t<decltype(ins)>;
                LpModel model;
                if constexpr (std::is_same_v<T, Instance>)
                    model = ins.variant == Variant::Uncap ? build_usirpfl_lp(ins)
                                                          : build_cssirpfl_lp(ins);
                else if (ins.variant != Variant::Uncap)
                    model = build_csiap_lp(ins);
                else
                    throw ParseError("--lp-export: the uncapacitated IAP path has no LP");
                write_file(lp_export_path, export_mps(model));
            },
            any);
    }
    auto report = std::visit([&](const auto& ins) { return check_schedule(ins, trace.schedule); }, any);
    if (!report.empty()) {
        std::cerr << "internal error: schedule failed feasibility: " << report.front() << "\n";
        return kExitBoundViolation;
    }
    print_costs(trace.schedule);
    if (!output.empty()) write_file(output, serialize(trace.schedule));
    if (!csv_path.empty()) write_file(csv_path, schedule_csv(trace.schedule));
    return kExitOk;
}

int run_oracle(const std::string& input, const std::string& output) {
    AnyInstance any = load_instance(input);
    OracleResult res;
    try {
        if (std::holds_alternative<Instance>(any))
            res = exact_sirpfl(std::get<Instance>(any));
        else
            res = exact_iap(std::get<IapInstance>(any));
    } catch (const OracleTooLarge& e) {
        std::cerr << "oracle gate: " << e.what() << "\n";
        return kExitOracleGate;
    }
    std::cout << "optimum: " << rat_str(res.optimum) << " (" << rat_approx6(res.optimum) << ")\n";
    if (!output.empty()) write_file(output, serialize(res.witness));
    return kExitOk;
}

int run_certify(const std::string& config_path, const std::string& output_override) {
    ExperimentConfig cfg = load_config(config_path);
    if (!output_override.empty()) cfg.output = output_override;
    RatioReport report = certify(cfg);
    if (!cfg.output.empty()) write_file(cfg.output, report_csv(report));
    long failures = 0;
    for (const auto& row : report.rows)
        if (!row.pass) {
            ++failures;
            std::cerr << "seed " << row.seed << ": " << row.failures.front() << "\n";
        }
    std::cout << "instances: " << report.rows.size() << "\n";
    if (report.max_ratio_vs_lp)
        std::cout << "max ratio vs LP: " << rat_str(*report.max_ratio_vs_lp) << " ("
                  << rat_approx6(*report.max_ratio_vs_lp) << ")\n";
    if (report.mean_ratio_vs_lp)
        std::cout << "mean ratio vs LP: " << rat_str(*report.mean_ratio_vs_lp) << " ("
                  << rat_approx6(*report.mean_ratio_vs_lp) << ")\n";
    std::cout << (report.all_pass ? "all bounds hold\n" : "bound violations: " + std::to_string(failures) + "\n");
    return report.all_pass ? kExitOk : kExitBoundViolation;
}

int run_gadget(const std::vector<long>& elements, const std::string& w, const std::string& output) {
    IapInstance g = make_partition_gadget(elements, parse_rational_or_throw(w, "--w"));
    emit(output, serialize(g));
    return kExitOk;
}

int run_bench(const std::string& output, int seeds) {
    std::string csv = "kind,variant,n,T,seed,num_demands,lp_ms,round_ms,total_ms\n";
    auto ms_since = [](auto t0) {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    };
    auto fmt = [](double ms) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.2f", ms);
        return std::string(buf);
    };
    struct Case {
        bool iap;
        Variant variant;
        int n, horizon;
    };
    const Case grid[] = {
        {false, Variant::Uncap, 3, 3},      {false, Variant::Uncap, 5, 4},
        {false, Variant::CapSplit, 3, 3},   {false, Variant::CapUnsplit, 4, 3},
        {true, Variant::CapSplit, 1, 6},    {true, Variant::CapUnsplit, 1, 6},
    };
    for (const Case& c : grid) {
        for (int seed = 0; seed < seeds; ++seed) {
            auto row_head = std::string(c.iap ? "iap" : "sirpfl") + "," + variant_str(c.variant) + "," +
                            std::to_string(c.n) + "," + std::to_string(c.horizon) + "," +
                            std::to_string(seed) + ",";
            auto t0 = std::chrono::steady_clock::now();
            if (c.iap) {
                IapGenParams p;
                p.horizon = c.horizon;
                p.variant = c.variant;
                p.capacity = Rational(3);
                IapInstance ins = generate_random_iap(p, seed);
                auto t1 = std::chrono::steady_clock::now();
                LpSolution lp = solve_lp(build_csiap_lp(ins));
                double lp_ms = ms_since(t1);
                auto t2 = std::chrono::steady_clock::now();
                Schedule sched = round_csiap(ins, lp);
                if (c.variant == Variant::CapUnsplit)
                    sched = repack_unsplittable(ins, *ins.capacity, std::move(sched));
                csv += row_head + std::to_string(ins.demands.size()) + "," + fmt(lp_ms) + "," +
                       fmt(ms_since(t2)) + "," + fmt(ms_since(t0)) + "\n";
            } else {
                GenParams p;
                p.n = c.n;
                p.horizon = c.horizon;
                p.max_demands = 8;
                p.variant = c.variant;
                if (c.variant != Variant::Uncap) p.capacity = Rational(3);
                Instance ins = generate_random(p, seed);
                auto t1 = std::chrono::steady_clock::now();
                LpSolution lp = solve_lp(ins.variant == Variant::Uncap ? build_usirpfl_lp(ins)
                                                                       : build_cssirpfl_lp(ins));
                double lp_ms = ms_since(t1);
                auto t2 = std::chrono::steady_clock::now();
                Schedule sched = ins.variant == Variant::Uncap ? round_usirpfl(ins, lp)
                                                               : round_cssirpfl(ins, lp);
                if (c.variant == Variant::CapUnsplit)
                    sched = repack_unsplittable(ins, *ins.capacity, std::move(sched));
                csv += row_head + std::to_string(ins.demands.size()) + "," + fmt(lp_ms) + "," +
                       fmt(ms_since(t2)) + "," + fmt(ms_since(t0)) + "\n";
            }
        }
    }
    emit(output, csv);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Star inventory routing with facility location: LP-rounding solver toolkit"};
    app.require_subcommand(1);

    GenerateOptions gen;
    auto* generate = app.add_subcommand("generate", "Write a random instance for a seed");
    generate->add_option("--seed", gen.seed, "RNG seed")->required();
    generate->add_flag("--iap", gen.is_iap, "single-depot single-client instance");
    generate->add_option("--n", gen.sirpfl.n, "vertex count");
    int horizon = 3;
    generate->add_option("--T", horizon, "time horizon");
    double density = 0.5;
    generate->add_option("--density", density, "demand density in (0,1]");
    generate->add_option("--variant", gen.variant, "UNCAP | CAP_SPLIT | CAP_UNSPLIT");
    generate->add_option("--capacity", gen.capacity, "vehicle capacity as p/q");
    generate->add_option("--weight-range", gen.sirpfl.weight_range, "coordinate range for the metric");
    generate->add_option("--facility-min", gen.sirpfl.facility_min, "");
    generate->add_option("--facility-max", gen.sirpfl.facility_max, "");
    generate->add_option("--slope-min", gen.sirpfl.slope_min, "");
    generate->add_option("--slope-max", gen.sirpfl.slope_max, "");
    generate->add_option("--demand-levels", gen.sirpfl.demand_levels, "");
    generate->add_option("--max-demands", gen.sirpfl.max_demands, "cap on |D| (0 = none)");
    generate->add_option("--distance-min", gen.iap.distance_min, "IAP depot distance range");
    generate->add_option("--distance-max", gen.iap.distance_max, "");
    generate->add_option("-o,--output", gen.output, "output file (default stdout)");

    std::string solve_input, solve_variant, solve_output, solve_csv, solve_lp_export;
    auto* solve_cmd = app.add_subcommand("solve", "Round an instance file into a schedule");
    solve_cmd->add_option("instance", solve_input, "instance file")->required();
    solve_cmd->add_option("--variant", solve_variant, "override the instance variant");
    solve_cmd->add_option("-o,--output", solve_output, "schedule JSON output");
    solve_cmd->add_option("--csv", solve_csv, "flat one-row-per-trip CSV");
    solve_cmd->add_option("--lp-export", solve_lp_export, "write the LP in MPS form (approximate)");

    std::string oracle_input, oracle_output;
    auto* oracle_cmd = app.add_subcommand("oracle", "Exact optimum by enumeration (size-gated)");
    oracle_cmd->add_option("instance", oracle_input, "instance file")->required();
    oracle_cmd->add_option("-o,--output", oracle_output, "witness schedule output");

    std::string certify_config, certify_output;
    auto* certify_cmd = app.add_subcommand("certify", "Run a seeded family and check every proven bound");
    certify_cmd->add_option("config", certify_config, "experiment config JSON")->required();
    certify_cmd->add_option("-o,--output", certify_output, "CSV report path (overrides config)");

    std::vector<long> gadget_elements;
    std::string gadget_w = "1", gadget_output;
    auto* gadget_cmd = app.add_subcommand("gadget", "Number-partition reduction instance");
    gadget_cmd->add_option("elements", gadget_elements, "positive integers")->required();
    gadget_cmd->add_option("--w", gadget_w, "depot-client distance (rational)");
    gadget_cmd->add_option("-o,--output", gadget_output, "output file (default stdout)");

    std::string bench_output;
    int bench_seeds = 3;
    auto* bench_cmd = app.add_subcommand("bench", "Timing table CSV across a small size grid");
    bench_cmd->add_option("-o,--output", bench_output, "CSV path (default stdout)");
    bench_cmd->add_option("--seeds", bench_seeds, "seeds per grid point");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") return app.exit(e);
        app.exit(e);
        return kExitInvalidInput;
    }

    try {
        if (generate->parsed()) {
            gen.sirpfl.horizon = horizon;
            gen.iap.horizon = horizon;
            gen.sirpfl.demand_density = density;
            gen.iap.demand_density = density;
            gen.iap.slope_min = gen.sirpfl.slope_min;
            gen.iap.slope_max = gen.sirpfl.slope_max;
            gen.iap.demand_levels = gen.sirpfl.demand_levels;
            return run_generate(gen);
        }
        if (solve_cmd->parsed())
            return run_solve(solve_input, solve_variant, solve_output, solve_csv, solve_lp_export);
        if (oracle_cmd->parsed()) return run_oracle(oracle_input, oracle_output);
        if (certify_cmd->parsed()) return run_certify(certify_config, certify_output);
        if (gadget_cmd->parsed()) return run_gadget(gadget_elements, gadget_w, gadget_output);
        if (bench_cmd->parsed()) return run_bench(bench_output, bench_seeds);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    }
    return kExitOk;
}

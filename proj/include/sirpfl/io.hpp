#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>

#include <json.hpp>

#include "sirpfl/instance.hpp"

namespace sirpfl {

using Json = nlohmann::ordered_json;

/// Parse failure; `what()` names the first malformed field.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

namespace detail {

inline Json rat_json(const Rational& q) { return rat_str(q); }

inline Rational json_rat(const Json& j, const std::string& field) {
    if (!j.is_string()) throw ParseError(field + ": rationals must be strings like \"p/q\"");
    auto r = parse_rational(j.get<std::string>());
    if (!r) throw ParseError(field + ": malformed rational '" + j.get<std::string>() + "'");
    return *r;
}

inline int json_int(const Json& j, const std::string& field) {
    if (!j.is_number_integer()) throw ParseError(field + ": expected integer");
    return j.get<int>();
}

inline const Json& member(const Json& j, const std::string& key, const std::string& ctx) {
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(ctx + ": missing field '" + key + "'");
    return *it;
}

inline void parse_common_header(const Json& j, int& horizon, Variant& variant,
                                std::optional<Rational>& capacity) {
    horizon = json_int(member(j, "T", "instance"), "T");
    auto var = parse_variant(member(j, "variant", "instance").get<std::string>());
    if (!var) throw ParseError("variant: must be UNCAP, CAP_SPLIT or CAP_UNSPLIT");
    variant = *var;
    const Json& cap = member(j, "capacity", "instance");
    if (cap.is_null())
        capacity = std::nullopt;
    else
        capacity = json_rat(cap, "capacity");
}

inline void throw_first_violation(const std::vector<std::string>& report) {
    if (!report.empty()) throw ParseError(report.front());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// SIRPFL instances
// ---------------------------------------------------------------------------

inline Json to_json(const Instance& ins) {
    Json j;
    j["n"] = ins.n;
    j["T"] = ins.horizon;
    j["variant"] = variant_str(ins.variant);
    j["capacity"] = ins.capacity ? Json(rat_str(*ins.capacity)) : Json(nullptr);
    Json weights = Json::array();
    for (const auto& row : ins.weights) {
        Json r = Json::array();
        for (const auto& w : row) r.push_back(rat_str(w));
        weights.push_back(std::move(r));
    }
    j["weights"] = std::move(weights);
    Json fc = Json::array();
    for (const auto& f : ins.facility_costs) fc.push_back(rat_str(f));
    j["facility_costs"] = std::move(fc);
    Json demands = Json::array();
    for (const auto& dp : ins.demands)
        demands.push_back(Json{{"v", dp.v}, {"t", dp.t}, {"d", rat_str(dp.d)}});
    j["demands"] = std::move(demands);
    Json holding = Json::array();
    for (std::size_t i = 0; i < ins.demands.size(); ++i)
        for (int s = 1; s <= ins.demands[i].t; ++s)
            holding.push_back(Json{{"v", ins.demands[i].v},
                                   {"s", s},
                                   {"t", ins.demands[i].t},
                                   {"h", rat_str(ins.holding[i][s - 1])}});
    j["holding"] = std::move(holding);
    return j;
}

inline std::string serialize(const Instance& ins) { return to_json(ins).dump(2) + "\n"; }

inline Instance instance_from_json(const Json& j) {
    Instance ins;
    ins.n = detail::json_int(detail::member(j, "n", "instance"), "n");
    detail::parse_common_header(j, ins.horizon, ins.variant, ins.capacity);
    if (ins.n < 1) throw ParseError("n: vertex count must be >= 1");
    if (ins.horizon < 1) throw ParseError("T: horizon must be >= 1");

    const Json& weights = detail::member(j, "weights", "instance");
    if (!weights.is_array() || static_cast<int>(weights.size()) != ins.n)
        throw ParseError("weights: expected n rows");
    for (int u = 0; u < ins.n; ++u) {
        const Json& row = weights[u];
        if (!row.is_array() || static_cast<int>(row.size()) != ins.n)
            throw ParseError("weights[" + std::to_string(u) + "]: expected n entries");
        std::vector<Rational> r;
        for (int v = 0; v < ins.n; ++v)
            r.push_back(detail::json_rat(row[v], "weights[" + std::to_string(u) + "][" + std::to_string(v) + "]"));
        ins.weights.push_back(std::move(r));
    }

    const Json& fc = detail::member(j, "facility_costs", "instance");
    if (!fc.is_array() || static_cast<int>(fc.size()) != ins.n)
        throw ParseError("facility_costs: expected one entry per vertex");
    for (int v = 0; v < ins.n; ++v)
        ins.facility_costs.push_back(detail::json_rat(fc[v], "facility_costs[" + std::to_string(v) + "]"));

    const Json& demands = detail::member(j, "demands", "instance");
    if (!demands.is_array()) throw ParseError("demands: expected array");
    for (std::size_t i = 0; i < demands.size(); ++i) {
        std::string ctx = "demands[" + std::to_string(i) + "]";
        const Json& d = demands[i];
        DemandPoint dp;
        dp.v = detail::json_int(detail::member(d, "v", ctx), ctx + ".v");
        dp.t = detail::json_int(detail::member(d, "t", ctx), ctx + ".t");
        dp.d = detail::json_rat(detail::member(d, "d", ctx), ctx + ".d");
        if (dp.d <= 0) throw ParseError(ctx + ".d: demand not positive");
        ins.demands.push_back(std::move(dp));
    }
    std::sort(ins.demands.begin(), ins.demands.end(), [](const DemandPoint& a, const DemandPoint& b) {
        return std::tie(a.v, a.t) < std::tie(b.v, b.t);
    });
    ins.holding.assign(ins.demands.size(), {});
    for (std::size_t i = 0; i < ins.demands.size(); ++i)
        if (ins.demands[i].t >= 1) ins.holding[i].assign(ins.demands[i].t, Rational(-1));

    const Json& holding = detail::member(j, "holding", "instance");
    if (!holding.is_array()) throw ParseError("holding: expected array");
    for (std::size_t i = 0; i < holding.size(); ++i) {
        std::string ctx = "holding[" + std::to_string(i) + "]";
        const Json& hj = holding[i];
        int v = detail::json_int(detail::member(hj, "v", ctx), ctx + ".v");
        int s = detail::json_int(detail::member(hj, "s", ctx), ctx + ".s");
        int t = detail::json_int(detail::member(hj, "t", ctx), ctx + ".t");
        Rational h = detail::json_rat(detail::member(hj, "h", ctx), ctx + ".h");
        int idx = ins.demand_index(v, t);
        if (idx < 0) throw ParseError(ctx + ": no demand point at (v=" + std::to_string(v) +
                                      ",t=" + std::to_string(t) + ")");
        if (s < 1 || s > t) throw ParseError(ctx + ".s: day out of range [1," + std::to_string(t) + "]");
        if (ins.holding[idx][s - 1] != -1) throw ParseError(ctx + ": duplicate holding entry");
        ins.holding[idx][s - 1] = std::move(h);
    }
    for (std::size_t i = 0; i < ins.holding.size(); ++i)
        for (int s = 1; s <= ins.demands[i].t; ++s)
            if (ins.holding[i][s - 1] == -1)
                throw ParseError("holding: missing entry (v=" + std::to_string(ins.demands[i].v) +
                                 ",s=" + std::to_string(s) + ",t=" + std::to_string(ins.demands[i].t) + ")");

    detail::throw_first_violation(validate(ins));
    return ins;
}

// ---------------------------------------------------------------------------
// IAP instances
// ---------------------------------------------------------------------------

inline Json to_json(const IapInstance& ins) {
    Json j;
    j["distance"] = rat_str(ins.distance);
    j["T"] = ins.horizon;
    j["variant"] = variant_str(ins.variant);
    j["capacity"] = ins.capacity ? Json(rat_str(*ins.capacity)) : Json(nullptr);
    Json demands = Json::array();
    for (const auto& dp : ins.demands) demands.push_back(Json{{"t", dp.t}, {"d", rat_str(dp.d)}});
    j["demands"] = std::move(demands);
    Json holding = Json::array();
    for (const auto& [t, row] : ins.holding)
        for (int s = 1; s <= t; ++s)
            holding.push_back(Json{{"s", s}, {"t", t}, {"h", rat_str(row[s - 1])}});
    j["holding"] = std::move(holding);
    return j;
}

inline std::string serialize(const IapInstance& ins) { return to_json(ins).dump(2) + "\n"; }

inline IapInstance iap_from_json(const Json& j) {
    IapInstance ins;
    ins.distance = detail::json_rat(detail::member(j, "distance", "instance"), "distance");
    detail::parse_common_header(j, ins.horizon, ins.variant, ins.capacity);
    if (ins.horizon < 1) throw ParseError("T: horizon must be >= 1");

    const Json& demands = detail::member(j, "demands", "instance");
    if (!demands.is_array()) throw ParseError("demands: expected array");
    for (std::size_t i = 0; i < demands.size(); ++i) {
        std::string ctx = "demands[" + std::to_string(i) + "]";
        IapDemand dp;
        dp.t = detail::json_int(detail::member(demands[i], "t", ctx), ctx + ".t");
        dp.d = detail::json_rat(detail::member(demands[i], "d", ctx), ctx + ".d");
        if (dp.d <= 0) throw ParseError(ctx + ".d: demand not positive");
        ins.demands.push_back(std::move(dp));
    }
    std::stable_sort(ins.demands.begin(), ins.demands.end(),
                     [](const IapDemand& a, const IapDemand& b) { return a.t < b.t; });

    std::map<int, std::vector<char>> seen;
    for (const auto& dp : ins.demands)
        if (dp.t >= 1 && !ins.holding.count(dp.t)) {
            ins.holding[dp.t].assign(dp.t, Rational(-1));
            seen[dp.t].assign(dp.t, 0);
        }
    const Json& holding = detail::member(j, "holding", "instance");
    if (!holding.is_array()) throw ParseError("holding: expected array");
    for (std::size_t i = 0; i < holding.size(); ++i) {
        std::string ctx = "holding[" + std::to_string(i) + "]";
        int s = detail::json_int(detail::member(holding[i], "s", ctx), ctx + ".s");
        int t = detail::json_int(detail::member(holding[i], "t", ctx), ctx + ".t");
        Rational h = detail::json_rat(detail::member(holding[i], "h", ctx), ctx + ".h");
        if (!ins.holding.count(t)) throw ParseError(ctx + ": no demand with deadline t=" + std::to_string(t));
        if (s < 1 || s > t) throw ParseError(ctx + ".s: day out of range [1," + std::to_string(t) + "]");
        if (seen[t][s - 1]) throw ParseError(ctx + ": duplicate holding entry");
        seen[t][s - 1] = 1;
        ins.holding[t][s - 1] = std::move(h);
    }
    for (const auto& [t, marks] : seen)
        for (int s = 1; s <= t; ++s)
            if (!marks[s - 1])
                throw ParseError("holding: missing entry (s=" + std::to_string(s) +
                                 ",t=" + std::to_string(t) + ")");

    detail::throw_first_violation(validate(ins));
    return ins;
}

// ---------------------------------------------------------------------------
// Dispatching parse: a document with "n" is a SIRPFL instance, one with
// "distance" is an IAP instance.
// ---------------------------------------------------------------------------

using AnyInstance = std::variant<Instance, IapInstance>;

inline AnyInstance parse_instance(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("top level: expected object");
    if (j.contains("n")) return instance_from_json(j);
    if (j.contains("distance")) return iap_from_json(j);
    throw ParseError("top level: neither 'n' (SIRPFL) nor 'distance' (IAP) present");
}

inline AnyInstance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_instance(ss.str());
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

}  // namespace sirpfl

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sirpfl/rational.hpp"

namespace sirpfl {

enum class Variant { Uncap, CapSplit, CapUnsplit };

inline std::string variant_str(Variant v) {
    switch (v) {
        case Variant::Uncap: return "UNCAP";
        case Variant::CapSplit: return "CAP_SPLIT";
        case Variant::CapUnsplit: return "CAP_UNSPLIT";
    }
    return "?";
}

inline std::optional<Variant> parse_variant(const std::string& s) {
    if (s == "UNCAP") return Variant::Uncap;
    if (s == "CAP_SPLIT") return Variant::CapSplit;
    if (s == "CAP_UNSPLIT") return Variant::CapUnsplit;
    return std::nullopt;
}

/// One time-indexed demand of a SIRPFL instance: d units due at vertex v by day t.
struct DemandPoint {
    int v = 0;
    int t = 0;
    Rational d;
};

/// Star inventory routing instance with facility opening costs. Vertices are ids
/// 0..n-1, days are 1..horizon. Weights form a symmetric nonnegative matrix with
/// zero diagonal; the generator always produces a metric (the approximation
/// factors assume one). Instances are immutable after construction and safe to
/// share across solver threads.
struct Instance {
    int n = 0;
    int horizon = 0;
    std::vector<std::vector<Rational>> weights;  // n x n
    std::vector<Rational> facility_costs;        // size n
    std::vector<DemandPoint> demands;            // unique (v,t), sorted by (v,t)
    // holding[i][s-1] = unit holding cost for serving demands[i] on day s, s = 1..t.
    std::vector<std::vector<Rational>> holding;
    std::optional<Rational> capacity;
    Variant variant = Variant::Uncap;

    const Rational& w(int u, int v) const { return weights[u][v]; }

    /// Aggregate holding cost of delivering all of demand i on day s.
    Rational total_holding(int i, int s) const { return demands[i].d * holding[i][s - 1]; }

    int demand_index(int v, int t) const {
        for (std::size_t i = 0; i < demands.size(); ++i)
            if (demands[i].v == v && demands[i].t == t) return static_cast<int>(i);
        return -1;
    }

    std::vector<int> demands_of(int v) const {
        std::vector<int> out;
        for (std::size_t i = 0; i < demands.size(); ++i)
            if (demands[i].v == v) out.push_back(static_cast<int>(i));
        return out;
    }

    std::vector<int> clients_with_demands() const {
        std::vector<int> out;
        for (int v = 0; v < n; ++v)
            if (!demands_of(v).empty()) out.push_back(v);
        return out;
    }
};

/// One demand of an IAP instance. Several points may share a day (the
/// number-partition gadget needs that); unsplittable semantics treat each
/// point separately.
struct IapDemand {
    int t = 0;
    Rational d;
};

/// Single-depot single-client restriction: the only decisions are visit days and
/// trip counts. `distance` is the depot-client edge weight.
struct IapInstance {
    Rational distance;
    int horizon = 0;
    std::vector<IapDemand> demands;  // sorted by t, duplicate days allowed
    // holding.at(t)[s-1] = unit holding cost for day-t demands served on day s.
    std::map<int, std::vector<Rational>> holding;
    std::optional<Rational> capacity;
    Variant variant = Variant::Uncap;

    const Rational& h(int s, int t) const { return holding.at(t)[s - 1]; }
    Rational total_holding(int i, int s) const { return demands[i].d * h(s, demands[i].t); }
};

// ---------------------------------------------------------------------------
// Validation. Diagnostics are the return value; an empty report means valid.
// ---------------------------------------------------------------------------

namespace detail {

inline void check_holding_row(const std::vector<Rational>& h, int t, const std::string& where,
                              std::vector<std::string>& report) {
    if (static_cast<int>(h.size()) != t) {
        report.push_back("holding incomplete at " + where + ": expected " + std::to_string(t) +
                         " entries, got " + std::to_string(h.size()));
        return;
    }
    for (int s = 1; s <= t; ++s) {
        if (h[s - 1] < 0) report.push_back("holding negative at " + where + ", s=" + std::to_string(s));
        if (s >= 2 && h[s - 1] > h[s - 2])
            report.push_back("holding not monotone at " + where + ", s=" + std::to_string(s - 1) +
                             " -> s=" + std::to_string(s));
    }
}

inline void check_capacity_rules(Variant variant, const std::optional<Rational>& capacity,
                                 std::vector<std::string>& report) {
    if (variant == Variant::Uncap) return;
    if (!capacity) {
        report.push_back("capacity missing for capacitated variant");
    } else if (*capacity <= 0) {
        report.push_back("capacity not positive");
    }
}

}  // namespace detail

inline std::vector<std::string> validate(const Instance& ins) {
    std::vector<std::string> report;
    if (ins.n < 1) report.push_back("vertex count must be >= 1");
    if (ins.horizon < 1) report.push_back("horizon must be >= 1");
    if (static_cast<int>(ins.weights.size()) != ins.n) {
        report.push_back("weights matrix must be n x n");
        return report;
    }
    for (int u = 0; u < ins.n; ++u) {
        if (static_cast<int>(ins.weights[u].size()) != ins.n) {
            report.push_back("weights matrix must be n x n");
            return report;
        }
    }
    for (int u = 0; u < ins.n; ++u) {
        if (ins.weights[u][u] != 0)
            report.push_back("nonzero self distance at vertex " + std::to_string(u));
        for (int v = 0; v < ins.n; ++v) {
            if (ins.weights[u][v] < 0)
                report.push_back("negative weight at (" + std::to_string(u) + "," + std::to_string(v) + ")");
            if (v > u && ins.weights[u][v] != ins.weights[v][u])
                report.push_back("asymmetric weight at (" + std::to_string(u) + "," + std::to_string(v) + ")");
        }
    }
    if (static_cast<int>(ins.facility_costs.size()) != ins.n)
        report.push_back("facility_costs must have one entry per vertex");
    for (std::size_t i = 0; i < ins.facility_costs.size(); ++i)
        if (ins.facility_costs[i] < 0)
            report.push_back("negative facility cost at vertex " + std::to_string(i));

    detail::check_capacity_rules(ins.variant, ins.capacity, report);

    if (ins.holding.size() != ins.demands.size())
        report.push_back("holding must have one row per demand point");
    std::map<std::pair<int, int>, int> seen;
    for (std::size_t i = 0; i < ins.demands.size(); ++i) {
        const auto& dp = ins.demands[i];
        std::string where = "(v=" + std::to_string(dp.v) + ",t=" + std::to_string(dp.t) + ")";
        if (dp.v < 0 || dp.v >= ins.n) report.push_back("demand vertex out of range at " + where);
        if (dp.t < 1 || dp.t > ins.horizon) report.push_back("demand deadline out of range at " + where);
        if (dp.d <= 0) report.push_back("demand not positive at " + where);
        if (++seen[{dp.v, dp.t}] > 1) report.push_back("duplicate demand point at " + where);
        if (ins.variant != Variant::Uncap && ins.capacity && dp.d > *ins.capacity)
            report.push_back("demand exceeds capacity at " + where);
        if (i < ins.holding.size() && dp.t >= 1 && dp.t <= ins.horizon)
            detail::check_holding_row(ins.holding[i], dp.t, where, report);
    }
    return report;
}

inline std::vector<std::string> validate(const IapInstance& ins) {
    std::vector<std::string> report;
    if (ins.horizon < 1) report.push_back("horizon must be >= 1");
    if (ins.distance < 0) report.push_back("negative depot-client distance");
    detail::check_capacity_rules(ins.variant, ins.capacity, report);
    for (const auto& dp : ins.demands) {
        std::string where = "(t=" + std::to_string(dp.t) + ")";
        if (dp.t < 1 || dp.t > ins.horizon) report.push_back("demand deadline out of range at " + where);
        if (dp.d <= 0) report.push_back("demand not positive at " + where);
        if (ins.variant != Variant::Uncap && ins.capacity && dp.d > *ins.capacity)
            report.push_back("demand exceeds capacity at " + where);
    }
    for (const auto& dp : ins.demands) {
        auto it = ins.holding.find(dp.t);
        if (it == ins.holding.end()) {
            report.push_back("holding missing for deadline t=" + std::to_string(dp.t));
            continue;
        }
        detail::check_holding_row(it->second, dp.t, "(t=" + std::to_string(dp.t) + ")", report);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Number-partition gadget (capacitated unsplittable IAP hardness instance).
// ---------------------------------------------------------------------------

/// Builds the reduction instance: one day-1 demand per element of S, capacity
/// (sum S)/2, zero holding. Its exact optimum is 2w iff S admits a partition.
inline IapInstance make_partition_gadget(const std::vector<long>& s_values, const Rational& w) {
    if (s_values.empty()) throw std::invalid_argument("partition gadget: empty multiset");
    if (w <= 0) throw std::invalid_argument("partition gadget: distance must be positive");
    long total = 0;
    for (long a : s_values) {
        if (a <= 0) throw std::invalid_argument("partition gadget: elements must be positive");
        total += a;
    }
    Rational capacity(total, 2);
    capacity.canonicalize();
    for (long a : s_values)
        if (Rational(a) > capacity)
            throw std::invalid_argument("partition gadget: element " + std::to_string(a) +
                                        " exceeds capacity " + rat_str(capacity));
    IapInstance ins;
    ins.distance = w;
    ins.horizon = 1;
    ins.variant = Variant::CapUnsplit;
    ins.capacity = capacity;
    for (long a : s_values) ins.demands.push_back({1, Rational(a)});
    std::sort(ins.demands.begin(), ins.demands.end(),
              [](const IapDemand& a, const IapDemand& b) { return a.d < b.d; });
    ins.holding[1] = {Rational(0)};
    return ins;
}

}  // namespace sirpfl

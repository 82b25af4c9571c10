#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "sirpfl/instance.hpp"
#include "sirpfl/rational.hpp"

namespace sirpfl {

/// One vehicle trip: amounts delivered per demand point (index into the
/// instance's demand list). Splittable schedules may carry partial amounts;
/// unsplittable ones always carry a point's full demand in a single trip.
struct Trip {
    std::vector<std::pair<int, Rational>> parts;

    Rational load() const {
        Rational sum(0);
        for (const auto& [_, amount] : parts) sum += amount;
        return sum;
    }
};

/// All trips from one facility to one client on one day. IAP schedules use
/// client 0 and facility 0 (the depot).
struct Delivery {
    int client = 0;
    int day = 0;
    int facility = 0;
    std::vector<Trip> trips;
};

struct Schedule {
    std::vector<int> opened;
    std::vector<Delivery> deliveries;
    Rational facility_cost, routing_cost, holding_cost;

    Rational total() const { return facility_cost + routing_cost + holding_cost; }

    long trips_on(int client, int day) const {
        long k = 0;
        for (const auto& d : deliveries)
            if (d.client == client && d.day == day) k += static_cast<long>(d.trips.size());
        return k;
    }
};

// ---------------------------------------------------------------------------
// Feasibility checks. Like validate(), the report is the result; empty means
// the schedule serves every demand on time, respects loads/splitting rules,
// and its stored costs equal the recomputed ones.
// ---------------------------------------------------------------------------

namespace detail {

struct ScheduleView {
    int num_demands;
    int horizon;
    std::optional<Rational> capacity;
    Variant variant;
    // demand accessors
    std::function<int(int)> deadline;
    std::function<Rational(int)> amount;
    std::function<int(int)> client_of;
    std::function<Rational(int, int)> holding;  // (point, day)
};

inline std::vector<std::string> check_schedule_impl(const ScheduleView& view, const Schedule& sched,
                                                    const std::function<Rational(const Delivery&)>& edge,
                                                    const std::function<Rational()>& facility_total) {
    std::vector<std::string> report;
    std::vector<Rational> served(view.num_demands, Rational(0));
    std::vector<int> trips_seen(view.num_demands, 0);
    Rational routing(0), holding(0);
    for (const auto& del : sched.deliveries) {
        if (del.day < 1 || del.day > view.horizon)
            report.push_back("delivery day out of range: " + std::to_string(del.day));
        routing += Rational(static_cast<long>(del.trips.size())) * edge(del);
        for (const auto& trip : del.trips) {
            if (trip.parts.empty()) report.push_back("empty trip in a delivery");
            if (view.capacity && trip.load() > *view.capacity)
                report.push_back("trip load exceeds capacity on day " + std::to_string(del.day));
            for (const auto& [point, amount] : trip.parts) {
                if (point < 0 || point >= view.num_demands) {
                    report.push_back("trip references unknown demand point");
                    continue;
                }
                if (amount <= 0) report.push_back("nonpositive trip amount");
                if (del.day > view.deadline(point))
                    report.push_back("demand served after its deadline t=" +
                                     std::to_string(view.deadline(point)));
                if (view.client_of(point) != del.client)
                    report.push_back("demand delivered to the wrong client");
                served[point] += amount;
                trips_seen[point] += 1;
                if (del.day >= 1 && del.day <= view.deadline(point))
                    holding += amount * view.holding(point, del.day);
            }
        }
    }
    for (int i = 0; i < view.num_demands; ++i) {
        if (served[i] != view.amount(i))
            report.push_back("demand " + std::to_string(i) + " served " + rat_str(served[i]) +
                             " of " + rat_str(view.amount(i)));
        if (view.variant == Variant::CapUnsplit && trips_seen[i] != 1)
            report.push_back("unsplittable demand " + std::to_string(i) + " split across " +
                             std::to_string(trips_seen[i]) + " trips");
    }
    Rational fcost = facility_total();
    if (sched.facility_cost != fcost)
        report.push_back("stored facility cost " + rat_str(sched.facility_cost) +
                         " != recomputed " + rat_str(fcost));
    if (sched.routing_cost != routing)
        report.push_back("stored routing cost " + rat_str(sched.routing_cost) +
                         " != recomputed " + rat_str(routing));
    if (sched.holding_cost != holding)
        report.push_back("stored holding cost " + rat_str(sched.holding_cost) +
                         " != recomputed " + rat_str(holding));
    return report;
}

}  // namespace detail

inline std::vector<std::string> check_schedule(const Instance& ins, const Schedule& sched) {
    detail::ScheduleView view{
        static_cast<int>(ins.demands.size()),
        ins.horizon,
        ins.capacity,
        ins.variant,
        [&](int i) { return ins.demands[i].t; },
        [&](int i) { return ins.demands[i].d; },
        [&](int i) { return ins.demands[i].v; },
        [&](int i, int s) { return ins.holding[i][s - 1]; },
    };
    std::set<int> opened(sched.opened.begin(), sched.opened.end());
    auto report = detail::check_schedule_impl(
        view, sched,
        [&](const Delivery& d) { return ins.w(d.facility, d.client); },
        [&] {
            Rational f(0);
            for (int u : opened) f += ins.facility_costs[u];
            return f;
        });
    for (const auto& del : sched.deliveries)
        if (!opened.count(del.facility))
            report.push_back("delivery from unopened facility " + std::to_string(del.facility));
    return report;
}

inline std::vector<std::string> check_schedule(const IapInstance& ins, const Schedule& sched) {
    detail::ScheduleView view{
        static_cast<int>(ins.demands.size()),
        ins.horizon,
        ins.capacity,
        ins.variant,
        [&](int i) { return ins.demands[i].t; },
        [&](int i) { return ins.demands[i].d; },
        [&](int) { return 0; },
        [&](int i, int s) { return ins.h(s, ins.demands[i].t); },
    };
    auto report = detail::check_schedule_impl(
        view, sched, [&](const Delivery&) { return ins.distance; }, [] { return Rational(0); });
    if (!sched.opened.empty()) report.push_back("IAP schedule opens facilities");
    return report;
}

// ---------------------------------------------------------------------------
// Export: JSON document plus a flat one-row-per-trip CSV view.
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json to_json(const Schedule& sched) {
    nlohmann::ordered_json j;
    j["opened"] = sched.opened;
    auto deliveries = nlohmann::ordered_json::array();
    for (const auto& del : sched.deliveries) {
        auto trips = nlohmann::ordered_json::array();
        for (const auto& trip : del.trips) {
            auto parts = nlohmann::ordered_json::array();
            for (const auto& [point, amount] : trip.parts)
                parts.push_back({{"point", point}, {"amount", rat_str(amount)}});
            trips.push_back({{"load", rat_str(trip.load())}, {"parts", std::move(parts)}});
        }
        deliveries.push_back({{"client", del.client},
                              {"day", del.day},
                              {"facility", del.facility},
                              {"trips", std::move(trips)}});
    }
    j["deliveries"] = std::move(deliveries);
    j["costs"] = {{"facility", rat_str(sched.facility_cost)},
                  {"routing", rat_str(sched.routing_cost)},
                  {"holding", rat_str(sched.holding_cost)},
                  {"total", rat_str(sched.total())}};
    return j;
}

inline std::string serialize(const Schedule& sched) { return to_json(sched).dump(2) + "\n"; }

inline std::string schedule_csv(const Schedule& sched) {
    std::string out = "client,day,facility,trip,load,num_parts\n";
    for (const auto& del : sched.deliveries)
        for (std::size_t k = 0; k < del.trips.size(); ++k)
            out += std::to_string(del.client) + "," + std::to_string(del.day) + "," +
                   std::to_string(del.facility) + "," + std::to_string(k) + "," +
                   rat_str(del.trips[k].load()) + "," + std::to_string(del.trips[k].parts.size()) + "\n";
    return out;
}

}  // namespace sirpfl

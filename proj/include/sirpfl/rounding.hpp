#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sirpfl/instance.hpp"
#include "sirpfl/lp_model.hpp"
#include "sirpfl/oracle.hpp"
#include "sirpfl/schedule.hpp"
#include "sirpfl/simplex.hpp"

namespace sirpfl {

/// Visit days for one client, derived from half-mass days of the LP solution.
/// Anchors are the demand points whose s_{v,t} became a visit day; every demand
/// point is assigned to a serving day no later than its deadline, and anchor
/// intervals [s_{v,t}, t] are pairwise disjoint.
struct VisitPlan {
    int client = 0;
    std::vector<int> anchors;      // demand point indices, in creation order
    std::vector<int> visit_days;   // S_v, ascending
    std::map<int, int> assignment; // demand point index -> serving day
    std::map<int, int> s_star;     // demand point index -> s_{v,t}
};

/// Latest day s for which the mass accumulated over [s, t] reaches 1/2.
/// masses[s-1] holds the day-s mass; existence is guaranteed because the full
/// sum is at least 1 for feasible LP solutions.
inline int s_star_from_masses(const std::vector<Rational>& masses, int t) {
    Rational suffix(0);
    for (int s = t; s >= 1; --s) {
        suffix += masses[s - 1];
        if (2 * suffix >= 1) return s;
    }
    throw std::logic_error("s_star: cumulative mass below 1/2; LP solution infeasible?");
}

/// s_{v,t} for a SIRPFL demand point: mass on day s is sum_u y^{uv}_{st}.
inline int compute_s_star(const LpSolution& lp, const Instance& ins, int v, int t) {
    std::vector<Rational> masses(t, Rational(0));
    for (int s = 1; s <= t; ++s)
        for (int u = 0; u < ins.n; ++u) masses[s - 1] += lp.yst(u, v, s, t);
    return s_star_from_masses(masses, t);
}

/// s_t for an IAP demand point: mass on day s is x_{s,point}.
inline int compute_s_star_iap(const LpSolution& lp, const IapInstance& ins, int point) {
    const int t = ins.demands[point].t;
    std::vector<Rational> masses(t, Rational(0));
    for (int s = 1; s <= t; ++s) masses[s - 1] = lp.iap_x(s, point);
    return s_star_from_masses(masses, t);
}

namespace detail {

inline void finish_plan(VisitPlan& plan) {
    std::sort(plan.visit_days.begin(), plan.visit_days.end());
    plan.visit_days.erase(std::unique(plan.visit_days.begin(), plan.visit_days.end()),
                          plan.visit_days.end());
}

/// Algorithm "visits for v", uncapacitated: walk demand days from the latest
/// backwards; a day inside the current anchor's interval is served on that
/// anchor's visit day, otherwise it opens a new anchor.
inline VisitPlan uncapacitated_rule(const std::vector<int>& points, const std::vector<int>& deadlines,
                                    const std::vector<int>& sstar) {
    VisitPlan plan;
    const int k = static_cast<int>(points.size());
    for (int i = 0; i < k; ++i) plan.s_star[points[i]] = sstar[i];
    int anchor = k - 1;  // deadlines ascend, so the last point is the latest
    plan.anchors.push_back(points[anchor]);
    plan.visit_days.push_back(sstar[anchor]);
    plan.assignment[points[anchor]] = sstar[anchor];
    for (int i = k - 2; i >= 0; --i) {
        if (deadlines[i] >= sstar[anchor]) {
            plan.assignment[points[i]] = sstar[anchor];
        } else {
            anchor = i;
            plan.anchors.push_back(points[i]);
            plan.visit_days.push_back(sstar[i]);
            plan.assignment[points[i]] = sstar[i];
        }
    }
    finish_plan(plan);
    return plan;
}

/// The capacitated visit rule, shared by the IAP and per-client SIRPFL paths:
/// repeatedly anchor the unsatisfied demand with the latest s_star (ties to the
/// larger deadline, then larger index) and satisfy every unsatisfied demand
/// whose deadline is not before that day.
inline VisitPlan capacitated_rule(const std::vector<int>& points, const std::vector<int>& deadlines,
                                  const std::vector<int>& sstar) {
    VisitPlan plan;
    const int k = static_cast<int>(points.size());
    for (int i = 0; i < k; ++i) plan.s_star[points[i]] = sstar[i];
    std::vector<bool> satisfied(k, false);
    int left = k;
    while (left > 0) {
        int pick = -1;
        for (int i = 0; i < k; ++i) {
            if (satisfied[i]) continue;
            if (pick < 0 || sstar[i] > sstar[pick] ||
                (sstar[i] == sstar[pick] && deadlines[i] >= deadlines[pick]))
                pick = i;
        }
        const int day = sstar[pick];
        plan.anchors.push_back(points[pick]);
        plan.visit_days.push_back(day);
        for (int i = 0; i < k; ++i) {
            if (satisfied[i] || deadlines[i] < day) continue;
            plan.assignment[points[i]] = day;
            satisfied[i] = true;
            --left;
        }
    }
    finish_plan(plan);
    return plan;
}

}  // namespace detail

inline VisitPlan plan_visits_uncapacitated(const LpSolution& lp, const Instance& ins, int v) {
    auto points = ins.demands_of(v);  // ascending deadlines
    if (points.empty()) throw std::invalid_argument("plan_visits: client has no demands");
    std::vector<int> deadlines, sstar;
    for (int i : points) {
        deadlines.push_back(ins.demands[i].t);
        sstar.push_back(compute_s_star(lp, ins, v, ins.demands[i].t));
    }
    VisitPlan plan = detail::uncapacitated_rule(points, deadlines, sstar);
    plan.client = v;
    return plan;
}

/// Capacitated visit rule for one SIRPFL client.
inline VisitPlan plan_visits_capacitated(const LpSolution& lp, const Instance& ins, int v) {
    auto points = ins.demands_of(v);
    if (points.empty()) throw std::invalid_argument("plan_visits: client has no demands");
    std::vector<int> deadlines, sstar;
    for (int i : points) {
        deadlines.push_back(ins.demands[i].t);
        sstar.push_back(compute_s_star(lp, ins, v, ins.demands[i].t));
    }
    VisitPlan plan = detail::capacitated_rule(points, deadlines, sstar);
    plan.client = v;
    return plan;
}

/// Capacitated visit rule for an IAP instance (all demand points at once).
inline VisitPlan plan_visits_iap(const LpSolution& lp, const IapInstance& ins) {
    std::vector<int> points, deadlines, sstar;
    for (std::size_t i = 0; i < ins.demands.size(); ++i) {
        points.push_back(static_cast<int>(i));
        deadlines.push_back(ins.demands[i].t);
        sstar.push_back(compute_s_star_iap(lp, ins, static_cast<int>(i)));
    }
    return detail::capacitated_rule(points, deadlines, sstar);
}

// ---------------------------------------------------------------------------
// Balls: radius seeds from distance-weighted connection mass over anchor
// intervals; greedy smallest-radius disjoint selection decides facilities.
// ---------------------------------------------------------------------------

struct Ball {
    int client = 0;
    std::map<int, Rational> w_vt;  // per anchor demand point
    Rational radius_seed;          // W_v = min over anchors; ball radius is 4 W_v
    std::vector<int> members;      // B_v
    int cheapest_facility = -1;    // F_v
};

struct BallSystem {
    std::vector<Ball> balls;            // one per client with demands, ascending client id
    std::vector<int> selected;          // indices into balls, selection order
    std::map<int, int> facility_of;     // client -> opened facility u(v)
    std::vector<int> opened;
};

inline BallSystem build_balls(const LpSolution& lp, const Instance& ins,
                              const std::vector<VisitPlan>& plans) {
    BallSystem sys;
    for (const auto& plan : plans) {
        Ball ball;
        ball.client = plan.client;
        bool first = true;
        for (int point : plan.anchors) {
            const int t = ins.demands[point].t;
            Rational mass(0);
            for (int u = 0; u < ins.n; ++u) {
                if (ins.w(u, plan.client) == 0) continue;
                for (int s = plan.s_star.at(point); s <= t; ++s)
                    mass += ins.w(u, plan.client) * lp.yst(u, plan.client, s, t);
            }
            ball.w_vt[point] = mass;
            if (first || mass < ball.radius_seed) ball.radius_seed = mass;
            first = false;
        }
        const Rational radius = 4 * ball.radius_seed;
        for (int u = 0; u < ins.n; ++u)
            if (ins.w(u, ball.client) <= radius) ball.members.push_back(u);
        for (int q : ball.members)
            if (ball.cheapest_facility < 0 ||
                ins.facility_costs[q] < ins.facility_costs[ball.cheapest_facility])
                ball.cheapest_facility = q;
        sys.balls.push_back(std::move(ball));
    }
    return sys;
}

inline BallSystem select_balls(const LpSolution& lp, const Instance& ins, BallSystem sys) {
    std::vector<int> order(sys.balls.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::tie(sys.balls[a].radius_seed, sys.balls[a].client) <
               std::tie(sys.balls[b].radius_seed, sys.balls[b].client);
    });
    std::vector<bool> taken(ins.n, false);
    for (int i : order) {
        bool disjoint = true;
        for (int u : sys.balls[i].members)
            if (taken[u]) {
                disjoint = false;
                break;
            }
        if (!disjoint) continue;
        for (int u : sys.balls[i].members) taken[u] = true;
        sys.selected.push_back(i);
        sys.opened.push_back(sys.balls[i].cheapest_facility);
    }
    std::sort(sys.opened.begin(), sys.opened.end());
    sys.opened.erase(std::unique(sys.opened.begin(), sys.opened.end()), sys.opened.end());

    for (const auto& ball : sys.balls) {
        int nearest = -1;
        for (int u : sys.opened)
            if (nearest < 0 || ins.w(u, ball.client) < ins.w(nearest, ball.client)) nearest = u;
        sys.facility_of[ball.client] = nearest;
    }

    // ball-mass lower bound: every selected ball gathers z-mass >= 1/4
    for (int i : sys.selected) {
        Rational mass(0);
        for (int u : sys.balls[i].members) mass += lp.z(u);
        if (4 * mass < 1)
            throw std::logic_error("selected ball around client " +
                                   std::to_string(sys.balls[i].client) + " has z-mass below 1/4");
    }
    return sys;
}

// ---------------------------------------------------------------------------
// Schedule assembly
// ---------------------------------------------------------------------------

namespace detail {

/// Groups each plan's assignments by serving day, in demand-point order.
inline std::map<int, std::vector<int>> points_by_day(const VisitPlan& plan) {
    std::map<int, std::vector<int>> by_day;
    for (const auto& [point, day] : plan.assignment) by_day[day].push_back(point);
    return by_day;
}

}  // namespace detail

/// 12-approximation rounding for uncapacitated SIRPFL.
inline Schedule round_usirpfl(const Instance& ins, const LpSolution& lp,
                              std::vector<VisitPlan>* plans_out = nullptr,
                              BallSystem* balls_out = nullptr) {
    if (ins.variant != Variant::Uncap)
        throw std::invalid_argument("round_usirpfl: instance is capacitated");
    std::vector<VisitPlan> plans;
    for (int v : ins.clients_with_demands()) plans.push_back(plan_visits_uncapacitated(lp, ins, v));
    BallSystem balls = select_balls(lp, ins, build_balls(lp, ins, plans));

    Schedule sched;
    sched.opened = balls.opened;
    sched.facility_cost = sched.routing_cost = sched.holding_cost = 0;
    for (int u : sched.opened) sched.facility_cost += ins.facility_costs[u];
    for (const auto& plan : plans) {
        const int u = balls.facility_of.at(plan.client);
        for (const auto& [day, points] : detail::points_by_day(plan)) {
            Delivery del;
            del.client = plan.client;
            del.day = day;
            del.facility = u;
            Trip trip;
            for (int point : points) {
                trip.parts.emplace_back(point, ins.demands[point].d);
                sched.holding_cost += ins.total_holding(point, day);
            }
            del.trips.push_back(std::move(trip));
            sched.routing_cost += ins.w(u, plan.client);
            sched.deliveries.push_back(std::move(del));
        }
    }
    if (plans_out) *plans_out = std::move(plans);
    if (balls_out) *balls_out = std::move(balls);
    return sched;
}

/// 3-approximation rounding for capacitated splittable IAP. Each visit day
/// makes ceil(load / U) trips.
inline Schedule round_csiap(const IapInstance& ins, const LpSolution& lp,
                            VisitPlan* plan_out = nullptr) {
    if (!ins.capacity) throw std::invalid_argument("round_csiap: capacity missing");
    const Rational& U = *ins.capacity;
    VisitPlan plan = plan_visits_iap(lp, ins);

    Schedule sched;
    sched.facility_cost = sched.routing_cost = sched.holding_cost = 0;
    for (const auto& [day, points] : detail::points_by_day(plan)) {
        std::vector<std::pair<int, Rational>> parts;
        for (int point : points) {
            parts.emplace_back(point, ins.demands[point].d);
            sched.holding_cost += ins.total_holding(point, day);
        }
        Delivery del;
        del.day = day;
        del.trips = detail::fill_trips(parts, U);
        sched.routing_cost += Rational(static_cast<long>(del.trips.size())) * ins.distance;
        sched.deliveries.push_back(std::move(del));
    }
    if (plan_out) *plan_out = std::move(plan);
    return sched;
}

/// 24-approximation rounding for capacitated splittable SIRPFL: capacitated
/// visit rule per client, ball selection as in the uncapacitated case, and
/// multi-trip days per ceil(load / U).
inline Schedule round_cssirpfl(const Instance& ins, const LpSolution& lp,
                               std::vector<VisitPlan>* plans_out = nullptr,
                               BallSystem* balls_out = nullptr) {
    if (ins.variant == Variant::Uncap)
        throw std::invalid_argument("round_cssirpfl: instance is uncapacitated");
    if (!ins.capacity) throw std::invalid_argument("round_cssirpfl: capacity missing");
    const Rational& U = *ins.capacity;
    std::vector<VisitPlan> plans;
    for (int v : ins.clients_with_demands()) plans.push_back(plan_visits_capacitated(lp, ins, v));
    BallSystem balls = select_balls(lp, ins, build_balls(lp, ins, plans));

    Schedule sched;
    sched.opened = balls.opened;
    sched.facility_cost = sched.routing_cost = sched.holding_cost = 0;
    for (int u : sched.opened) sched.facility_cost += ins.facility_costs[u];
    for (const auto& plan : plans) {
        const int u = balls.facility_of.at(plan.client);
        for (const auto& [day, points] : detail::points_by_day(plan)) {
            std::vector<std::pair<int, Rational>> parts;
            for (int point : points) {
                parts.emplace_back(point, ins.demands[point].d);
                sched.holding_cost += ins.total_holding(point, day);
            }
            Delivery del;
            del.client = plan.client;
            del.day = day;
            del.facility = u;
            del.trips = detail::fill_trips(parts, U);
            sched.routing_cost += Rational(static_cast<long>(del.trips.size())) * ins.w(u, plan.client);
            sched.deliveries.push_back(std::move(del));
        }
    }
    if (plans_out) *plans_out = std::move(plans);
    if (balls_out) *balls_out = std::move(balls);
    return sched;
}

// ---------------------------------------------------------------------------
// Splittable -> unsplittable repacking.
// ---------------------------------------------------------------------------

/// Repacks one visit day's whole demands into unsplit trips: every item larger
/// than U/2 rides alone, the rest first-fit in decreasing size over existing
/// trips. Returns groups of indices into `sizes`; the group count n' satisfies
/// n' <= 2 * n_split and at most one group is loaded to U/2 or less.
inline std::vector<std::vector<int>> unsplit_repack(const std::vector<Rational>& sizes,
                                                    const Rational& U, long n_split) {
    Rational total(0);
    for (const auto& size : sizes) {
        if (size > U) throw std::invalid_argument("unsplit_repack: item exceeds capacity");
        if (size <= 0) throw std::invalid_argument("unsplit_repack: item not positive");
        total += size;
    }
    if (sizes.empty()) return {};
    if (n_split < ceil_div(total, U))
        throw std::invalid_argument("unsplit_repack: n_split below ceil(total/U)");

    std::vector<int> order(sizes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return std::tie(sizes[b], b) < std::tie(sizes[a], a); });

    std::vector<std::vector<int>> groups;
    std::vector<Rational> loads;
    for (int idx : order) {
        bool placed = false;
        for (std::size_t g = 0; g < groups.size(); ++g)
            if (loads[g] + sizes[idx] <= U) {
                groups[g].push_back(idx);
                loads[g] += sizes[idx];
                placed = true;
                break;
            }
        if (!placed) {
            groups.push_back({idx});
            loads.push_back(sizes[idx]);
        }
    }

    long half_light = 0;
    for (const auto& load : loads)
        if (2 * load <= U) ++half_light;
    if (half_light > 1) throw std::logic_error("unsplit_repack: more than one light trip");
    if (static_cast<long>(groups.size()) > 2 * n_split)
        throw std::logic_error("unsplit_repack: trip count above twice the splittable count");
    return groups;
}

inline Rational edge_weight(const Instance& ins, const Delivery& del) {
    return ins.w(del.facility, del.client);
}

inline Rational edge_weight(const IapInstance& ins, const Delivery&) { return ins.distance; }

/// Applies the repacking to every delivery of a splittable schedule. Holding
/// is untouched (deliveries stay on their days); routing is recomputed from
/// the new trip counts.
template <typename AnyIns>
inline Schedule repack_unsplittable(const AnyIns& ins, const Rational& U, Schedule sched) {
    Rational routing(0);
    for (auto& del : sched.deliveries) {
        std::map<int, Rational> amount;  // re-aggregate split parts per point
        for (const auto& trip : del.trips)
            for (const auto& [point, a] : trip.parts) amount[point] += a;
        std::vector<int> points;
        std::vector<Rational> sizes;
        for (const auto& [point, a] : amount) {
            points.push_back(point);
            sizes.push_back(a);
        }
        auto groups = unsplit_repack(sizes, U, static_cast<long>(del.trips.size()));
        del.trips.clear();
        for (const auto& group : groups) {
            Trip trip;
            for (int k : group) trip.parts.emplace_back(points[k], sizes[k]);
            del.trips.push_back(std::move(trip));
        }
        routing += Rational(static_cast<long>(del.trips.size())) * edge_weight(ins, del);
    }
    sched.routing_cost = routing;
    return sched;
}

// ---------------------------------------------------------------------------
// End-to-end dispatcher.
// ---------------------------------------------------------------------------

/// Everything the pipeline produced, for invariant checking and reporting.
struct SolveTrace {
    std::optional<LpSolution> lp;           // absent on the exact uncapacitated-IAP path
    std::optional<Schedule> split_schedule; // intermediate, unsplittable variants only
    Schedule schedule;
    std::vector<VisitPlan> plans;
    std::optional<BallSystem> balls;        // SIRPFL only
};

inline SolveTrace solve_trace(const Instance& ins) {
    SolveTrace trace;
    if (ins.variant == Variant::Uncap) {
        trace.lp = solve_lp(build_usirpfl_lp(ins));
        BallSystem balls;
        trace.schedule = round_usirpfl(ins, *trace.lp, &trace.plans, &balls);
        trace.balls = std::move(balls);
        return trace;
    }
    trace.lp = solve_lp(build_cssirpfl_lp(ins));
    BallSystem balls;
    Schedule split = round_cssirpfl(ins, *trace.lp, &trace.plans, &balls);
    trace.balls = std::move(balls);
    if (ins.variant == Variant::CapSplit) {
        trace.schedule = std::move(split);
    } else {
        trace.split_schedule = split;
        trace.schedule = repack_unsplittable(ins, *ins.capacity, std::move(split));
    }
    return trace;
}

inline SolveTrace solve_trace(const IapInstance& ins) {
    SolveTrace trace;
    if (ins.variant == Variant::Uncap) {
        trace.schedule = ww_dp(ins).witness;  // exact dynamic program; no rounding
        return trace;
    }
    trace.lp = solve_lp(build_csiap_lp(ins));
    VisitPlan plan;
    Schedule split = round_csiap(ins, *trace.lp, &plan);
    trace.plans.push_back(std::move(plan));
    if (ins.variant == Variant::CapSplit) {
        trace.schedule = std::move(split);
    } else {
        trace.split_schedule = split;
        trace.schedule = repack_unsplittable(ins, *ins.capacity, std::move(split));
    }
    return trace;
}

template <typename AnyIns>
inline Schedule solve(const AnyIns& ins) {
    return solve_trace(ins).schedule;
}

}  // namespace sirpfl

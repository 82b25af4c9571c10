#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "sirpfl/instance.hpp"
#include "sirpfl/lp_model.hpp"
#include "sirpfl/schedule.hpp"
#include "sirpfl/simplex.hpp"

namespace sirpfl {

enum class OracleMethod { WwDp, VisitEnum, TripEnum, FacilityEnum, PackEnum };

struct OracleResult {
    Rational optimum;
    Schedule witness;
    OracleMethod method = OracleMethod::WwDp;
};

/// Oracles refuse instances above their size gates rather than return a value
/// that might not be optimal.
struct OracleTooLarge : std::runtime_error {
    explicit OracleTooLarge(const std::string& msg) : std::runtime_error(msg) {}
};

// ---------------------------------------------------------------------------
// partition_exists: pseudo-polynomial subset-sum DP over one bit per sum.
// ---------------------------------------------------------------------------

inline bool partition_exists(const std::vector<long>& s_values) {
    long total = 0;
    for (long a : s_values) {
        if (a <= 0) throw std::invalid_argument("partition_exists: elements must be positive");
        total += a;
    }
    if (total == 0) return true;  // empty multiset: both halves empty
    if (total % 2 != 0) return false;
    const long target = total / 2;
    std::vector<std::uint64_t> reach(static_cast<std::size_t>(target / 64 + 1), 0);
    reach[0] = 1;  // sum 0
    for (long a : s_values) {
        if (a > target) continue;
        const long words = static_cast<long>(reach.size());
        const long shift_words = a / 64, shift_bits = a % 64;
        for (long i = words - 1; i >= shift_words; --i) {
            std::uint64_t moved = reach[i - shift_words] << shift_bits;
            if (shift_bits && i - shift_words - 1 >= 0)
                moved |= reach[i - shift_words - 1] >> (64 - shift_bits);
            reach[i] |= moved;
        }
    }
    return (reach[target / 64] >> (target % 64)) & 1;
}

// ---------------------------------------------------------------------------
// ww_dp: exact uncapacitated IAP via the lot-sizing recurrence. Demands are
// served in deadline order; a visit serving a block is cheapest on the block's
// earliest deadline because unit holding costs fall toward the deadline.
// ---------------------------------------------------------------------------

inline OracleResult ww_dp(const IapInstance& ins) {
    if (ins.variant != Variant::Uncap)
        throw std::invalid_argument("ww_dp: capacitated instance; use exact_iap");
    if (ins.horizon > 10000) throw OracleTooLarge("ww_dp: horizon above gate");
    const int L = static_cast<int>(ins.demands.size());
    OracleResult out;
    out.method = OracleMethod::WwDp;
    if (L == 0) {
        out.optimum = 0;
        return out;
    }
    const Rational inf(-1);
    std::vector<Rational> best(L + 1);
    std::vector<int> from(L + 1, -1);
    best[0] = 0;
    for (int i = 0; i < L; ++i) {  // block starts at point i, visit day = t_i
        Rational block(0);
        const int day = ins.demands[i].t;
        for (int j = i; j < L; ++j) {
            block += ins.demands[j].d * ins.h(day, ins.demands[j].t);
            Rational cand = best[i] + ins.distance + block;
            if (from[j + 1] < 0 || cand < best[j + 1]) {
                best[j + 1] = cand;
                from[j + 1] = i;
            }
        }
    }
    out.optimum = best[L];
    for (int j = L; j > 0; j = from[j]) {
        int i = from[j];
        Delivery del;
        del.day = ins.demands[i].t;
        Trip trip;
        for (int k = i; k < j; ++k) trip.parts.emplace_back(k, ins.demands[k].d);
        del.trips.push_back(std::move(trip));
        out.witness.deliveries.push_back(std::move(del));
    }
    std::reverse(out.witness.deliveries.begin(), out.witness.deliveries.end());
    out.witness.facility_cost = 0;
    out.witness.routing_cost = Rational(static_cast<long>(out.witness.deliveries.size())) * ins.distance;
    out.witness.holding_cost = out.optimum - out.witness.routing_cost;
    return out;
}

// ---------------------------------------------------------------------------
// Exact capacitated IAP.
//   Splittable: enumerate per-day trip-count vectors; the best split for a
//   fixed vector is a transportation LP solved by the same rational simplex.
//   Unsplittable: enumerate serving days per demand, then pack each day's
//   multiset exactly.
// ---------------------------------------------------------------------------

namespace detail {

struct TransportOutcome {
    bool feasible = false;
    Rational holding;
    std::vector<std::vector<Rational>> amounts;  // [day][point]
};

inline TransportOutcome transport_split(const IapInstance& ins, const std::vector<long>& trips) {
    const int T = ins.horizon;
    const int P = static_cast<int>(ins.demands.size());
    const Rational& U = *ins.capacity;
    LpModel m;
    std::vector<std::vector<int>> var(T + 1, std::vector<int>(P, -1));
    for (int i = 0; i < P; ++i)
        for (int s = 1; s <= ins.demands[i].t; ++s)
            if (trips[s] > 0)
                var[s][i] = m.add_var({VarTag::IapX, -1, -1, s, -1, i},
                                      ins.demands[i].d * ins.h(s, ins.demands[i].t),
                                      CostFamily::Holding);
    for (int i = 0; i < P; ++i) {  // each demand fully delivered
        std::vector<LpTerm> terms;
        for (int s = 1; s <= ins.demands[i].t; ++s)
            if (var[s][i] >= 0) terms.push_back({var[s][i], Rational(1)});
        if (terms.empty()) return {};
        m.add_eq(std::move(terms), Rational(1));
    }
    for (int s = 1; s <= T; ++s) {  // day load within trip capacity
        if (trips[s] == 0) continue;
        std::vector<LpTerm> terms;
        for (int i = 0; i < P; ++i)
            if (var[s][i] >= 0) terms.push_back({var[s][i], -ins.demands[i].d});
        m.add_ge(std::move(terms), -Rational(trips[s]) * U);
    }
    SimplexResult res = simplex_solve(m);
    if (res.status != LpStatus::Optimal) return {};
    TransportOutcome out;
    out.feasible = true;
    out.holding = res.objective;
    out.amounts.assign(T + 1, std::vector<Rational>(P, Rational(0)));
    for (int s = 1; s <= T; ++s)
        for (int i = 0; i < P; ++i)
            if (var[s][i] >= 0 && res.x[var[s][i]] != 0)
                out.amounts[s][i] = res.x[var[s][i]] * ins.demands[i].d;
    return out;
}

/// Packs a day's delivered amounts into capacity-U trips, filling each trip
/// before opening the next. Splittable parts may straddle trips.
inline std::vector<Trip> fill_trips(const std::vector<std::pair<int, Rational>>& parts,
                                    const Rational& U) {
    std::vector<Trip> trips;
    if (parts.empty()) return trips;
    trips.emplace_back();
    Rational room = U;
    for (auto [point, remaining] : parts) {
        while (remaining > 0) {
            if (room == 0) {
                trips.emplace_back();
                room = U;
            }
            Rational take = remaining < room ? remaining : room;
            trips.back().parts.emplace_back(point, take);
            remaining -= take;
            room -= take;
        }
    }
    return trips;
}

/// Minimal number of capacity-U bins for items (exact search, <= 8 items).
inline int min_bins(std::vector<Rational> items, const Rational& U) {
    if (items.empty()) return 0;
    std::sort(items.begin(), items.end(), std::greater<>());
    Rational total(0);
    for (const auto& it : items) total += it;
    int lo = static_cast<int>(ceil_div(total, U));
    const int n = static_cast<int>(items.size());
    std::vector<Rational> loads;
    auto fits = [&](int limit, auto&& self, int idx) -> bool {
        if (idx == n) return true;
        for (std::size_t b = 0; b < loads.size(); ++b) {
            if (loads[b] + items[idx] > U) continue;
            bool dup = false;  // identical load => identical subtree
            for (std::size_t a = 0; a < b; ++a)
                if (loads[a] == loads[b]) {
                    dup = true;
                    break;
                }
            if (dup) continue;
            loads[b] += items[idx];
            if (self(limit, self, idx + 1)) return true;
            loads[b] -= items[idx];
        }
        if (static_cast<int>(loads.size()) < limit) {
            loads.push_back(items[idx]);
            if (self(limit, self, idx + 1)) return true;
            loads.pop_back();
        }
        return false;
    };
    for (int k = lo; k <= n; ++k) {
        loads.clear();
        if (fits(k, fits, 0)) return k;
    }
    return n;
}

/// Exact bin packing into trips (for witnesses): first feasible assignment at
/// the minimal count found by min_bins.
inline std::vector<Trip> pack_exact(const std::vector<std::pair<int, Rational>>& parts,
                                    const Rational& U) {
    std::vector<Rational> items;
    for (const auto& [_, amount] : parts) items.push_back(amount);
    std::vector<int> order(parts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::tie(items[b], b) < std::tie(items[a], a);
    });
    int k = min_bins(items, U);
    std::vector<Trip> trips;
    std::vector<Rational> loads;
    auto place = [&](auto&& self, std::size_t idx) -> bool {
        if (idx == order.size()) return true;
        const auto& [point, amount] = parts[order[idx]];
        for (std::size_t b = 0; b < trips.size(); ++b) {
            if (loads[b] + amount > U) continue;
            loads[b] += amount;
            trips[b].parts.emplace_back(point, amount);
            if (self(self, idx + 1)) return true;
            trips[b].parts.pop_back();
            loads[b] -= amount;
        }
        if (static_cast<int>(trips.size()) < k) {
            trips.emplace_back();
            loads.emplace_back(amount);
            trips.back().parts.emplace_back(point, amount);
            if (self(self, idx + 1)) return true;
            trips.pop_back();
            loads.pop_back();
        }
        return false;
    };
    if (!place(place, 0)) throw std::logic_error("pack_exact: min_bins count not packable");
    return trips;
}

}  // namespace detail

inline OracleResult exact_iap(const IapInstance& ins, Variant variant) {
    if (variant == Variant::Uncap) return ww_dp(ins);
    if (!ins.capacity) throw std::invalid_argument("exact_iap: capacity missing");
    if (ins.horizon > 6) throw OracleTooLarge("exact_iap: horizon above gate (T <= 6)");
    const Rational& U = *ins.capacity;
    const int T = ins.horizon;
    const int P = static_cast<int>(ins.demands.size());
    Rational total_demand(0);
    for (const auto& dp : ins.demands) total_demand += dp.d;
    const long kmin = P == 0 ? 0 : ceil_div(total_demand, U);
    const long budget = kmin + T;

    OracleResult out;
    if (P == 0) {
        out.optimum = 0;
        out.method = variant == Variant::CapSplit ? OracleMethod::TripEnum : OracleMethod::PackEnum;
        return out;
    }

    if (variant == Variant::CapSplit) {
        out.method = OracleMethod::TripEnum;
        // cumulative demand due by each day: trips before it must cover it
        std::vector<Rational> due(T + 1, Rational(0));
        for (const auto& dp : ins.demands) due[dp.t] += dp.d;
        for (int s = 1; s <= T; ++s) due[s] += due[s - 1];
        std::vector<Rational> future(T + 2, Rational(0));  // demand still open from day s on
        for (const auto& dp : ins.demands)
            for (int s = 1; s <= dp.t; ++s) future[s] += dp.d;

        bool found = false;
        std::vector<long> trips(T + 1, 0);
        auto rec = [&](auto&& self, int day, long used) -> void {
            if (found && Rational(used) * ins.distance >= out.optimum) return;
            if (day > T) {
                auto transport = detail::transport_split(ins, trips);
                if (!transport.feasible) return;
                Rational cost = Rational(used) * ins.distance + transport.holding;
                if (found && cost >= out.optimum) return;
                Schedule cand;
                cand.holding_cost = transport.holding;
                cand.routing_cost = Rational(used) * ins.distance;
                for (int s = 1; s <= T; ++s) {
                    if (trips[s] == 0) continue;
                    std::vector<std::pair<int, Rational>> parts;
                    for (int i = 0; i < P; ++i)
                        if (transport.amounts[s][i] != 0) parts.emplace_back(i, transport.amounts[s][i]);
                    Delivery del;
                    del.day = s;
                    del.trips = detail::fill_trips(parts, U);
                    // a vector with an idle trip is dominated by the one without it,
                    // which lexicographic DFS order has already visited
                    if (static_cast<long>(del.trips.size()) != trips[s]) return;
                    cand.deliveries.push_back(std::move(del));
                }
                found = true;
                out.optimum = cost;
                out.witness = std::move(cand);
                return;
            }
            long cap_here = ceil_div(future[day], U);
            for (long k = 0; k <= cap_here && used + k <= budget; ++k) {
                // trips up to this day must be able to cover demand due by it
                if (Rational(used + k) * U < due[day]) continue;
                trips[day] = k;
                self(self, day + 1, used + k);
            }
            trips[day] = 0;
        };
        rec(rec, 1, 0);
        if (!found) throw std::logic_error("exact_iap: no feasible trip vector found");
        return out;
    }

    // Unsplittable: enumerate serving days, pack each day exactly.
    out.method = OracleMethod::PackEnum;
    if (P > 8) throw OracleTooLarge("exact_iap: more than 8 unsplittable demands");
    for (const auto& dp : ins.demands)
        if (dp.d > U) throw std::invalid_argument("exact_iap: demand exceeds capacity");
    std::vector<int> day_of(P, 0);
    std::vector<int> best_day;
    bool found = false;
    Rational best_cost;
    auto rec = [&](auto&& self, int i, Rational holding) -> void {
        if (found && holding >= best_cost) return;
        if (i == P) {
            Rational cost = holding;
            for (int s = 1; s <= T; ++s) {
                std::vector<Rational> items;
                for (int p = 0; p < P; ++p)
                    if (day_of[p] == s) items.push_back(ins.demands[p].d);
                if (!items.empty())
                    cost += Rational(detail::min_bins(std::move(items), U)) * ins.distance;
                if (found && cost >= best_cost) return;
            }
            if (!found || cost < best_cost) {
                found = true;
                best_cost = cost;
                best_day = day_of;
            }
            return;
        }
        int lo = 1;
        // identical points: serve in non-decreasing day order (symmetry cut)
        if (i > 0 && ins.demands[i].t == ins.demands[i - 1].t && ins.demands[i].d == ins.demands[i - 1].d)
            lo = day_of[i - 1];
        for (int s = lo; s <= ins.demands[i].t; ++s) {
            day_of[i] = s;
            self(self, i + 1, holding + ins.demands[i].d * ins.h(s, ins.demands[i].t));
        }
    };
    rec(rec, 0, Rational(0));
    if (!found) throw std::logic_error("exact_iap: unsplittable enumeration found nothing");
    out.optimum = best_cost;
    out.witness.holding_cost = 0;
    out.witness.routing_cost = 0;
    for (int s = 1; s <= T; ++s) {
        std::vector<std::pair<int, Rational>> parts;
        for (int p = 0; p < P; ++p)
            if (best_day[p] == s) {
                parts.emplace_back(p, ins.demands[p].d);
                out.witness.holding_cost += ins.demands[p].d * ins.h(s, ins.demands[p].t);
            }
        if (parts.empty()) continue;
        Delivery del;
        del.day = s;
        del.trips = detail::pack_exact(parts, U);
        out.witness.routing_cost += Rational(static_cast<long>(del.trips.size())) * ins.distance;
        out.witness.deliveries.push_back(std::move(del));
    }
    return out;
}

inline OracleResult exact_iap(const IapInstance& ins) { return exact_iap(ins, ins.variant); }

// ---------------------------------------------------------------------------
// Exact SIRPFL: enumerate facility subsets; the rest decomposes into one IAP
// per client against its nearest open facility.
// ---------------------------------------------------------------------------

inline IapInstance client_subproblem(const Instance& ins, int v, const Rational& dist) {
    IapInstance iap;
    iap.distance = dist;
    iap.horizon = ins.horizon;
    iap.capacity = ins.capacity;
    iap.variant = ins.variant;
    for (int i : ins.demands_of(v)) {
        iap.demands.push_back({ins.demands[i].t, ins.demands[i].d});
        if (!iap.holding.count(ins.demands[i].t)) iap.holding[ins.demands[i].t] = ins.holding[i];
    }
    return iap;
}

inline OracleResult exact_sirpfl(const Instance& ins) {
    if (ins.n > 5) throw OracleTooLarge("exact_sirpfl: n above gate (n <= 5)");
    if (ins.horizon > 4) throw OracleTooLarge("exact_sirpfl: horizon above gate (T <= 4)");
    if (ins.demands.size() > 8) throw OracleTooLarge("exact_sirpfl: more than 8 demands");

    OracleResult out;
    out.method = OracleMethod::FacilityEnum;
    if (ins.demands.empty()) {
        out.optimum = 0;
        return out;
    }
    auto clients = ins.clients_with_demands();
    bool found = false;
    for (unsigned mask = 1; mask < (1u << ins.n); ++mask) {
        Rational cost(0);
        for (int u = 0; u < ins.n; ++u)
            if (mask & (1u << u)) cost += ins.facility_costs[u];
        if (found && cost >= out.optimum) continue;
        Schedule sched;
        for (int u = 0; u < ins.n; ++u)
            if (mask & (1u << u)) sched.opened.push_back(u);
        sched.facility_cost = cost;
        bool ok = true;
        for (int v : clients) {
            int nearest = -1;
            for (int u : sched.opened)
                if (nearest < 0 || ins.w(u, v) < ins.w(nearest, v)) nearest = u;
            OracleResult sub = exact_iap(client_subproblem(ins, v, ins.w(nearest, v)), ins.variant);
            cost += sub.optimum;
            if (found && cost >= out.optimum) {
                ok = false;
                break;
            }
            auto points = ins.demands_of(v);
            for (auto del : sub.witness.deliveries) {
                del.client = v;
                del.facility = nearest;
                for (auto& trip : del.trips)
                    for (auto& [point, _] : trip.parts) point = points[point];
                sched.deliveries.push_back(std::move(del));
            }
            sched.routing_cost += sub.witness.routing_cost;
            sched.holding_cost += sub.witness.holding_cost;
        }
        if (!ok) continue;
        if (!found || cost < out.optimum) {
            found = true;
            out.optimum = cost;
            out.witness = std::move(sched);
        }
    }
    return out;
}

}  // namespace sirpfl

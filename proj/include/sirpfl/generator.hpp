#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>

#include "sirpfl/instance.hpp"

namespace sirpfl {

/// Deterministic splitmix64 stream. The standard <random> distributions are
/// implementation-defined, so instance generation rolls its own draws to keep
/// seeds portable.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [lo, hi] inclusive.
    long range(long lo, long hi) {
        if (hi < lo) throw std::invalid_argument("rng range: hi < lo");
        return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    /// Bernoulli with probability p expressed as parts-per-million.
    bool chance_ppm(long ppm) { return next() % 1000000 < static_cast<std::uint64_t>(ppm); }
};

struct GenParams {
    int n = 3;
    int horizon = 3;
    double demand_density = 0.5;  // probability a (v,t) cell carries demand
    long weight_range = 10;       // vertices drawn on [0,weight_range]^2 under L1
    long facility_min = 1;
    long facility_max = 10;
    long slope_min = 0;           // holding is slope_v * (t - s)
    long slope_max = 3;
    long demand_levels = 5;       // demand magnitudes; capacitated draws (k/levels)*U
    int max_demands = 0;          // 0 = no cap on |D|
    std::optional<Rational> capacity;
    Variant variant = Variant::Uncap;
};

namespace detail {

inline void check_gen_params(int n, int horizon, double density) {
    if (n < 1) throw std::invalid_argument("generate: n must be >= 1");
    if (horizon < 1) throw std::invalid_argument("generate: T must be >= 1");
    if (!(density > 0.0) || density > 1.0)
        throw std::invalid_argument("generate: density must be in (0,1]");
}

inline long density_ppm(double density) { return static_cast<long>(density * 1000000.0); }

/// Picks k distinct indices from 0..total-1, order-preserving.
inline std::vector<int> pick_subset(Rng& rng, int total, int k) {
    std::vector<int> idx(total);
    for (int i = 0; i < total; ++i) idx[i] = i;
    for (int i = 0; i < k; ++i) {
        int j = static_cast<int>(rng.range(i, total - 1));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

inline Rational draw_slope(Rng& rng, const GenParams& p) {
    long num = rng.range(p.slope_min, p.slope_max);
    long den = rng.range(1, 2);
    return make_rational(num, den);
}

inline Rational draw_demand(Rng& rng, long levels, const std::optional<Rational>& capacity) {
    long k = rng.range(1, levels);
    if (capacity) return Rational(k) / Rational(levels) * *capacity;  // always <= U
    return Rational(k);
}

}  // namespace detail

/// Random metric SIRPFL instance: vertices are integer points in the plane,
/// weights their L1 distances (an exact metric), holding costs linear in the
/// wait so monotonicity holds by construction. Deterministic per seed; always
/// passes validate.
inline Instance generate_random(const GenParams& p, std::uint64_t seed) {
    detail::check_gen_params(p.n, p.horizon, p.demand_density);
    if (p.variant != Variant::Uncap && !p.capacity)
        throw std::invalid_argument("generate: capacitated variant needs a capacity");

    Rng rng(seed);
    Instance ins;
    ins.n = p.n;
    ins.horizon = p.horizon;
    ins.variant = p.variant;
    ins.capacity = p.capacity;

    std::vector<std::pair<long, long>> pts;
    for (int v = 0; v < p.n; ++v)
        pts.emplace_back(rng.range(0, p.weight_range), rng.range(0, p.weight_range));
    ins.weights.assign(p.n, std::vector<Rational>(p.n, Rational(0)));
    for (int u = 0; u < p.n; ++u)
        for (int v = 0; v < p.n; ++v)
            ins.weights[u][v] = Rational(std::abs(pts[u].first - pts[v].first) +
                                         std::abs(pts[u].second - pts[v].second));

    for (int v = 0; v < p.n; ++v)
        ins.facility_costs.push_back(Rational(rng.range(p.facility_min, p.facility_max)));

    std::vector<Rational> slope;
    for (int v = 0; v < p.n; ++v) slope.push_back(detail::draw_slope(rng, p));

    long ppm = detail::density_ppm(p.demand_density);
    for (int v = 0; v < p.n; ++v)
        for (int t = 1; t <= p.horizon; ++t)
            if (rng.chance_ppm(ppm))
                ins.demands.push_back({v, t, detail::draw_demand(rng, p.demand_levels, p.capacity)});
    if (ins.demands.empty()) {
        int v = static_cast<int>(rng.range(0, p.n - 1));
        int t = static_cast<int>(rng.range(1, p.horizon));
        ins.demands.push_back({v, t, detail::draw_demand(rng, p.demand_levels, p.capacity)});
    }
    if (p.max_demands > 0 && static_cast<int>(ins.demands.size()) > p.max_demands) {
        auto keep = detail::pick_subset(rng, static_cast<int>(ins.demands.size()), p.max_demands);
        std::vector<DemandPoint> trimmed;
        for (int i : keep) trimmed.push_back(ins.demands[i]);
        ins.demands = std::move(trimmed);
    }

    for (const auto& dp : ins.demands) {
        std::vector<Rational> row;
        for (int s = 1; s <= dp.t; ++s) row.push_back(slope[dp.v] * Rational(dp.t - s));
        ins.holding.push_back(std::move(row));
    }
    return ins;
}

struct IapGenParams {
    int horizon = 4;
    double demand_density = 0.7;
    long distance_min = 1;
    long distance_max = 10;
    long slope_min = 0;
    long slope_max = 3;
    long demand_levels = 5;
    std::optional<Rational> capacity;
    Variant variant = Variant::Uncap;
};

inline IapInstance generate_random_iap(const IapGenParams& p, std::uint64_t seed) {
    detail::check_gen_params(1, p.horizon, p.demand_density);
    if (p.variant != Variant::Uncap && !p.capacity)
        throw std::invalid_argument("generate: capacitated variant needs a capacity");

    Rng rng(seed);
    IapInstance ins;
    ins.horizon = p.horizon;
    ins.variant = p.variant;
    ins.capacity = p.capacity;
    ins.distance = Rational(rng.range(p.distance_min, p.distance_max));

    long snum = rng.range(p.slope_min, p.slope_max);
    long sden = rng.range(1, 2);
    Rational slope = make_rational(snum, sden);

    long ppm = detail::density_ppm(p.demand_density);
    for (int t = 1; t <= p.horizon; ++t)
        if (rng.chance_ppm(ppm))
            ins.demands.push_back({t, detail::draw_demand(rng, p.demand_levels, p.capacity)});
    if (ins.demands.empty()) {
        int t = static_cast<int>(rng.range(1, p.horizon));
        ins.demands.push_back({t, detail::draw_demand(rng, p.demand_levels, p.capacity)});
    }
    for (const auto& dp : ins.demands) {
        if (ins.holding.count(dp.t)) continue;
        std::vector<Rational> row;
        for (int s = 1; s <= dp.t; ++s) row.push_back(slope * Rational(dp.t - s));
        ins.holding[dp.t] = std::move(row);
    }
    return ins;
}

}  // namespace sirpfl

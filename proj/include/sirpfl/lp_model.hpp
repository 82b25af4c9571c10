#pragma once

#include <cstdint>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "sirpfl/instance.hpp"

namespace sirpfl {

/// Which objective term family a variable contributes to; the LP solution's
/// cost decomposition sums value * coefficient per family.
enum class CostFamily { None, Facility, Routing, Holding };

/// Semantic identity of an LP variable. SIRPFL models use Z(u), Ys(u,v,s),
/// Yst(u,v,s,t), X(v,s,t); IAP models use IapY(s) and IapX(s, point). Unused
/// index slots stay -1.
struct VarTag {
    enum Kind : std::uint8_t { Z, Ys, Yst, X, IapY, IapX } kind;
    int u = -1, v = -1, s = -1, t = -1, point = -1;

    std::uint64_t key() const {
        return (static_cast<std::uint64_t>(kind) << 56) ^
               (static_cast<std::uint64_t>(static_cast<std::uint16_t>(u + 1)) << 44) ^
               (static_cast<std::uint64_t>(static_cast<std::uint16_t>(v + 1)) << 32) ^
               (static_cast<std::uint64_t>(static_cast<std::uint16_t>(s + 1)) << 20) ^
               (static_cast<std::uint64_t>(static_cast<std::uint16_t>(t + 1)) << 8) ^
               static_cast<std::uint64_t>(static_cast<std::uint8_t>(point + 1));
    }

    std::string name() const {
        auto join = [](std::initializer_list<int> xs) {
            std::string out;
            for (int x : xs) out += "_" + std::to_string(x);
            return out;
        };
        switch (kind) {
            case Z: return "z" + join({u});
            case Ys: return "ys" + join({u, v, s});
            case Yst: return "yst" + join({u, v, s, t});
            case X: return "x" + join({v, s, t});
            case IapY: return "y" + join({s});
            case IapX: return "x" + join({s, point});
        }
        return "?";
    }
};

struct LpVariable {
    VarTag tag;
    Rational obj;
    CostFamily family = CostFamily::None;
};

struct LpTerm {
    int var = -1;
    Rational coeff;
};

struct LpConstraint {
    enum Rel { Ge, Eq } rel = Ge;
    std::vector<LpTerm> terms;
    Rational rhs;
};

/// A minimization LP with implied nonnegativity on every variable.
struct LpModel {
    std::vector<LpVariable> vars;
    std::vector<LpConstraint> cons;
    std::unordered_map<std::uint64_t, int> index;

    int add_var(VarTag tag, Rational obj, CostFamily family) {
        int id = static_cast<int>(vars.size());
        index.emplace(tag.key(), id);
        vars.push_back({tag, std::move(obj), family});
        return id;
    }

    void add_ge(std::vector<LpTerm> terms, Rational rhs) {
        cons.push_back({LpConstraint::Ge, std::move(terms), std::move(rhs)});
    }

    void add_eq(std::vector<LpTerm> terms, Rational rhs) {
        cons.push_back({LpConstraint::Eq, std::move(terms), std::move(rhs)});
    }

    int var_id(const VarTag& tag) const {
        auto it = index.find(tag.key());
        return it == index.end() ? -1 : it->second;
    }
};

/// Optimal basic solution with the objective split into its three term
/// families. Carries the variable tags so the rounding stage can query values
/// semantically.
struct LpSolution {
    std::vector<LpVariable> vars;
    std::vector<Rational> values;
    std::unordered_map<std::uint64_t, int> index;
    Rational objective;
    Rational facility_cost, routing_cost, holding_cost;

    const Rational& value(const VarTag& tag) const {
        static const Rational zero(0);
        auto it = index.find(tag.key());
        return it == index.end() ? zero : values[it->second];
    }

    const Rational& z(int u) const { return value({VarTag::Z, u}); }
    const Rational& ys(int u, int v, int s) const { return value({VarTag::Ys, u, v, s}); }
    const Rational& yst(int u, int v, int s, int t) const { return value({VarTag::Yst, u, v, s, t}); }
    const Rational& x(int v, int s, int t) const { return value({VarTag::X, -1, v, s, t}); }
    const Rational& iap_y(int s) const { return value({VarTag::IapY, -1, -1, s}); }
    const Rational& iap_x(int s, int point) const {
        return value({VarTag::IapX, -1, -1, s, -1, point});
    }
};

namespace detail {

inline void require_valid(const std::vector<std::string>& report, const char* what) {
    if (!report.empty())
        throw std::invalid_argument(std::string(what) + ": invalid instance: " + report.front());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Uncapacitated SIRPFL relaxation.
//
// min  sum_u f_u z_u + sum_{u,v,s} w_uv ys_uvs + sum_{(v,t),s<=t} H^v_{s,t} x_vst
// s.t. service        sum_{s<=t} x_vst >= 1
//      connection     sum_u yst_uvst >= x_vst
//      facility lb    z_u >= sum_{s<=t} yst_uvst
//      connection lb  ys_uvs >= yst_uvst
//      facility lb 2  z_u >= ys_uvs
//      intervals      suffix mass for a later deadline dominates an earlier one
// ---------------------------------------------------------------------------

inline LpModel build_usirpfl_lp(const Instance& ins) {
    if (ins.variant != Variant::Uncap)
        throw std::invalid_argument("build_usirpfl_lp: instance is capacitated");
    detail::require_valid(validate(ins), "build_usirpfl_lp");

    LpModel m;
    for (int u = 0; u < ins.n; ++u)
        m.add_var({VarTag::Z, u}, ins.facility_costs[u], CostFamily::Facility);
    for (int u = 0; u < ins.n; ++u)
        for (int v = 0; v < ins.n; ++v)
            for (int s = 1; s <= ins.horizon; ++s)
                m.add_var({VarTag::Ys, u, v, s}, ins.w(u, v), CostFamily::Routing);
    for (std::size_t i = 0; i < ins.demands.size(); ++i) {
        const auto& dp = ins.demands[i];
        for (int u = 0; u < ins.n; ++u)
            for (int s = 1; s <= dp.t; ++s)
                m.add_var({VarTag::Yst, u, dp.v, s, dp.t}, Rational(0), CostFamily::None);
    }
    for (std::size_t i = 0; i < ins.demands.size(); ++i) {
        const auto& dp = ins.demands[i];
        for (int s = 1; s <= dp.t; ++s)
            m.add_var({VarTag::X, -1, dp.v, s, dp.t}, ins.total_holding(static_cast<int>(i), s),
                      CostFamily::Holding);
    }

    for (const auto& dp : ins.demands) {  // service
        std::vector<LpTerm> terms;
        for (int s = 1; s <= dp.t; ++s) terms.push_back({m.var_id({VarTag::X, -1, dp.v, s, dp.t}), Rational(1)});
        m.add_ge(std::move(terms), Rational(1));
    }
    for (const auto& dp : ins.demands)  // connection
        for (int s = 1; s <= dp.t; ++s) {
            std::vector<LpTerm> terms;
            for (int u = 0; u < ins.n; ++u)
                terms.push_back({m.var_id({VarTag::Yst, u, dp.v, s, dp.t}), Rational(1)});
            terms.push_back({m.var_id({VarTag::X, -1, dp.v, s, dp.t}), Rational(-1)});
            m.add_ge(std::move(terms), Rational(0));
        }
    for (const auto& dp : ins.demands)  // facility lower bound
        for (int u = 0; u < ins.n; ++u) {
            std::vector<LpTerm> terms{{m.var_id({VarTag::Z, u}), Rational(1)}};
            for (int s = 1; s <= dp.t; ++s)
                terms.push_back({m.var_id({VarTag::Yst, u, dp.v, s, dp.t}), Rational(-1)});
            m.add_ge(std::move(terms), Rational(0));
        }
    for (const auto& dp : ins.demands)  // connection lower bound
        for (int u = 0; u < ins.n; ++u)
            for (int s = 1; s <= dp.t; ++s)
                m.add_ge({{m.var_id({VarTag::Ys, u, dp.v, s}), Rational(1)},
                          {m.var_id({VarTag::Yst, u, dp.v, s, dp.t}), Rational(-1)}},
                         Rational(0));
    for (int u = 0; u < ins.n; ++u)  // facility lower bound from day edges
        for (int v = 0; v < ins.n; ++v)
            for (int s = 1; s <= ins.horizon; ++s)
                m.add_ge({{m.var_id({VarTag::Z, u}), Rational(1)},
                          {m.var_id({VarTag::Ys, u, v, s}), Rational(-1)}},
                         Rational(0));
    for (int v = 0; v < ins.n; ++v) {  // service intervals
        auto idx = ins.demands_of(v);
        for (std::size_t a = 0; a < idx.size(); ++a)
            for (std::size_t b = a + 1; b < idx.size(); ++b) {
                int t1 = ins.demands[idx[a]].t, t2 = ins.demands[idx[b]].t;
                for (int sp = 1; sp <= t1; ++sp) {
                    std::vector<LpTerm> terms;
                    for (int u = 0; u < ins.n; ++u) {
                        for (int s = sp; s <= t2; ++s)
                            terms.push_back({m.var_id({VarTag::Yst, u, v, s, t2}), Rational(1)});
                        for (int s = sp; s <= t1; ++s)
                            terms.push_back({m.var_id({VarTag::Yst, u, v, s, t1}), Rational(-1)});
                    }
                    m.add_ge(std::move(terms), Rational(0));
                }
            }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Capacitated splittable SIRPFL relaxation (also the relaxation used for the
// unsplittable variant). Adds the two trip-capacity families; drops the
// service-interval family, and drops z_u >= ys_uvs because day edges now count
// trips and exceed 1 in legitimate integral solutions.
// ---------------------------------------------------------------------------

inline LpModel build_cssirpfl_lp(const Instance& ins) {
    if (ins.variant == Variant::Uncap)
        throw std::invalid_argument("build_cssirpfl_lp: instance is uncapacitated");
    if (!ins.capacity) throw std::invalid_argument("build_cssirpfl_lp: capacity missing");
    const Rational& U = *ins.capacity;

    LpModel m;
    for (int u = 0; u < ins.n; ++u)
        m.add_var({VarTag::Z, u}, ins.facility_costs[u], CostFamily::Facility);
    for (int u = 0; u < ins.n; ++u)
        for (int v = 0; v < ins.n; ++v)
            for (int s = 1; s <= ins.horizon; ++s)
                m.add_var({VarTag::Ys, u, v, s}, ins.w(u, v), CostFamily::Routing);
    for (const auto& dp : ins.demands)
        for (int u = 0; u < ins.n; ++u)
            for (int s = 1; s <= dp.t; ++s)
                m.add_var({VarTag::Yst, u, dp.v, s, dp.t}, Rational(0), CostFamily::None);
    for (std::size_t i = 0; i < ins.demands.size(); ++i) {
        const auto& dp = ins.demands[i];
        for (int s = 1; s <= dp.t; ++s)
            m.add_var({VarTag::X, -1, dp.v, s, dp.t}, ins.total_holding(static_cast<int>(i), s),
                      CostFamily::Holding);
    }

    for (const auto& dp : ins.demands) {  // service
        std::vector<LpTerm> terms;
        for (int s = 1; s <= dp.t; ++s) terms.push_back({m.var_id({VarTag::X, -1, dp.v, s, dp.t}), Rational(1)});
        m.add_ge(std::move(terms), Rational(1));
    }
    for (const auto& dp : ins.demands)  // connection
        for (int s = 1; s <= dp.t; ++s) {
            std::vector<LpTerm> terms;
            for (int u = 0; u < ins.n; ++u)
                terms.push_back({m.var_id({VarTag::Yst, u, dp.v, s, dp.t}), Rational(1)});
            terms.push_back({m.var_id({VarTag::X, -1, dp.v, s, dp.t}), Rational(-1)});
            m.add_ge(std::move(terms), Rational(0));
        }
    for (int v = 0; v < ins.n; ++v)  // day trips cover demand served that day
        for (int s = 1; s <= ins.horizon; ++s) {
            std::vector<LpTerm> terms;
            for (int u = 0; u < ins.n; ++u) terms.push_back({m.var_id({VarTag::Ys, u, v, s}), Rational(1)});
            bool any = false;
            for (const auto& dp : ins.demands)
                if (dp.v == v && dp.t >= s) {
                    terms.push_back({m.var_id({VarTag::X, -1, v, s, dp.t}), -dp.d / U});
                    any = true;
                }
            if (any) m.add_ge(std::move(terms), Rational(0));
        }
    for (const auto& dp : ins.demands)  // facility lower bound
        for (int u = 0; u < ins.n; ++u) {
            std::vector<LpTerm> terms{{m.var_id({VarTag::Z, u}), Rational(1)}};
            for (int s = 1; s <= dp.t; ++s)
                terms.push_back({m.var_id({VarTag::Yst, u, dp.v, s, dp.t}), Rational(-1)});
            m.add_ge(std::move(terms), Rational(0));
        }
    for (const auto& dp : ins.demands)  // connection lower bound
        for (int u = 0; u < ins.n; ++u)
            for (int s = 1; s <= dp.t; ++s)
                m.add_ge({{m.var_id({VarTag::Ys, u, dp.v, s}), Rational(1)},
                          {m.var_id({VarTag::Yst, u, dp.v, s, dp.t}), Rational(-1)}},
                         Rational(0));
    for (int u = 0; u < ins.n; ++u)  // per-facility trips cover per-facility load
        for (int v = 0; v < ins.n; ++v)
            for (int s = 1; s <= ins.horizon; ++s) {
                std::vector<LpTerm> terms{{m.var_id({VarTag::Ys, u, v, s}), Rational(1)}};
                bool any = false;
                for (const auto& dp : ins.demands)
                    if (dp.v == v && dp.t >= s) {
                        terms.push_back({m.var_id({VarTag::Yst, u, v, s, dp.t}), -dp.d / U});
                        any = true;
                    }
                if (any) m.add_ge(std::move(terms), Rational(0));
            }
    return m;
}

// ---------------------------------------------------------------------------
// Capacitated splittable IAP relaxation. Variables are indexed per demand
// point (several points may share a day), which reduces to the per-day form
// when days are unique.
//
// min  sum_s W y_s + sum_{i,s<=t_i} h_{s,t_i} d_i x_si
// s.t. service   sum_{s<=t_i} x_si >= 1
//      capacity  y_s >= sum_i x_si d_i / U
//      trip      y_s >= x_si
// ---------------------------------------------------------------------------

inline LpModel build_csiap_lp(const IapInstance& ins) {
    if (ins.variant == Variant::Uncap)
        throw std::invalid_argument("build_csiap_lp: instance is uncapacitated");
    if (!ins.capacity) throw std::invalid_argument("build_csiap_lp: capacity missing");
    const Rational& U = *ins.capacity;

    LpModel m;
    for (int s = 1; s <= ins.horizon; ++s)
        m.add_var({VarTag::IapY, -1, -1, s}, ins.distance, CostFamily::Routing);
    for (std::size_t i = 0; i < ins.demands.size(); ++i)
        for (int s = 1; s <= ins.demands[i].t; ++s)
            m.add_var({VarTag::IapX, -1, -1, s, -1, static_cast<int>(i)},
                      ins.total_holding(static_cast<int>(i), s), CostFamily::Holding);

    for (std::size_t i = 0; i < ins.demands.size(); ++i) {  // service
        std::vector<LpTerm> terms;
        for (int s = 1; s <= ins.demands[i].t; ++s)
            terms.push_back({m.var_id({VarTag::IapX, -1, -1, s, -1, static_cast<int>(i)}), Rational(1)});
        m.add_ge(std::move(terms), Rational(1));
    }
    for (int s = 1; s <= ins.horizon; ++s) {  // capacity
        std::vector<LpTerm> terms{{m.var_id({VarTag::IapY, -1, -1, s}), Rational(1)}};
        bool any = false;
        for (std::size_t i = 0; i < ins.demands.size(); ++i)
            if (ins.demands[i].t >= s) {
                terms.push_back({m.var_id({VarTag::IapX, -1, -1, s, -1, static_cast<int>(i)}),
                                 -ins.demands[i].d / U});
                any = true;
            }
        if (any) m.add_ge(std::move(terms), Rational(0));
    }
    for (std::size_t i = 0; i < ins.demands.size(); ++i)  // trip
        for (int s = 1; s <= ins.demands[i].t; ++s)
            m.add_ge({{m.var_id({VarTag::IapY, -1, -1, s}), Rational(1)},
                      {m.var_id({VarTag::IapX, -1, -1, s, -1, static_cast<int>(i)}), Rational(-1)}},
                     Rational(0));
    return m;
}

// ---------------------------------------------------------------------------
// MPS-style export for cross-checking against external solvers. Decimal
// expansions are approximate; the header says so.
// ---------------------------------------------------------------------------

inline std::string export_mps(const LpModel& m, const std::string& name = "SIRPFL") {
    auto dec = [](const Rational& q) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.15g", q.get_d());
        return std::string(buf);
    };
    std::ostringstream out;
    out << "* WARNING: approximate export; rationals rendered as 15-digit decimals\n";
    out << "NAME          " << name << "\n";
    out << "ROWS\n N  COST\n";
    for (std::size_t i = 0; i < m.cons.size(); ++i)
        out << (m.cons[i].rel == LpConstraint::Ge ? " G  R" : " E  R") << i << "\n";
    out << "COLUMNS\n";
    std::vector<std::vector<std::pair<int, const Rational*>>> by_var(m.vars.size());
    for (std::size_t i = 0; i < m.cons.size(); ++i)
        for (const auto& term : m.cons[i].terms)
            if (term.coeff != 0) by_var[term.var].emplace_back(static_cast<int>(i), &term.coeff);
    for (std::size_t j = 0; j < m.vars.size(); ++j) {
        const std::string vn = m.vars[j].tag.name();
        if (m.vars[j].obj != 0) out << "    " << vn << "  COST  " << dec(m.vars[j].obj) << "\n";
        for (const auto& [row, coeff] : by_var[j])
            out << "    " << vn << "  R" << row << "  " << dec(*coeff) << "\n";
    }
    out << "RHS\n";
    for (std::size_t i = 0; i < m.cons.size(); ++i)
        if (m.cons[i].rhs != 0) out << "    RHS  R" << i << "  " << dec(m.cons[i].rhs) << "\n";
    out << "BOUNDS\nENDATA\n";
    return out.str();
}

}  // namespace sirpfl

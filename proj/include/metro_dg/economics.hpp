#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "metro_dg/dg_planner.hpp"
#include "metro_dg/error.hpp"

namespace metro_dg {

/// Currency is whatever unit the caller uses consistently.
struct CostAssumptions {
    double dg_capex_per_kw = 0.0;
    double demand_charge_per_kw_month = 0.0;
    double grid_energy_tariff_peak = 0.0;
    double dg_fuel_cost_per_kwh = 0.0;
    double operating_days_per_year = 365.0;
    double avoided_emergency_genset_capex = 0.0;
    double avoided_battery_capex = 0.0;

    void validate() const {
        auto check = [](double v, const char* name) {
            if (!(v >= 0.0) || !std::isfinite(v)) {
                throw Error(ErrorKind::Validation, std::string(name) + " must be finite and non-negative");
            }
        };
        check(dg_capex_per_kw, "dg_capex_per_kw");
        check(demand_charge_per_kw_month, "demand_charge_per_kw_month");
        check(grid_energy_tariff_peak, "grid_energy_tariff_peak");
        check(dg_fuel_cost_per_kwh, "dg_fuel_cost_per_kwh");
        check(avoided_emergency_genset_capex, "avoided_emergency_genset_capex");
        check(avoided_battery_capex, "avoided_battery_capex");
        if (!(operating_days_per_year >= 1.0 && operating_days_per_year <= 366.0)) {
            throw Error(ErrorKind::Validation, "operating_days_per_year must lie in [1, 366]");
        }
    }
};

struct Payback {
    enum class Kind { Years, Immediate, Undefined };
    Kind kind = Kind::Undefined;
    double years = 0.0;

    friend bool operator==(const Payback&, const Payback&) = default;
};

struct EconomicReport {
    double capex_gross = 0.0;
    double capex_net = 0.0;
    bool capex_net_floored = false;  // avoided capex exceeded gross capex
    double annual_demand_charge_savings = 0.0;
    double annual_energy_cost_delta = 0.0;
    double annual_net_savings = 0.0;
    Payback simple_payback;
    std::optional<double> roi_annual_pct;  // empty when capex_gross is zero
    bool savings_nonpositive = false;

    friend bool operator==(const EconomicReport&, const EconomicReport&) = default;
};

/// Undiscounted first-investment, savings, payback and ROI figures.
/// Per-unit reports need `peak_mw_scale` (MW per pu) and are rejected without it.
inline EconomicReport evaluate_economics(const ImprovementReport& report, const CostAssumptions& costs,
                                         std::optional<double> peak_mw_scale = std::nullopt) {
    costs.validate();
    double kw_per_unit = 1000.0;
    if (report.unit == Unit::pu) {
        if (!peak_mw_scale) {
            throw Error(ErrorKind::UnitError, "per-unit report needs a peak MW scale before costs can be evaluated");
        }
        if (!(*peak_mw_scale > 0.0) || !std::isfinite(*peak_mw_scale)) {
            throw Error(ErrorKind::UnitError, "peak MW scale must be positive");
        }
        kw_per_unit = *peak_mw_scale * 1000.0;
    }
    const double capacity_kw = report.p_dg * kw_per_unit;
    const double peak_cut_kw = (report.p_peak_before - report.p_peak_after) * kw_per_unit;
    const double dg_kwh_per_day = report.dg_energy_mwh_per_day * kw_per_unit;

    EconomicReport e;
    e.capex_gross = costs.dg_capex_per_kw * capacity_kw;
    e.annual_demand_charge_savings = 12.0 * costs.demand_charge_per_kw_month * peak_cut_kw;
    e.annual_energy_cost_delta =
        costs.operating_days_per_year * dg_kwh_per_day * (costs.grid_energy_tariff_peak - costs.dg_fuel_cost_per_kwh);
    e.annual_net_savings = e.annual_demand_charge_savings + e.annual_energy_cost_delta;

    const double net = e.capex_gross - costs.avoided_emergency_genset_capex - costs.avoided_battery_capex;
    e.capex_net_floored = net < 0.0;
    e.capex_net = e.capex_net_floored ? 0.0 : net;

    if (e.annual_net_savings <= 0.0) {
        e.savings_nonpositive = true;
        e.simple_payback = {Payback::Kind::Undefined, 0.0};
    } else if (e.capex_net <= 0.0) {
        e.simple_payback = {Payback::Kind::Immediate, 0.0};
    } else {
        e.simple_payback = {Payback::Kind::Years, e.capex_net / e.annual_net_savings};
    }
    if (e.capex_gross > 0.0) e.roi_annual_pct = 100.0 * e.annual_net_savings / e.capex_gross;
    return e;
}

}  // namespace metro_dg

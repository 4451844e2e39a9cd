#pragma once

// Flat JSON objects for the improvement and economic reports.

#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "json.hpp"

#include "metro_dg/curve.hpp"
#include "metro_dg/dg_planner.hpp"
#include "metro_dg/economics.hpp"
#include "metro_dg/error.hpp"

namespace metro_dg {

using Json = nlohmann::ordered_json;

namespace detail {

inline double number_field(const Json& j, std::string_view key) {
    auto it = j.find(key);
    if (it == j.end()) throw Error(ErrorKind::Parse, "missing field '" + std::string(key) + "'");
    if (!it->is_number()) throw Error(ErrorKind::Parse, "field '" + std::string(key) + "' must be a number");
    return it->get<double>();
}

inline bool bool_field(const Json& j, std::string_view key) {
    auto it = j.find(key);
    if (it == j.end()) throw Error(ErrorKind::Parse, "missing field '" + std::string(key) + "'");
    if (!it->is_boolean()) throw Error(ErrorKind::Parse, "field '" + std::string(key) + "' must be true or false");
    return it->get<bool>();
}

}  // namespace detail

inline Json to_json(const ImprovementReport& r) {
    Json j;
    j["unit"] = std::string(to_string(r.unit));
    j["p_peak_before"] = r.p_peak_before;
    j["p_base"] = r.p_base;
    j["p_dg"] = r.p_dg;
    j["p_peak_after"] = r.p_peak_after;
    j["lf_before"] = r.lf_before;
    j["lf_after"] = r.lf_after;
    j["peak_reduction_pct"] = r.peak_reduction_pct;
    j["loss_reduction_at_peak_pct"] = r.loss_reduction_at_peak_pct;
    j["dg_energy_mwh_per_day"] = r.dg_energy_mwh_per_day;
    j["demand_energy_mwh_per_day"] = r.demand_energy_mwh_per_day;
    return j;
}

inline ImprovementReport improvement_from_json(const Json& j) {
    if (!j.is_object()) throw Error(ErrorKind::Parse, "improvement report must be a JSON object");
    auto unit = j.find("unit");
    if (unit == j.end() || !unit->is_string()) throw Error(ErrorKind::Parse, "missing string field 'unit'");
    ImprovementReport r;
    r.unit = parse_unit(unit->get<std::string>());
    r.p_peak_before = detail::number_field(j, "p_peak_before");
    r.p_base = detail::number_field(j, "p_base");
    r.p_dg = detail::number_field(j, "p_dg");
    r.p_peak_after = detail::number_field(j, "p_peak_after");
    r.lf_before = detail::number_field(j, "lf_before");
    r.lf_after = detail::number_field(j, "lf_after");
    r.peak_reduction_pct = detail::number_field(j, "peak_reduction_pct");
    r.loss_reduction_at_peak_pct = detail::number_field(j, "loss_reduction_at_peak_pct");
    r.dg_energy_mwh_per_day = detail::number_field(j, "dg_energy_mwh_per_day");
    r.demand_energy_mwh_per_day = detail::number_field(j, "demand_energy_mwh_per_day");
    return r;
}

inline Json to_json(const EconomicReport& e) {
    Json j;
    j["capex_gross"] = e.capex_gross;
    j["capex_net"] = e.capex_net;
    j["capex_net_floored"] = e.capex_net_floored;
    j["annual_demand_charge_savings"] = e.annual_demand_charge_savings;
    j["annual_energy_cost_delta"] = e.annual_energy_cost_delta;
    j["annual_net_savings"] = e.annual_net_savings;
    switch (e.simple_payback.kind) {
        case Payback::Kind::Years: j["simple_payback_years"] = e.simple_payback.years; break;
        case Payback::Kind::Immediate: j["simple_payback_years"] = "immediate"; break;
        case Payback::Kind::Undefined: j["simple_payback_years"] = nullptr; break;
    }
    j["roi_annual_pct"] = e.roi_annual_pct ? Json(*e.roi_annual_pct) : Json(nullptr);
    j["savings_nonpositive"] = e.savings_nonpositive;
    return j;
}

inline EconomicReport economic_from_json(const Json& j) {
    if (!j.is_object()) throw Error(ErrorKind::Parse, "economic report must be a JSON object");
    EconomicReport e;
    e.capex_gross = detail::number_field(j, "capex_gross");
    e.capex_net = detail::number_field(j, "capex_net");
    e.capex_net_floored = detail::bool_field(j, "capex_net_floored");
    e.annual_demand_charge_savings = detail::number_field(j, "annual_demand_charge_savings");
    e.annual_energy_cost_delta = detail::number_field(j, "annual_energy_cost_delta");
    e.annual_net_savings = detail::number_field(j, "annual_net_savings");
    auto pb = j.find("simple_payback_years");
    if (pb == j.end()) throw Error(ErrorKind::Parse, "missing field 'simple_payback_years'");
    if (pb->is_null()) {
        e.simple_payback = {Payback::Kind::Undefined, 0.0};
    } else if (pb->is_string() && pb->get<std::string>() == "immediate") {
        e.simple_payback = {Payback::Kind::Immediate, 0.0};
    } else if (pb->is_number()) {
        e.simple_payback = {Payback::Kind::Years, pb->get<double>()};
    } else {
        throw Error(ErrorKind::Parse, "field 'simple_payback_years' must be a number, \"immediate\" or null");
    }
    auto roi = j.find("roi_annual_pct");
    if (roi == j.end()) throw Error(ErrorKind::Parse, "missing field 'roi_annual_pct'");
    if (roi->is_number()) {
        e.roi_annual_pct = roi->get<double>();
    } else if (!roi->is_null()) {
        throw Error(ErrorKind::Parse, "field 'roi_annual_pct' must be a number or null");
    }
    e.savings_nonpositive = detail::bool_field(j, "savings_nonpositive");
    return e;
}

/// Missing keys keep their defaults; unknown keys are rejected.
inline CostAssumptions cost_assumptions_from_json(const Json& j) {
    if (!j.is_object()) throw Error(ErrorKind::Parse, "'costs' must be a JSON object");
    static const std::set<std::string, std::less<>> known = {
        "dg_capex_per_kw",       "demand_charge_per_kw_month",     "grid_energy_tariff_peak",
        "dg_fuel_cost_per_kwh",  "operating_days_per_year",        "avoided_emergency_genset_capex",
        "avoided_battery_capex",
    };
    for (const auto& item : j.items()) {
        if (!known.contains(item.key())) throw Error(ErrorKind::Parse, "unknown field 'costs." + item.key() + "'");
    }
    CostAssumptions c;
    auto take = [&](std::string_view key, double& slot) {
        if (j.contains(key)) slot = detail::number_field(j, key);
    };
    take("dg_capex_per_kw", c.dg_capex_per_kw);
    take("demand_charge_per_kw_month", c.demand_charge_per_kw_month);
    take("grid_energy_tariff_peak", c.grid_energy_tariff_peak);
    take("dg_fuel_cost_per_kwh", c.dg_fuel_cost_per_kwh);
    take("operating_days_per_year", c.operating_days_per_year);
    take("avoided_emergency_genset_capex", c.avoided_emergency_genset_capex);
    take("avoided_battery_capex", c.avoided_battery_capex);
    c.validate();
    return c;
}

inline Json to_json(const CostAssumptions& c) {
    Json j;
    j["dg_capex_per_kw"] = c.dg_capex_per_kw;
    j["demand_charge_per_kw_month"] = c.demand_charge_per_kw_month;
    j["grid_energy_tariff_peak"] = c.grid_energy_tariff_peak;
    j["dg_fuel_cost_per_kwh"] = c.dg_fuel_cost_per_kwh;
    j["operating_days_per_year"] = c.operating_days_per_year;
    j["avoided_emergency_genset_capex"] = c.avoided_emergency_genset_capex;
    j["avoided_battery_capex"] = c.avoided_battery_capex;
    return j;
}

/// Parses text, mapping JSON syntax errors to ParseError.
inline Json parse_json_text(std::string_view text, std::string_view source) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::Parse, std::string(source) + ": " + e.what());
    }
}

}  // namespace metro_dg

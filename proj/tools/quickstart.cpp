// Library walk-through: synthesize a metro day, size and dispatch DG, cost it.

#include <cstdio>

#include "metro_dg/metro_dg.hpp"

using namespace metro_dg;

int main() {
    const TimeGrid grid(15);

    // Traction load follows trains in service; station load follows passengers.
    const LoadCurve tps = synthesize_tps(default_timetable(), TractionModel(1.0), grid);
    const LoadCurve lps = synthesize_lps(default_passenger_profile(grid), LpsModel(0.5), 1.0);
    const LoadCurve demand = combine_metro(tps, lps, CombinationRatio(0.6));

    std::printf("peak %.2f MW, load factor %.3f\n", peak(demand), load_factor(demand));

    const DgPlan plan = default_plan(demand);
    const DispatchResult dispatch = apply_dispatch(demand, plan);
    const ImprovementReport report = improvement_indices(demand, plan, dispatch);
    std::printf("DG %.2f MW: peak %.2f -> %.2f MW, LF %.3f -> %.3f, losses at peak -%.1f%%\n", report.p_dg,
                report.p_peak_before, report.p_peak_after, report.lf_before, report.lf_after,
                report.loss_reduction_at_peak_pct);

    CostAssumptions costs;
    costs.dg_capex_per_kw = 500;
    costs.demand_charge_per_kw_month = 5;
    costs.grid_energy_tariff_peak = 0.11;
    costs.dg_fuel_cost_per_kwh = 0.09;
    const EconomicReport econ = evaluate_economics(report, costs);
    if (econ.simple_payback.kind == Payback::Kind::Years) {
        std::printf("capex %.0f, net savings %.0f per year, payback %.1f years\n", econ.capex_net,
                    econ.annual_net_savings, econ.simple_payback.years);
    } else {
        std::printf("capex %.0f, net savings %.0f per year\n", econ.capex_net, econ.annual_net_savings);
    }

    // The calibrated per-unit reference day.
    const LoadCurve ref = reference_curve();
    const ImprovementReport r = improvement_indices(ref, default_plan(ref), apply_dispatch(ref, default_plan(ref)));
    std::printf("reference: LF %.3f -> %.3f, peak -%.1f%%, losses -%.1f%%\n", r.lf_before, r.lf_after,
                r.peak_reduction_pct, r.loss_reduction_at_peak_pct);
    return 0;
}

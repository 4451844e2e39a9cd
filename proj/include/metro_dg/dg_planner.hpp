#pragma once

// Distributed-generation sizing, peak-window dispatch, and the before/after
// indices of the resulting grid draw.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "metro_dg/curve.hpp"
#include "metro_dg/error.hpp"

namespace metro_dg {

struct SizingSpec {
    TimeWindow base_window{570, 960};  // 09:30-16:00
};

/// DG capacity: peak minus the mean of the base window, floored at zero.
inline double size_dg(const LoadCurve& curve, const SizingSpec& spec = {}) {
    const double base = window_average(curve, spec.base_window);
    return std::max(0.0, peak(curve) - base);
}

/// DG covers demand above the threshold, up to capacity.
struct ThresholdClip {
    double threshold;
};

/// DG runs at full capacity, or at demand if demand is lower.
struct ConstantOutput {};

using DispatchPolicy = std::variant<ThresholdClip, ConstantOutput>;

inline std::vector<TimeWindow> default_dispatch_windows() { return {TimeWindow(420, 540), TimeWindow(1020, 1140)}; }

struct DgPlan {
    double capacity = 0.0;
    std::vector<TimeWindow> windows = default_dispatch_windows();
    DispatchPolicy policy = ConstantOutput{};

    void validate() const {
        if (!(capacity >= 0.0) || !std::isfinite(capacity)) {
            throw Error(ErrorKind::InvalidArgument, "DG capacity must be finite and non-negative");
        }
        for (std::size_t i = 0; i < windows.size(); ++i) {
            for (std::size_t j = i + 1; j < windows.size(); ++j) {
                if (windows[i].overlaps(windows[j])) {
                    throw Error(ErrorKind::InvalidArgument, "dispatch windows " + windows[i].to_string() + " and " +
                                                                windows[j].to_string() + " overlap");
                }
            }
        }
        if (const auto* clip = std::get_if<ThresholdClip>(&policy)) {
            if (!(clip->threshold >= 0.0) || !std::isfinite(clip->threshold)) {
                throw Error(ErrorKind::InvalidArgument, "clip threshold must be finite and non-negative");
            }
        }
    }
};

/// Sized plan with the default policy: clip at the base-window mean.
inline DgPlan default_plan(const LoadCurve& demand, const SizingSpec& sizing = {},
                           std::vector<TimeWindow> windows = default_dispatch_windows()) {
    return DgPlan{size_dg(demand, sizing), std::move(windows),
                  ThresholdClip{window_average(demand, sizing.base_window)}};
}

struct DispatchResult {
    LoadCurve grid_curve;
    LoadCurve dg_curve;
};

namespace detail {

/// Splits demand into (grid, dg) with dg <= target and grid + dg == demand bit-exactly.
inline std::pair<double, double> split_demand(double demand, double target) {
    double grid = std::max(0.0, demand - target);
    double dg = demand - grid;
    while (dg > target) {
        grid = std::nextafter(grid, std::numeric_limits<double>::infinity());
        dg = demand - grid;
    }
    return {grid, dg};
}

}  // namespace detail

inline DispatchResult apply_dispatch(const LoadCurve& demand, const DgPlan& plan) {
    plan.validate();
    const std::size_t n = demand.size();
    std::vector<bool> active(n, false);
    for (const auto& w : plan.windows) {
        auto [first, last] = w.sample_range(demand.grid());
        for (std::size_t i = first; i < last; ++i) active[i] = true;
    }
    std::vector<double> grid(demand.values().begin(), demand.values().end());
    std::vector<double> dg(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!active[i]) continue;
        const double d = demand[i];
        const double target = std::visit(
            [&](const auto& p) {
                using P = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<P, ThresholdClip>) {
                    return std::min(plan.capacity, std::max(0.0, d - p.threshold));
                } else {
                    return std::min(plan.capacity, d);
                }
            },
            plan.policy);
        std::tie(grid[i], dg[i]) = detail::split_demand(d, target);
    }
    return {LoadCurve(demand.grid(), std::move(grid), demand.unit()),
            LoadCurve(demand.grid(), std::move(dg), demand.unit())};
}

struct ImprovementReport {
    Unit unit = Unit::MW;
    double p_peak_before = 0.0;
    double p_base = 0.0;
    double p_dg = 0.0;
    double p_peak_after = 0.0;
    double lf_before = 0.0;
    double lf_after = 0.0;
    double peak_reduction_pct = 0.0;
    double loss_reduction_at_peak_pct = 0.0;
    double dg_energy_mwh_per_day = 0.0;
    double demand_energy_mwh_per_day = 0.0;

    friend bool operator==(const ImprovementReport&, const ImprovementReport&) = default;
};

/// Before/after indices. Peak losses scale with the square of peak power.
inline ImprovementReport improvement_indices(const LoadCurve& demand, const DgPlan& plan, const DispatchResult& result,
                                             const TimeWindow& horizon = TimeWindow::full_day(),
                                             const SizingSpec& sizing = {}) {
    const auto& grid = result.grid_curve;
    const auto& dg = result.dg_curve;
    if (grid.grid() != demand.grid() || dg.grid() != demand.grid()) {
        throw Error(ErrorKind::GridMismatch, "dispatch result and demand use different grids");
    }
    if (grid.unit() != demand.unit() || dg.unit() != demand.unit()) {
        throw Error(ErrorKind::UnitMismatch, "dispatch result and demand use different units");
    }
    for (std::size_t i = 0; i < demand.size(); ++i) {
        if (grid[i] + dg[i] != demand[i]) {
            throw Error(ErrorKind::InvalidArgument,
                        "dispatch result does not balance demand at sample " + std::to_string(i));
        }
    }

    ImprovementReport r;
    r.unit = demand.unit();
    r.lf_before = load_factor(demand, horizon);
    r.lf_after = load_factor(grid, horizon);
    r.p_peak_before = peak(demand);
    r.p_peak_after = peak(grid);
    r.p_base = window_average(demand, sizing.base_window);
    r.p_dg = plan.capacity;
    const double ratio = r.p_peak_after / r.p_peak_before;
    r.peak_reduction_pct = 100.0 * (1.0 - ratio);
    r.loss_reduction_at_peak_pct = 100.0 * (1.0 - ratio * ratio);
    r.dg_energy_mwh_per_day = dg.energy();
    r.demand_energy_mwh_per_day = demand.energy();
    return r;
}

}  // namespace metro_dg

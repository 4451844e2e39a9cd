#pragma once

// Scenario configuration and the end-to-end pipeline:
//   demand (synthesized | measured | reference) -> size DG -> dispatch -> indices -> economics -> files

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "metro_dg/csv.hpp"
#include "metro_dg/curve.hpp"
#include "metro_dg/demand.hpp"
#include "metro_dg/dg_planner.hpp"
#include "metro_dg/economics.hpp"
#include "metro_dg/error.hpp"
#include "metro_dg/report_json.hpp"
#include "metro_dg/svg.hpp"

namespace metro_dg {

enum class DemandSource { Synthesized, Measured, Reference };
enum class PolicyKind { Clip, Constant };

inline PolicyKind parse_policy(std::string_view text) {
    if (text == "clip") return PolicyKind::Clip;
    if (text == "constant") return PolicyKind::Constant;
    throw Error(ErrorKind::Validation, "policy must be 'clip' or 'constant' (got '" + std::string(text) + "')");
}

struct ScenarioConfig {
    DemandSource source = DemandSource::Synthesized;
    std::optional<TimeGrid> grid;  // unset: 15 minutes, or the measured curve's own grid

    std::optional<ServiceTimetable> timetable;
    std::optional<PassengerProfile> passenger_profile;
    TractionModel traction{1.0};
    LpsModel lps{0.5};
    double lps_peak_mw = 1.0;
    CombinationRatio ratio{0.6};

    std::optional<LoadCurve> measured_curve;
    double reference_lf_target = 0.53;

    SizingSpec sizing;
    std::vector<TimeWindow> dispatch_windows = default_dispatch_windows();
    PolicyKind policy = PolicyKind::Clip;
    std::optional<double> clip_threshold;  // unset: base-window mean
    std::optional<double> capacity;        // unset: sized from the curve; in curve units
    TimeWindow lf_horizon = TimeWindow::full_day();

    CostAssumptions costs;
    std::optional<double> peak_mw_scale;  // MW per pu
    std::filesystem::path output_dir = "out";

    TimeGrid effective_grid() const { return grid.value_or(TimeGrid{15}); }
};

namespace detail {

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out.flush()) throw Error(ErrorKind::Io, "failed writing '" + path.string() + "'");
}

/// Runs f, turning invariant violations into ValidationError tagged with the config field.
template <class F>
auto validate_field(std::string_view field, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Parse || e.kind() == ErrorKind::Io) throw;
        throw Error(ErrorKind::Validation, std::string(field) + ": " + e.detail());
    }
}

inline double config_number(const Json& j, std::string_view key) {
    const auto& v = j.at(std::string(key));
    if (!v.is_number()) throw Error(ErrorKind::Parse, "config field '" + std::string(key) + "' must be a number");
    return v.get<double>();
}

inline std::string config_string(const Json& j, std::string_view key) {
    const auto& v = j.at(std::string(key));
    if (!v.is_string()) throw Error(ErrorKind::Parse, "config field '" + std::string(key) + "' must be a string");
    return v.get<std::string>();
}

inline int config_minute(const Json& v, std::string_view key) {
    if (v.is_number_integer()) return v.get<int>();
    int minute = 0;
    if (v.is_string() && parse_minute(v.get<std::string>(), minute)) return minute;
    throw Error(ErrorKind::Parse, "config field '" + std::string(key) + "' must be minutes or \"HH:MM\"");
}

inline void reject_unknown(const Json& j, const std::set<std::string, std::less<>>& known, std::string_view scope) {
    for (const auto& item : j.items()) {
        if (!known.contains(item.key())) {
            throw Error(ErrorKind::Parse, "unknown config field '" + std::string(scope) + item.key() + "'");
        }
    }
}

inline std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

}  // namespace detail

/// Builds a validated config from parsed JSON; relative paths resolve against `base_dir`.
inline ScenarioConfig config_from_json(const Json& j, const std::filesystem::path& base_dir) {
    using namespace detail;
    if (!j.is_object()) throw Error(ErrorKind::Parse, "config must be a JSON object");
    reject_unknown(j,
                   {"grid_step_minutes", "demand", "measured_curve", "reference_lf_target", "timetable",
                    "round_trip_minutes", "passenger_profile", "traction", "lps", "combination_ratio",
                    "allow_ratio_override", "base_window", "dispatch", "lf_horizon", "costs", "peak_mw_scale",
                    "output_dir"},
                   "");
    ScenarioConfig c;

    if (j.contains("grid_step_minutes")) {
        const double step = config_number(j, "grid_step_minutes");
        if (!(step >= 1.0 && step <= kMinutesPerDay) || step != std::floor(step)) {
            throw Error(ErrorKind::Validation, "grid_step_minutes must be one of 1, 5, 15, 30, 60");
        }
        c.grid = validate_field("grid_step_minutes", [&] { return TimeGrid(static_cast<int>(step)); });
    }

    if (j.contains("measured_curve")) {
        c.measured_curve = read_curve_csv(resolve(base_dir, config_string(j, "measured_curve")));
        c.source = DemandSource::Measured;
    }
    if (j.contains("demand")) {
        const auto mode = config_string(j, "demand");
        if (mode == "synthesize") {
            c.source = DemandSource::Synthesized;
        } else if (mode == "measured") {
            c.source = DemandSource::Measured;
        } else if (mode == "reference") {
            c.source = DemandSource::Reference;
        } else {
            throw Error(ErrorKind::Validation, "demand must be 'synthesize', 'measured' or 'reference'");
        }
    }
    if (j.contains("reference_lf_target")) c.reference_lf_target = config_number(j, "reference_lf_target");

    double round_trip = 90.0;
    if (j.contains("round_trip_minutes")) round_trip = config_number(j, "round_trip_minutes");
    if (j.contains("timetable")) {
        const auto& tt = j.at("timetable");
        std::vector<ServiceInterval> intervals;
        if (tt.is_string() && tt.get<std::string>() == "builtin") {
            auto def = default_timetable();
            intervals.assign(def.intervals().begin(), def.intervals().end());
            if (!j.contains("round_trip_minutes")) round_trip = def.round_trip_minutes();
        } else if (tt.is_string()) {
            intervals = read_timetable_csv(resolve(base_dir, tt.get<std::string>()));
        } else if (tt.is_array()) {
            for (const auto& row : tt) {
                if (!row.is_object() || !row.contains("start_min") || !row.contains("end_min") ||
                    !row.contains("headway_min")) {
                    throw Error(ErrorKind::Parse, "timetable rows need start_min, end_min and headway_min");
                }
                const int start = config_minute(row.at("start_min"), "timetable.start_min");
                const int end = config_minute(row.at("end_min"), "timetable.end_min");
                const double headway = config_number(row, "headway_min");
                intervals.push_back(
                    {validate_field("timetable", [&] { return TimeWindow(start, end); }), headway});
            }
        } else {
            throw Error(ErrorKind::Parse, "config field 'timetable' must be a path, \"builtin\" or an array");
        }
        c.timetable = validate_field("timetable", [&] { return ServiceTimetable(round_trip, std::move(intervals)); });
    }
    if (j.contains("passenger_profile")) {
        const auto p = config_string(j, "passenger_profile");
        c.passenger_profile = validate_field("passenger_profile", [&] {
            return p == "builtin" ? default_passenger_profile(c.effective_grid())
                                  : read_profile_csv(resolve(base_dir, p));
        });
    }
    if (j.contains("traction")) {
        const auto& t = j.at("traction");
        reject_unknown(t, {"avg_power_per_train_mw"}, "traction.");
        if (t.contains("avg_power_per_train_mw")) {
            const double v = config_number(t, "avg_power_per_train_mw");
            c.traction = validate_field("traction.avg_power_per_train_mw", [&] { return TractionModel(v); });
        }
    }
    if (j.contains("lps")) {
        const auto& l = j.at("lps");
        reject_unknown(l, {"fixed_share", "peak_mw"}, "lps.");
        if (l.contains("fixed_share")) {
            const double v = config_number(l, "fixed_share");
            c.lps = validate_field("lps.fixed_share", [&] { return LpsModel(v); });
        }
        if (l.contains("peak_mw")) {
            c.lps_peak_mw = config_number(l, "peak_mw");
            if (!(c.lps_peak_mw > 0.0)) throw Error(ErrorKind::Validation, "lps.peak_mw must be positive");
        }
    }
    {
        bool allow_override = false;
        if (j.contains("allow_ratio_override")) {
            if (!j.at("allow_ratio_override").is_boolean()) {
                throw Error(ErrorKind::Parse, "config field 'allow_ratio_override' must be true or false");
            }
            allow_override = j.at("allow_ratio_override").get<bool>();
        }
        const double r = j.contains("combination_ratio") ? config_number(j, "combination_ratio") : 0.6;
        c.ratio = validate_field("combination_ratio", [&] { return CombinationRatio(r, allow_override); });
    }

    if (j.contains("base_window")) {
        const auto text = config_string(j, "base_window");
        c.sizing.base_window = validate_field("base_window", [&] { return TimeWindow::parse(text); });
    }
    if (j.contains("dispatch")) {
        const auto& d = j.at("dispatch");
        reject_unknown(d, {"windows", "policy", "threshold", "capacity"}, "dispatch.");
        if (d.contains("windows")) {
            if (!d.at("windows").is_array()) throw Error(ErrorKind::Parse, "dispatch.windows must be an array");
            c.dispatch_windows.clear();
            for (const auto& w : d.at("windows")) {
                if (!w.is_string()) throw Error(ErrorKind::Parse, "dispatch.windows entries must be strings");
                c.dispatch_windows.push_back(
                    validate_field("dispatch.windows", [&] { return TimeWindow::parse(w.get<std::string>()); }));
            }
        }
        if (d.contains("policy")) c.policy = parse_policy(config_string(d, "policy"));
        if (d.contains("threshold")) c.clip_threshold = config_number(d, "threshold");
        if (d.contains("capacity")) c.capacity = config_number(d, "capacity");
        validate_field("dispatch", [&] {
            DgPlan probe{c.capacity.value_or(0.0), c.dispatch_windows,
                         ThresholdClip{c.clip_threshold.value_or(0.0)}};
            probe.validate();
            return 0;
        });
    }
    if (j.contains("lf_horizon")) {
        const auto text = config_string(j, "lf_horizon");
        c.lf_horizon = validate_field("lf_horizon", [&] { return TimeWindow::parse(text); });
    }
    if (j.contains("costs")) c.costs = cost_assumptions_from_json(j.at("costs"));
    if (j.contains("peak_mw_scale")) {
        c.peak_mw_scale = config_number(j, "peak_mw_scale");
        if (!(*c.peak_mw_scale > 0.0)) throw Error(ErrorKind::Validation, "peak_mw_scale must be positive");
    }
    if (j.contains("output_dir")) c.output_dir = resolve(base_dir, config_string(j, "output_dir"));

    if (c.source == DemandSource::Synthesized && (!c.timetable || !c.passenger_profile)) {
        throw Error(ErrorKind::Validation,
                    "synthesized demand needs both 'timetable' and 'passenger_profile' (or set 'measured_curve')");
    }
    if (c.source == DemandSource::Measured && !c.measured_curve) {
        throw Error(ErrorKind::Validation, "measured demand needs 'measured_curve'");
    }
    return c;
}

/// Reads and validates a JSON scenario file.
inline ScenarioConfig load_inputs(const std::filesystem::path& config_path) {
    const auto text = detail::read_text_file(config_path);
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::Parse, config_path.string() + ": " + e.what());
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, config_path.string() + ": " + e.what());
    }
    try {
        return config_from_json(j, config_path.parent_path());
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, config_path.string() + ": " + e.what());
    }
}

/// Config for the built-in calibrated reference day.
inline ScenarioConfig reference_config() {
    ScenarioConfig c;
    c.source = DemandSource::Reference;
    return c;
}

struct SynthesizedDemand {
    LoadCurve tps;
    LoadCurve lps;
    LoadCurve metro;
};

inline SynthesizedDemand synthesize_demand(const ScenarioConfig& config) {
    if (!config.timetable || !config.passenger_profile) {
        throw Error(ErrorKind::Validation, "synthesis needs a timetable and a passenger profile");
    }
    const TimeGrid grid = config.effective_grid();
    LoadCurve tps = synthesize_tps(*config.timetable, config.traction, grid);
    LoadCurve lps = resample(synthesize_lps(*config.passenger_profile, config.lps, config.lps_peak_mw), grid);
    LoadCurve metro = combine_metro(tps, lps, config.ratio);
    return {std::move(tps), std::move(lps), std::move(metro)};
}

/// Demand curve for whichever source the config selects.
inline LoadCurve build_demand(const ScenarioConfig& config) {
    switch (config.source) {
        case DemandSource::Reference:
            return reference_curve(config.reference_lf_target, config.effective_grid());
        case DemandSource::Measured: {
            if (!config.measured_curve) throw Error(ErrorKind::Validation, "no measured curve loaded");
            return config.grid ? resample(*config.measured_curve, *config.grid) : *config.measured_curve;
        }
        case DemandSource::Synthesized:
            break;
    }
    return synthesize_demand(config).metro;
}

struct ScenarioResult {
    LoadCurve demand;
    DgPlan plan;
    DispatchResult dispatch;
    ImprovementReport improvement;
    std::optional<EconomicReport> economics;
    std::string economics_status;
    std::optional<std::string> reference_note;
};

namespace detail {

template <class F>
auto stage(std::string_view name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        throw e.tagged(name);
    }
}

}  // namespace detail

inline DgPlan plan_for(const ScenarioConfig& config, const LoadCurve& demand) {
    DgPlan plan;
    plan.capacity = config.capacity.value_or(size_dg(demand, config.sizing));
    plan.windows = config.dispatch_windows;
    if (config.policy == PolicyKind::Clip) {
        plan.policy = ThresholdClip{config.clip_threshold.value_or(window_average(demand, config.sizing.base_window))};
    } else {
        plan.policy = ConstantOutput{};
    }
    return plan;
}

/// Evaluates a given demand curve through sizing, dispatch, indices and economics.
inline ScenarioResult evaluate_demand(const ScenarioConfig& config, LoadCurve demand) {
    DgPlan plan = detail::stage("sizing", [&] { return plan_for(config, demand); });
    DispatchResult dispatch = detail::stage("dispatch", [&] { return apply_dispatch(demand, plan); });
    ImprovementReport improvement = detail::stage(
        "indices", [&] { return improvement_indices(demand, plan, dispatch, config.lf_horizon, config.sizing); });

    ScenarioResult result{std::move(demand), std::move(plan), std::move(dispatch), improvement, std::nullopt, "ok",
                          std::nullopt};
    if (improvement.unit == Unit::pu && !config.peak_mw_scale) {
        result.economics_status = "skipped: per-unit demand needs peak_mw_scale";
    } else {
        result.economics = detail::stage(
            "economics", [&] { return evaluate_economics(improvement, config.costs, config.peak_mw_scale); });
    }
    if (config.source == DemandSource::Reference) {
        double window_hours = 0.0;
        for (const auto& w : result.plan.windows) window_hours += w.length_minutes() / 60.0;
        char note[256];
        std::snprintf(note, sizeof note,
                      "computed lf_after %.4f differs from the 0.73 quoted for this reference case; "
                      "displaceable energy is capped at capacity x window hours (%.4g pu*h)",
                      improvement.lf_after, improvement.p_dg * window_hours);
        result.reference_note = note;
    }
    return result;
}

/// synthesize (or load/reference) -> size_dg -> apply_dispatch -> improvement_indices -> evaluate_economics
inline ScenarioResult run_scenario(const ScenarioConfig& config) {
    LoadCurve demand = detail::stage("demand", [&] { return build_demand(config); });
    return evaluate_demand(config, std::move(demand));
}

/// Flat report: improvement fields, then economic fields when computed.
inline Json report_to_json(const ScenarioResult& result) {
    Json j = to_json(result.improvement);
    if (result.economics) {
        const Json econ = to_json(*result.economics);
        for (const auto& [k, v] : econ.items()) j[k] = v;
    }
    j["economics_status"] = result.economics_status;
    if (result.reference_note) j["reference_note"] = *result.reference_note;
    return j;
}

struct ParsedReport {
    ImprovementReport improvement;
    std::optional<EconomicReport> economics;
    std::string economics_status;
    std::optional<std::string> reference_note;
};

inline ParsedReport parse_report_json(std::string_view text, std::string_view source = "report.json") {
    Json j = parse_json_text(text, source);
    ParsedReport r;
    r.improvement = improvement_from_json(j);
    if (j.contains("capex_gross")) r.economics = economic_from_json(j);
    if (j.contains("economics_status") && j.at("economics_status").is_string()) {
        r.economics_status = j.at("economics_status").get<std::string>();
    }
    if (j.contains("reference_note") && j.at("reference_note").is_string()) {
        r.reference_note = j.at("reference_note").get<std::string>();
    }
    return r;
}

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

/// Writes demand.csv, grid_after.csv, dg.csv, report.json and comparison.svg into out_dir.
inline std::vector<std::filesystem::path> emit_outputs(const ScenarioResult& result,
                                                       const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create '" + out_dir.string() + "': " + ec.message());
    const std::vector<std::pair<std::string, std::string>> files = {
        {"demand.csv", curve_to_csv(result.demand)},
        {"grid_after.csv", curve_to_csv(result.dispatch.grid_curve)},
        {"dg.csv", curve_to_csv(result.dispatch.dg_curve)},
        {"report.json", dump_json(report_to_json(result))},
        {"comparison.svg",
         render_comparison_svg(result.demand, result.dispatch.grid_curve, result.dispatch.dg_curve)},
    };
    std::vector<std::filesystem::path> written;
    for (const auto& [name, text] : files) {
        detail::write_text_file(out_dir / name, text);
        written.push_back(out_dir / name);
    }
    return written;
}

/// One evaluation per capacity, run concurrently; results keep the input order.
inline std::vector<ScenarioResult> run_sweep(const ScenarioConfig& config, const std::vector<double>& capacities) {
    const LoadCurve demand = detail::stage("demand", [&] { return build_demand(config); });
    std::vector<std::future<ScenarioResult>> jobs;
    jobs.reserve(capacities.size());
    for (double cap : capacities) {
        jobs.push_back(std::async(std::launch::async, [&config, &demand, cap] {
            ScenarioConfig local = config;
            local.capacity = cap;
            return evaluate_demand(local, demand);
        }));
    }
    std::vector<ScenarioResult> results;
    results.reserve(jobs.size());
    for (auto& job : jobs) results.push_back(job.get());
    return results;
}

}  // namespace metro_dg

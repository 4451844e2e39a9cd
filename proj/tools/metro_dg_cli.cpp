// metro_dg command-line driver.
//
//   metro_dg synthesize --config scenario.json --out out/
//   metro_dg analyze    --curve demand.csv
//   metro_dg plan       --reference --out out/
//   metro_dg economics  --report out/report.json --config scenario.json
//   metro_dg run        --reference --out out/
//   metro_dg sweep      --reference --capacities 0,0.1,0.2,0.3,0.4 --out sweep/
//
// Exit codes: 0 success, 2 validation error, 3 parse error, 4 I/O error.
// METRO_DG_LOG=quiet|error|warn|info|debug sets stderr verbosity (default warn).

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "metro_dg/metro_dg.hpp"

namespace {

using namespace metro_dg;

enum class LogLevel { Quiet = 0, Error = 1, Warn = 2, Info = 3, Debug = 4 };

LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("METRO_DG_LOG");
        const std::string_view v = env ? env : "warn";
        if (v == "quiet") return LogLevel::Quiet;
        if (v == "error") return LogLevel::Error;
        if (v == "info") return LogLevel::Info;
        if (v == "debug") return LogLevel::Debug;
        return LogLevel::Warn;
    }();
    return level;
}

void log(LogLevel level, std::string_view message) {
    static constexpr std::string_view names[] = {"", "error", "warn", "info", "debug"};
    if (level <= log_level()) std::cerr << "metro_dg [" << names[static_cast<int>(level)] << "] " << message << '\n';
}

struct Options {
    std::string config;
    bool reference = false;
    std::string curve;
    std::string out;
    std::string horizon;
    std::string policy;
    std::string capacity;
    double peak_mw = 0.0;
    std::string report;
    std::vector<std::string> capacities;
};

/// "0.4", "0.4pu", "20000kW", "20MW". A bare number is pu for pu curves and kW for MW curves.
double resolve_capacity(std::string_view text, Unit unit) {
    text = detail::trim(text);
    std::string_view number = text;
    std::string_view suffix;
    for (std::string_view s : {"pu", "kW", "MW"}) {
        if (text.ends_with(s)) {
            number = detail::trim(text.substr(0, text.size() - s.size()));
            suffix = s;
            break;
        }
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), value);
    if (number.empty() || ec != std::errc{} || ptr != number.data() + number.size()) {
        throw Error(ErrorKind::Validation, "cannot read capacity '" + std::string(text) + "'");
    }
    if (unit == Unit::pu) {
        if (!suffix.empty() && suffix != "pu") {
            throw Error(ErrorKind::Validation, "capacity for a per-unit curve must be given in pu");
        }
        return value;
    }
    if (suffix == "pu") throw Error(ErrorKind::Validation, "capacity for a MW curve must be given in kW or MW");
    return suffix == "MW" ? value : value / 1000.0;
}

ScenarioConfig build_config(const Options& opt) {
    ScenarioConfig config;
    if (!opt.config.empty()) {
        config = load_inputs(opt.config);
        log(LogLevel::Info, "loaded config " + opt.config);
    } else if (!opt.reference && opt.curve.empty()) {
        throw Error(ErrorKind::Validation, "give --config, --curve or --reference");
    }
    if (opt.reference) config.source = DemandSource::Reference;
    if (!opt.curve.empty()) {
        config.measured_curve = read_curve_csv(opt.curve);
        config.source = DemandSource::Measured;
    }
    if (!opt.out.empty()) config.output_dir = opt.out;
    if (!opt.horizon.empty()) config.lf_horizon = TimeWindow::parse(opt.horizon);
    if (!opt.policy.empty()) config.policy = parse_policy(opt.policy);
    if (opt.peak_mw > 0.0) config.peak_mw_scale = opt.peak_mw;
    return config;
}

LoadCurve demand_with_overrides(ScenarioConfig& config, const Options& opt) {
    LoadCurve demand = build_demand(config);
    if (!opt.capacity.empty()) config.capacity = resolve_capacity(opt.capacity, demand.unit());
    log(LogLevel::Debug, "demand: " + std::to_string(demand.size()) + " samples, unit " +
                             std::string(to_string(demand.unit())));
    return demand;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create '" + path.parent_path().string() + "': " + ec.message());
    detail::write_text_file(path, text);
    log(LogLevel::Info, "wrote " + path.string());
}

int cmd_synthesize(const Options& opt) {
    ScenarioConfig config = build_config(opt);
    const auto& dir = config.output_dir;
    LoadCurve demand = build_demand(config);
    if (config.source == DemandSource::Synthesized) {
        auto parts = synthesize_demand(config);
        write_file(dir / "tps.csv", curve_to_csv(parts.tps));
        write_file(dir / "lps.csv", curve_to_csv(parts.lps));
    }
    write_file(dir / "demand.csv", curve_to_csv(demand));
    Json j;
    j["unit"] = std::string(to_string(demand.unit()));
    j["step_minutes"] = demand.grid().step_minutes();
    j["peak"] = peak(demand);
    j["load_factor"] = load_factor(demand, config.lf_horizon);
    j["energy_per_day"] = demand.energy();
    std::cout << dump_json(j);
    return 0;
}

int cmd_analyze(const Options& opt) {
    ScenarioConfig config = build_config(opt);
    LoadCurve demand = build_demand(config);
    Json j;
    j["unit"] = std::string(to_string(demand.unit()));
    j["step_minutes"] = demand.grid().step_minutes();
    j["peak"] = peak(demand);
    j["peak_time"] = detail::format_clock(demand.grid().sample_start(peak_index(demand)));
    j["lf_horizon"] = config.lf_horizon.to_string();
    j["load_factor"] = load_factor(demand, config.lf_horizon);
    j["base_window"] = config.sizing.base_window.to_string();
    j["p_base"] = window_average(demand, config.sizing.base_window);
    j["p_dg"] = size_dg(demand, config.sizing);
    j["energy_per_day"] = demand.energy();
    const std::string text = dump_json(j);
    if (!opt.out.empty()) write_file(config.output_dir / "analysis.json", text);
    std::cout << text;
    return 0;
}

int cmd_plan(const Options& opt) {
    ScenarioConfig config = build_config(opt);
    LoadCurve demand = demand_with_overrides(config, opt);
    ScenarioResult result = evaluate_demand(config, std::move(demand));
    result.economics.reset();
    result.economics_status = "not evaluated by plan";
    emit_outputs(result, config.output_dir);
    std::cout << dump_json(to_json(result.improvement));
    return 0;
}

int cmd_economics(const Options& opt) {
    if (opt.report.empty()) throw Error(ErrorKind::Validation, "economics needs --report <report.json>");
    ScenarioConfig config;
    if (!opt.config.empty()) config = load_inputs(opt.config);
    if (opt.peak_mw > 0.0) config.peak_mw_scale = opt.peak_mw;
    const auto parsed = parse_report_json(detail::read_text_file(opt.report), opt.report);
    const auto econ = evaluate_economics(parsed.improvement, config.costs, config.peak_mw_scale);
    const std::string text = dump_json(to_json(econ));
    if (!opt.out.empty()) write_file(std::filesystem::path(opt.out) / "economics.json", text);
    std::cout << text;
    return 0;
}

int cmd_run(const Options& opt) {
    ScenarioConfig config = build_config(opt);
    LoadCurve demand = detail::stage("demand", [&] { return demand_with_overrides(config, opt); });
    ScenarioResult result = evaluate_demand(config, std::move(demand));
    if (!result.economics) log(LogLevel::Warn, "economics " + result.economics_status);
    if (result.reference_note) log(LogLevel::Info, *result.reference_note);
    for (const auto& path : emit_outputs(result, config.output_dir)) log(LogLevel::Info, "wrote " + path.string());
    std::cout << dump_json(report_to_json(result));
    return 0;
}

int cmd_sweep(const Options& opt) {
    if (opt.capacities.empty()) throw Error(ErrorKind::Validation, "sweep needs --capacities");
    ScenarioConfig config = build_config(opt);
    const LoadCurve demand = build_demand(config);
    std::vector<double> caps;
    for (const auto& c : opt.capacities) caps.push_back(resolve_capacity(c, demand.unit()));
    const auto results = run_sweep(config, caps);

    std::string summary = "capacity,p_peak_after,lf_after,peak_reduction_pct,loss_reduction_at_peak_pct\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i].improvement;
        emit_outputs(results[i], config.output_dir / ("capacity_" + std::to_string(i)));
        summary += format_double(caps[i]) + ',' + format_double(r.p_peak_after) + ',' + format_double(r.lf_after) +
                   ',' + format_double(r.peak_reduction_pct) + ',' + format_double(r.loss_reduction_at_peak_pct) +
                   '\n';
    }
    write_file(config.output_dir / "sweep.csv", summary);
    std::cout << summary;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Metro load curve modelling, DG sizing and dispatch"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config, "scenario JSON file");
        sub->add_flag("--reference", opt.reference, "use the built-in calibrated reference curve");
        sub->add_option("--curve", opt.curve, "measured demand curve CSV (bypasses synthesis)");
        sub->add_option("--out", opt.out, "output directory");
        sub->add_option("--horizon", opt.horizon, "load factor horizon: full or start..end");
        sub->add_option("--policy", opt.policy, "dispatch policy: clip or constant");
        sub->add_option("--capacity", opt.capacity, "DG capacity override (pu, kW or MW)");
        sub->add_option("--peak-mw", opt.peak_mw, "MW per pu for costing per-unit curves");
    };

    struct Command {
        const char* name;
        const char* help;
        int (*fn)(const Options&);
    };
    const Command commands[] = {
        {"synthesize", "build the metro demand curve from timetable and passenger profile", cmd_synthesize},
        {"analyze", "load factor, peak and DG size of a demand curve", cmd_analyze},
        {"plan", "size DG, dispatch it and report the improvement indices", cmd_plan},
        {"economics", "cost figures for an existing report.json", cmd_economics},
        {"run", "full pipeline with all outputs", cmd_run},
        {"sweep", "evaluate a list of DG capacities", cmd_sweep},
    };
    int (*selected)(const Options&) = nullptr;
    for (const auto& cmd : commands) {
        auto* sub = app.add_subcommand(cmd.name, cmd.help);
        add_common(sub);
        if (std::string_view(cmd.name) == "economics") {
            sub->add_option("--report", opt.report, "report.json from plan or run")->required();
        }
        if (std::string_view(cmd.name) == "sweep") {
            sub->add_option("--capacities", opt.capacities, "comma-separated capacities")->delimiter(',')->required();
        }
        sub->callback([&selected, fn = cmd.fn] { selected = fn; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        return selected(opt);
    } catch (const Error& e) {
        log(LogLevel::Error, e.what());
        return exit_code(e.kind());
    } catch (const std::filesystem::filesystem_error& e) {
        log(LogLevel::Error, e.what());
        return 4;
    }
}

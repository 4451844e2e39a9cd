#pragma once

// Daily load curves on a uniform time grid and the statistics computed on them.
//
// A curve holds one power sample per grid interval; sample i is the constant
// power drawn over [i*step, (i+1)*step) minutes after midnight.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "metro_dg/error.hpp"

namespace metro_dg {

inline constexpr int kMinutesPerDay = 1440;

namespace detail {

/// Incremental mean; a run of identical samples averages to that sample bit-exactly.
class RunningMean {
public:
    void add(double x) {
        ++count_;
        mean_ += (x - mean_) / static_cast<double>(count_);
    }
    double value() const { return mean_; }
    std::size_t count() const { return count_; }

private:
    double mean_ = 0.0;
    std::size_t count_ = 0;
};

inline std::string format_clock(int minute) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%02d:%02d", minute / 60, minute % 60);
    return buf;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

/// Accepts "HH:MM" or a plain minute count.
inline bool parse_minute(std::string_view text, int& out) {
    text = trim(text);
    auto colon = text.find(':');
    auto to_int = [](std::string_view part, int& v) {
        if (part.empty()) return false;
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        return ec == std::errc{} && ptr == part.data() + part.size();
    };
    if (colon == std::string_view::npos) return to_int(text, out);
    int hours = 0;
    int minutes = 0;
    if (!to_int(text.substr(0, colon), hours) || !to_int(text.substr(colon + 1), minutes)) return false;
    if (hours < 0 || minutes < 0 || minutes >= 60) return false;
    out = hours * 60 + minutes;
    return true;
}

}  // namespace detail

class TimeGrid {
public:
    TimeGrid() = default;
    explicit TimeGrid(int step_minutes) : step_(step_minutes) {
        if (!is_supported_step(step_minutes)) {
            throw Error(ErrorKind::InvalidArgument,
                        "grid step must be one of 1, 5, 15, 30, 60 minutes (got " + std::to_string(step_minutes) + ")");
        }
    }

    static constexpr bool is_supported_step(int step) {
        return step == 1 || step == 5 || step == 15 || step == 30 || step == 60;
    }

    int step_minutes() const { return step_; }
    std::size_t samples_per_day() const { return static_cast<std::size_t>(kMinutesPerDay / step_); }
    double step_hours() const { return step_ / 60.0; }
    int sample_start(std::size_t i) const { return static_cast<int>(i) * step_; }
    double sample_midpoint(std::size_t i) const { return (static_cast<double>(i) + 0.5) * step_; }

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    int step_ = 15;
};

/// Half-open interval [start, end) of minutes after midnight.
class TimeWindow {
public:
    TimeWindow(int start_minute, int end_minute) : start_(start_minute), end_(end_minute) {
        if (start_ < 0 || end_ < 0 || start_ > kMinutesPerDay || end_ > kMinutesPerDay) {
            throw Error(ErrorKind::InvalidArgument, "window " + std::to_string(start_) + ".." + std::to_string(end_) +
                                                        " lies outside the day [0, 1440]");
        }
        if (start_ >= end_) throw Error(ErrorKind::EmptyWindow, "window " + to_string() + " is empty");
    }

    static TimeWindow full_day() { return {0, kMinutesPerDay}; }

    /// "09:30-16:00", "09:30..16:00", "570..960" or "full".
    static TimeWindow parse(std::string_view text) {
        text = detail::trim(text);
        if (text == "full") return full_day();
        auto sep = text.find("..");
        std::size_t sep_len = 2;
        if (sep == std::string_view::npos) {
            sep = text.find('-');
            sep_len = 1;
        }
        int start = 0;
        int end = 0;
        if (sep == std::string_view::npos || !detail::parse_minute(text.substr(0, sep), start) ||
            !detail::parse_minute(text.substr(sep + sep_len), end)) {
            throw Error(ErrorKind::Parse, "cannot parse time window '" + std::string(text) + "'");
        }
        return {start, end};
    }

    int start_minute() const { return start_; }
    int end_minute() const { return end_; }
    int length_minutes() const { return end_ - start_; }
    bool contains(double minute) const { return minute >= start_ && minute < end_; }
    bool overlaps(const TimeWindow& other) const { return start_ < other.end_ && other.start_ < end_; }
    bool is_full_day() const { return start_ == 0 && end_ == kMinutesPerDay; }

    bool aligned_to(const TimeGrid& grid) const {
        return start_ % grid.step_minutes() == 0 && end_ % grid.step_minutes() == 0;
    }

    /// Sample indices [first, last) covered by the window.
    std::pair<std::size_t, std::size_t> sample_range(const TimeGrid& grid) const {
        if (!aligned_to(grid)) {
            throw Error(ErrorKind::MisalignedWindow, "window " + to_string() + " does not align to a " +
                                                         std::to_string(grid.step_minutes()) + "-minute grid");
        }
        return {static_cast<std::size_t>(start_ / grid.step_minutes()),
                static_cast<std::size_t>(end_ / grid.step_minutes())};
    }

    std::string to_string() const { return detail::format_clock(start_) + "-" + detail::format_clock(end_); }

    friend bool operator==(const TimeWindow&, const TimeWindow&) = default;

private:
    int start_;
    int end_;
};

enum class Unit { MW, pu };

inline std::string_view to_string(Unit unit) { return unit == Unit::MW ? "MW" : "pu"; }

inline Unit parse_unit(std::string_view text) {
    text = detail::trim(text);
    if (text == "MW") return Unit::MW;
    if (text == "pu") return Unit::pu;
    throw Error(ErrorKind::Parse, "unknown unit '" + std::string(text) + "' (expected MW or pu)");
}

class LoadCurve {
public:
    LoadCurve(TimeGrid grid, std::vector<double> values, Unit unit = Unit::MW)
        : grid_(grid), values_(std::move(values)), unit_(unit) {
        if (values_.size() != grid_.samples_per_day()) {
            throw Error(ErrorKind::InvalidArgument, "curve has " + std::to_string(values_.size()) +
                                                        " samples but the grid needs " +
                                                        std::to_string(grid_.samples_per_day()));
        }
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!std::isfinite(values_[i]) || values_[i] < 0.0) {
                throw Error(ErrorKind::InvalidArgument,
                            "sample " + std::to_string(i) + " must be finite and non-negative");
            }
        }
    }

    static LoadCurve constant(TimeGrid grid, double value, Unit unit = Unit::MW) {
        return {grid, std::vector<double>(grid.samples_per_day(), value), unit};
    }

    const TimeGrid& grid() const { return grid_; }
    Unit unit() const { return unit_; }
    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

    /// Daily energy in unit-hours (MWh or pu*h).
    double energy() const {
        double sum = 0.0;
        for (double v : values_) sum += v;
        return sum * grid_.step_hours();
    }

    friend bool operator==(const LoadCurve&, const LoadCurve&) = default;

private:
    TimeGrid grid_;
    std::vector<double> values_;
    Unit unit_;
};

/// Largest sample over the day.
inline double peak(const LoadCurve& curve) { return *std::max_element(curve.values().begin(), curve.values().end()); }

/// Earliest index attaining the peak.
inline std::size_t peak_index(const LoadCurve& curve) {
    auto v = curve.values();
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

inline double window_average(const LoadCurve& curve, const TimeWindow& window) {
    auto [first, last] = window.sample_range(curve.grid());
    if (first >= last) throw Error(ErrorKind::EmptyWindow, "window " + window.to_string() + " holds no samples");
    detail::RunningMean mean;
    for (std::size_t i = first; i < last; ++i) mean.add(curve[i]);
    return mean.value();
}

/// Mean over maximum, both taken inside the horizon.
inline double load_factor(const LoadCurve& curve, const TimeWindow& horizon = TimeWindow::full_day()) {
    auto [first, last] = horizon.sample_range(curve.grid());
    detail::RunningMean mean;
    double max = 0.0;
    for (std::size_t i = first; i < last; ++i) {
        mean.add(curve[i]);
        max = std::max(max, curve[i]);
    }
    if (max <= 0.0) {
        throw Error(ErrorKind::AllZeroInHorizon, "curve has no positive sample in " + horizon.to_string());
    }
    return mean.value() / max;
}

struct WeightedCurve {
    std::reference_wrapper<const LoadCurve> curve;
    double weight;
};

inline LoadCurve linear_combine(std::span<const WeightedCurve> terms) {
    if (terms.empty()) throw Error(ErrorKind::InvalidArgument, "linear_combine needs at least one term");
    const LoadCurve& head = terms.front().curve.get();
    std::vector<double> out(head.size(), 0.0);
    for (const auto& term : terms) {
        const LoadCurve& c = term.curve.get();
        if (!(term.weight >= 0.0) || !std::isfinite(term.weight)) {
            throw Error(ErrorKind::InvalidArgument, "combination weights must be finite and non-negative");
        }
        if (c.grid() != head.grid()) throw Error(ErrorKind::GridMismatch, "curves use different time grids");
        if (c.unit() != head.unit()) throw Error(ErrorKind::UnitMismatch, "curves use different units");
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += term.weight * c[i];
    }
    return {head.grid(), std::move(out), head.unit()};
}

inline LoadCurve linear_combine(std::initializer_list<WeightedCurve> terms) {
    return linear_combine(std::span<const WeightedCurve>(terms.begin(), terms.size()));
}

inline LoadCurve scale(const LoadCurve& curve, double k) { return linear_combine({{curve, k}}); }

/// Refining replicates samples; coarsening averages whole groups. Daily energy is preserved.
inline LoadCurve resample(const LoadCurve& curve, TimeGrid target) {
    const int from = curve.grid().step_minutes();
    const int to = target.step_minutes();
    if (from == to) return curve;
    std::vector<double> out;
    out.reserve(target.samples_per_day());
    if (from % to == 0) {
        const std::size_t factor = static_cast<std::size_t>(from / to);
        for (double v : curve.values()) out.insert(out.end(), factor, v);
    } else if (to % from == 0) {
        const std::size_t factor = static_cast<std::size_t>(to / from);
        for (std::size_t g = 0; g < target.samples_per_day(); ++g) {
            detail::RunningMean mean;
            for (std::size_t j = 0; j < factor; ++j) mean.add(curve[g * factor + j]);
            out.push_back(mean.value());
        }
    } else {
        throw Error(ErrorKind::IncompatibleGrids, "cannot resample a " + std::to_string(from) + "-minute grid to " +
                                                      std::to_string(to) + " minutes");
    }
    return {target, std::move(out), curve.unit()};
}

}  // namespace metro_dg

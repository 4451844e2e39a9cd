#pragma once

// Metro demand from operating inputs: traction load follows the number of
// trains in service, station (light & power) load follows passenger intensity
// on top of a fixed share, and the two are combined at a set ratio.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "metro_dg/curve.hpp"
#include "metro_dg/error.hpp"

namespace metro_dg {

struct ServiceInterval {
    TimeWindow window;
    double headway_minutes;
};

class ServiceTimetable {
public:
    ServiceTimetable(double round_trip_minutes, std::vector<ServiceInterval> intervals)
        : round_trip_(round_trip_minutes), intervals_(std::move(intervals)) {
        if (!(round_trip_ > 0.0) || !std::isfinite(round_trip_)) {
            throw Error(ErrorKind::InvalidArgument, "round trip time must be positive");
        }
        for (std::size_t i = 0; i < intervals_.size(); ++i) {
            const auto& iv = intervals_[i];
            if (!(iv.headway_minutes > 0.0) || !std::isfinite(iv.headway_minutes)) {
                throw Error(ErrorKind::InvalidArgument,
                            "service interval " + iv.window.to_string() + " needs a positive headway");
            }
            if (i > 0 && iv.window.start_minute() < intervals_[i - 1].window.end_minute()) {
                throw Error(ErrorKind::InvalidArgument, "service intervals " + intervals_[i - 1].window.to_string() +
                                                            " and " + iv.window.to_string() +
                                                            " overlap or are out of order");
            }
        }
    }

    double round_trip_minutes() const { return round_trip_; }
    std::span<const ServiceInterval> intervals() const { return intervals_; }

private:
    double round_trip_;
    std::vector<ServiceInterval> intervals_;
};

/// ceil(round trip / headway) inside a service interval, 0 outside. At least one train runs during service.
inline int trains_in_service(const ServiceTimetable& timetable, double minute_of_day) {
    for (const auto& iv : timetable.intervals()) {
        if (iv.window.contains(minute_of_day)) {
            return std::max(1, static_cast<int>(std::ceil(timetable.round_trip_minutes() / iv.headway_minutes)));
        }
    }
    return 0;
}

class TractionModel {
public:
    explicit TractionModel(double avg_power_per_train_mw) : power_(avg_power_per_train_mw) {
        if (!(power_ > 0.0) || !std::isfinite(power_)) {
            throw Error(ErrorKind::InvalidArgument, "average power per train must be positive");
        }
    }
    double avg_power_per_train_mw() const { return power_; }

private:
    double power_;
};

/// Normalized passenger intensity per grid interval.
class PassengerProfile {
public:
    PassengerProfile(TimeGrid grid, std::vector<double> intensity) : grid_(grid), intensity_(std::move(intensity)) {
        if (intensity_.size() != grid_.samples_per_day()) {
            throw Error(ErrorKind::InvalidArgument, "passenger profile has " + std::to_string(intensity_.size()) +
                                                        " samples but the grid needs " +
                                                        std::to_string(grid_.samples_per_day()));
        }
        double max = 0.0;
        for (double v : intensity_) {
            if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorKind::InvalidArgument, "passenger intensity must lie in [0, 1]");
            max = std::max(max, v);
        }
        if (max > 0.0 && max != 1.0) {
            throw Error(ErrorKind::InvalidArgument, "passenger intensity must be normalized to a maximum of 1");
        }
    }

    const TimeGrid& grid() const { return grid_; }
    std::span<const double> intensity() const { return intensity_; }

private:
    TimeGrid grid_;
    std::vector<double> intensity_;
};

class LpsModel {
public:
    explicit LpsModel(double fixed_share) : fixed_share_(fixed_share) {
        if (!(fixed_share_ >= 0.0 && fixed_share_ <= 1.0)) {
            throw Error(ErrorKind::InvalidArgument, "LPS fixed share must lie in [0, 1]");
        }
    }
    double fixed_share() const { return fixed_share_; }
    double variable_share() const { return 1.0 - fixed_share_; }

private:
    double fixed_share_;
};

/// Peak of station load relative to peak of traction load.
class CombinationRatio {
public:
    static constexpr double kBandLow = 0.5;
    static constexpr double kBandHigh = 0.7;

    explicit CombinationRatio(double r = 0.6, bool allow_override = false) : r_(r) {
        if (!allow_override && !(r_ >= kBandLow && r_ <= kBandHigh)) {
            throw Error(ErrorKind::Validation, "combination ratio " + std::to_string(r_) +
                                                   " lies outside the 50-70% band of LPS to TPS demand; "
                                                   "set allow_ratio_override to use it");
        }
        if (!(r_ > 0.0 && r_ <= 1.0)) {
            throw Error(ErrorKind::Validation,
                        "combination ratio " + std::to_string(r_) + " must lie in (0, 1] even with override");
        }
    }
    double value() const { return r_; }

private:
    double r_;
};

inline LoadCurve synthesize_tps(const ServiceTimetable& timetable, const TractionModel& model, TimeGrid grid) {
    std::vector<double> values(grid.samples_per_day());
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = trains_in_service(timetable, grid.sample_midpoint(i)) * model.avg_power_per_train_mw();
    }
    return {grid, std::move(values), Unit::MW};
}

inline LoadCurve synthesize_lps(const PassengerProfile& profile, const LpsModel& model, double lps_peak_mw) {
    if (!(lps_peak_mw > 0.0) || !std::isfinite(lps_peak_mw)) {
        throw Error(ErrorKind::InvalidArgument, "LPS peak must be positive");
    }
    std::vector<double> values;
    values.reserve(profile.intensity().size());
    for (double x : profile.intensity()) {
        values.push_back(lps_peak_mw * (model.fixed_share() + model.variable_share() * x));
    }
    return {profile.grid(), std::move(values), Unit::MW};
}

/// Rescales lps to ratio x peak(tps) and adds it to tps.
inline LoadCurve combine_metro(const LoadCurve& tps, const LoadCurve& lps, const CombinationRatio& ratio) {
    if (tps.grid() != lps.grid()) throw Error(ErrorKind::GridMismatch, "TPS and LPS curves use different grids");
    if (tps.unit() != lps.unit()) throw Error(ErrorKind::UnitMismatch, "TPS and LPS curves use different units");
    const double lps_peak = peak(lps);
    if (lps_peak <= 0.0) throw Error(ErrorKind::ZeroLps, "LPS curve is zero everywhere; it cannot be rescaled");
    const double k = ratio.value() * peak(tps) / lps_peak;
    return linear_combine({{tps, 1.0}, {lps, k}});
}

namespace detail {

/// Linear piece from `from` to `to` over [start, end) minutes.
struct Segment {
    int start;
    int end;
    double from;
    double to;
};

/// Samples a piecewise-linear shape at interval midpoints.
inline std::vector<double> sample_segments(std::span<const Segment> segments, TimeGrid grid) {
    std::vector<double> out(grid.samples_per_day(), 0.0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double m = grid.sample_midpoint(i);
        for (const auto& s : segments) {
            if (m >= s.start && m < s.end) {
                out[i] = s.from == s.to ? s.from : s.from + (s.to - s.from) * (m - s.start) / (s.end - s.start);
                break;
            }
        }
    }
    return out;
}

}  // namespace detail

inline constexpr double kReferencePeakLevel = 1.0;
inline constexpr double kReferenceBaseLevel = 0.6;

/// Reference metro day in per-unit of peak. Only the shoulder level is free:
///   00-05 0 | 05-06 s | 06-07 s->0.6 | 07-09 1.0 | 09-17 0.6 | 17-19 1.0 | 19-20 0.6->s | 20-24 s
/// Daily energy is 6s + 9.4 pu*h. Everything outside the two rush plateaus stays at or below 0.6.
inline LoadCurve reference_template(double shoulder, TimeGrid grid) {
    if (grid.step_minutes() > 30) {
        throw Error(ErrorKind::InvalidArgument, "reference curve needs a grid step of at most 30 minutes");
    }
    if (!(shoulder >= 0.0 && shoulder <= kReferenceBaseLevel)) {
        throw Error(ErrorKind::InvalidArgument, "shoulder level must lie in [0, 0.6]");
    }
    const double s = shoulder;
    const double base = kReferenceBaseLevel;
    const double top = kReferencePeakLevel;
    const detail::Segment segments[] = {
        {0, 300, 0.0, 0.0},       {300, 360, s, s},     {360, 420, s, base},  {420, 540, top, top},
        {540, 1020, base, base},  {1020, 1140, top, top}, {1140, 1200, base, s}, {1200, 1440, s, s},
    };
    return {grid, detail::sample_segments(segments, grid), Unit::pu};
}

struct ReferenceCalibration {
    LoadCurve curve;
    double shoulder;
    double load_factor;
};

/// Bisects the shoulder level so the full-day load factor hits the target.
inline ReferenceCalibration calibrate_reference(double lf_target = 0.53, TimeGrid grid = TimeGrid{15}) {
    if (!(lf_target > 0.0 && lf_target < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "load factor target must lie in (0, 1)");
    }
    auto lf_at = [&](double s) { return load_factor(reference_template(s, grid)); };
    double lo = 0.0;
    double hi = kReferenceBaseLevel;
    const double lf_lo = lf_at(lo);
    const double lf_hi = lf_at(hi);
    if (lf_target < lf_lo || lf_target > lf_hi) {
        throw Error(ErrorKind::CalibrationOutOfRange, "load factor " + std::to_string(lf_target) +
                                                          " is outside the reachable range [" + std::to_string(lf_lo) +
                                                          ", " + std::to_string(lf_hi) + "]");
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (lf_at(mid) < lf_target ? lo : hi) = mid;
    }
    const double s = std::abs(lf_at(lo) - lf_target) <= std::abs(lf_at(hi) - lf_target) ? lo : hi;
    LoadCurve curve = reference_template(s, grid);
    const double lf = load_factor(curve);
    if (std::abs(lf - lf_target) > 1e-6) {
        throw Error(ErrorKind::CalibrationOutOfRange, "bisection failed to reach load factor " + std::to_string(lf_target));
    }
    return {std::move(curve), s, lf};
}

inline LoadCurve reference_curve(double lf_target = 0.53, TimeGrid grid = TimeGrid{15}) {
    return calibrate_reference(lf_target, grid).curve;
}

/// Two-peak weekday service: 4-minute headways in the rush hours, 8 midday, 10 at the margins.
inline ServiceTimetable default_timetable() {
    return ServiceTimetable(90.0, {
                                      {TimeWindow(300, 420), 10.0},
                                      {TimeWindow(420, 540), 4.0},
                                      {TimeWindow(540, 1020), 8.0},
                                      {TimeWindow(1020, 1140), 4.0},
                                      {TimeWindow(1140, 1380), 10.0},
                                  });
}

inline PassengerProfile default_passenger_profile(TimeGrid grid = TimeGrid{15}) {
    const detail::Segment segments[] = {
        {0, 300, 0.0, 0.0},       {300, 360, 0.15, 0.15},   {360, 420, 0.15, 1.0},  {420, 540, 1.0, 1.0},
        {540, 600, 1.0, 0.45},    {600, 960, 0.45, 0.45},   {960, 1020, 0.45, 1.0}, {1020, 1140, 1.0, 1.0},
        {1140, 1260, 1.0, 0.3},   {1260, 1380, 0.3, 0.3},   {1380, 1440, 0.0, 0.0},
    };
    return {grid, detail::sample_segments(segments, grid)};
}

}  // namespace metro_dg

#pragma once

// Brute-force reference computations for the tests. Nothing here calls the
// library's statistics or dispatch code; inputs are plain vectors.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

inline double sum(const std::vector<double>& v, std::size_t first, std::size_t last) {
    long double s = 0.0L;
    for (std::size_t i = first; i < last; ++i) s += v[i];
    return static_cast<double>(s);
}

inline double mean(const std::vector<double>& v, std::size_t first, std::size_t last) {
    return sum(v, first, last) / static_cast<double>(last - first);
}

inline double max(const std::vector<double>& v, std::size_t first, std::size_t last) {
    double m = 0.0;
    for (std::size_t i = first; i < last; ++i) m = v[i] > m ? v[i] : m;
    return m;
}

inline double load_factor(const std::vector<double>& v, int step, int start_min, int end_min) {
    const auto first = static_cast<std::size_t>(start_min / step);
    const auto last = static_cast<std::size_t>(end_min / step);
    return mean(v, first, last) / max(v, first, last);
}

/// Reference template integrated exactly over the day (pu*h); independent of any sampling.
inline double reference_daily_energy(double shoulder) {
    const double s = shoulder;
    return 1.0 * s             // 05-06 shoulder
           + 0.5 * (s + 0.6)   // 06-07 ramp
           + 2.0 * 1.0         // 07-09 morning peak
           + 8.0 * 0.6         // 09-17 midday
           + 2.0 * 1.0         // 17-19 evening peak
           + 0.5 * (0.6 + s)   // 19-20 ramp
           + 4.0 * s;          // 20-24 shoulder
}

/// Shoulder level that puts the full-day load factor at `lf` (peak 1 pu).
inline double reference_shoulder(double lf) { return (24.0 * lf - 9.4) / 6.0; }

/// Trains needed so a departure every `headway` minutes covers a `round_trip` loop:
/// count departures inside (t - round_trip, t] for every phase and take the worst case.
inline int trains_by_enumeration(double round_trip, double headway) {
    int best = 0;
    for (int phase = 0; phase < 1000; ++phase) {
        const double t = 10000.0 + headway * phase / 1000.0;
        int count = 0;
        for (int k = std::max(0, static_cast<int>((t - round_trip) / headway) - 2); k * headway <= t; ++k) {
            const double dep = k * headway;
            if (dep > t - round_trip && dep <= t) ++count;
        }
        best = std::max(best, count);
    }
    return std::max(best, 1);
}

struct Dispatch {
    std::vector<double> grid;
    std::vector<double> dg;
};

inline Dispatch clip_dispatch(const std::vector<double>& demand, int step, const std::vector<std::pair<int, int>>& windows,
                              double capacity, double threshold, bool constant) {
    Dispatch out{demand, std::vector<double>(demand.size(), 0.0)};
    for (std::size_t i = 0; i < demand.size(); ++i) {
        const int t = static_cast<int>(i) * step;
        bool inside = false;
        for (auto [a, b] : windows) inside = inside || (t >= a && t < b);
        if (!inside) continue;
        double want = constant ? demand[i] : demand[i] - threshold;
        want = std::clamp(want, 0.0, capacity);
        out.dg[i] = want;
        out.grid[i] = demand[i] - want;
    }
    return out;
}

struct Report {
    double p_peak_before, p_base, p_peak_after, lf_before, lf_after, peak_reduction_pct, loss_reduction_at_peak_pct,
        dg_energy, demand_energy;
};

inline Report improvement(const std::vector<double>& demand, const std::vector<double>& grid,
                          const std::vector<double>& dg, int step, int h_start, int h_end, int base_start,
                          int base_end) {
    Report r{};
    const std::size_t n = demand.size();
    r.p_peak_before = max(demand, 0, n);
    r.p_peak_after = max(grid, 0, n);
    r.p_base = mean(demand, static_cast<std::size_t>(base_start / step), static_cast<std::size_t>(base_end / step));
    r.lf_before = load_factor(demand, step, h_start, h_end);
    r.lf_after = load_factor(grid, step, h_start, h_end);
    const double ratio = r.p_peak_after / r.p_peak_before;
    r.peak_reduction_pct = 100.0 - 100.0 * ratio;
    r.loss_reduction_at_peak_pct = 100.0 - 100.0 * ratio * ratio;
    r.dg_energy = sum(dg, 0, n) * step / 60.0;
    r.demand_energy = sum(demand, 0, n) * step / 60.0;
    return r;
}

inline bool close_rel(double a, double b, double rel, double abs_floor = 1e-12) {
    return std::abs(a - b) <= std::max(rel * std::max(std::abs(a), std::abs(b)), abs_floor);
}

/// Deterministic generators for the property suites.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

    int step() {
        static constexpr int steps[] = {5, 15, 30};
        return steps[integer(0, 2)];
    }

    /// Random daily profile with night zeros, a couple of peaks and noise.
    std::vector<double> curve(int step, double scale = 10.0) {
        const int n = 1440 / step;
        std::vector<double> v(static_cast<std::size_t>(n));
        const double base = uniform(0.1, 0.7);
        const double morning = uniform(0.6, 1.0);
        const double evening = uniform(0.6, 1.0);
        for (int i = 0; i < n; ++i) {
            const double t = (i + 0.5) * step / 60.0;
            double x = base;
            x += morning * std::exp(-0.5 * std::pow((t - 8.0) / 1.2, 2));
            x += evening * std::exp(-0.5 * std::pow((t - 18.0) / 1.2, 2));
            x *= uniform(0.9, 1.1);
            if (t < 5.0 && coin(0.8)) x = 0.0;
            v[static_cast<std::size_t>(i)] = scale * x;
        }
        if (coin(0.1)) v[static_cast<std::size_t>(integer(0, n - 1))] = scale * 3.0;  // isolated spike
        return v;
    }

    /// Aligned window [a, b) on the given step.
    std::pair<int, int> window(int step) {
        const int n = 1440 / step;
        const int a = integer(0, n - 1);
        const int b = integer(a + 1, n);
        return {a * step, b * step};
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

}  // namespace oracle

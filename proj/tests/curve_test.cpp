#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "metro_dg/curve.hpp"
#include "metro_dg/demand.hpp"
#include "support/oracles.hpp"

using namespace metro_dg;

namespace {

/// Coarse "k-sample day" expressed on the hourly grid: each value holds for 24/k hours.
LoadCurve blocks(std::vector<double> levels, Unit unit = Unit::MW) {
    const std::size_t per = 24 / levels.size();
    std::vector<double> v;
    for (double x : levels) v.insert(v.end(), per, x);
    return {TimeGrid(60), v, unit};
}

template <class F>
ErrorKind kind_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected an Error";
    return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(TimeGrid, AcceptsOnlyDivisorSteps) {
    EXPECT_EQ(TimeGrid().step_minutes(), 15);
    EXPECT_EQ(TimeGrid(15).samples_per_day(), 96u);
    EXPECT_EQ(TimeGrid(1).samples_per_day(), 1440u);
    EXPECT_EQ(kind_of([] { TimeGrid(7); }), ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of([] { TimeGrid(120); }), ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of([] { TimeGrid(0); }), ErrorKind::InvalidArgument);
}

TEST(TimeWindow, ParsesClockAndMinuteForms) {
    EXPECT_EQ(TimeWindow::parse("09:30-16:00"), TimeWindow(570, 960));
    EXPECT_EQ(TimeWindow::parse("09:30..16:00"), TimeWindow(570, 960));
    EXPECT_EQ(TimeWindow::parse("570..960"), TimeWindow(570, 960));
    EXPECT_EQ(TimeWindow::parse("full"), TimeWindow::full_day());
    EXPECT_EQ(TimeWindow::parse("20:00-24:00").end_minute(), 1440);
    EXPECT_EQ(TimeWindow(570, 960).to_string(), "09:30-16:00");
    EXPECT_EQ(kind_of([] { TimeWindow::parse("nine-ten"); }), ErrorKind::Parse);
    EXPECT_EQ(kind_of([] { TimeWindow::parse("09:70-10:00"); }), ErrorKind::Parse);
}

TEST(TimeWindow, RejectsEmptyAndOutOfDay) {
    EXPECT_EQ(kind_of([] { TimeWindow(600, 600); }), ErrorKind::EmptyWindow);
    EXPECT_EQ(kind_of([] { TimeWindow(700, 600); }), ErrorKind::EmptyWindow);
    EXPECT_EQ(kind_of([] { TimeWindow(-15, 600); }), ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of([] { TimeWindow(0, 1500); }), ErrorKind::InvalidArgument);
}

TEST(LoadCurve, EnforcesInvariants) {
    EXPECT_EQ(kind_of([] { LoadCurve(TimeGrid(60), std::vector<double>(23, 1.0)); }), ErrorKind::InvalidArgument);
    std::vector<double> v(24, 1.0);
    v[3] = -0.1;
    EXPECT_EQ(kind_of([&] { LoadCurve(TimeGrid(60), v); }), ErrorKind::InvalidArgument);
    v[3] = std::nan("");
    EXPECT_EQ(kind_of([&] { LoadCurve(TimeGrid(60), v); }), ErrorKind::InvalidArgument);
    v[3] = INFINITY;
    EXPECT_EQ(kind_of([&] { LoadCurve(TimeGrid(60), v); }), ErrorKind::InvalidArgument);
}

TEST(LoadFactor, FlatCurveIsOne) {
    EXPECT_EQ(load_factor(LoadCurve::constant(TimeGrid(15), 7.0)), 1.0);
}

TEST(LoadFactor, TwoLevelDay) {
    EXPECT_DOUBLE_EQ(load_factor(blocks({1.0, 0.5}, Unit::pu)), 0.75);
}

TEST(LoadFactor, ReferenceCurveIsCalibrated) {
    EXPECT_NEAR(load_factor(reference_curve()), 0.530, 0.001);
}

TEST(LoadFactor, HorizonRestrictsBothMeanAndMax) {
    const auto c = blocks({0.0, 2.0, 4.0, 2.0});  // 6 h blocks
    EXPECT_DOUBLE_EQ(load_factor(c, TimeWindow(360, 720)), 1.0);
    EXPECT_DOUBLE_EQ(load_factor(c, TimeWindow(360, 1080)), (2.0 + 4.0) / 2.0 / 4.0);
}

TEST(LoadFactor, Errors) {
    const auto zeros = LoadCurve::constant(TimeGrid(15), 0.0);
    EXPECT_EQ(kind_of([&] { load_factor(zeros); }), ErrorKind::AllZeroInHorizon);
    const auto night = blocks({0.0, 1.0, 1.0, 1.0});
    EXPECT_EQ(kind_of([&] { load_factor(night, TimeWindow(0, 360)); }), ErrorKind::AllZeroInHorizon);
    EXPECT_EQ(kind_of([&] { load_factor(night, TimeWindow(570, 960)); }), ErrorKind::MisalignedWindow);
}

TEST(WindowAverage, Examples) {
    EXPECT_EQ(window_average(LoadCurve::constant(TimeGrid(15), 5.0), TimeWindow(570, 960)), 5.0);
    EXPECT_EQ(window_average(blocks({2.0, 4.0}), TimeWindow(720, 1440)), 4.0);
    // plateau of the reference template: averaging identical samples is exact
    EXPECT_EQ(window_average(reference_curve(), TimeWindow(570, 960)), 0.6);
}

TEST(WindowAverage, MatchesDirectSummation) {
    const auto ref = reference_curve();
    std::vector<double> v(ref.values().begin(), ref.values().end());
    EXPECT_NEAR(window_average(ref, TimeWindow(570, 960)), oracle::mean(v, 38, 64), 1e-15);
    EXPECT_EQ(kind_of([&] { window_average(ref, TimeWindow(575, 960)); }), ErrorKind::MisalignedWindow);
}

TEST(Peak, Examples) {
    EXPECT_EQ(peak(LoadCurve::constant(TimeGrid(15), 5.0)), 5.0);
    EXPECT_EQ(peak(blocks({0.0, 3.0, 1.0})), 3.0);
    const auto ref = reference_curve();
    std::vector<double> v(ref.values().begin(), ref.values().end());
    EXPECT_EQ(peak(ref), oracle::max(v, 0, v.size()));
    EXPECT_EQ(peak(ref), 1.0);
}

TEST(Peak, TiesReportEarliestIndex) {
    const auto c = blocks({1.0, 3.0, 3.0, 2.0});
    EXPECT_EQ(peak_index(c), 6u);
    EXPECT_EQ(peak_index(reference_curve()), 28u);  // 07:00
}

TEST(LinearCombine, IdentityAndZeroWeight) {
    oracle::Gen gen(11);
    const LoadCurve c(TimeGrid(15), gen.curve(15));
    const LoadCurve d(TimeGrid(15), gen.curve(15));
    EXPECT_EQ(linear_combine({{c, 1.0}}), c);
    EXPECT_EQ(linear_combine({{c, 0.0}, {d, 1.0}}), d);
}

TEST(LinearCombine, TractionPlusScaledStationLoad) {
    const auto tps = synthesize_tps(default_timetable(), TractionModel(1.0), TimeGrid(15));
    const auto tps_pu = scale(tps, 1.0 / peak(tps));
    const auto lps = synthesize_lps(default_passenger_profile(), LpsModel(0.5), 1.0);
    const auto lps_scaled = scale(lps, 0.6 / peak(lps));
    const auto combined = linear_combine({{tps_pu, 1.0}, {lps_scaled, 1.0}});
    EXPECT_LE(peak(combined), 1.6 + 1e-12);
    for (std::size_t i = 0; i < combined.size(); ++i) EXPECT_EQ(combined[i], tps_pu[i] + lps_scaled[i]);
}

TEST(LinearCombine, Errors) {
    const auto a = LoadCurve::constant(TimeGrid(15), 1.0);
    const auto b = LoadCurve::constant(TimeGrid(30), 1.0);
    const auto p = LoadCurve::constant(TimeGrid(15), 1.0, Unit::pu);
    EXPECT_EQ(kind_of([&] { linear_combine({{a, 1.0}, {b, 1.0}}); }), ErrorKind::GridMismatch);
    EXPECT_EQ(kind_of([&] { linear_combine({{a, 1.0}, {p, 1.0}}); }), ErrorKind::UnitMismatch);
    EXPECT_EQ(kind_of([&] { linear_combine({{a, -1.0}}); }), ErrorKind::InvalidArgument);
}

TEST(Resample, RefineReplicates) {
    const auto r = resample(LoadCurve::constant(TimeGrid(60), 5.0), TimeGrid(15));
    EXPECT_EQ(r.size(), 96u);
    for (double v : r.values()) EXPECT_EQ(v, 5.0);
}

TEST(Resample, CoarsenAveragesGroups) {
    std::vector<double> v(96);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = (i % 4 < 2) ? 4.0 : 8.0;
    const auto r = resample(LoadCurve(TimeGrid(15), v), TimeGrid(60));
    EXPECT_EQ(r[0], 6.0);
    EXPECT_EQ(r.size(), 24u);
}

TEST(Resample, ReferenceRoundTripIsBitIdentical) {
    const auto ref = reference_curve();
    EXPECT_EQ(resample(resample(ref, TimeGrid(1)), TimeGrid(15)), ref);
    EXPECT_EQ(resample(resample(ref, TimeGrid(5)), TimeGrid(15)), ref);
}

// ---- properties ---------------------------------------------------------

TEST(CurveProperties, LoadFactorInUnitInterval) {
    oracle::Gen gen(101);
    for (int trial = 0; trial < 300; ++trial) {
        const int step = gen.step();
        const LoadCurve c(TimeGrid(step), gen.curve(step));
        auto [a, b] = gen.window(step);
        std::vector<double> v(c.values().begin(), c.values().end());
        if (oracle::max(v, a / step, b / step) <= 0.0) continue;
        const double lf = load_factor(c, TimeWindow(a, b));
        EXPECT_GT(lf, 0.0);
        EXPECT_LE(lf, 1.0);
        EXPECT_TRUE(oracle::close_rel(lf, oracle::load_factor(v, step, a, b), 1e-12));
    }
}

TEST(CurveProperties, LoadFactorScaleInvariance) {
    oracle::Gen gen(102);
    for (int trial = 0; trial < 300; ++trial) {
        const int step = gen.step();
        const LoadCurve c(TimeGrid(step), gen.curve(step));
        const double lf = load_factor(c);
        const double pow2 = std::ldexp(1.0, gen.integer(-20, 20));
        EXPECT_EQ(load_factor(scale(c, pow2)), lf);
        const double k = gen.uniform(1e-3, 1e3);
        EXPECT_TRUE(oracle::close_rel(load_factor(scale(c, k)), lf, 1e-12));
    }
}

TEST(CurveProperties, EnergyConsistency) {
    oracle::Gen gen(103);
    for (int trial = 0; trial < 300; ++trial) {
        const int step = gen.step();
        const LoadCurve c(TimeGrid(step), gen.curve(step));
        std::vector<double> v(c.values().begin(), c.values().end());
        const double lhs = window_average(c, TimeWindow::full_day()) * 1440.0 / step;
        EXPECT_TRUE(oracle::close_rel(lhs, oracle::sum(v, 0, v.size()), 1e-12));
    }
}

TEST(CurveProperties, PeakIsSubadditive) {
    oracle::Gen gen(104);
    for (int trial = 0; trial < 300; ++trial) {
        const int step = gen.step();
        const LoadCurve a(TimeGrid(step), gen.curve(step));
        const LoadCurve b(TimeGrid(step), gen.curve(step, gen.uniform(0.1, 5.0)));
        EXPECT_LE(peak(linear_combine({{a, 1.0}, {b, 1.0}})), peak(a) + peak(b));
    }
}

TEST(CurveProperties, ResampleRoundTripAndEnergy) {
    oracle::Gen gen(105);
    const int steps[] = {1, 5, 15, 30, 60};
    for (int trial = 0; trial < 300; ++trial) {
        const int step = steps[gen.integer(0, 4)];
        const LoadCurve c(TimeGrid(step), gen.curve(step));
        for (int target : steps) {
            const auto r = resample(c, TimeGrid(target));
            EXPECT_TRUE(oracle::close_rel(r.energy(), c.energy(), 1e-9));
            if (target < step) {
                EXPECT_EQ(resample(r, TimeGrid(step)), c);
            }
        }
    }
}

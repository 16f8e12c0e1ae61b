#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "doctest.h"
#include "pedsim/errors.hpp"
#include "pedsim/measurement.hpp"

using namespace pedsim;
using doctest::Approx;

namespace {

RunResult completed_run(std::vector<double> times) {
    RunResult r;
    r.n_pedestrians = int(times.size());
    r.passage_times = std::move(times);
    r.completed = true;
    return r;
}

FlowRecord rec(const std::string& set, double width, double flux_val,
               double total = 50.0, bool completed = true) {
    FlowRecord f;
    f.parameter_set = set;
    f.width_m = width;
    f.n_pedestrians = 100;
    f.completed = completed;
    f.total_time_s = total;
    f.flux_per_s = flux_val;
    f.specific_flux_per_m_s = flux_val / width;
    return f;
}

}  // namespace

TEST_CASE("total time is the last passage after the start signal") {
    CHECK(total_time(completed_run({3.2})) == 3.2);
    CHECK(total_time(completed_run({1.0, 2.0, 55.0})) == 55.0);

    RunResult jammed = completed_run({1.0, 2.0});
    jammed.completed = false;
    jammed.n_pedestrians = 5;
    CHECK_THROWS_AS((void)total_time(jammed), InputError);
    CHECK_THROWS_AS((void)total_time(RunResult{}), InputError);
}

TEST_CASE("flux counts the inter-passage gaps") {
    CHECK(flux(100, 55.0) == Approx(1.8).epsilon(1e-12));
    CHECK(flux(2, 1.0) == Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS((void)flux(1, 10.0), InputError);
    CHECK_THROWS_AS((void)flux(0, 10.0), InputError);
    CHECK_THROWS_AS((void)flux(100, 0.0), InputError);
    CHECK_THROWS_AS((void)flux(100, -5.0), InputError);

    // the naive alternative divides the full count
    CHECK(flux_n_over_t(100, 55.0) == Approx(100.0 / 55.0).epsilon(1e-12));
    CHECK_THROWS_AS((void)flux_n_over_t(100, 0.0), InputError);
}

TEST_CASE("specific flux divides by the bottleneck width") {
    CHECK(specific_flux(1.8, 0.9) == Approx(2.0).epsilon(1e-12));
    CHECK(specific_flux(1.8, 1.0) == Approx(1.8).epsilon(1e-12));
    CHECK_THROWS_AS((void)specific_flux(1.8, 0.0), InputError);
    CHECK_THROWS_AS((void)specific_flux(1.8, -0.4), InputError);
}

TEST_CASE("flux and specific flux compose back to the gap count") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> ut(1.0, 500.0);
    std::uniform_real_distribution<double> uw(0.1, 3.0);
    std::uniform_int_distribution<int> un(2, 300);
    for (int c = 0; c < 1000; ++c) {
        const int n = un(rng);
        const double t = ut(rng);
        const double w = uw(rng);
        CHECK(specific_flux(flux(n, t), w) * w * t == Approx(n - 1).epsilon(1e-9));
    }
}

TEST_CASE("participant scaling rescales to the 100-person equivalent") {
    CHECK(scale_total_time(55.0, 100) == Approx(55.0).epsilon(1e-12));
    CHECK(scale_total_time(60.0, 80) == Approx(75.18987341772151).epsilon(1e-12));
    CHECK(scale_total_time(10.0, 2) == Approx(990.0).epsilon(1e-12));
    CHECK_THROWS_AS((void)scale_total_time(10.0, 1), InputError);
    CHECK_THROWS_AS((void)scale_total_time(10.0, 0), InputError);
}

TEST_CASE("aggregation groups by set and width with sample statistics") {
    SUBCASE("a single record has zero spread") {
        const std::vector<FlowRecord> records = {rec("P0", 0.4, 1.5)};
        const auto rows = aggregate(records);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].parameter_set == "P0");
        CHECK(rows[0].width_m == 0.4);
        CHECK(rows[0].n_reps == 1);
        CHECK(rows[0].mean_flux_per_s == Approx(1.5).epsilon(1e-12));
        CHECK(rows[0].std_flux_per_s == 0.0);
        CHECK(rows[0].std_total_time_s == 0.0);
    }

    SUBCASE("two values give the textbook sample deviation") {
        const std::vector<FlowRecord> records = {rec("P0", 0.4, 1.0, 1.0),
                                                 rec("P0", 0.4, 3.0, 3.0)};
        const auto rows = aggregate(records);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].n_reps == 2);
        CHECK(rows[0].mean_total_time_s == Approx(2.0).epsilon(1e-12));
        CHECK(rows[0].std_total_time_s == Approx(std::sqrt(2.0)).epsilon(1e-12));
        CHECK(rows[0].mean_flux_per_s == Approx(2.0).epsilon(1e-12));
    }

    SUBCASE("groups come back sorted by set, then width") {
        const std::vector<FlowRecord> records = {
            rec("P1", 0.4, 1.0), rec("P0", 1.0, 2.0), rec("P0", 0.4, 1.5)};
        const auto rows = aggregate(records);
        REQUIRE(rows.size() == 3);
        CHECK(rows[0].parameter_set == "P0");
        CHECK(rows[0].width_m == 0.4);
        CHECK(rows[1].parameter_set == "P0");
        CHECK(rows[1].width_m == 1.0);
        CHECK(rows[2].parameter_set == "P1");
    }

    SUBCASE("incomplete replications are excluded") {
        const std::vector<FlowRecord> records = {
            rec("P0", 0.4, 1.0), rec("P0", 0.4, 9.0, 50.0, false),
            rec("P0", 0.5, 9.0, 50.0, false)};
        const auto rows = aggregate(records);
        REQUIRE(rows.size() == 1);  // the all-incomplete (P0, 0.5) group vanishes
        CHECK(rows[0].n_reps == 1);
        CHECK(rows[0].mean_flux_per_s == Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("statistics match a two-pass oracle on random data") {
        std::mt19937 rng(29);
        std::uniform_real_distribution<double> u(0.5, 100.0);
        std::vector<FlowRecord> records;
        std::vector<double> values;
        for (int k = 0; k < 17; ++k) {
            values.push_back(u(rng));
            records.push_back(rec("P2", 0.6, values.back(), values.back() * 2));
        }
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= double(values.size());
        double ss = 0.0;
        for (double v : values) ss += (v - mean) * (v - mean);
        const double sd = std::sqrt(ss / double(values.size() - 1));

        const auto rows = aggregate(records);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].mean_flux_per_s == Approx(mean).epsilon(1e-12));
        CHECK(rows[0].std_flux_per_s == Approx(sd).epsilon(1e-12));
        CHECK(rows[0].mean_total_time_s == Approx(2 * mean).epsilon(1e-12));
    }
}

TEST_CASE("least squares recovers constructed lines exactly") {
    using P = std::pair<double, double>;

    SUBCASE("collinear points") {
        const std::vector<P> pts = {{0.4, 0.8}, {0.6, 1.2}, {0.8, 1.6}};
        const LinearFit f = linear_fit(pts);
        CHECK(f.slope == Approx(2.0).epsilon(1e-12));
        CHECK(f.intercept == Approx(0.0));
        CHECK(f.r_squared == Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("two points interpolate exactly") {
        const std::vector<P> pts = {{1.0, 3.0}, {3.0, 7.0}};
        const LinearFit f = linear_fit(pts);
        CHECK(f.slope == Approx(2.0).epsilon(1e-12));
        CHECK(f.intercept == Approx(1.0).epsilon(1e-12));
        CHECK(f.r_squared == Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("constant response is a perfect horizontal fit") {
        const std::vector<P> pts = {{1.0, 4.0}, {2.0, 4.0}, {3.0, 4.0}};
        const LinearFit f = linear_fit(pts);
        CHECK(f.slope == Approx(0.0));
        CHECK(f.intercept == Approx(4.0).epsilon(1e-12));
        CHECK(f.r_squared == 1.0);  // zero total variance: exact by definition
    }

    SUBCASE("random affine data with known coefficients") {
        std::mt19937 rng(31);
        std::uniform_real_distribution<double> u(-5.0, 5.0);
        for (int c = 0; c < 200; ++c) {
            const double slope = u(rng), intercept = u(rng);
            std::vector<P> pts;
            for (int k = 0; k < 6; ++k) {
                const double x = double(k) + u(rng) / 20.0;
                pts.emplace_back(x, slope * x + intercept);
            }
            const LinearFit f = linear_fit(pts);
            CHECK(f.slope == Approx(slope).epsilon(1e-9));
            CHECK(f.intercept == Approx(intercept).epsilon(1e-9));
            CHECK(f.r_squared >= 0.0);
            CHECK(f.r_squared <= 1.0 + 1e-12);
        }
    }

    SUBCASE("noisy data keeps r-squared inside the unit interval") {
        std::mt19937 rng(37);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int c = 0; c < 200; ++c) {
            std::vector<P> pts;
            for (int k = 0; k < 8; ++k) pts.emplace_back(double(k), u(rng));
            const LinearFit f = linear_fit(pts);
            CHECK(f.r_squared >= 0.0);
            CHECK(f.r_squared <= 1.0 + 1e-12);
        }
    }

    SUBCASE("degenerate inputs are rejected") {
        CHECK_THROWS_AS((void)linear_fit(std::vector<P>{}), InputError);
        CHECK_THROWS_AS((void)linear_fit(std::vector<P>{{1.0, 2.0}}), InputError);
        const std::vector<P> vertical = {{2.0, 1.0}, {2.0, 3.0}, {2.0, 5.0}};
        CHECK_THROWS_AS((void)linear_fit(vertical), InputError);
    }
}

TEST_CASE("interior minimum detection on the width series") {
    using P = std::pair<double, double>;

    SUBCASE("constructed interior minimum") {
        const std::vector<P> s = {{0.4, 1.9}, {0.5, 1.7}, {0.6, 1.6},
                                  {0.7, 1.8}, {0.8, 1.9}, {1.0, 2.0}};
        CHECK(specific_flux_minimum(s) == 0.6);
    }

    SUBCASE("monotone series has no interior minimum") {
        const std::vector<P> inc = {{0.4, 1.0}, {0.6, 1.5}, {0.8, 2.0}};
        CHECK_FALSE(specific_flux_minimum(inc).has_value());
        const std::vector<P> dec = {{0.4, 2.0}, {0.6, 1.5}, {0.8, 1.0}};
        CHECK_FALSE(specific_flux_minimum(dec).has_value());  // endpoint never counts
    }

    SUBCASE("the deepest of several minima wins") {
        const std::vector<P> s = {{0.4, 2.0}, {0.5, 1.5}, {0.6, 1.9},
                                  {0.7, 1.2}, {0.8, 1.9}, {1.0, 2.0}};
        CHECK(specific_flux_minimum(s) == 0.7);
    }

    SUBCASE("equal depth resolves to the smaller width") {
        const std::vector<P> s = {{0.4, 2.0}, {0.5, 1.5}, {0.6, 1.9},
                                  {0.7, 1.5}, {0.8, 1.9}, {1.0, 2.0}};
        CHECK(specific_flux_minimum(s) == 0.5);
    }

    SUBCASE("flat-bottomed dips are not strict minima") {
        const std::vector<P> s = {{0.4, 2.0}, {0.5, 1.5}, {0.6, 1.5}, {0.7, 2.0}};
        CHECK_FALSE(specific_flux_minimum(s).has_value());
    }

    SUBCASE("bad inputs are rejected") {
        const std::vector<P> two = {{0.4, 1.0}, {0.6, 1.5}};
        CHECK_THROWS_AS((void)specific_flux_minimum(two), InputError);
        const std::vector<P> unsorted = {{0.6, 1.0}, {0.4, 1.5}, {0.8, 2.0}};
        CHECK_THROWS_AS((void)specific_flux_minimum(unsorted), InputError);
        const std::vector<P> dup = {{0.4, 1.0}, {0.4, 1.5}, {0.8, 2.0}};
        CHECK_THROWS_AS((void)specific_flux_minimum(dup), InputError);
    }
}

TEST_CASE("flux definitions are named for the CLI") {
    CHECK(flux_def_from_string("gaps") == FluxDef::Gaps);
    CHECK(flux_def_from_string("n_over_t") == FluxDef::NOverT);
    CHECK(to_string(FluxDef::Gaps) == "gaps");
    CHECK(to_string(FluxDef::NOverT) == "n_over_t");
    CHECK_THROWS_AS((void)flux_def_from_string("naive"), InputError);
}

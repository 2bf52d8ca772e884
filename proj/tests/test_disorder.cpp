#include <doctest.h>

#include "avalanche/disorder.hpp"
#include "avalanche/errors.hpp"

#include <cmath>
#include <vector>

using namespace avalanche;

TEST_CASE("zero disorder gives zero mismatches") {
    const TreeNetwork t = build_tree(4);
    auto rng = make_stream(1, 0);
    const auto eps = sample_vertex_mismatches(t, 0.0, rng);
    CHECK(eps.size() == 7);
    for (const double e : eps) CHECK(e == 0.0);
    for (const double d : mismatches_to_detunings(t, eps)) CHECK(d == 0.0);
}

TEST_CASE("mismatches lie inside the box") {
    const TreeNetwork t = build_tree(4);
    auto rng = make_stream(5, 2);
    for (int rep = 0; rep < 200; ++rep)
        for (const double e : sample_vertex_mismatches(t, 5.0, rng)) {
            CHECK(e >= -5.0);
            CHECK(e <= 5.0);
        }
    CHECK_THROWS_AS(sample_vertex_mismatches(t, -1.0, rng), ArgumentError);
}

TEST_CASE("uniform moments within three standard errors") {
    const TreeNetwork t = build_tree(5);
    const double sigma = 5.0;
    auto rng = make_stream(2024, 0);
    std::vector<double> xs;
    while (xs.size() < 30000)
        for (const double e : sample_vertex_mismatches(t, sigma, rng)) xs.push_back(e);
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (const double x : xs) mean += x;
    mean /= n;
    double m2 = 0.0, m4 = 0.0;
    for (const double x : xs) {
        m2 += (x - mean) * (x - mean);
        m4 += std::pow(x - mean, 4);
    }
    const double var = m2 / (n - 1.0);
    m4 /= n;
    const double var_exact = sigma * sigma / 3.0;
    CHECK(std::abs(mean) < 3.0 * std::sqrt(var_exact / n));
    // Standard error of the sample variance: sqrt((mu4 - sigma^4) / n).
    CHECK(std::abs(var - var_exact) < 3.0 * std::sqrt((m4 - var * var) / n));
}

TEST_CASE("detunings realize the mismatches") {
    const TreeNetwork t = build_tree(2);
    const auto d = mismatches_to_detunings(t, {2.0});
    CHECK(d == std::vector<double>{0.0, 0.0, -2.0});

    const TreeNetwork t5 = build_tree(5);
    auto rng = make_stream(9, 1);
    const auto eps = sample_vertex_mismatches(t5, 3.0, rng);
    const auto det = mismatches_to_detunings(t5, eps);
    CHECK(det[0] == 0.0);
    for (const auto &k : t5.kernels()) {
        CHECK(det[static_cast<std::size_t>(k.left - 1)] == 0.0);
        CHECK(det[static_cast<std::size_t>(k.parent - 1)] - det[static_cast<std::size_t>(k.left - 1)] -
                  det[static_cast<std::size_t>(k.right - 1)] ==
              doctest::Approx(eps[static_cast<std::size_t>(k.parent - 1)]).epsilon(1e-15));
    }
    const auto back = detunings_to_mismatches(t5, det);
    REQUIRE(back.size() == eps.size());
    for (std::size_t i = 0; i < eps.size(); ++i) CHECK(back[i] == doctest::Approx(eps[i]).epsilon(1e-14));
    CHECK_THROWS_AS(mismatches_to_detunings(t5, {1.0}), ArgumentError);
}

TEST_CASE("ideal schedules are zero") {
    const TreeNetwork t = build_tree(4);
    ScheduleParams p;
    p.mode = DisorderMode::ideal;
    p.sigma = 5.0; // ignored in ideal mode
    p.t_max = 10.0;
    const DisorderSchedule s = build_schedule(t, p);
    REQUIRE(s.intervals().size() == 1);
    for (const double d : s.intervals().front().detunings) CHECK(d == 0.0);
    CHECK(s.horizon() == 10.0);
}

TEST_CASE("dynamic schedule interval counts") {
    const TreeNetwork t = build_tree(3);
    ScheduleParams p;
    p.mode = DisorderMode::dynamic;
    p.sigma = 5.0;
    p.resample_dt = 2.0;
    p.t_max = 10.0;
    const DisorderSchedule s = build_schedule(t, p);
    REQUIRE(s.intervals().size() == 5);
    for (std::size_t k = 0; k < 5; ++k) {
        CHECK(s.intervals()[k].start == doctest::Approx(2.0 * static_cast<double>(k)));
        CHECK(s.intervals()[k].end == doctest::Approx(2.0 * static_cast<double>(k + 1)));
    }
    CHECK(s.intervals()[0].mismatches != s.intervals()[1].mismatches);
    CHECK(s.interval_at(0.0) == 0);
    CHECK(s.interval_at(3.9) == 1);
    CHECK(s.interval_at(10.0) == 4);

    CHECK(interval_count(10.0, 0.2) == 50);
    CHECK(interval_count(100.0, 0.02) == 5000);
    CHECK(interval_count(10.0, 3.0) == 4);
    p.resample_dt = 3.0;
    const DisorderSchedule s3 = build_schedule(t, p);
    CHECK(s3.intervals().size() == 4);
    CHECK(s3.horizon() == doctest::Approx(12.0));
}

TEST_CASE("schedules are reproducible per stream") {
    const TreeNetwork t = build_tree(4);
    ScheduleParams p;
    p.mode = DisorderMode::static_;
    p.sigma = 5.0;
    p.t_max = 10.0;
    p.master_seed = 7;
    p.realization = 3;
    const auto a = build_schedule(t, p);
    const auto b = build_schedule(t, p);
    CHECK(a.intervals().front().detunings == b.intervals().front().detunings);
    p.realization = 4;
    const auto c = build_schedule(t, p);
    CHECK(a.intervals().front().detunings != c.intervals().front().detunings);
    p.realization = 3;
    p.master_seed = 8;
    const auto d = build_schedule(t, p);
    CHECK(a.intervals().front().detunings != d.intervals().front().detunings);
}

TEST_CASE("schedule argument checks") {
    const TreeNetwork t = build_tree(3);
    ScheduleParams p;
    p.mode = DisorderMode::dynamic;
    p.sigma = 1.0;
    p.t_max = 10.0;
    CHECK_THROWS_AS(build_schedule(t, p), ArgumentError);
    p.resample_dt = 1.0;
    p.sigma = -1.0;
    CHECK_THROWS_AS(build_schedule(t, p), ArgumentError);
    CHECK_THROWS_AS(parse_mode("chaotic"), ArgumentError);
    CHECK(parse_mode("static") == DisorderMode::static_);
    CHECK(to_string(DisorderMode::dynamic) == "dynamic");
}

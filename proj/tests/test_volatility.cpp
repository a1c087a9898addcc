#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <optional>
#include <vector>

#include "driftlab/volatility.hpp"

using namespace driftlab;

namespace {

// Feed intervals until the detector has warmed both buffers.
void warm_up(VolatilityDetector& detector, double interval, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) REQUIRE_FALSE(detector.observe(interval).has_value());
}

}  // namespace

TEST_CASE("constant intervals never signal") {
    VolatilityDetector detector({.buffer_size = 32}, 1);
    for (int i = 0; i < 5000; ++i) CHECK_FALSE(detector.observe(100.0).has_value());
}

TEST_CASE("relative mean rule decides the shift") {
    // Warm-up with 100s leaves both buffers at mean 100.
    VolatilityDetector doubling({.buffer_size = 32}, 1);
    warm_up(doubling, 100.0, 64);
    std::optional<VolatilityShift> shift;
    int fed = 0;
    while (!shift && fed < 64) {
        shift = doubling.observe(200.0);
        ++fed;
    }
    REQUIRE(shift.has_value());  // relative difference reaches 1.0 > 0.5
    CHECK(fed <= 64);            // sustained doubling caught within 2x buffer

    VolatilityDetector mild({.buffer_size = 32}, 1);
    warm_up(mild, 100.0, 64);
    for (int i = 0; i < 200; ++i) CHECK_FALSE(mild.observe(140.0).has_value());  // 0.4 <= 0.5
}

TEST_CASE("signal flushes the buffers and reseeds the reference") {
    VolatilityDetector detector({.buffer_size = 32}, 7);
    warm_up(detector, 100.0, 64);
    std::optional<VolatilityShift> shift;
    while (!shift) shift = detector.observe(250.0);
    CHECK_FALSE(shift->recent_pattern.empty());
    CHECK(detector.recent_size() == 0);
    CHECK_THROWS_AS(detector.recent_pattern(), std::domain_error);
    // Reference now holds the flushed recent pattern.
    CHECK(detector.reference_size() == shift->recent_pattern.size());
}

TEST_CASE("recent pattern preserves arrival order and slides") {
    VolatilityDetector detector({.buffer_size = 32}, 1);
    detector.observe(90.0);
    detector.observe(110.0);
    detector.observe(95.0);
    CHECK(detector.recent_pattern() == std::vector<double>{90.0, 110.0, 95.0});

    VolatilityDetector sliding({.buffer_size = 32}, 1);
    for (int i = 1; i <= 40; ++i) sliding.observe(i);
    const auto recent = sliding.recent_pattern();
    REQUIRE(recent.size() == 32);
    CHECK(recent.front() == 9.0);
    CHECK(recent.back() == 40.0);
}

TEST_CASE("shift ordinals are scale invariant") {
    const auto ordinals = [](double scale) {
        VolatilityDetector detector({.buffer_size = 16}, 5);
        std::vector<std::uint64_t> out;
        double interval = 100.0;
        for (int i = 0; i < 600; ++i) {
            if (i % 120 == 0) interval = (i / 120) % 2 == 0 ? 100.0 : 400.0;
            if (const auto s = detector.observe(interval * scale))
                out.push_back(s->at_drift_count);
        }
        return out;
    };
    const auto base = ordinals(1.0);
    CHECK_FALSE(base.empty());
    CHECK(ordinals(2.0) == base);
    CHECK(ordinals(0.5) == base);
}

TEST_CASE("argument validation") {
    VolatilityDetector detector({.buffer_size = 32}, 1);
    CHECK_THROWS_AS(detector.observe(0.0), std::domain_error);
    CHECK_THROWS_AS(detector.observe(-5.0), std::domain_error);
    CHECK_THROWS_AS(detector.recent_pattern(), std::domain_error);
    CHECK_THROWS_AS(VolatilityDetector({.buffer_size = 0}, 1), std::invalid_argument);
}

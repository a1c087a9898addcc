#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "driftlab/stream_io.hpp"

using namespace driftlab;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("driftlab_io_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("values round-trip through the shortest decimal form") {
    TempDir dir;
    const auto file = dir.path / "values.csv";
    std::mt19937_64 rng(1);
    std::normal_distribution<double> noise(0.0, 10.0);
    std::vector<double> values(5000);
    for (auto& v : values) v = noise(rng);
    write_values(file, values);
    CHECK(read_values(file) == values);
}

TEST_CASE("blank lines and comments are skipped") {
    TempDir dir;
    const auto file = dir.path / "values.csv";
    std::ofstream(file) << "# header comment\n1.5\n\n  \n2.5\n# trailing\n3.5\n";
    CHECK(read_values(file) == std::vector<double>{1.5, 2.5, 3.5});
}

TEST_CASE("malformed lines raise a parse error with the line number") {
    TempDir dir;
    const auto file = dir.path / "values.csv";
    std::ofstream(file) << "1.0\n2.0\nnot-a-number\n4.0\n";
    try {
        read_values(file);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 3);
    }
}

TEST_CASE("missing files raise an io error") {
    CHECK_THROWS_AS(read_values("/nonexistent/values.csv"), IoError);
    CHECK_THROWS_AS(read_truth("/nonexistent/truth.csv"), IoError);
}

TEST_CASE("aggregation averages fixed windows and drops the tail") {
    std::vector<double> values;
    for (int i = 0; i < 1000; ++i) values.push_back(i);
    const auto out = aggregate_values(values, 100);
    REQUIRE(out.size() == 10);
    CHECK(out[0] == doctest::Approx(49.5));
    CHECK(out[9] == doctest::Approx(949.5));

    values.push_back(9999.0);  // 1001 values: partial window dropped
    CHECK(aggregate_values(values, 100).size() == 10);
    CHECK(aggregate_values(values, 1) == values);
    CHECK_THROWS_AS(aggregate_values(values, 0), std::invalid_argument);
}

TEST_CASE("ground truth round-trips through csv") {
    TempDir dir;
    const auto file = dir.path / "truth.csv";
    GroundTruth truth;
    truth.drift_positions = {100, 2000, 54321};
    truth.drift_magnitudes = {0.5, 1.2345678901234567, 4.0};
    write_truth(file, truth);
    const auto back = read_truth(file);
    CHECK(back.drift_positions == truth.drift_positions);
    CHECK(back.drift_magnitudes == truth.drift_magnitudes);
}

TEST_CASE("events serialize to one-line json records") {
    const PressEvent drift{96, DriftPayload{std::nullopt, 1.0}};
    CHECK(event_to_json(drift) ==
          R"({"kind":"drift","index":96,"payload":{"interval":null,"post_drift_mean":1.0}})");
    const PressEvent spaced{500, DriftPayload{std::uint64_t{320}, 0.25}};
    CHECK(event_to_json(spaced) ==
          R"({"kind":"drift","index":500,"payload":{"interval":320,"post_drift_mean":0.25}})");
    const PressEvent shift{1200, ShiftPayload{PatternId{3}}};
    CHECK(event_to_json(shift) ==
          R"({"kind":"volatility_shift","index":1200,"payload":{"pattern":3}})");
    const PressEvent nomatch{1200, ShiftPayload{std::nullopt}};
    CHECK(event_to_json(nomatch) ==
          R"({"kind":"volatility_shift","index":1200,"payload":{"pattern":null}})");
    const PressEvent coefficient{1200, CoefficientPayload{1.2}};
    CHECK(event_to_json(coefficient) ==
          R"({"kind":"coefficient_update","index":1200,"payload":{"c":1.2}})");
}

TEST_CASE("format_double emits round-trippable shortest text") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.123456789, -0.0, 42.0}) {
        const auto text = format_double(v);
        CHECK(std::stod(text) == v);
    }
    CHECK(format_double(42.0) == "42");
}

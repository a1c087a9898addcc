#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "driftlab/press.hpp"
#include "driftlab/streamgen.hpp"

namespace driftlab {

/// Malformed numeric input; carries the 1-based source line.
struct ParseError : std::runtime_error {
    ParseError(const std::string& message, std::size_t line_number)
        : std::runtime_error(message), line(line_number) {}
    std::size_t line;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Reads one decimal value per line; blank lines and lines starting with
/// '#' are skipped. Throws ParseError on a malformed line, IoError when
/// the file cannot be opened.
std::vector<double> read_values(const std::filesystem::path& path);

/// Means of consecutive non-overlapping windows of `window` values; a
/// trailing partial window is dropped. window == 1 returns the input.
std::vector<double> aggregate_values(std::span<const double> values, std::size_t window);

/// One shortest-round-trip decimal per line, LF endings.
void write_values(const std::filesystem::path& path, std::span<const double> values);

/// Ground truth CSV: "index,magnitude" header plus one row per drift.
void write_truth(const std::filesystem::path& path, const GroundTruth& truth);
GroundTruth read_truth(const std::filesystem::path& path);

/// Optional companion file: one pattern-change position per row.
void write_pattern_changes(const std::filesystem::path& path, const GroundTruth& truth);

/// One-line JSON form of a detector event:
///   {"kind":"drift","index":96,"payload":{...}}
std::string event_to_json(const PressEvent& event);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double value);

}  // namespace driftlab

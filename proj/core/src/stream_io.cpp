#include "driftlab/stream_io.hpp"

#include <charconv>
#include <fstream>
#include <system_error>

#include <json.hpp>

namespace driftlab {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view text, std::size_t line_number) {
    double value = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw ParseError("malformed numeric value '" + std::string(text) + "'", line_number);
    return value;
}

}  // namespace

std::string format_double(double value) {
    char buffer[32];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

std::vector<double> read_values(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open values file: " + path.string());
    std::vector<double> values;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const auto text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        values.push_back(parse_double(text, line_number));
    }
    return values;
}

std::vector<double> aggregate_values(std::span<const double> values, std::size_t window) {
    if (window == 0) throw std::invalid_argument("aggregate window must be >= 1");
    if (window == 1) return {values.begin(), values.end()};
    std::vector<double> out;
    out.reserve(values.size() / window);
    for (std::size_t i = 0; i + window <= values.size(); i += window) {
        double sum = 0.0;
        for (std::size_t j = 0; j < window; ++j) sum += values[i + j];
        out.push_back(sum / static_cast<double>(window));
    }
    return out;
}

void write_values(const std::filesystem::path& path, std::span<const double> values) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path.string());
    for (double v : values) out << format_double(v) << '\n';
    if (!out) throw IoError("failed writing values to " + path.string());
}

void write_truth(const std::filesystem::path& path, const GroundTruth& truth) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path.string());
    out << "index,magnitude\n";
    for (std::size_t i = 0; i < truth.drift_positions.size(); ++i)
        out << truth.drift_positions[i] << ',' << format_double(truth.drift_magnitudes[i])
            << '\n';
    if (!out) throw IoError("failed writing truth to " + path.string());
}

GroundTruth read_truth(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open truth file: " + path.string());
    GroundTruth truth;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const auto text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        if (line_number == 1 && text.starts_with("index")) continue;
        const auto comma = text.find(',');
        if (comma == std::string_view::npos)
            throw ParseError("expected 'index,magnitude' row", line_number);
        std::uint64_t index = 0;
        const auto head = trim(text.substr(0, comma));
        const auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), index);
        if (ec != std::errc{} || ptr != head.data() + head.size())
            throw ParseError("malformed drift index '" + std::string(head) + "'", line_number);
        truth.drift_positions.push_back(index);
        truth.drift_magnitudes.push_back(parse_double(trim(text.substr(comma + 1)), line_number));
    }
    return truth;
}

void write_pattern_changes(const std::filesystem::path& path, const GroundTruth& truth) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path.string());
    out << "index\n";
    for (auto p : truth.pattern_change_positions) out << p << '\n';
    if (!out) throw IoError("failed writing pattern changes to " + path.string());
}

std::string event_to_json(const PressEvent& event) {
    nlohmann::ordered_json doc;
    switch (event.kind()) {
        case PressEvent::Kind::Drift: {
            const auto& payload = std::get<DriftPayload>(event.payload);
            doc["kind"] = "drift";
            doc["index"] = event.index;
            if (payload.interval)
                doc["payload"]["interval"] = *payload.interval;
            else
                doc["payload"]["interval"] = nullptr;
            doc["payload"]["post_drift_mean"] = payload.post_drift_mean;
            break;
        }
        case PressEvent::Kind::VolatilityShift: {
            const auto& payload = std::get<ShiftPayload>(event.payload);
            doc["kind"] = "volatility_shift";
            doc["index"] = event.index;
            if (payload.pattern)
                doc["payload"]["pattern"] = *payload.pattern;
            else
                doc["payload"]["pattern"] = nullptr;
            break;
        }
        case PressEvent::Kind::CoefficientUpdate: {
            const auto& payload = std::get<CoefficientPayload>(event.payload);
            doc["kind"] = "coefficient_update";
            doc["index"] = event.index;
            doc["payload"]["c"] = payload.c;
            break;
        }
    }
    return doc.dump();
}

}  // namespace driftlab

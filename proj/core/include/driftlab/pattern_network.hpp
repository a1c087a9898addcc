#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "driftlab/stats.hpp"

namespace driftlab {

using PatternId = std::uint32_t;

struct NetworkConfig {
    /// Significance level for the KS pattern-matching test.
    double ks_alpha = 0.05;
    /// Interval capacity per pattern node (oldest evicted).
    std::size_t pattern_capacity = 100;
    /// Capacity of each per-edge severity reservoir.
    std::size_t reservoir_capacity = 100;
};

struct PatternNode {
    PatternId id = 0;
    std::deque<double> intervals;
};

/// Directed graph of volatility patterns.
///
/// Nodes hold bounded interval samples identifying a recurring volatility
/// regime. Edges carry transition counts (frequency-estimated transition
/// probabilities) and a severity reservoir fed from the severity buffer
/// at each volatility shift. predicted_severity() is the
/// transition-probability-weighted mean of normalized edge severities
/// over a node's successors.
class PatternNetwork {
public:
    PatternNetwork(NetworkConfig config, std::uint64_t seed);

    /// Closest node whose KS test against `recent` is not rejected at
    /// ks_alpha (smallest statistic, ties to the oldest id), or nothing
    /// when every node rejects or the network is empty.
    std::optional<PatternId> match_pattern(std::span<const double> recent) const;

    /// Training-phase shift handler: matches or creates the pattern,
    /// updates the transition edge from the previous pattern, moves the
    /// severity buffer into that edge's reservoir, and makes the pattern
    /// current. Returns the matched or created id.
    PatternId on_volatility_shift(std::span<const double> recent);

    /// count(from,to) / total outgoing count(from); 0 when `from` has no
    /// outgoing transitions. Throws std::out_of_range for an unknown from.
    double transition_prob(PatternId from, PatternId to) const;

    /// phi: expected normalized severity of incoming drifts from `current`,
    /// in [0,1]. Successors with empty reservoirs contribute 0; a node
    /// with no successors yields 0. Throws std::out_of_range for an
    /// unknown node.
    double predicted_severity(PatternId current, double running_max) const;

    /// Appends one raw severity to the buffer (flushed at the next shift).
    void record_severity(double raw);

    std::size_t node_count() const { return nodes_.size(); }
    const PatternNode& node(PatternId id) const;
    std::optional<PatternId> current() const { return current_; }
    std::optional<PatternId> previous() const { return previous_; }
    std::size_t severity_buffer_size() const { return severity_buffer_.size(); }
    const NetworkConfig& config() const { return config_; }

    /// Successor ids of `from` (nodes with a positive transition count).
    std::vector<PatternId> successors(PatternId from) const;
    std::uint64_t transition_count(PatternId from, PatternId to) const;
    const Reservoir* edge_reservoir(PatternId from, PatternId to) const;

    /// Lossless JSON snapshot (nodes, edges with counts, reservoir
    /// samples, severity buffer, current/previous, running_max).
    std::string to_json(double running_max) const;

    /// Rebuilds a network plus its running_max from to_json output.
    /// Throws std::invalid_argument on a malformed document.
    static std::pair<PatternNetwork, double> from_json(const std::string& text,
                                                       std::uint64_t seed);

private:
    void require_node(PatternId id) const;

    NetworkConfig config_;
    std::vector<PatternNode> nodes_;
    std::map<std::pair<PatternId, PatternId>, std::uint64_t> transition_counts_;
    std::map<std::pair<PatternId, PatternId>, Reservoir> reservoirs_;
    std::optional<PatternId> current_;
    std::optional<PatternId> previous_;
    std::vector<double> severity_buffer_;
    std::mt19937_64 rng_;
};

}  // namespace driftlab

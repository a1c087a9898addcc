#include "driftlab/pattern_network.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

#include "driftlab/severity.hpp"

namespace driftlab {

PatternNetwork::PatternNetwork(NetworkConfig config, std::uint64_t seed)
    : config_(config), rng_(seed) {
    if (!(config_.ks_alpha > 0.0 && config_.ks_alpha < 1.0))
        throw std::invalid_argument("NetworkConfig: ks_alpha must lie in (0,1)");
    if (config_.pattern_capacity == 0 || config_.reservoir_capacity == 0)
        throw std::invalid_argument("NetworkConfig: capacities must be >= 1");
}

void PatternNetwork::require_node(PatternId id) const {
    if (id >= nodes_.size()) throw std::out_of_range("pattern network: unknown node id");
}

const PatternNode& PatternNetwork::node(PatternId id) const {
    require_node(id);
    return nodes_[id];
}

std::optional<PatternId> PatternNetwork::match_pattern(std::span<const double> recent) const {
    if (recent.empty()) throw std::domain_error("match_pattern: recent sample is empty");

    std::optional<PatternId> best;
    double best_d = 0.0;
    for (const auto& node : nodes_) {
        const std::vector<double> sample(node.intervals.begin(), node.intervals.end());
        const double d = ks_statistic(recent, sample);
        if (!ks_same_distribution(d, recent.size(), sample.size(), config_.ks_alpha)) continue;
        if (!best || d < best_d) {
            best = node.id;
            best_d = d;
        }
        // Ties keep the earlier (oldest) id since nodes_ is in creation order.
    }
    return best;
}

PatternId PatternNetwork::on_volatility_shift(std::span<const double> recent) {
    const std::optional<PatternId> matched = match_pattern(recent);

    PatternId pid;
    if (matched) {
        pid = *matched;
        auto& intervals = nodes_[pid].intervals;
        for (double v : recent) {
            intervals.push_back(v);
            if (intervals.size() > config_.pattern_capacity) intervals.pop_front();
        }
    } else {
        pid = static_cast<PatternId>(nodes_.size());
        PatternNode node;
        node.id = pid;
        for (double v : recent) {
            node.intervals.push_back(v);
            if (node.intervals.size() > config_.pattern_capacity) node.intervals.pop_front();
        }
        nodes_.push_back(std::move(node));
    }

    if (current_) {
        const auto key = std::make_pair(*current_, pid);
        ++transition_counts_[key];
        auto [it, inserted] = reservoirs_.try_emplace(key, config_.reservoir_capacity);
        for (double sv : severity_buffer_) it->second.offer(sv, rng_);
    }
    severity_buffer_.clear();

    previous_ = current_;
    current_ = pid;
    return pid;
}

double PatternNetwork::transition_prob(PatternId from, PatternId to) const {
    require_node(from);
    std::uint64_t total = 0;
    std::uint64_t hit = 0;
    for (const auto& [key, count] : transition_counts_) {
        if (key.first != from) continue;
        total += count;
        if (key.second == to) hit = count;
    }
    if (total == 0) return 0.0;
    return static_cast<double>(hit) / static_cast<double>(total);
}

std::vector<PatternId> PatternNetwork::successors(PatternId from) const {
    require_node(from);
    std::vector<PatternId> out;
    for (const auto& [key, count] : transition_counts_)
        if (key.first == from && count > 0) out.push_back(key.second);
    return out;
}

std::uint64_t PatternNetwork::transition_count(PatternId from, PatternId to) const {
    const auto it = transition_counts_.find({from, to});
    return it == transition_counts_.end() ? 0 : it->second;
}

const Reservoir* PatternNetwork::edge_reservoir(PatternId from, PatternId to) const {
    const auto it = reservoirs_.find({from, to});
    return it == reservoirs_.end() ? nullptr : &it->second;
}

double PatternNetwork::predicted_severity(PatternId current, double running_max) const {
    require_node(current);
    std::uint64_t total = 0;
    for (const auto& [key, count] : transition_counts_)
        if (key.first == current) total += count;
    if (total == 0) return 0.0;

    double phi = 0.0;
    for (const auto& [key, count] : transition_counts_) {
        if (key.first != current || count == 0) continue;
        const auto res = reservoirs_.find(key);
        if (res == reservoirs_.end() || res->second.empty()) continue;
        double norm_sum = 0.0;
        for (double sv : res->second.items()) norm_sum += normalize_severity(sv, running_max);
        const double prob = static_cast<double>(count) / static_cast<double>(total);
        phi += prob * (norm_sum / static_cast<double>(res->second.size()));
    }
    // Accumulation can land a hair above 1; the contract is [0, 1].
    return std::clamp(phi, 0.0, 1.0);
}

void PatternNetwork::record_severity(double raw) {
    if (raw < 0.0) throw std::domain_error("record_severity: severity must be >= 0");
    severity_buffer_.push_back(raw);
}

std::string PatternNetwork::to_json(double running_max) const {
    nlohmann::ordered_json doc;
    doc["ks_alpha"] = config_.ks_alpha;
    doc["pattern_capacity"] = config_.pattern_capacity;
    doc["reservoir_capacity"] = config_.reservoir_capacity;
    doc["running_max"] = running_max;
    if (current_)
        doc["current"] = *current_;
    else
        doc["current"] = nullptr;
    if (previous_)
        doc["previous"] = *previous_;
    else
        doc["previous"] = nullptr;
    doc["severity_buffer"] = severity_buffer_;

    auto& nodes = doc["nodes"] = nlohmann::ordered_json::array();
    for (const auto& node : nodes_) {
        nlohmann::ordered_json n;
        n["id"] = node.id;
        n["intervals"] = std::vector<double>(node.intervals.begin(), node.intervals.end());
        nodes.push_back(std::move(n));
    }

    auto& edges = doc["edges"] = nlohmann::ordered_json::array();
    for (const auto& [key, count] : transition_counts_) {
        nlohmann::ordered_json e;
        e["from"] = key.first;
        e["to"] = key.second;
        e["count"] = count;
        const auto res = reservoirs_.find(key);
        if (res != reservoirs_.end()) {
            e["reservoir"]["seen"] = res->second.seen();
            e["reservoir"]["items"] =
                std::vector<double>(res->second.items().begin(), res->second.items().end());
        }
        edges.push_back(std::move(e));
    }
    return doc.dump(2);
}

std::pair<PatternNetwork, double> PatternNetwork::from_json(const std::string& text,
                                                            std::uint64_t seed) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("network snapshot: ") + e.what());
    }
    try {
        NetworkConfig config;
        config.ks_alpha = doc.at("ks_alpha").get<double>();
        config.pattern_capacity = doc.at("pattern_capacity").get<std::size_t>();
        config.reservoir_capacity = doc.at("reservoir_capacity").get<std::size_t>();

        PatternNetwork net(config, seed);
        for (const auto& n : doc.at("nodes")) {
            PatternNode node;
            node.id = n.at("id").get<PatternId>();
            if (node.id != net.nodes_.size())
                throw std::invalid_argument("network snapshot: node ids must be sequential");
            const auto intervals = n.at("intervals").get<std::vector<double>>();
            node.intervals.assign(intervals.begin(), intervals.end());
            net.nodes_.push_back(std::move(node));
        }
        for (const auto& e : doc.at("edges")) {
            const auto from = e.at("from").get<PatternId>();
            const auto to = e.at("to").get<PatternId>();
            net.require_node(from);
            net.require_node(to);
            const auto key = std::make_pair(from, to);
            net.transition_counts_[key] = e.at("count").get<std::uint64_t>();
            if (e.contains("reservoir")) {
                Reservoir r(config.reservoir_capacity);
                r.restore(e.at("reservoir").at("items").get<std::vector<double>>(),
                          e.at("reservoir").at("seen").get<std::uint64_t>());
                net.reservoirs_.emplace(key, std::move(r));
            }
        }
        if (!doc.at("current").is_null()) {
            net.current_ = doc.at("current").get<PatternId>();
            net.require_node(*net.current_);
        }
        if (!doc.at("previous").is_null()) {
            net.previous_ = doc.at("previous").get<PatternId>();
            net.require_node(*net.previous_);
        }
        net.severity_buffer_ = doc.at("severity_buffer").get<std::vector<double>>();
        const double running_max = doc.at("running_max").get<double>();
        return {std::move(net), running_max};
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("network snapshot: ") + e.what());
    }
}

}  // namespace driftlab

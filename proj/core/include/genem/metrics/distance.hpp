#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "genem/domain/types.hpp"
#include "genem/robots/manifest.hpp"

namespace genem::metrics {

class EmptyTrajectory : public Error {
public:
    EmptyTrajectory() : Error("EmptyTrajectory", "trajectory has no frames") {}
};

class ChannelMismatch : public Error {
public:
    explicit ChannelMismatch(const std::string& message) : Error("ChannelMismatch", message) {}
};

struct ChannelRange {
    double min = 0.0;
    double max = 1.0;
};

// Parameters of the expressive distance. Channels without a weight count
// with weight 0.
struct MetricConfig {
    std::map<std::string, double> weights;
    std::map<std::string, ChannelRange> ranges;
    std::set<std::string> angular;  // compared by wrapped difference / 360
    double event_weight = 1.0;

    // Throws PreconditionError: no positive weight, negative weight, or degenerate range.
    void check() const;
};

// All channels weight 1, ranges and angular flags from the manifest, w_e = 1.
MetricConfig default_metric_config(const robots::EmbodimentManifest& manifest);

// Overrides a base config from {"weights": {...}, "event_weight": x, "ranges": {ch: [min, max]}}.
MetricConfig metric_config_from_json(const nlohmann::json& j, MetricConfig base);
nlohmann::json to_json(const MetricConfig& cfg);

// Weighted Euclidean distance between two frames after normalization.
double frame_cost(const std::vector<std::string>& channels, const std::vector<double>& a, const std::vector<double>& b,
                  const MetricConfig& cfg);

// DTW with steps (1,0), (0,1), (1,1): the minimal sum of frame costs over a
// monotone alignment path from the first to the last frames.
double dtw_distance(const Trajectory& a, const Trajectory& b, const MetricConfig& cfg);

// Levenshtein distance over (kind, payload) tokens in time order.
std::size_t event_edit_distance(const std::vector<TrajectoryEvent>& a, const std::vector<TrajectoryEvent>& b);

struct ExpressiveDistance {
    double dtw = 0.0;
    std::size_t edit = 0;
    double total = 0.0;  // dtw + w_e * edit
};

// Throws ChannelMismatch when the trajectories carry different channel sets.
ExpressiveDistance expressive_distance(const Trajectory& candidate, const Trajectory& expert, const MetricConfig& cfg);

nlohmann::json to_json(const ExpressiveDistance& d);

}  // namespace genem::metrics

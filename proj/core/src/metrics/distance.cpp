#include "genem/metrics/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>


namespace genem::metrics {

void MetricConfig::check() const {
    bool positive = false;
    for (const auto& [name, w] : weights) {
        if (w < 0 || !std::isfinite(w)) throw PreconditionError("weight of '" + name + "' must be a nonnegative number");
        positive = positive || w > 0;
    }
    if (!positive) throw PreconditionError("metric config needs at least one positive channel weight");
    for (const auto& [name, r] : ranges)
        if (!(r.min < r.max)) throw PreconditionError("range of '" + name + "' is degenerate");
    if (event_weight < 0) throw PreconditionError("event weight must be nonnegative");
}

MetricConfig default_metric_config(const robots::EmbodimentManifest& manifest) {
    MetricConfig cfg;
    for (const auto& c : manifest.channels) {
        cfg.weights[c.name] = 1.0;
        cfg.ranges[c.name] = {c.min, c.max};
        if (c.angular) cfg.angular.insert(c.name);
    }
    return cfg;
}

MetricConfig metric_config_from_json(const nlohmann::json& j, MetricConfig base) {
    try {
        if (j.contains("weights"))
            for (const auto& [name, w] : j.at("weights").items()) base.weights[name] = w.get<double>();
        if (j.contains("ranges"))
            for (const auto& [name, r] : j.at("ranges").items()) base.ranges[name] = {r.at(0).get<double>(), r.at(1).get<double>()};
        if (j.contains("angular")) base.angular = j.at("angular").get<std::set<std::string>>();
        base.event_weight = j.value("event_weight", base.event_weight);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("metric config: ") + e.what());
    }
    base.check();
    return base;
}

nlohmann::json to_json(const MetricConfig& cfg) {
    nlohmann::json ranges = nlohmann::json::object();
    for (const auto& [name, r] : cfg.ranges) ranges[name] = {r.min, r.max};
    return {{"weights", cfg.weights}, {"ranges", ranges}, {"angular", cfg.angular}, {"event_weight", cfg.event_weight}};
}

namespace {

struct Prepared {
    std::vector<double> weight;
    std::vector<double> scale;  // 1 / span
    std::vector<bool> angular;
};

Prepared prepare(const std::vector<std::string>& channels, const MetricConfig& cfg) {
    Prepared p;
    for (const auto& name : channels) {
        const auto w = cfg.weights.find(name);
        p.weight.push_back(w == cfg.weights.end() ? 0.0 : w->second);
        const bool ang = cfg.angular.count(name) > 0;
        p.angular.push_back(ang);
        if (ang) {
            p.scale.push_back(1.0 / 360.0);
            continue;
        }
        const auto r = cfg.ranges.find(name);
        if (r == cfg.ranges.end()) {
            if (p.weight.back() > 0) throw PreconditionError("no normalization range for channel '" + name + "'");
            p.scale.push_back(0.0);
        } else {
            p.scale.push_back(1.0 / (r->second.max - r->second.min));
        }
    }
    return p;
}

double cost(const Prepared& p, const std::vector<double>& a, const std::vector<double>& b) {
    double sum = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) {
        if (p.weight[c] == 0.0) continue;
        // |a-b| keeps the cost exactly symmetric; wrapping a signed
        // difference rounds differently for d and -d.
        double d = std::abs(a[c] - b[c]);
        if (p.angular[c]) {
            d = std::fmod(d, 360.0);
            if (d > 180.0) d = 360.0 - d;
        }
        d *= p.scale[c];
        sum += p.weight[c] * d * d;
    }
    return std::sqrt(sum);
}

void require_same_channels(const Trajectory& a, const Trajectory& b) {
    if (a.channels != b.channels)
        throw ChannelMismatch("cannot compare a " + (a.embodiment.empty() ? std::string("?") : a.embodiment) +
                              " trajectory with a " + (b.embodiment.empty() ? std::string("?") : b.embodiment) +
                              " trajectory: channel sets differ");
}

}  // namespace

double frame_cost(const std::vector<std::string>& channels, const std::vector<double>& a, const std::vector<double>& b,
                  const MetricConfig& cfg) {
    return cost(prepare(channels, cfg), a, b);
}

double dtw_distance(const Trajectory& a, const Trajectory& b, const MetricConfig& cfg) {
    if (a.frames.empty() || b.frames.empty()) throw EmptyTrajectory();
    require_same_channels(a, b);
    const auto p = prepare(a.channels, cfg);
    const std::size_t n = a.frames.size(), m = b.frames.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    // Two rows of the cumulative cost table.
    std::vector<double> prev(m, inf), cur(m, inf);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const double c = cost(p, a.frames[i].values, b.frames[j].values);
            double best;
            if (i == 0 && j == 0)
                best = 0.0;
            else
                best = std::min({i > 0 ? prev[j] : inf, j > 0 ? cur[j - 1] : inf, i > 0 && j > 0 ? prev[j - 1] : inf});
            cur[j] = c + best;
        }
        std::swap(prev, cur);
    }
    return prev[m - 1];
}

std::size_t event_edit_distance(const std::vector<TrajectoryEvent>& a, const std::vector<TrajectoryEvent>& b) {
    const auto tokens = [](std::vector<TrajectoryEvent> v) {
        std::stable_sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.t < y.t; });
        std::vector<std::pair<EventKind, std::string>> out;
        for (auto& e : v) out.emplace_back(e.kind, std::move(e.payload));
        return out;
    };
    const auto x = tokens(a), y = tokens(b);
    std::vector<std::size_t> prev(y.size() + 1), cur(y.size() + 1);
    for (std::size_t j = 0; j <= y.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= x.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= y.size(); ++j)
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x[i - 1] == y[j - 1] ? 0 : 1)});
        std::swap(prev, cur);
    }
    return prev[y.size()];
}

ExpressiveDistance expressive_distance(const Trajectory& candidate, const Trajectory& expert, const MetricConfig& cfg) {
    require_same_channels(candidate, expert);
    ExpressiveDistance d;
    d.dtw = dtw_distance(candidate, expert, cfg);
    d.edit = event_edit_distance(candidate.events, expert.events);
    d.total = d.dtw + cfg.event_weight * static_cast<double>(d.edit);
    return d;
}

nlohmann::json to_json(const ExpressiveDistance& d) { return {{"dtw", d.dtw}, {"edit", d.edit}, {"total", d.total}}; }

}  // namespace genem::metrics

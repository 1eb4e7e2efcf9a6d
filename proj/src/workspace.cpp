#include "ddrive/workspace.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace ddrive {

using nlohmann::json;

bool Workspace::clear_of_obstacles(const Vec2& p) const {
    for (const Obstacle& obs : obstacles) {
        if (distance(p, obs.center) <= obs.radius) return false;
    }
    return true;
}

void Workspace::validate() const {
    if (!(x_min < x_max)) throw std::invalid_argument("bounds: x_min must be < x_max");
    if (!(y_min < y_max)) throw std::invalid_argument("bounds: y_min must be < y_max");
    for (std::size_t j = 0; j < obstacles.size(); ++j) {
        const Obstacle& obs = obstacles[j];
        if (!(obs.radius > 0.0) || !std::isfinite(obs.radius)) {
            throw std::invalid_argument("obstacle " + std::to_string(j + 1) +
                                        ": radius must be > 0");
        }
        if (!std::isfinite(obs.center.x) || !std::isfinite(obs.center.y)) {
            throw std::invalid_argument("obstacle " + std::to_string(j + 1) +
                                        ": center must be finite");
        }
    }
    if (!contains(start)) throw std::invalid_argument("start outside bounds");
    if (!contains(target)) throw std::invalid_argument("target outside bounds");
    for (std::size_t j = 0; j < obstacles.size(); ++j) {
        if (distance(start, obstacles[j].center) <= obstacles[j].radius) {
            throw std::invalid_argument("start inside obstacle " + std::to_string(j + 1));
        }
        if (distance(target, obstacles[j].center) <= obstacles[j].radius) {
            throw std::invalid_argument("target inside obstacle " + std::to_string(j + 1));
        }
    }
}

Workspace load_workspace(const std::string& document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("workspace parse error: ") + e.what());
    }
    const int version = doc.value("version", 1);
    if (version != 1) {
        throw std::runtime_error("unsupported workspace schema version " +
                                 std::to_string(version));
    }
    Workspace ws;
    try {
        const json& b = doc.at("bounds");
        ws.x_min = b.at("x_min").get<double>();
        ws.x_max = b.at("x_max").get<double>();
        ws.y_min = b.at("y_min").get<double>();
        ws.y_max = b.at("y_max").get<double>();
        ws.start = {doc.at("start").at(0).get<double>(), doc.at("start").at(1).get<double>()};
        ws.target = {doc.at("target").at(0).get<double>(), doc.at("target").at(1).get<double>()};
        for (const json& o : doc.value("obstacles", json::array())) {
            Obstacle obs;
            obs.center = {o.at("center").at(0).get<double>(), o.at("center").at(1).get<double>()};
            obs.radius = o.at("radius").get<double>();
            ws.obstacles.push_back(obs);
        }
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("workspace schema error: ") + e.what());
    }
    ws.validate();
    return ws;
}

std::string serialize_workspace(const Workspace& ws) {
    json doc;
    doc["version"] = 1;
    doc["bounds"] = {{"x_min", ws.x_min}, {"x_max", ws.x_max},
                     {"y_min", ws.y_min}, {"y_max", ws.y_max}};
    doc["start"] = {ws.start.x, ws.start.y};
    doc["target"] = {ws.target.x, ws.target.y};
    doc["obstacles"] = json::array();
    for (const Obstacle& o : ws.obstacles) {
        doc["obstacles"].push_back({{"center", {o.center.x, o.center.y}},
                                    {"radius", o.radius}});
    }
    return doc.dump(2) + "\n";
}

Workspace random_workspace(const RandomWorkspaceConfig& cfg) {
    if (cfg.obstacle_count_min < 1 || cfg.obstacle_count_max < cfg.obstacle_count_min) {
        throw std::invalid_argument("random_workspace: bad obstacle count range");
    }
    if (!(cfg.radius_min > 0.0) || cfg.radius_max < cfg.radius_min) {
        throw std::invalid_argument("random_workspace: bad radius range");
    }
    Rng rng(cfg.seed);
    Workspace ws;
    ws.x_min = cfg.x_min;
    ws.x_max = cfg.x_max;
    ws.y_min = cfg.y_min;
    ws.y_max = cfg.y_max;

    const int n = rng.uniform_int(cfg.obstacle_count_min, cfg.obstacle_count_max);
    ws.obstacles.reserve(n);
    for (int j = 0; j < n; ++j) {
        Obstacle obs;
        obs.center.x = rng.uniform(cfg.center_x_min, cfg.center_x_max);
        obs.center.y = rng.uniform(cfg.center_y_min, cfg.center_y_max);
        obs.radius = rng.uniform(cfg.radius_min, cfg.radius_max);
        ws.obstacles.push_back(obs);  // overlaps allowed
    }

    auto sample_clear_point = [&](const char* what) {
        for (int attempt = 0; attempt < 10000; ++attempt) {
            Vec2 p{rng.uniform(ws.x_min, ws.x_max), rng.uniform(ws.y_min, ws.y_max)};
            if (ws.clear_of_obstacles(p)) return p;
        }
        throw std::runtime_error(std::string("random_workspace: could not place ") + what +
                                 " outside obstacles after 10000 attempts");
    };
    ws.start = sample_clear_point("start");
    ws.target = sample_clear_point("target");
    ws.validate();
    return ws;
}

double distance_to_obstacle(double x, double y, const Obstacle& obs) {
    return std::hypot(x - obs.center.x, y - obs.center.y);
}

}  // namespace ddrive

#include "ddrive/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ddrive {

using nlohmann::json;

namespace {

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void check_keys(const json& obj, const char* section,
                std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        bool ok = false;
        for (const char* a : allowed) {
            if (key == a) { ok = true; break; }
        }
        if (!ok) {
            throw std::runtime_error("config: unknown key \"" + key + "\" in section " + section);
        }
    }
}

PidGains read_gains(const json& j, const PidGains& fallback) {
    if (j.is_null()) return fallback;
    if (!j.is_array() || j.size() != 3) {
        throw std::runtime_error("config: PID gains must be [kp, ki, kd]");
    }
    return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

void read_range(const json& j, const char* name, double& lo, double& hi) {
    if (j.is_null()) return;
    if (!j.is_array() || j.size() != 2) {
        throw std::runtime_error(std::string("config: ") + name + " must be [min, max]");
    }
    lo = j.at(0).get<double>();
    hi = j.at(1).get<double>();
}

void apply_preset(ExperimentConfig& cfg) {
    if (cfg.preset == "simulation" || cfg.preset.empty()) return;
    if (cfg.preset == "experimental") {
        cfg.controller.control_dt = 1.5;
        cfg.spline.path_time = 30.0;
        if (cfg.workspace.has_value()) {
            for (Obstacle& obs : cfg.workspace->obstacles) obs.radius = 0.05;
        }
        return;
    }
    throw std::runtime_error("config: unknown preset \"" + cfg.preset + "\"");
}

}  // namespace

ExperimentConfig load_config_text(const std::string& text,
                                  const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("config parse error: ") + e.what());
    }
    if (doc.contains("resolved_config")) {
        doc = doc.at("resolved_config");  // re-running from a manifest
    }
    check_keys(doc, "top level",
               {"preset", "workspace", "random_workspace", "spline", "cost", "pso",
                "controller", "robot", "sim", "sweep"});

    ExperimentConfig cfg;
    try {
        cfg.preset = doc.value("preset", std::string("simulation"));

        if (doc.contains("workspace")) {
            const json& w = doc.at("workspace");
            if (w.contains("file")) {
                cfg.workspace =
                    load_workspace(read_text_file(base_dir / w.at("file").get<std::string>()));
            } else {
                cfg.workspace = load_workspace(w.dump());
            }
        }
        if (doc.contains("random_workspace")) {
            const json& r = doc.at("random_workspace");
            check_keys(r, "random_workspace",
                       {"obstacle_count", "radius", "center_x", "center_y", "bounds_x", "bounds_y"});
            RandomWorkspaceConfig rc;
            if (r.contains("obstacle_count")) {
                rc.obstacle_count_min = r.at("obstacle_count").at(0).get<int>();
                rc.obstacle_count_max = r.at("obstacle_count").at(1).get<int>();
            }
            read_range(r.value("radius", json()), "radius", rc.radius_min, rc.radius_max);
            read_range(r.value("center_x", json()), "center_x", rc.center_x_min, rc.center_x_max);
            read_range(r.value("center_y", json()), "center_y", rc.center_y_min, rc.center_y_max);
            read_range(r.value("bounds_x", json()), "bounds_x", rc.x_min, rc.x_max);
            read_range(r.value("bounds_y", json()), "bounds_y", rc.y_min, rc.y_max);
            cfg.random_workspace = rc;
        }

        if (doc.contains("spline")) {
            const json& s = doc.at("spline");
            check_keys(s, "spline", {"smoothness_k", "sample_count", "path_time"});
            cfg.spline.smoothness_k = s.value("smoothness_k", cfg.spline.smoothness_k);
            cfg.spline.sample_count = s.value("sample_count", cfg.spline.sample_count);
            cfg.spline.path_time = s.value("path_time", cfg.spline.path_time);
        }
        if (doc.contains("cost")) {
            const json& c = doc.at("cost");
            check_keys(c, "cost",
                       {"beta_p", "v_max", "a_max", "use_acceleration_constraint",
                        "obstacle_inflation"});
            cfg.cost.beta_p = c.value("beta_p", cfg.cost.beta_p);
            cfg.cost.v_max = c.value("v_max", cfg.cost.v_max);
            cfg.cost.a_max = c.value("a_max", cfg.cost.a_max);
            cfg.cost.use_acceleration_constraint =
                c.value("use_acceleration_constraint", cfg.cost.use_acceleration_constraint);
            cfg.cost.obstacle_inflation = c.value("obstacle_inflation", cfg.cost.obstacle_inflation);
        }
        if (doc.contains("pso")) {
            const json& p = doc.at("pso");
            check_keys(p, "pso",
                       {"iter_max", "pop_max", "inertia_w", "c1", "c2", "n_control_points",
                        "seed", "convergence_rel_tol", "lateral_margin", "inertia_damping"});
            cfg.pso.iter_max = p.value("iter_max", cfg.pso.iter_max);
            cfg.pso.pop_max = p.value("pop_max", cfg.pso.pop_max);
            cfg.pso.inertia_w = p.value("inertia_w", cfg.pso.inertia_w);
            cfg.pso.c1 = p.value("c1", cfg.pso.c1);
            cfg.pso.c2 = p.value("c2", cfg.pso.c2);
            cfg.pso.n_control_points = p.value("n_control_points", cfg.pso.n_control_points);
            cfg.pso.seed = p.value("seed", cfg.pso.seed);
            cfg.pso.convergence_rel_tol =
                p.value("convergence_rel_tol", cfg.pso.convergence_rel_tol);
            cfg.pso.lateral_margin = p.value("lateral_margin", cfg.pso.lateral_margin);
            cfg.pso.inertia_damping = p.value("inertia_damping", cfg.pso.inertia_damping);
        }
        if (doc.contains("controller")) {
            const json& c = doc.at("controller");
            check_keys(c, "controller",
                       {"pid_v", "pid_theta", "pid_wheel_l", "pid_wheel_r", "control_dt",
                        "limits_v", "limits_theta", "derivative_filter_coeff"});
            cfg.controller.pid_v = read_gains(c.value("pid_v", json()), cfg.controller.pid_v);
            cfg.controller.pid_theta =
                read_gains(c.value("pid_theta", json()), cfg.controller.pid_theta);
            cfg.controller.pid_wheel_l =
                read_gains(c.value("pid_wheel_l", json()), cfg.controller.pid_wheel_l);
            cfg.controller.pid_wheel_r =
                read_gains(c.value("pid_wheel_r", json()), cfg.controller.pid_wheel_r);
            cfg.controller.control_dt = c.value("control_dt", cfg.controller.control_dt);
            read_range(c.value("limits_v", json()), "limits_v", cfg.controller.limits_v.min,
                       cfg.controller.limits_v.max);
            read_range(c.value("limits_theta", json()), "limits_theta",
                       cfg.controller.limits_theta.min, cfg.controller.limits_theta.max);
            cfg.controller.derivative_filter_coeff =
                c.value("derivative_filter_coeff", cfg.controller.derivative_filter_coeff);
        }
        if (doc.contains("robot")) {
            const json& r = doc.at("robot");
            check_keys(r, "robot",
                       {"mass_m", "inertia_J", "friction_F", "wheel_radius_r", "wheel_base_D",
                        "voltage_max_U", "wheel_load_force"});
            cfg.robot.mass_m = r.value("mass_m", cfg.robot.mass_m);
            cfg.robot.inertia_J = r.value("inertia_J", cfg.robot.inertia_J);
            cfg.robot.friction_F = r.value("friction_F", cfg.robot.friction_F);
            cfg.robot.wheel_radius_r = r.value("wheel_radius_r", cfg.robot.wheel_radius_r);
            cfg.robot.wheel_base_D = r.value("wheel_base_D", cfg.robot.wheel_base_D);
            cfg.robot.voltage_max_U = r.value("voltage_max_U", cfg.robot.voltage_max_U);
            cfg.robot.wheel_load_force = r.value("wheel_load_force", cfg.robot.wheel_load_force);
            cfg.robot.validate();
        }
        if (doc.contains("sim")) {
            const json& s = doc.at("sim");
            check_keys(s, "sim",
                       {"physics_dt", "apply_pwm", "settle_time", "join_tolerance",
                        "max_approach_time", "approach_v_max", "start_pose", "runs",
                        "base_seed"});
            cfg.sim.physics_dt = s.value("physics_dt", cfg.sim.physics_dt);
            cfg.sim.apply_pwm = s.value("apply_pwm", cfg.sim.apply_pwm);
            cfg.sim.settle_time = s.value("settle_time", cfg.sim.settle_time);
            cfg.sim.approach.join_tolerance =
                s.value("join_tolerance", cfg.sim.approach.join_tolerance);
            cfg.sim.approach.max_approach_time =
                s.value("max_approach_time", cfg.sim.approach.max_approach_time);
            cfg.sim.approach.v_max = s.value("approach_v_max", cfg.sim.approach.v_max);
            if (s.contains("start_pose")) {
                const json& p = s.at("start_pose");
                cfg.sim.start_pose = Pose{p.at(0).get<double>(), p.at(1).get<double>(),
                                          p.at(2).get<double>()};
            }
            cfg.runs = s.value("runs", cfg.runs);
            cfg.base_seed = s.value("base_seed", cfg.base_seed);
        }
        if (doc.contains("sweep")) {
            const json& s = doc.at("sweep");
            check_keys(s, "sweep", {"betas"});
            if (s.contains("betas")) {
                cfg.betas = s.at("betas").get<std::vector<double>>();
            }
        }
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("config schema error: ") + e.what());
    }

    apply_preset(cfg);
    return cfg;
}

ExperimentConfig load_config_file(const std::filesystem::path& file) {
    return load_config_text(read_text_file(file), file.parent_path());
}

json config_to_json(const ExperimentConfig& cfg) {
    json doc;
    doc["preset"] = cfg.preset;
    if (cfg.workspace.has_value()) {
        doc["workspace"] = json::parse(serialize_workspace(*cfg.workspace));
    }
    if (cfg.random_workspace.has_value()) {
        const RandomWorkspaceConfig& r = *cfg.random_workspace;
        doc["random_workspace"] = {
            {"obstacle_count", {r.obstacle_count_min, r.obstacle_count_max}},
            {"radius", {r.radius_min, r.radius_max}},
            {"center_x", {r.center_x_min, r.center_x_max}},
            {"center_y", {r.center_y_min, r.center_y_max}},
            {"bounds_x", {r.x_min, r.x_max}},
            {"bounds_y", {r.y_min, r.y_max}}};
    }
    doc["spline"] = {{"smoothness_k", cfg.spline.smoothness_k},
                     {"sample_count", cfg.spline.sample_count},
                     {"path_time", cfg.spline.path_time}};
    doc["cost"] = {{"beta_p", cfg.cost.beta_p},
                   {"v_max", cfg.cost.v_max},
                   {"a_max", cfg.cost.a_max},
                   {"use_acceleration_constraint", cfg.cost.use_acceleration_constraint},
                   {"obstacle_inflation", cfg.cost.obstacle_inflation}};
    doc["pso"] = {{"iter_max", cfg.pso.iter_max},
                  {"pop_max", cfg.pso.pop_max},
                  {"inertia_w", cfg.pso.inertia_w},
                  {"c1", cfg.pso.c1},
                  {"c2", cfg.pso.c2},
                  {"n_control_points", cfg.pso.n_control_points},
                  {"seed", cfg.pso.seed},
                  {"convergence_rel_tol", cfg.pso.convergence_rel_tol},
                  {"lateral_margin", cfg.pso.lateral_margin},
                  {"inertia_damping", cfg.pso.inertia_damping}};
    json ctrl = {{"pid_v", {cfg.controller.pid_v.kp, cfg.controller.pid_v.ki, cfg.controller.pid_v.kd}},
                 {"pid_theta",
                  {cfg.controller.pid_theta.kp, cfg.controller.pid_theta.ki, cfg.controller.pid_theta.kd}},
                 {"pid_wheel_l",
                  {cfg.controller.pid_wheel_l.kp, cfg.controller.pid_wheel_l.ki, cfg.controller.pid_wheel_l.kd}},
                 {"pid_wheel_r",
                  {cfg.controller.pid_wheel_r.kp, cfg.controller.pid_wheel_r.ki, cfg.controller.pid_wheel_r.kd}},
                 {"control_dt", cfg.controller.control_dt},
                 {"derivative_filter_coeff", cfg.controller.derivative_filter_coeff}};
    if (std::isfinite(cfg.controller.limits_v.min)) {
        ctrl["limits_v"] = {cfg.controller.limits_v.min, cfg.controller.limits_v.max};
    }
    if (std::isfinite(cfg.controller.limits_theta.min)) {
        ctrl["limits_theta"] = {cfg.controller.limits_theta.min, cfg.controller.limits_theta.max};
    }
    doc["controller"] = ctrl;
    doc["robot"] = {{"mass_m", cfg.robot.mass_m},
                    {"inertia_J", cfg.robot.inertia_J},
                    {"friction_F", cfg.robot.friction_F},
                    {"wheel_radius_r", cfg.robot.wheel_radius_r},
                    {"wheel_base_D", cfg.robot.wheel_base_D},
                    {"voltage_max_U", cfg.robot.voltage_max_U},
                    {"wheel_load_force", cfg.robot.wheel_load_force}};
    json sim = {{"physics_dt", cfg.sim.physics_dt},
                {"apply_pwm", cfg.sim.apply_pwm},
                {"settle_time", cfg.sim.settle_time},
                {"join_tolerance", cfg.sim.approach.join_tolerance},
                {"max_approach_time", cfg.sim.approach.max_approach_time},
                {"approach_v_max", cfg.sim.approach.v_max},
                {"runs", cfg.runs},
                {"base_seed", cfg.base_seed}};
    if (cfg.sim.start_pose.has_value()) {
        sim["start_pose"] = {cfg.sim.start_pose->x, cfg.sim.start_pose->y,
                             cfg.sim.start_pose->theta};
    }
    doc["sim"] = sim;
    doc["sweep"] = {{"betas", cfg.betas}};
    return doc;
}

json plan_result_to_json(const PlanResult& result) {
    json doc;
    json interior = json::array();
    for (const Vec2& p : result.best_polygon.interior) interior.push_back({p.x, p.y});
    doc["best_polygon"] = {{"start", {result.best_polygon.start.x, result.best_polygon.start.y}},
                           {"target", {result.best_polygon.target.x, result.best_polygon.target.y}},
                           {"interior", interior}};
    doc["best_cost"] = {{"length", result.best_cost.length},
                        {"collision_violation", result.best_cost.collision_violation},
                        {"velocity_violation", result.best_cost.velocity_violation},
                        {"acceleration_violation", result.best_cost.acceleration_violation},
                        {"total", result.best_cost.total}};
    doc["best_cost_history"] = result.best_cost_history;
    doc["mean_cost_history"] = result.mean_cost_history;
    doc["converged_at_iteration"] = result.converged_at_iteration;
    doc["success"] = result.success;
    doc["timing"] = {{"wall_time_s", result.wall_time_s}};
    return doc;
}

json mc_report_to_json(const McReport& report) {
    json doc;
    doc["runs"] = report.runs;
    doc["success_rate"] = report.success_rate;
    doc["avg_length"] = report.avg_length;
    doc["shortest_length"] = report.shortest_length;
    doc["length_sd"] = report.length_sd;
    doc["timing"] = {{"avg_cpu_time_s", report.avg_cpu_time_s},
                     {"avg_convergence_time_s", report.avg_convergence_time_s}};
    json records = json::array();
    for (const McRunRecord& rec : report.records) {
        records.push_back({{"run", rec.run},
                           {"seed", rec.seed},
                           {"success", rec.success},
                           {"length", rec.length},
                           {"total_cost", rec.total_cost},
                           {"convergence_iteration", rec.convergence_iteration},
                           {"timing", {{"cpu_time_s", rec.cpu_time_s}}}});
    }
    doc["records"] = records;
    return doc;
}

json sweep_to_json(const std::vector<BetaReport>& reports) {
    json doc = json::array();
    for (const BetaReport& br : reports) {
        json entry = mc_report_to_json(br.report);
        entry["beta_p"] = br.beta;
        doc.push_back(entry);
    }
    return json{{"sweep", doc}};
}

json sim_result_to_json(const SimResult& result) {
    json doc;
    doc["final_position_error"] = result.final_position_error;
    doc["collided"] = result.collided;
    doc["distance_traveled"] = result.distance_traveled;
    doc["samples"] = result.time.size();
    double max_err = 0.0;
    for (double e : result.tracking_error) max_err = std::max(max_err, e);
    doc["max_tracking_error"] = max_err;
    return doc;
}

void strip_timing_fields(json& doc) {
    if (doc.is_object()) {
        doc.erase("timing");
        doc.erase("created_utc");
        for (auto& [key, value] : doc.items()) {
            (void)key;
            strip_timing_fields(value);
        }
    } else if (doc.is_array()) {
        for (json& item : doc) strip_timing_fields(item);
    }
}

void write_path_csv(const std::filesystem::path& file, const SampledPath& path) {
    std::ostringstream out;
    out << "t,x,y,xd,yd,xdd,ydd\n";
    for (std::size_t i = 0; i < path.points.size(); ++i) {
        out << fmt_double(path.times[i]) << ',' << fmt_double(path.points[i].x) << ','
            << fmt_double(path.points[i].y) << ',' << fmt_double(path.first_deriv[i].x) << ','
            << fmt_double(path.first_deriv[i].y) << ',' << fmt_double(path.second_deriv[i].x)
            << ',' << fmt_double(path.second_deriv[i].y) << '\n';
    }
    write_text_file(file, out.str());
}

SampledPath read_path_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open path file: " + file.string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,x,y", 0) != 0) {
        throw std::runtime_error("path CSV: missing t,x,y,... header");
    }
    std::vector<Vec2> points;
    std::vector<double> times;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double t, x, y, xd, yd, xdd, ydd;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf", &t, &x, &y, &xd, &yd,
                        &xdd, &ydd) != 7) {
            throw std::runtime_error("path CSV: malformed row: " + line);
        }
        times.push_back(t);
        points.push_back({x, y});
    }
    if (points.size() < 4) throw std::runtime_error("path CSV: fewer than 4 samples");
    // Derivatives are recomputed from the points; spacing must be uniform.
    return attach_derivatives(std::move(points), times.back() - times.front());
}

void write_history_csv(const std::filesystem::path& file, const PlanResult& result) {
    std::ostringstream out;
    out << "iteration,best_cost,mean_cost\n";
    for (std::size_t i = 0; i < result.best_cost_history.size(); ++i) {
        out << i << ',' << fmt_double(result.best_cost_history[i]) << ','
            << fmt_double(result.mean_cost_history[i]) << '\n';
    }
    write_text_file(file, out.str());
}

void write_trace_csv(const std::filesystem::path& file, const SimResult& result) {
    std::ostringstream out;
    out << "t,x_ref,y_ref,theta_ref,v_ref,x,y,theta,omega_l,omega_r,u_l,u_r,tracking_error\n";
    for (std::size_t i = 0; i < result.time.size(); ++i) {
        out << fmt_double(result.time[i]) << ',' << fmt_double(result.reference[i].x) << ','
            << fmt_double(result.reference[i].y) << ',' << fmt_double(result.reference[i].theta)
            << ',' << fmt_double(result.v_ref[i]) << ',' << fmt_double(result.actual[i].x) << ','
            << fmt_double(result.actual[i].y) << ',' << fmt_double(result.actual[i].theta) << ','
            << fmt_double(result.wheel_speeds[i].first) << ','
            << fmt_double(result.wheel_speeds[i].second) << ','
            << fmt_double(result.voltages[i].first) << ','
            << fmt_double(result.voltages[i].second) << ','
            << fmt_double(result.tracking_error[i]) << '\n';
    }
    write_text_file(file, out.str());
}

void write_duty_csv(const std::filesystem::path& file, const SimResult& result) {
    std::ostringstream out;
    out << "t,duty_l,dir_l,duty_r,dir_r\n";
    for (std::size_t i = 0; i < result.time.size(); ++i) {
        const auto& [l, r] = result.duty[i];
        out << fmt_double(result.time[i]) << ',' << l.duty << ','
            << (l.direction == PwmDirection::forward ? "forward" : "reverse") << ',' << r.duty
            << ',' << (r.direction == PwmDirection::forward ? "forward" : "reverse") << '\n';
    }
    write_text_file(file, out.str());
}

void write_mc_csv(const std::filesystem::path& file, const McReport& report) {
    std::ostringstream out;
    out << "run,seed,success,length,total_cost,cpu_time_s,convergence_iteration\n";
    for (const McRunRecord& rec : report.records) {
        out << rec.run << ',' << rec.seed << ',' << (rec.success ? 1 : 0) << ','
            << fmt_double(rec.length) << ',' << fmt_double(rec.total_cost) << ','
            << fmt_double(rec.cpu_time_s) << ',' << rec.convergence_iteration << '\n';
    }
    write_text_file(file, out.str());
}

void write_sweep_csv(const std::filesystem::path& file, const std::vector<BetaReport>& reports) {
    std::ostringstream out;
    out << "beta_p,success_rate,avg_length,shortest_length,length_sd\n";
    for (const BetaReport& br : reports) {
        out << fmt_double(br.beta) << ',' << fmt_double(br.report.success_rate) << ','
            << fmt_double(br.report.avg_length) << ',' << fmt_double(br.report.shortest_length)
            << ',' << fmt_double(br.report.length_sd) << '\n';
    }
    write_text_file(file, out.str());
}

void write_text_file(const std::filesystem::path& file, const std::string& content) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write file: " + file.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + file.string());
}

std::string read_text_file(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + file.string());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_manifest(const std::filesystem::path& dir, const std::string& command,
                    const json& resolved_config, std::uint64_t seed,
                    const std::vector<std::string>& outputs) {
    json doc;
    doc["manifest_version"] = 1;
    doc["command"] = command;
    doc["tool_version"] = kToolVersion;
    char stamp[32];
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    doc["created_utc"] = stamp;
    doc["seed"] = seed;
    doc["resolved_config"] = resolved_config;
    doc["outputs"] = outputs;

    const std::filesystem::path tmp = dir / "manifest.json.tmp";
    write_text_file(tmp, doc.dump(2) + "\n");
    std::filesystem::rename(tmp, dir / "manifest.json");
}

}  // namespace ddrive

// Command-line front end: plan / track / montecarlo / sweep / validate-config.
//
// Exit codes: 0 success, 1 configuration error, 2 planning failure (no
// feasible path), 3 simulation divergence.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ddrive/io.hpp"
#include "ddrive/svg_plot.hpp"

namespace fs = std::filesystem;
using namespace ddrive;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitPlanningFailed = 2;
constexpr int kExitDiverged = 3;

struct CommonArgs {
    std::string config_file;
    std::string workspace_file;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    int jobs = 0;
    bool serial = false;

    ExecPolicy exec() const { return {!serial, jobs}; }
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_out = true) {
    cmd->add_option("-c,--config", args.config_file, "experiment config JSON");
    cmd->add_option("-w,--workspace", args.workspace_file, "workspace JSON");
    if (with_out) {
        const char* env = std::getenv("DDRIVE_OUT");
        args.out_dir = env != nullptr ? env : ".";
        cmd->add_option("-o,--out", args.out_dir, "output directory (env DDRIVE_OUT)");
    }
    cmd->add_option("-s,--seed", args.seed, "override the base seed");
    cmd->add_option("-j,--jobs", args.jobs, "worker pool size cap (0 = all cores)");
    cmd->add_flag("--serial", args.serial, "disable parallel execution");
}

ExperimentConfig resolve_config(const CommonArgs& args) {
    ExperimentConfig cfg;
    if (!args.config_file.empty()) cfg = load_config_file(args.config_file);
    if (!args.workspace_file.empty()) {
        cfg.workspace = load_workspace(read_text_file(args.workspace_file));
    }
    if (args.seed.has_value()) {
        cfg.base_seed = *args.seed;
        cfg.pso.seed = *args.seed;
    }
    return cfg;
}

fs::path ensure_out_dir(const CommonArgs& args) {
    fs::path dir(args.out_dir);
    fs::create_directories(dir);
    return dir;
}

McConfig make_mc_config(const ExperimentConfig& cfg, bool prefer_random) {
    McConfig mc;
    mc.runs = cfg.runs;
    mc.spline = cfg.spline;
    mc.cost = cfg.cost;
    mc.pso = cfg.pso;
    mc.base_seed = cfg.base_seed;
    if (cfg.workspace.has_value() && !(prefer_random && cfg.random_workspace.has_value())) {
        mc.workspace.fixed = cfg.workspace;
    } else if (cfg.random_workspace.has_value()) {
        mc.workspace.random = cfg.random_workspace;
    } else {
        mc.workspace.random = RandomWorkspaceConfig{};  // default random field
    }
    return mc;
}

int cmd_plan(const CommonArgs& args) {
    const ExperimentConfig cfg = resolve_config(args);
    if (!cfg.workspace.has_value()) {
        throw std::runtime_error("plan: no workspace given (use --workspace or the config)");
    }
    const fs::path dir = ensure_out_dir(args);
    const Workspace& ws = *cfg.workspace;

    const PlanResult result = plan(ws, cfg.spline, cfg.cost, cfg.pso, args.exec());

    write_path_csv(dir / "path.csv", result.best_path);
    nlohmann::json plan_json = plan_result_to_json(result);
    write_text_file(dir / "plan.json", plan_json.dump(2) + "\n");
    write_text_file(dir / "plan.svg", workspace_svg(ws, &result.best_path, &result.best_polygon));
    write_history_csv(dir / "history.csv", result);
    write_manifest(dir, "plan", config_to_json(cfg), cfg.pso.seed,
                   {"path.csv", "plan.json", "plan.svg", "history.csv"});

    std::cout << "plan: length " << result.best_cost.length << " m, cost "
              << result.best_cost.total << ", " << (result.success ? "feasible" : "INFEASIBLE")
              << ", converged at iteration " << result.converged_at_iteration << "\n";
    if (!result.success) {
        std::cerr << "plan: no collision-free path found\n";
        return kExitPlanningFailed;
    }
    return kExitOk;
}

int cmd_track(const CommonArgs& args, const std::string& path_file,
              std::optional<double> control_dt) {
    ExperimentConfig cfg = resolve_config(args);
    if (control_dt.has_value()) cfg.controller.control_dt = *control_dt;
    const fs::path dir = ensure_out_dir(args);
    const SampledPath path = read_path_csv(path_file);

    Workspace ws;
    if (cfg.workspace.has_value()) {
        ws = *cfg.workspace;
    } else {
        // obstacle-free field spanning the path
        Vec2 lo = path.points.front(), hi = lo;
        for (const Vec2& p : path.points) {
            lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y);
            hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y);
        }
        ws.x_min = lo.x - 0.5; ws.x_max = hi.x + 0.5;
        ws.y_min = lo.y - 0.5; ws.y_max = hi.y + 0.5;
        ws.start = path.points.front();
        ws.target = path.points.back();
    }

    const SimResult result = closed_loop_sim(ws, path, cfg.controller, cfg.robot, cfg.sim);

    write_trace_csv(dir / "trace.csv", result);
    write_duty_csv(dir / "duty.csv", result);
    write_text_file(dir / "overlay.svg", overlay_svg(ws, result));
    write_text_file(dir / "duty.svg", duty_svg(result));
    nlohmann::json track_json = sim_result_to_json(result);
    track_json["planned_length"] = path.length;
    write_text_file(dir / "track.json", track_json.dump(2) + "\n");
    write_manifest(dir, "track", config_to_json(cfg), cfg.base_seed,
                   {"trace.csv", "duty.csv", "overlay.svg", "duty.svg", "track.json"});

    std::cout << "track: final position error " << result.final_position_error
              << " m, distance " << result.distance_traveled << " m (planned " << path.length
              << " m), " << (result.collided ? "COLLIDED" : "no collision") << "\n";
    return kExitOk;
}

int cmd_montecarlo(const CommonArgs& args) {
    const ExperimentConfig cfg = resolve_config(args);
    const fs::path dir = ensure_out_dir(args);
    const McConfig mc = make_mc_config(cfg, /*prefer_random=*/true);

    const McReport report = monte_carlo(mc, args.exec());

    write_text_file(dir / "report.json", mc_report_to_json(report).dump(2) + "\n");
    write_mc_csv(dir / "runs.csv", report);
    write_text_file(dir / "report.svg", mc_summary_svg(report));
    write_manifest(dir, "montecarlo", config_to_json(cfg), cfg.base_seed,
                   {"report.json", "runs.csv", "report.svg"});

    std::cout << "montecarlo: " << report.runs << " runs, SR " << report.success_rate
              << ", avg length " << report.avg_length << " m, SD " << report.length_sd
              << " m\n";
    return kExitOk;
}

int cmd_sweep(const CommonArgs& args, const std::vector<double>& betas_arg) {
    ExperimentConfig cfg = resolve_config(args);
    if (!betas_arg.empty()) cfg.betas = betas_arg;
    if (cfg.betas.empty()) throw std::runtime_error("sweep: empty beta list");
    const fs::path dir = ensure_out_dir(args);
    const McConfig mc = make_mc_config(cfg, /*prefer_random=*/false);

    const std::vector<BetaReport> reports = beta_sweep(mc, cfg.betas, args.exec());

    write_sweep_csv(dir / "sweep.csv", reports);
    write_text_file(dir / "sweep.json", sweep_to_json(reports).dump(2) + "\n");
    write_text_file(dir / "sweep.svg", sweep_svg(reports));
    write_manifest(dir, "sweep", config_to_json(cfg), cfg.base_seed,
                   {"sweep.csv", "sweep.json", "sweep.svg"});

    for (const BetaReport& br : reports) {
        std::cout << "sweep: beta " << br.beta << " -> SR " << br.report.success_rate
                  << ", avg length " << br.report.avg_length << " m\n";
    }
    return kExitOk;
}

int cmd_validate(const CommonArgs& args) {
    resolve_config(args);
    std::cout << "configuration OK\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Differential-drive path planning and trajectory tracking toolkit"};
    app.require_subcommand(1);

    CommonArgs plan_args, track_args, mc_args, sweep_args, validate_args;
    std::string path_file;
    std::optional<double> control_dt;
    std::vector<double> betas_arg;

    CLI::App* plan_cmd = app.add_subcommand("plan", "synthesize a collision-free path");
    add_common(plan_cmd, plan_args);

    CLI::App* track_cmd = app.add_subcommand("track", "closed-loop tracking of a planned path");
    add_common(track_cmd, track_args);
    track_cmd->add_option("-p,--path", path_file, "path CSV from `plan`")->required();
    track_cmd->add_option("--control-dt", control_dt, "reference sample interval override [s]");

    CLI::App* mc_cmd = app.add_subcommand("montecarlo", "robustness campaign over many runs");
    add_common(mc_cmd, mc_args);

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "penalty coefficient sweep");
    add_common(sweep_cmd, sweep_args);
    sweep_cmd->add_option("-b,--betas", betas_arg, "penalty coefficients to sweep");

    CLI::App* validate_cmd = app.add_subcommand("validate-config", "check config/workspace files");
    add_common(validate_cmd, validate_args, /*with_out=*/false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (plan_cmd->parsed()) return cmd_plan(plan_args);
        if (track_cmd->parsed()) return cmd_track(track_args, path_file, control_dt);
        if (mc_cmd->parsed()) return cmd_montecarlo(mc_args);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep_args, betas_arg);
        if (validate_cmd->parsed()) return cmd_validate(validate_args);
    } catch (const SimDivergence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDiverged;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}

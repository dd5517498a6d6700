// uavbeam command-line front end: seeded, config-driven experiment runners
// that emit CSV/JSON artifacts plus a run manifest per invocation.

#include <chrono>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "uavbeam/beampattern.hpp"
#include "uavbeam/channel.hpp"
#include "uavbeam/config.hpp"
#include "uavbeam/csv.hpp"
#include "uavbeam/dqn/trainer.hpp"
#include "uavbeam/hover.hpp"
#include "uavbeam/interference.hpp"
#include "uavbeam/selection.hpp"

namespace fs = std::filesystem;
using namespace uavbeam;
using nlohmann::json;

namespace {

struct RunContext {
    ScenarioConfig cfg;
    uint64_t seed = 0;
    fs::path out;
    int threads = 1;
    std::string command;
    std::vector<std::string> artifacts;
    std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

    void write_manifest(json details = json::object()) {
        artifacts.push_back("manifest.json");
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        json doc;
        doc["command"] = command;
        doc["config_hash"] = cfg.hash();
        doc["seed"] = seed;
        doc["artifacts"] = artifacts;
        doc["wall_time_s"] = wall;
        doc["library_version"] = std::string(kLibraryVersion);
        if (!details.empty()) doc["details"] = details;
        std::ofstream os(out / "manifest.json");
        if (!os) throw std::runtime_error("cannot write manifest.json");
        os << doc.dump(2) << "\n";
    }
};

// Deterministic pure line-of-sight gains; the weight source for the pattern
// sweeps, which model no scatter.
std::vector<std::complex<double>> los_channel(std::span<const UavState> uavs,
                                              const Vec3& receiver, const FadingParams& params) {
    const double lambda = params.wavelength();
    std::vector<std::complex<double>> gains;
    gains.reserve(uavs.size());
    for (const auto& u : uavs) {
        const double d = distance(u.position, receiver);
        const double amp = std::sqrt(params.path_gain(d));
        const double phase = -2.0 * kPi * d / lambda;
        gains.emplace_back(amp * std::cos(phase), amp * std::sin(phase));
    }
    return gains;
}

struct SelectionOutcome {
    std::vector<UavState> swarm;
    ChannelRealization channel;
    InterferenceField field;
    SelectionResult result;
};

SelectionOutcome run_selection(RunContext& ctx) {
    SelectionOutcome s;
    s.swarm = build_grid_layout(ctx.cfg.swarm);
    Rng channel_rng(derive_seed(ctx.seed, "channel"));
    s.channel = sample_channel(s.swarm, ctx.cfg.receiver, ctx.cfg.channel, channel_rng);
    Rng field_rng(derive_seed(ctx.seed, "interference"));
    s.field = ctx.cfg.make_field(field_rng);
    s.result = brute_force_select(s.swarm, s.channel, ctx.cfg.receiver, s.field,
                                  ctx.cfg.channel, ctx.cfg.selection.k,
                                  ctx.cfg.selection.tx_power, ctx.cfg.make_element(),
                                  ctx.threads);
    return s;
}

dqn::ReformScenario make_reform_scenario(const RunContext& ctx, const SelectionOutcome& s) {
    dqn::ReformScenario scenario;
    std::vector<std::complex<double>> gains;
    for (int idx : s.result.best.indices) {
        scenario.subset.push_back(s.swarm[size_t(idx - 1)]);
        gains.push_back(s.channel.gains[size_t(idx - 1)]);
    }
    scenario.weights = BeamWeights::from_mrt(mrt_weights(gains));
    scenario.receiver = ctx.cfg.receiver;
    scenario.wavelength = ctx.cfg.channel.wavelength();
    scenario.spacing_delta = ctx.cfg.swarm.spacing_delta;
    scenario.hover = ctx.cfg.make_hover();
    scenario.grid = ctx.cfg.make_grid();
    scenario.element = ctx.cfg.make_element();
    return scenario;
}

void cmd_hover_map(RunContext& ctx, double max_angle_deg, double step_deg) {
    const auto swarm = build_grid_layout(ctx.cfg.swarm);
    const auto gains = los_channel(swarm, ctx.cfg.receiver, ctx.cfg.channel);
    const auto weights = BeamWeights::from_mrt(mrt_weights(gains));
    std::vector<double> pitches, rolls;
    for (double a = -max_angle_deg; a <= max_angle_deg + 1e-9; a += step_deg) {
        pitches.push_back(a * kPi / 180.0);
        rolls.push_back(a * kPi / 180.0);
    }
    const auto map = hover_power_phase_map(swarm, weights, ctx.cfg.receiver, pitches, rolls,
                                           ctx.cfg.channel.wavelength(), ctx.cfg.make_element());
    CsvWriter csv((ctx.out / "hover_map.csv").string());
    ctx.artifacts.push_back("hover_map.csv");
    csv.header({"pitch_deg", "roll_deg", "power_db", "phase_rad"});
    for (size_t i = 0; i < pitches.size(); ++i)
        for (size_t j = 0; j < rolls.size(); ++j)
            csv.row(pitches[i] * 180.0 / kPi, rolls[j] * 180.0 / kPi, map[i][j].power_db,
                    map[i][j].phase_rad);
    csv.close();
    ctx.write_manifest();
}

void cmd_displacement_pattern(RunContext& ctx, std::vector<int> deltas_cm, std::vector<int> ks,
                              size_t sweep_points) {
    const double lambda = ctx.cfg.channel.wavelength();
    json details;
    for (int k : ks) {
        for (int dcm : deltas_cm) {
            SwarmLayout layout = ctx.cfg.swarm;
            layout.l_u = k;
            layout.c_u = layout.r_u = 1;
            const auto uavs = build_grid_layout(layout);
            const auto weights =
                BeamWeights::from_mrt(mrt_weights(los_channel(uavs, ctx.cfg.receiver,
                                                              ctx.cfg.channel)));
            HoverSpec spec;
            spec.dx_max = spec.dy_max = spec.dz_max = dcm / 100.0;
            const std::string tag =
                "displacement-pattern:K=" + std::to_string(k) + ":d=" + std::to_string(dcm);
            Rng rng(derive_seed(ctx.seed, tag));
            const auto perturbed = apply_hover(uavs, sample_perturbations(spec, uavs.size(), rng));

            const Direction steer = direction_between(centroid(uavs), ctx.cfg.receiver);
            const double peak = array_factor(uavs, weights, steer, lambda).magnitude;

            const std::string name = "displacement_pattern_k" + std::to_string(k) + "_delta" +
                                     std::to_string(dcm) + "cm.csv";
            CsvWriter csv((ctx.out / name).string());
            ctx.artifacts.push_back(name);
            csv.header({"theta_rad", "phi_rad", "magnitude_db", "phase_rad"});
            for (size_t i = 0; i < sweep_points; ++i) {
                const double theta = -kPi + 2.0 * kPi * (double(i) + 0.5) / double(sweep_points);
                const auto sample = distorted_array_factor(uavs, perturbed, weights,
                                                           {theta, steer.phi}, 0.0, 0.0, {},
                                                           lambda);
                csv.row(theta, steer.phi, 20.0 * std::log10(sample.magnitude / peak),
                        sample.phase);
            }
            csv.close();
            const double j = distortion_objective(uavs, perturbed, weights, {},
                                                  ctx.cfg.make_grid(), lambda);
            details["J"][std::to_string(k) + "uav_" + std::to_string(dcm) + "cm"] = j;
        }
    }
    ctx.write_manifest(details);
}

void cmd_aoa_sweep(RunContext& ctx, size_t sweep_points) {
    const double lambda = ctx.cfg.channel.wavelength();
    const auto uavs = build_grid_layout(ctx.cfg.swarm);
    const auto weights =
        BeamWeights::from_mrt(mrt_weights(los_channel(uavs, ctx.cfg.receiver, ctx.cfg.channel)));
    Rng rng(derive_seed(ctx.seed, "aoa-sweep"));
    const auto perturbed =
        apply_hover(uavs, sample_perturbations(ctx.cfg.make_hover(), uavs.size(), rng));
    const Direction steer = direction_between(centroid(uavs), ctx.cfg.receiver);

    std::vector<double> thetas;
    thetas.reserve(sweep_points);
    for (size_t i = 0; i < sweep_points; ++i)
        thetas.push_back(-kPi / 2 + kPi * double(i) / double(sweep_points - 1));
    const auto sweep = aoa_sweep(perturbed, weights, steer.phi, thetas, lambda,
                                 ctx.cfg.make_element());

    CsvWriter csv((ctx.out / "aoa_sweep.csv").string());
    ctx.artifacts.push_back("aoa_sweep.csv");
    csv.header({"theta_rad", "phi_rad", "magnitude_db", "phase_rad"});
    for (const auto& s : sweep)
        csv.row(s.direction.theta, s.direction.phi, 20.0 * std::log10(s.magnitude), s.phase);
    csv.close();
    ctx.write_manifest();
}

void cmd_heatmap(RunContext& ctx, size_t nx, size_t ny, double plane_z) {
    Rng rng(derive_seed(ctx.seed, "interference"));
    const auto field = ctx.cfg.make_field(rng);
    const auto grid = heatmap(field, plane_z, nx, ny, ctx.cfg.channel, ctx.threads);
    const Vec3 lo = field.region.min, hi = field.region.max;
    CsvWriter csv((ctx.out / "heatmap.csv").string());
    ctx.artifacts.push_back("heatmap.csv");
    csv.header({"x_m", "y_m", "interference_dbm"});
    for (size_t iy = 0; iy < ny; ++iy)
        for (size_t ix = 0; ix < nx; ++ix) {
            const double x =
                nx == 1 ? 0.5 * (lo.x + hi.x) : lo.x + (hi.x - lo.x) * double(ix) / double(nx - 1);
            const double y =
                ny == 1 ? 0.5 * (lo.y + hi.y) : lo.y + (hi.y - lo.y) * double(iy) / double(ny - 1);
            csv.row(x, y, grid[iy][ix]);
        }
    csv.close();
    ctx.write_manifest();
}

void cmd_pearson(RunContext& ctx, size_t samples, size_t reference) {
    const auto swarm = build_grid_layout(ctx.cfg.swarm);
    if (reference < 1 || reference > swarm.size())
        throw ConfigError("config: pearson reference UAV index out of range");
    Rng rng(derive_seed(ctx.seed, "pearson"));
    const auto rows =
        distance_fading_correlation(reference - 1, swarm, ctx.cfg.receiver, ctx.cfg.channel,
                                    ctx.cfg.make_hover(), samples, rng);
    CsvWriter csv((ctx.out / "pearson.csv").string());
    ctx.artifacts.push_back("pearson.csv");
    csv.header({"pair_index", "relative_distance_m", "pearson_r", "time_samples"});
    for (const auto& r : rows)
        csv.row(uint64_t(r.pair_index), r.relative_distance, r.pearson_r, uint64_t(samples));
    csv.close();
    ctx.write_manifest();
}

void cmd_select(RunContext& ctx) {
    const auto started = std::chrono::steady_clock::now();
    const auto s = run_selection(ctx);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    json doc;
    doc["best_indices"] = s.result.best.indices;
    doc["best_sinr_db"] = s.result.best_sinr_db;
    doc["evaluated_count"] = s.result.evaluated_count;
    doc["wall_time_s"] = wall;
    doc["seed"] = ctx.seed;
    std::ofstream os(ctx.out / "selection.json");
    if (!os) throw std::runtime_error("cannot write selection.json");
    os << doc.dump(2) << "\n";
    ctx.artifacts.push_back("selection.json");
    ctx.write_manifest();
}

void write_training_artifacts(RunContext& ctx, const dqn::TrainingLog& log) {
    {
        CsvWriter csv((ctx.out / "training_loss.csv").string());
        ctx.artifacts.push_back("training_loss.csv");
        csv.header({"update_index", "mse_loss"});
        for (size_t i = 0; i < log.losses.size(); ++i) csv.row(uint64_t(i), log.losses[i]);
        csv.close();
    }
    {
        CsvWriter csv((ctx.out / "training_episodes.csv").string());
        ctx.artifacts.push_back("training_episodes.csv");
        csv.header({"episode", "total_reward", "steps", "final_eta", "epsilon"});
        for (const auto& ep : log.episodes)
            csv.row(uint64_t(ep.episode), ep.total_reward, uint64_t(ep.steps), ep.final_eta,
                    ep.epsilon);
        csv.close();
    }
    log.net.save_file((ctx.out / "qnet_checkpoint.txt").string(), ctx.cfg.hash());
    ctx.artifacts.push_back("qnet_checkpoint.txt");
}

void cmd_train(RunContext& ctx) {
    const auto s = run_selection(ctx);
    const auto scenario = make_reform_scenario(ctx, s);
    Rng rng(derive_seed(ctx.seed, "train"));
    const auto log = dqn::train(scenario, ctx.cfg.agent, rng);
    write_training_artifacts(ctx, log);
    json details;
    details["eta_threshold"] = log.eta_threshold;
    details["selected_indices"] = s.result.best.indices;
    details["updates"] = log.losses.size();
    ctx.write_manifest(details);
}

void cmd_reform_eval(RunContext& ctx, const std::string& checkpoint, size_t draws) {
    const auto s = run_selection(ctx);
    const auto scenario = make_reform_scenario(ctx, s);

    dqn::QNetwork trained;
    double threshold;
    if (checkpoint.empty()) {
        Rng rng(derive_seed(ctx.seed, "train"));
        auto log = dqn::train(scenario, ctx.cfg.agent, rng);
        write_training_artifacts(ctx, log);
        trained = std::move(log.net);
        threshold = log.eta_threshold;
    } else {
        uint64_t hash = 0;
        trained = dqn::QNetwork::load_file(checkpoint, &hash);
        if (hash != ctx.cfg.hash())
            std::cerr << "warning: checkpoint config hash differs from the loaded config\n";
        threshold = ctx.cfg.agent.eta_threshold;
        if (threshold <= 0.0) {
            // Reproduce the calibration the training run performed: probe
            // draws are the prefix of the "train" stream.
            Rng rng(derive_seed(ctx.seed, "train"));
            threshold = dqn::calibrate_threshold(scenario, ctx.cfg.agent.threshold_probes,
                                                 ctx.cfg.agent.threshold_quantile, rng);
        }
    }

    Rng baseline_rng(derive_seed(ctx.seed, "baseline-init"));
    std::vector<size_t> sizes;
    sizes.push_back(6 * scenario.subset.size() + 1);
    sizes.insert(sizes.end(), ctx.cfg.agent.hidden_sizes.begin(),
                 ctx.cfg.agent.hidden_sizes.end());
    sizes.push_back(8 * scenario.subset.size());
    const auto untrained = dqn::QNetwork::he_init(sizes, baseline_rng);

    dqn::AgentConfig rollout_cfg = ctx.cfg.agent;
    rollout_cfg.eta_threshold = threshold;

    Rng eval_rng(derive_seed(ctx.seed, "reform-eval"));
    CsvWriter csv((ctx.out / "reform_eval.csv").string());
    ctx.artifacts.push_back("reform_eval.csv");
    csv.header({"draw_index", "eta_initial", "eta_trained", "eta_untrained"});
    size_t improved_trained = 0, improved_untrained = 0;
    for (size_t d = 0; d < draws; ++d) {
        const auto p = sample_perturbations(scenario.hover, scenario.subset.size(), eval_rng);
        const auto with_net = dqn::propose_corrections(trained, scenario, rollout_cfg, p);
        const auto without = dqn::propose_corrections(untrained, scenario, rollout_cfg, p);
        csv.row(uint64_t(d), with_net.initial_eta, with_net.best_eta, without.best_eta);
        if (with_net.best_eta < with_net.initial_eta) ++improved_trained;
        if (without.best_eta < without.initial_eta) ++improved_untrained;
    }
    csv.close();
    json details;
    details["draws"] = draws;
    details["improved_trained"] = improved_trained;
    details["improved_untrained"] = improved_untrained;
    details["eta_threshold"] = threshold;
    ctx.write_manifest(details);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"uavbeam: distributed UAV collaborative beamforming simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    uint64_t seed_override = 0;
    bool seed_given = false;
    int threads = 1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "scenario config JSON")->required();
        sub->add_option("--out", out_dir, "output directory (created if absent)");
        sub->add_option("--seed", seed_override, "override the config seed")
            ->each([&](const std::string&) { seed_given = true; });
        sub->add_option("--threads", threads, "worker threads for parallel stages")
            ->check(CLI::PositiveNumber);
    };

    double hm_max_deg = 60.0, hm_step_deg = 2.0;
    auto* hover_map = app.add_subcommand("hover-map",
                                         "received power/phase vs pitch and roll rotation");
    add_common(hover_map);
    hover_map->add_option("--max-angle-deg", hm_max_deg, "sweep half-range in degrees");
    hover_map->add_option("--step-deg", hm_step_deg, "sweep step in degrees");

    std::vector<int> dp_deltas{1, 2, 3, 4, 5};
    std::vector<int> dp_ks{2, 4};
    size_t dp_points = 2048;
    auto* displacement = app.add_subcommand(
        "displacement-pattern", "distorted beam patterns across hover displacement tolerances");
    add_common(displacement);
    displacement->add_option("--deltas-cm", dp_deltas, "displacement tolerances, centimeters");
    displacement->add_option("--ks", dp_ks, "linear array sizes");
    displacement->add_option("--points", dp_points, "theta samples per sweep");

    size_t aoa_points = 2048;
    auto* aoa = app.add_subcommand("aoa-sweep", "array response against the angle of arrival");
    add_common(aoa);
    aoa->add_option("--points", aoa_points, "theta samples");

    size_t hm_nx = 64, hm_ny = 64;
    double hm_plane_z = 0.0;
    auto* heat = app.add_subcommand("heatmap", "aggregate interference power map");
    add_common(heat);
    heat->add_option("--nx", hm_nx, "grid cells along x");
    heat->add_option("--ny", hm_ny, "grid cells along y");
    heat->add_option("--plane-z", hm_plane_z, "map plane height, meters");

    size_t pearson_samples = 200, pearson_reference = 1;
    auto* pear = app.add_subcommand("pearson",
                                    "distance vs fading-correlation analysis per UAV pair");
    add_common(pear);
    pear->add_option("--samples", pearson_samples, "channel time samples");
    pear->add_option("--reference", pearson_reference, "reference UAV (1-based)");

    auto* select = app.add_subcommand("select", "exhaustive best-subset search");
    add_common(select);

    auto* train = app.add_subcommand("train", "train the beam re-forming agent");
    add_common(train);

    std::string checkpoint;
    size_t eval_draws = 100;
    auto* reform = app.add_subcommand("reform-eval",
                                      "evaluate trained vs untrained beam re-forming");
    add_common(reform);
    reform->add_option("--checkpoint", checkpoint, "existing q-network checkpoint");
    reform->add_option("--draws", eval_draws, "held-out perturbation draws");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        RunContext ctx;
        ctx.cfg = load_config(config_path);
        ctx.seed = seed_given ? seed_override : ctx.cfg.seed;
        ctx.threads = threads;
        ctx.out = out_dir;
        std::error_code ec;
        fs::create_directories(ctx.out, ec);
        if (ec || !fs::is_directory(ctx.out))
            throw std::runtime_error("cannot create output directory '" + out_dir + "'");

        if (hover_map->parsed()) {
            ctx.command = "hover-map";
            cmd_hover_map(ctx, hm_max_deg, hm_step_deg);
        } else if (displacement->parsed()) {
            ctx.command = "displacement-pattern";
            cmd_displacement_pattern(ctx, dp_deltas, dp_ks, dp_points);
        } else if (aoa->parsed()) {
            ctx.command = "aoa-sweep";
            cmd_aoa_sweep(ctx, aoa_points);
        } else if (heat->parsed()) {
            ctx.command = "heatmap";
            cmd_heatmap(ctx, hm_nx, hm_ny, hm_plane_z);
        } else if (pear->parsed()) {
            ctx.command = "pearson";
            cmd_pearson(ctx, pearson_samples, pearson_reference);
        } else if (select->parsed()) {
            ctx.command = "select";
            cmd_select(ctx);
        } else if (train->parsed()) {
            ctx.command = "train";
            cmd_train(ctx);
        } else if (reform->parsed()) {
            ctx.command = "reform-eval";
            cmd_reform_eval(ctx, checkpoint, eval_draws);
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

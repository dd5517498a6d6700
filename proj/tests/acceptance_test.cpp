// Acceptance suite: one test case per acceptance criterion, each printing a
// single PASS/FAIL line. Training-based criteria run the full paper-scale
// pipeline and take several minutes.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "uavbeam/beampattern.hpp"
#include "uavbeam/channel.hpp"
#include "uavbeam/config.hpp"
#include "uavbeam/dqn/trainer.hpp"
#include "uavbeam/hover.hpp"
#include "uavbeam/interference.hpp"
#include "uavbeam/selection.hpp"

namespace fs = std::filesystem;
using namespace uavbeam;
using nlohmann::json;

namespace {

struct Criterion {
    int id;
    std::string title;
    bool ok = true;

    Criterion(int id_, std::string title_) : id(id_), title(std::move(title_)) {}
    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            std::printf("  criterion %d check failed: %s\n", id, what.c_str());
        }
    }
    ~Criterion() {
        std::printf("criterion %2d: %s -- %s\n", id, ok ? "PASS" : "FAIL", title.c_str());
        std::fflush(stdout);
    }
};

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<UavState> linear_array(int k, double spacing) {
    return build_grid_layout({k, 1, 1, spacing, {0.0, 0.0, 30.0}});
}

std::vector<std::complex<double>> los_gains(std::span<const UavState> uavs, const Vec3& receiver,
                                            const FadingParams& params) {
    const double lambda = params.wavelength();
    std::vector<std::complex<double>> gains;
    for (const auto& u : uavs) {
        const double d = distance(u.position, receiver);
        const double amp = std::sqrt(params.path_gain(d));
        const double ph = -2.0 * kPi * d / lambda;
        gains.emplace_back(amp * std::cos(ph), amp * std::sin(ph));
    }
    return gains;
}

ScenarioConfig paper_config() {
    return load_config(std::string(UAVBEAM_CONFIG_DIR) + "/paper_default.json");
}

struct PipelineResult {
    std::vector<UavState> swarm;
    ChannelRealization channel;
    InterferenceField field;
    SelectionResult selection;
    dqn::ReformScenario scenario;
};

// Mirrors the CLI pipeline: seeded channel + interference draws, exhaustive
// selection, MRT weights for the winning subset.
PipelineResult run_pipeline(const ScenarioConfig& cfg, uint64_t seed, int threads = 1) {
    PipelineResult out;
    out.swarm = build_grid_layout(cfg.swarm);
    Rng channel_rng(derive_seed(seed, "channel"));
    out.channel = sample_channel(out.swarm, cfg.receiver, cfg.channel, channel_rng);
    Rng field_rng(derive_seed(seed, "interference"));
    out.field = cfg.make_field(field_rng);
    out.selection =
        brute_force_select(out.swarm, out.channel, cfg.receiver, out.field, cfg.channel,
                           cfg.selection.k, cfg.selection.tx_power, cfg.make_element(), threads);
    std::vector<std::complex<double>> gains;
    for (int idx : out.selection.best.indices) {
        out.scenario.subset.push_back(out.swarm[size_t(idx - 1)]);
        gains.push_back(out.channel.gains[size_t(idx - 1)]);
    }
    out.scenario.weights = BeamWeights::from_mrt(mrt_weights(gains));
    out.scenario.receiver = cfg.receiver;
    out.scenario.wavelength = cfg.channel.wavelength();
    out.scenario.spacing_delta = cfg.swarm.spacing_delta;
    out.scenario.hover = cfg.make_hover();
    out.scenario.grid = cfg.make_grid();
    out.scenario.element = cfg.make_element();
    return out;
}

} // namespace

TEST_CASE("criterion 1: distorted pattern reduces to the ideal under zero perturbation") {
    Criterion c(1, "zero-perturbation identity, J = 0 exactly, under 1 s");
    const auto t0 = std::chrono::steady_clock::now();

    const double lambda = FadingParams{}.wavelength();
    const auto uavs = linear_array(4, 1.0);
    BeamWeights weights = BeamWeights::uniform(4);
    weights.phases = steering_phases(uavs, {50, 50, 300}, lambda);
    const auto grid = AngularGrid::uniform(64, 64);
    const std::vector<double> zero_err(4, 0.0);

    double max_diff = 0.0;
    for (double theta : grid.thetas)
        for (double phi : grid.phis) {
            const Direction d{theta, phi};
            const auto ideal = array_factor(uavs, weights, d, lambda);
            const auto hat =
                distorted_array_factor(uavs, uavs, weights, d, 0.0, 0.0, zero_err, lambda);
            max_diff = std::max(max_diff, std::abs(ideal.magnitude - hat.magnitude));
        }
    c.expect(max_diff <= 1e-12, "pattern magnitude mismatch beyond 1e-12");

    const double j = distortion_objective(uavs, uavs, weights, zero_err, grid, lambda);
    c.expect(j == 0.0, "J not exactly zero");
    const double wall = seconds_since(t0);
    c.expect(wall < 1.0, "runtime " + std::to_string(wall) + " s exceeds 1 s");
    CHECK(c.ok);
}

TEST_CASE("criterion 2: coherent gain equals K at the steered direction") {
    Criterion c(2, "steering-phase coherent gain for K in {1,2,4,8}");
    const double lambda = FadingParams{}.wavelength();
    const Vec3 receiver{50, 50, 300};
    for (int k : {1, 2, 4, 8}) {
        const auto uavs = linear_array(k, 1.0);
        BeamWeights weights = BeamWeights::uniform(size_t(k));
        weights.phases = steering_phases(uavs, receiver, lambda);
        const Direction d = direction_between(centroid(uavs), receiver);
        const double mag = array_factor(uavs, weights, d, lambda).magnitude;
        c.expect(std::abs(mag - double(k)) <= 1e-9,
                 "K=" + std::to_string(k) + " magnitude " + std::to_string(mag));
    }
    CHECK(c.ok);
}

TEST_CASE("criterion 3: selection matches the reverse-order exhaustive oracle") {
    Criterion c(3, "N=8 K=3 and N=12 K=4, 20 seeds, exact oracle equivalence, under 10 s");
    const auto t0 = std::chrono::steady_clock::now();
    const FadingParams params;
    const Vec3 receiver{50, 50, 300};

    auto oracle = [&](std::span<const UavState> uavs, const ChannelRealization& channel,
                      const InterferenceField& field, int k) {
        auto all = enumerate_combinations(int(uavs.size()), k);
        SelectionResult best;
        best.best_sinr_db = -std::numeric_limits<double>::infinity();
        best.evaluated_count = all.size();
        for (auto it = all.rbegin(); it != all.rend(); ++it) {
            std::vector<UavState> subset;
            std::vector<std::complex<double>> gains;
            for (int idx : it->indices) {
                subset.push_back(uavs[size_t(idx - 1)]);
                gains.push_back(channel.gains[size_t(idx - 1)]);
            }
            double sinr;
            try {
                const auto w = BeamWeights::from_mrt(mrt_weights(gains));
                sinr = subset_sinr(subset, w, gains, receiver, field, params).sinr_db;
            } catch (const std::invalid_argument&) {
                continue;
            }
            if (sinr >= best.best_sinr_db) { // reverse scan: >= keeps lex-smallest
                best.best_sinr_db = sinr;
                best.best = *it;
            }
        }
        return best;
    };

    for (auto [l_u, c_u, k] : std::vector<std::tuple<int, int, int>>{{4, 2, 3}, {4, 3, 4}}) {
        for (uint64_t seed = 1; seed <= 20; ++seed) {
            const auto uavs = build_grid_layout({l_u, c_u, 1, 1.0, {0, 0, 30}});
            Rng rng(derive_seed(seed, "criterion3"));
            const auto channel = sample_channel(uavs, receiver, params, rng);
            const auto field =
                sample_field({{-100, -100, 0}, {150, 150, 350}}, 6, {0.1, 1.0}, 1e-9, rng);
            const auto got = brute_force_select(uavs, channel, receiver, field, params, k);
            const auto expected = oracle(uavs, channel, field, k);
            c.expect(got.best == expected.best,
                     "index mismatch at N=" + std::to_string(l_u * c_u) + " seed " +
                         std::to_string(seed));
            c.expect(got.best_sinr_db == expected.best_sinr_db,
                     "SINR mismatch at seed " + std::to_string(seed));
            c.expect(got.evaluated_count == expected.evaluated_count, "count mismatch");
        }
    }
    const double wall = seconds_since(t0);
    c.expect(wall < 10.0, "runtime " + std::to_string(wall) + " s exceeds 10 s");
    CHECK(c.ok);
}

TEST_CASE("criterion 4: paper-scale exhaustive search completes in budget") {
    Criterion c(4, "N=64 K=4 select covers all 635376 combinations under 5 min");
    const auto t0 = std::chrono::steady_clock::now();
    const auto cfg = paper_config();
    const auto pipe = run_pipeline(cfg, cfg.seed);
    c.expect(pipe.selection.evaluated_count == 635376,
             "evaluated " + std::to_string(pipe.selection.evaluated_count));
    c.expect(pipe.selection.evaluated_count == binomial(64, 4), "closed form mismatch");
    c.expect(pipe.selection.best.indices.size() == 4, "winner is not a 4-subset");
    const double wall = seconds_since(t0);
    c.expect(wall < 300.0, "runtime " + std::to_string(wall) + " s exceeds 5 min");
    CHECK(c.ok);
}

TEST_CASE("criterion 5: mean distortion grows with tolerance and with K") {
    Criterion c(5, "mean J strictly increasing over 1..5 cm (K=4); J(K=4) > J(K=2) at 5 cm");
    const FadingParams params;
    const double lambda = params.wavelength();
    const Vec3 receiver{50, 50, 300};
    const auto grid = AngularGrid::uniform(64, 64);

    auto mean_j = [&](int k, double tol_m) {
        const auto uavs = linear_array(k, 1.0);
        const auto weights = BeamWeights::from_mrt(mrt_weights(los_gains(uavs, receiver, params)));
        DistortionEvaluator eval(uavs, weights, grid, lambda);
        HoverSpec spec;
        spec.dx_max = spec.dy_max = spec.dz_max = tol_m;
        Rng rng(derive_seed(424242, "criterion5:" + std::to_string(k)));
        double acc = 0.0;
        const int n = 200;
        for (int i = 0; i < n; ++i) {
            const auto perturbed =
                apply_hover(uavs, sample_perturbations(spec, uavs.size(), rng));
            acc += eval.objective(perturbed, {});
        }
        return acc / n;
    };

    std::vector<double> means4;
    for (int cm = 1; cm <= 5; ++cm) means4.push_back(mean_j(4, cm / 100.0));
    for (size_t i = 1; i < means4.size(); ++i)
        c.expect(means4[i] > means4[i - 1],
                 "mean J not increasing from " + std::to_string(i) + " cm");
    const double mean2_at5 = mean_j(2, 0.05);
    c.expect(means4.back() > mean2_at5, "J(K=4) <= J(K=2) at 5 cm");
    CHECK(c.ok);
}

namespace {

struct SweepMetrics {
    double width;
    int peaks;
};

SweepMetrics sweep_metrics(double spacing, double lambda) {
    const auto uavs = build_grid_layout({4, 1, 1, spacing, {0, 0, 0}});
    const auto weights = BeamWeights::uniform(4); // broadside steering
    std::vector<double> thetas;
    for (int i = 0; i <= 4000; ++i) thetas.push_back(-kPi / 2 + kPi * i / 4000.0);
    const auto sweep = aoa_sweep(uavs, weights, 0.0, thetas, lambda);

    size_t peak = 0;
    for (size_t i = 1; i < sweep.size(); ++i)
        if (sweep[i].magnitude > sweep[peak].magnitude) peak = i;
    const double thr = std::pow(10.0, -3.0 / 20.0);
    size_t lo = peak, hi = peak;
    while (lo > 0 && sweep[lo].magnitude > thr) --lo;
    while (hi + 1 < sweep.size() && sweep[hi].magnitude > thr) ++hi;

    SweepMetrics m{thetas[hi] - thetas[lo], 0};
    const double floor_mag = std::pow(10.0, -10.0 / 20.0);
    for (size_t i = 1; i + 1 < sweep.size(); ++i) {
        if (i == peak) continue;
        if (sweep[i].magnitude > sweep[i - 1].magnitude &&
            sweep[i].magnitude > sweep[i + 1].magnitude && sweep[i].magnitude > floor_mag)
            ++m.peaks;
    }
    return m;
}

} // namespace

TEST_CASE("criterion 6: wider spacing narrows the main lobe and adds sidelobes") {
    Criterion c(6, "-3 dB width shrinks and sidelobe count grows from lambda/2 to 2 lambda");
    const double lambda = FadingParams{}.wavelength();
    const auto narrow_spacing = sweep_metrics(lambda / 2, lambda);
    const auto wide_spacing = sweep_metrics(2 * lambda, lambda);
    c.expect(wide_spacing.width < narrow_spacing.width, "main lobe did not narrow");
    c.expect(wide_spacing.peaks > narrow_spacing.peaks, "sidelobe count did not grow");
    CHECK(c.ok);
}

TEST_CASE("criterion 7: backprop matches central finite differences") {
    Criterion c(7, "50 random nets/batches, max relative gradient error < 1e-5");
    Rng meta(20240601);
    double worst = 0.0;
    for (int instance = 0; instance < 50; ++instance) {
        const size_t in = 3 + meta.below(5);
        const size_t h1 = 4 + meta.below(8);
        const size_t h2 = 4 + meta.below(8);
        const size_t out = 2 + meta.below(6);
        const std::vector<size_t> sizes{in, h1, h2, out};
        auto net = dqn::QNetwork::he_init(sizes, meta);

        const size_t batch_size = 2 + meta.below(4);
        std::vector<dqn::Transition> batch(batch_size);
        for (auto& t : batch) {
            t.state.resize(in);
            t.next_state.resize(in);
            for (auto& v : t.state) v = meta.normal();
            for (auto& v : t.next_state) v = meta.normal();
            t.action = int(meta.below(out));
            t.reward = meta.normal();
            t.terminal = meta.uniform01() < 0.25;
        }
        const auto targets = dqn::compute_targets(net, batch, 0.05, 0.9);
        dqn::QNetwork grads = dqn::QNetwork::zeros(sizes);
        dqn::gradient_given_targets(net, batch, targets, grads);

        const double h = 1e-6;
        for (size_t p = 0; p < net.num_params(); ++p) {
            const double orig = net.get_param(p);
            net.set_param(p, orig + h);
            const double lp = dqn::loss_given_targets(net, batch, targets);
            net.set_param(p, orig - h);
            const double lm = dqn::loss_given_targets(net, batch, targets);
            net.set_param(p, orig);
            const double fd = (lp - lm) / (2 * h);
            const double an = grads.get_param(p);
            const double rel = std::abs(fd - an) / std::max(1e-8, std::abs(fd) + std::abs(an));
            worst = std::max(worst, rel);
        }
    }
    c.expect(worst < 1e-5, "max relative error " + std::to_string(worst));
    CHECK(c.ok);
}

TEST_CASE("criterion 8: Bellman arithmetic reproduces the hand-derived targets") {
    Criterion c(8, "three exact hand-computed Bellman targets");
    c.expect(dqn::bellman_target(0.5, 1.0, 2.0, 0.05, 0.9) == 0.6175, "0.6175 case");
    // alpha = 1, gamma = 0 collapses to Q + reward
    c.expect(dqn::bellman_target(0.3, 2.0, 5.0, 1.0, 0.0) == 0.3 + 1.0 * (2.0 + 0.0),
             "myopic case");
    // Q = 1, reward = -1, terminal (Q'max = 0), alpha = 0.5, gamma = 0.5:
    // 1 + 0.5 (-1 + 0.5 (0 - 1)) = 0.25
    c.expect(dqn::bellman_target(1.0, -1.0, 0.0, 0.5, 0.5) == 0.25, "terminal case");
    CHECK(c.ok);
}

TEST_CASE("criterion 9: training loss collapses within 100 updates") {
    Criterion c(9, "median over 5 seeds of loss@100 below 10% of the first-10 max");
    const auto t0 = std::chrono::steady_clock::now();
    auto cfg = paper_config();
    cfg.agent.num_episodes = 12; // enough episodes to log > 100 updates

    std::vector<double> ratios;
    for (uint64_t seed = 1; seed <= 5; ++seed) {
        const auto pipe = run_pipeline(cfg, seed);
        Rng rng(derive_seed(seed, "train"));
        const auto log = dqn::train(pipe.scenario, cfg.agent, rng);
        c.expect(log.losses.size() > 100,
                 "seed " + std::to_string(seed) + " logged only " +
                     std::to_string(log.losses.size()) + " updates");
        if (log.losses.size() <= 100) continue;
        double early_max = 0.0;
        for (size_t i = 0; i < 10; ++i) early_max = std::max(early_max, log.losses[i]);
        const double ratio = log.losses[99] / early_max;
        std::printf("  criterion 9 seed %llu: loss@100/max(first10) = %.4f\n",
                    (unsigned long long)seed, ratio);
        ratios.push_back(ratio);
    }
    c.expect(ratios.size() == 5, "missing seeds");
    std::sort(ratios.begin(), ratios.end());
    const double median = ratios[ratios.size() / 2];
    std::printf("  criterion 9 median ratio: %.4f\n", median);
    c.expect(median < 0.10, "median ratio " + std::to_string(median) + " not below 0.10");
    const double wall = seconds_since(t0);
    c.expect(wall < 600.0, "runtime " + std::to_string(wall) + " s exceeds 10 min");
    CHECK(c.ok);
}

TEST_CASE("criterion 10: average reward stabilizes after 200 episodes") {
    Criterion c(10, "window-50 reward slope under 5% of its mean for 10/30/50% tolerance");
    for (double frac : {0.10, 0.30, 0.50}) {
        auto cfg = paper_config();
        cfg.hover.tolerance_fraction = frac;
        const uint64_t seed = 11 + uint64_t(frac * 100);
        const auto pipe = run_pipeline(cfg, seed);
        Rng rng(derive_seed(seed, "train"));
        const auto log = dqn::train(pipe.scenario, cfg.agent, rng);
        REQUIRE(log.episodes.size() >= 300);

        std::vector<double> ma; // window-50 moving average at episodes 200..300
        for (size_t t = 200; t <= 300; ++t) {
            double acc = 0.0;
            for (size_t e = t - 50; e < t; ++e) acc += log.episodes[e].total_reward;
            ma.push_back(acc / 50.0);
        }
        const double n = double(ma.size());
        double xbar = (n - 1) / 2.0, ybar = 0.0;
        for (double y : ma) ybar += y;
        ybar /= n;
        double num = 0.0, den = 0.0;
        for (size_t i = 0; i < ma.size(); ++i) {
            num += (double(i) - xbar) * (ma[i] - ybar);
            den += (double(i) - xbar) * (double(i) - xbar);
        }
        const double slope = num / den;
        std::printf("  criterion 10 tolerance %.0f%%: MA mean %.4f slope %.6f (%.2f%% of mean)\n",
                    frac * 100, ybar, slope, 100.0 * std::abs(slope) / std::abs(ybar));
        c.expect(std::abs(slope) < 0.05 * std::abs(ybar),
                 "slope too steep at tolerance " + std::to_string(frac));
    }
    CHECK(c.ok);
}

TEST_CASE("criterion 11: trained agent re-forms the beam, untrained does not") {
    Criterion c(11, "eta reduced in >= 90% of 100 held-out draws; untrained below that");
    auto cfg = paper_config();
    const uint64_t seed = 21;
    const auto pipe = run_pipeline(cfg, seed);
    Rng rng(derive_seed(seed, "train"));
    const auto log = dqn::train(pipe.scenario, cfg.agent, rng);

    dqn::AgentConfig rollout = cfg.agent;
    rollout.eta_threshold = log.eta_threshold;

    std::vector<size_t> sizes;
    sizes.push_back(6 * pipe.scenario.subset.size() + 1);
    sizes.insert(sizes.end(), cfg.agent.hidden_sizes.begin(), cfg.agent.hidden_sizes.end());
    sizes.push_back(8 * pipe.scenario.subset.size());
    Rng baseline_rng(derive_seed(seed, "baseline-init"));
    const auto untrained = dqn::QNetwork::he_init(sizes, baseline_rng);

    Rng eval_rng(derive_seed(seed, "reform-eval"));
    int improved_trained = 0, improved_untrained = 0;
    const int draws = 100;
    for (int d = 0; d < draws; ++d) {
        const auto p =
            sample_perturbations(pipe.scenario.hover, pipe.scenario.subset.size(), eval_rng);
        const auto with_net = dqn::propose_corrections(log.net, pipe.scenario, rollout, p);
        const auto without = dqn::propose_corrections(untrained, pipe.scenario, rollout, p);
        if (with_net.best_eta < with_net.initial_eta) ++improved_trained;
        if (without.best_eta < without.initial_eta) ++improved_untrained;
    }
    std::printf("  criterion 11: trained improved %d/100, untrained %d/100\n", improved_trained,
                improved_untrained);
    c.expect(improved_trained >= 90, "trained agent improved only " +
                                         std::to_string(improved_trained) + "/100");
    c.expect(improved_untrained < 90, "untrained baseline unexpectedly improved " +
                                          std::to_string(improved_untrained) + "/100");
    CHECK(c.ok);
}

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(UAVBEAM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

bool same_csvs(const fs::path& a, const fs::path& b, Criterion& c, const std::string& label) {
    bool all = true;
    size_t compared = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
        if (entry.path().extension() != ".csv") continue;
        ++compared;
        const auto other = b / entry.path().filename();
        const bool same = fs::exists(other) && slurp(entry.path()) == slurp(other);
        c.expect(same, label + ": " + entry.path().filename().string() + " differs");
        all = all && same;
    }
    c.expect(compared > 0, label + ": no CSV artifacts found");
    return all;
}

void check_manifest_complete(const fs::path& dir, Criterion& c) {
    const auto man = json::parse(slurp(dir / "manifest.json"));
    std::vector<std::string> listed = man["artifacts"].get<std::vector<std::string>>();
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        c.expect(std::find(listed.begin(), listed.end(), name) != listed.end(),
                 "file " + name + " missing from manifest");
    }
}

} // namespace

TEST_CASE("criterion 12: byte-identical artifacts across reruns and thread counts") {
    Criterion c(12, "train/select/sweeps reproduce byte-identical CSVs, any --threads");
    const fs::path root = fs::temp_directory_path() / "uavbeam_acceptance_c12";
    fs::remove_all(root);
    fs::create_directories(root);

    const fs::path cfg_path = root / "config.json";
    {
        std::ofstream os(cfg_path);
        os << R"({
  "seed": 9,
  "swarm": {"l_u": 4, "c_u": 2, "r_u": 1, "spacing_delta": 1.0, "origin": [0.0, 0.0, 30.0]},
  "receiver": [50.0, 50.0, 300.0],
  "selection": {"k": 3},
  "beam": {"angular_grid": 24},
  "agent": {"num_episodes": 10, "max_steps_per_episode": 40, "batch_size": 16,
            "hidden_sizes": [32, 32], "replay_capacity": 400, "threshold_probes": 20}
})";
    }
    const std::string base = "--config " + cfg_path.string() + " --seed 7 ";

    const std::vector<std::pair<std::string, std::string>> runs{
        {"pearson", "--samples 60"},
        {"heatmap", "--nx 16 --ny 16"},
        {"aoa-sweep", "--points 256"},
        {"hover-map", "--max-angle-deg 10 --step-deg 5"},
        {"displacement-pattern", "--points 256"},
        {"select", ""},
        {"train", ""},
    };
    for (const auto& [sub, extra] : runs) {
        const fs::path a = root / (sub + "_a");
        const fs::path b = root / (sub + "_b");
        c.expect(run_cli(sub + " " + base + extra + " --threads 1 --out " + a.string()) == 0,
                 sub + " run A failed");
        c.expect(run_cli(sub + " " + base + extra + " --threads 4 --out " + b.string()) == 0,
                 sub + " run B failed");
        same_csvs(a, b, c, sub);
        check_manifest_complete(a, c);
        if (sub == "select") {
            const auto ja = json::parse(slurp(a / "selection.json"));
            const auto jb = json::parse(slurp(b / "selection.json"));
            c.expect(ja["best_indices"] == jb["best_indices"], "select indices differ");
            c.expect(ja["best_sinr_db"] == jb["best_sinr_db"], "select SINR differs");
            c.expect(ja["evaluated_count"] == jb["evaluated_count"], "select count differs");
        }
        if (sub == "train") {
            // checkpoints carry the full parameter set; byte-compare them too
            c.expect(slurp(a / "qnet_checkpoint.txt") == slurp(b / "qnet_checkpoint.txt"),
                     "train checkpoints differ");
        }
    }
    CHECK(c.ok);
}

TEST_CASE("cli exit codes") {
    // not a numbered criterion; guards the documented CLI error contract
    const fs::path root = fs::temp_directory_path() / "uavbeam_acceptance_cli";
    fs::remove_all(root);
    fs::create_directories(root);
    const fs::path good = root / "good.json";
    {
        std::ofstream os(good);
        os << R"({"swarm": {"l_u": 2, "c_u": 1, "r_u": 1}, "receiver": [50.0, 50.0, 300.0]})";
    }
    const fs::path bad = root / "bad.json";
    {
        std::ofstream os(bad);
        os << R"({"swarm": {"l_u": 2, "c_u": 1, "r_u": 1}, "receiver": [50, 50, 300], "oops": 1})";
    }
    CHECK(run_cli("select --config " + good.string() + " --out " + (root / "ok").string()) == 0);
    CHECK(run_cli("select --config " + bad.string() + " --out " + (root / "b").string()) == 2);
    CHECK(run_cli("select --config " + (root / "missing.json").string() + " --out " +
                  (root / "m").string()) == 2);
    CHECK(run_cli("not-a-subcommand --config " + good.string()) == 2);
}

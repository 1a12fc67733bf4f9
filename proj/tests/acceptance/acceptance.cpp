// One PASS/FAIL line per criterion. A criterion in kKnownRed that fails does
// not fail the run; one that passes does.

#include <c3d/datagen.hpp>
#include <c3d/features.hpp>
#include <c3d/io.hpp>
#include <c3d/loss.hpp>
#include <c3d/pipeline.hpp>
#include <c3d/refine.hpp>

#include "cli_helpers.hpp"
#include "fixtures.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>

using namespace c3d;
using namespace c3d::testing;
namespace fs = std::filesystem;

namespace {

const std::set<std::string> kKnownRed = {"oracle_equivalence"};

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome gradient_fidelity() {
  const auto t0 = Clock::now();
  const auto detached = cli({"grad-check", "--scenes", "100", "--mode", "detached"});
  const auto full = cli({"grad-check", "--scenes", "100", "--mode", "full"});
  const double elapsed = seconds_since(t0);
  const bool pass = detached.code == 0 && full.code == 0 && detached.number("max_rel_error") < 1e-5 &&
                    full.number("max_rel_error") < 1e-4 && elapsed < 60;
  return {pass, "detached " + detached.record()["max_rel_error"] + " (< 1e-5), full " + full.record()["max_rel_error"] +
                    " (< 1e-4), 100 scenes each, " + fmt("%.1f s", elapsed)};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> size(1, 200);
  KernelConfig cfg;
  double worst_oracle = 0;
  for (int t = 0; t < 50; ++t) {
    const auto pred = random_cloud(rng, size(rng)), lidar = random_cloud(rng, size(rng));
    const double s0 = sample_s0(rng, cfg.s0_law);
    const double a = inner_product(pred, lidar, all_pairs(pred.size(), lidar.size()), cfg, s0);
    const double b = brute_force(pred, lidar, cfg, s0);
    worst_oracle = std::max(worst_oracle, std::abs(a - b) / std::abs(b));
  }

  double worst_prune = 0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    for (const auto& spec : {plane_and_boxes_case(seed), reflective_hole_case(seed)}) {
      const auto d = make_case(spec, seed);
      const double s0 = draw_s0(seed, cfg.s0_law);
      const auto pred = make_prediction_cloud(d.initial, spec.K, &d.hsv, cfg);
      const auto lidar = prepare_lidar(d.lidar, spec.K, &d.hsv, cfg);
      const double full = inner_product(pred, lidar, all_pairs(pred.size(), lidar.size()), cfg, s0);
      const double pruned = inner_product(pred, lidar, prune_pairs(pred, lidar, spec.K, cfg.prune_radius), cfg, s0);
      worst_prune = std::max(worst_prune, std::abs(pruned - full) / std::abs(full));
    }
  }
  return {worst_oracle < 1e-10 && worst_prune < 1e-3,
          "all-pairs vs brute force " + fmt("%.2e", worst_oracle) + " (< 1e-10, 50 clouds); radius-4 pruning " +
              fmt("%.3f", worst_prune) + " (< 1e-3, 6 suite frames)"};
}

Outcome kernel_properties() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  KernelConfig cfg;
  int violations = 0;
  for (int t = 0; t < 10000; ++t) {
    const Vec3 x = random_cloud(rng, 1).points.col(0), z = random_cloud(rng, 1).points.col(0);
    const Vec3 hx = random_hsv(rng), hz = random_hsv(rng), nx = random_unit(rng), nz = random_unit(rng);
    const double rx = U(rng), rz = U(rng), s0 = sample_s0(rng, cfg.s0_law);
    const PointFeatures fx{&hx, &nx, rx}, fz{&hz, &nz, rz};

    const double s = kernel_scale(x, z, cfg, s0);
    const double k = exp_kernel(x, z, cfg.sigma_g, s);
    const double cv = hsv_affinity(hx, hz, cfg.sigma_v, cfg.s_v);
    const double cn = normal_affinity(nx, rx, nz, rz, cfg.epsilon);
    violations += k != exp_kernel(z, x, cfg.sigma_g, kernel_scale(z, x, cfg, s0));
    violations += cv != hsv_affinity(hz, hx, cfg.sigma_v, cfg.s_v);
    violations += cn != normal_affinity(nz, rz, nx, rx, cfg.epsilon);
    violations += pair_weight(x, z, fx, fz, cfg, s0) != pair_weight(z, x, fz, fx, cfg, s0);
    violations += !(k > 0 && k <= cfg.sigma_g);
    violations += !(cv > 0 && cv <= cfg.sigma_v);
    violations += !(cn >= 0 && cn <= 1.0 / cfg.epsilon);

    Points neighbors(3, 6);
    for (int q = 0; q < 6; ++q) neighbors.col(q) = x + 0.1 * random_unit(rng);
    const double r = normal_residual(x, nx, neighbors);
    violations += !(r >= 0 && r <= 1);
  }

  std::mt19937_64 draws(11);
  double sum = 0;
  for (int t = 0; t < 1000000; ++t) sum += sample_s0(draws, cfg.s0_law);
  const double mean = sum / 1e6, expected = 0.01 + 0.02 * std::sqrt(2.0 / M_PI);
  return {violations == 0 && std::abs(mean - expected) < 2e-4,
          std::to_string(violations) + " symmetry/bound violations over 1e4 inputs; s0 mean " + fmt("%.6f", mean) +
              " vs " + fmt("%.6f", expected)};
}

Outcome joint_isometry() {
  std::mt19937_64 rng(31);
  KernelConfig cfg;
  cfg.scale_mode = ScaleMode::constant;
  const auto pred = random_cloud(rng, 120), lidar = random_cloud(rng, 90);
  const auto pairs = all_pairs(pred.size(), lidar.size());
  const double base = c3d_log_loss(pred, lidar, pairs, cfg, 0.5).loss;
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    const Pose T = random_pose(rng);
    const double moved = c3d_log_loss(transform_cloud(pred, T), transform_cloud(lidar, T), pairs, cfg, 0.5).loss;
    worst = std::max(worst, std::abs(moved - base));
  }
  return {worst < 1e-9, "max |change| " + fmt("%.2e", worst) + " over 100 rigid transforms"};
}

Outcome refinement_efficacy() {
  bool pass = true;
  std::string detail;
  double slowest = 0;
  const RefineConfig config;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto t0 = Clock::now();
    const auto d = make_case(plane_and_boxes_case(seed), seed);
    const auto lidar = prepare_lidar(d.lidar, d.spec.K, &d.hsv, config.kernel);
    const auto result = refine_depth(d.initial, &d.hsv, lidar, d.spec.K, config);
    slowest = std::max(slowest, seconds_since(t0));
    const double ratio = eval_metrics(result.depth, d.gt).rmse / eval_metrics(d.initial, d.gt).rmse;
    pass &= ratio <= 0.7;
    detail += fmt(seed == 1 ? "boxes ratios %.3f" : " %.3f", ratio);
  }
  detail += " (<= 0.7);";
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto t0 = Clock::now();
    const auto d = make_case(reflective_hole_case(seed), seed);
    const auto lidar = prepare_lidar(d.lidar, d.spec.K, &d.hsv, config.kernel);
    const auto result = refine_depth(d.initial, &d.hsv, lidar, d.spec.K, config);
    slowest = std::max(slowest, seconds_since(t0));
    const Grid<bool> uncovered = !lidar_coverage(d.lidar, d.spec.K);
    const double before = masked_rmse(d.initial, d.gt, uncovered), after = masked_rmse(result.depth, d.gt, uncovered);
    pass &= after < before;
    detail += " hole seed " + std::to_string(seed) + fmt(" uncovered RMSE %.4f", before) + fmt(" -> %.4f", after) + ";";
  }
  pass &= slowest < 300;
  return {pass, detail + fmt(" slowest scene %.1f s", slowest)};
}

Outcome ablation_harness() {
  const auto d = make_case(plane_and_boxes_case(1), 1);
  const auto runs = run_ablation(d.initial, d.hsv, d.lidar, d.spec.K, d.gt, RefineConfig{});
  const bool pass = runs.size() == 2 && !runs[0].normal_kernel && runs[1].normal_kernel &&
                    runs[0].before.rmse == runs[1].before.rmse && runs[0].before.count == runs[1].before.count &&
                    runs[0].after.count > 0 && runs[1].after.count > 0;
  std::string detail = "paired reports on one seeded case:";
  for (const auto& r : runs)
    detail += std::string(r.normal_kernel ? " color+normal" : " color") + fmt(" RMSE %.4f", r.before.rmse) +
              fmt(" -> %.4f", r.after.rmse);
  return {pass, detail};
}

Outcome metrics_correctness() {
  const auto gt = constant_depth(6, 7, 8.0), pred = constant_depth(6, 7, 10.0);
  const auto m = eval_metrics(pred, gt);
  return {m.abs_rel == 0.25 && m.delta1 == 0.0 && m.delta2 == 1.0,
          fmt("abs_rel %.17g", m.abs_rel) + fmt(" delta1 %g", m.delta1) + fmt(" delta2 %g", m.delta2)};
}

// Runs the executable, capturing stdout, and returns the exit status.
int run_process(const std::string& args, const fs::path& stdout_path) {
  const int status = std::system(
      (std::string("\"") + C3D_CLI_PATH + "\" " + args + " >\"" + stdout_path.string() + "\" 2>/dev/null").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string tree_bytes(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::string all;
  for (const auto& f : files) all += fs::relative(f, dir).string() + "\n" + slurp(f);
  return all;
}

Outcome determinism() {
  const auto root = scratch_dir("acceptance_determinism");
  const auto frame = root / "frame";
  const auto small = root / "small";
  if (run_process("synth --case plane_and_boxes --seed 3 --out \"" + frame.string() + "\"", root / "setup.txt") != 0)
    return {false, "could not synthesize the input frame"};
  fs::create_directories(small);
  std::ofstream(small / "k.txt") << "fx = 30\nfy = 30\ncx = 11.5\ncy = 5.5\nwidth = 24\nheight = 12\n";
  std::ofstream(small / "scene.json") << R"({"primitives": [
    {"type": "plane", "point": [0, 0, 9], "normal": [0, 0, -1], "extent": 50, "hsv": [0.6, 0.3, 0.5]},
    {"type": "sphere", "center": [0, 0, 5], "radius": 1, "hsv": [0.1, 0.8, 0.7]}]})";
  if (run_process("synth --scene \"" + (small / "scene.json").string() + "\" --calib \"" + (small / "k.txt").string() +
                      "\" --range-noise 0.02 --seed 3 --out \"" + (small / "data").string() + "\"",
                  root / "setup.txt") != 0)
    return {false, "could not synthesize the small frame"};

  const auto frame_flags = [](const fs::path& d, const char* depth) {
    return "--depth \"" + (d / depth).string() + "\" --image \"" + (d / "hsv.pfm").string() + "\" --cloud \"" +
           (d / "lidar.ply").string() + "\" --calib \"" + (d / "calib.txt").string() + "\"";
  };
  const std::string big = frame_flags(frame, "init.png"), tiny = frame_flags(small / "data", "depth.png");
  const std::string gt = " --gt \"" + (frame / "depth.png").string() + "\"";

  struct Command {
    std::string name, args;
  };
  const std::vector<Command> commands = {
      {"synth", "synth --case reflective_hole --seed 4 --out @"},
      {"eval-loss", "eval-loss --seed 4 " + big},
      {"brute-force", "brute-force --seed 4 " + tiny},
      {"grad-check", "grad-check --seed 4 --scenes 3 --mode full"},
      {"refine", "refine --seed 4 --iterations 30 --out @ " + big + gt},
      {"ablation", "ablation --seed 4 --iterations 10 --out @ " + big + gt},
      {"metrics", "metrics --pred \"" + (frame / "init.png").string() + "\"" + gt},
  };

  std::string differing, failing;
  for (const auto& c : commands) {
    std::string bytes[2];
    for (int k = 0; k < 2; ++k) {
      const auto dir = root / (c.name + std::to_string(k));
      const auto out = root / "stdout" / (c.name + std::to_string(k) + ".txt");
      fs::create_directories(out.parent_path());
      std::string args = c.args;
      if (const auto at = args.find('@'); at != std::string::npos) args.replace(at, 1, "\"" + dir.string() + "\"");
      if (run_process(args, out) != 0) failing += " " + c.name;
      std::string printed = slurp(out);
      // synth echoes its output path
      if (const auto p = printed.find(dir.string()); p != std::string::npos) printed.replace(p, dir.string().size(), "@");
      bytes[k] = printed + (fs::exists(dir) ? tree_bytes(dir) : std::string());
    }
    if (bytes[0] != bytes[1]) differing += " " + c.name;
  }
  const bool pass = differing.empty() && failing.empty();
  std::string detail = std::to_string(commands.size()) + " commands run twice in separate processes";
  if (!failing.empty()) detail += "; nonzero exit:" + failing;
  if (!differing.empty()) detail += "; output differs:" + differing;
  return {pass, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"gradient_fidelity", gradient_fidelity},     {"oracle_equivalence", oracle_equivalence},
      {"kernel_properties", kernel_properties},     {"joint_isometry", joint_isometry},
      {"refinement_efficacy", refinement_efficacy}, {"ablation_harness", ablation_harness},
      {"metrics_correctness", metrics_correctness}, {"determinism", determinism},
  };
  int unexpected = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const bool known_red = kKnownRed.count(name) > 0;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail;
    if (known_red) std::cout << (o.pass ? " [listed as known red, update the list]" : " [known red]");
    std::cout << std::endl;
    unexpected += o.pass == known_red;
  }
  return unexpected == 0 ? 0 : 1;
}

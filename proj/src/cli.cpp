#include <c3d/cli.hpp>
#include <c3d/datagen.hpp>
#include <c3d/gradcheck.hpp>
#include <c3d/io.hpp>
#include <c3d/loss.hpp>
#include <c3d/pipeline.hpp>
#include <c3d/refine.hpp>

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <ostream>
#include <random>

namespace c3d {

namespace {

namespace fs = std::filesystem;
using io::format_double;
using nlohmann::json;

struct KernelFlags {
  double sigma = 1.0;
  std::string s0;
  double sv = 0.2;
  double sigma_v = 1.0;
  double epsilon = 0.05;
  int prune_radius = 4;
  bool no_normal_kernel = false;
  bool no_hsv_kernel = false;
  std::string normal_grad = "detached";
  double max_depth = kMaxDepth;

  void add(CLI::App* app, const std::string& s0_default, const std::string& normal_grad_default = "detached") {
    s0 = s0_default;
    normal_grad = normal_grad_default;
    app->add_option("--kernel-sigma", sigma, "geometric kernel amplitude")->capture_default_str();
    app->add_option("--s0", s0, "base scale law: fixed:<v> or sampled")->capture_default_str();
    app->add_option("--sv", sv, "color kernel length scale")->capture_default_str();
    app->add_option("--sigma-v", sigma_v, "color kernel amplitude")->capture_default_str();
    app->add_option("--epsilon", epsilon, "normal affinity regularizer")->capture_default_str();
    app->add_option("--prune-radius", prune_radius, "pair pruning radius in pixels")->capture_default_str();
    app->add_flag("--no-normal-kernel", no_normal_kernel, "drop the normal affinity");
    app->add_flag("--no-hsv-kernel", no_hsv_kernel, "drop the color affinity");
    app->add_option("--normal-grad", normal_grad, "detached or full")
        ->check(CLI::IsMember({"detached", "full"}))
        ->capture_default_str();
    app->add_option("--max-depth", max_depth, "LIDAR depth cap (m)")->capture_default_str();
  }

  KernelConfig config() const {
    KernelConfig k;
    k.sigma_g = sigma;
    k.s0_law = parse_s0(s0);
    k.s_v = sv;
    k.sigma_v = sigma_v;
    k.epsilon = epsilon;
    k.prune_radius = prune_radius;
    k.use_normal_kernel = !no_normal_kernel;
    k.use_hsv_kernel = !no_hsv_kernel;
    k.normal_grad_mode = normal_grad == "full" ? NormalGradMode::full : NormalGradMode::detached;
    k.validate();
    return k;
  }

  static S0Law parse_s0(const std::string& text) {
    if (text == "sampled") return S0Law::sampled();
    if (text.rfind("fixed:", 0) == 0) {
      const std::string v = text.substr(6);
      double value = 0;
      const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), value);
      if (ec == std::errc() && ptr == v.data() + v.size()) return S0Law::fixed(value);
    }
    throw ConfigurationError("--s0 expects 'sampled' or 'fixed:<value>', got '" + text + "'");
  }
};

struct FrameInputs {
  std::string depth, image, cloud, calib;

  void add(CLI::App* app, const char* depth_help = "depth PNG (stored/256 m, 0 invalid)") {
    app->add_option("--depth", depth, depth_help)->required()->check(CLI::ExistingFile);
    app->add_option("--image", image, "HSV .pfm or RGB .png")->required()->check(CLI::ExistingFile);
    app->add_option("--cloud", cloud, "LIDAR PLY")->required()->check(CLI::ExistingFile);
    app->add_option("--calib", calib, "calibration file")->required()->check(CLI::ExistingFile);
  }
};

struct Frame {
  CameraIntrinsics K;
  DepthMap depth;
  HsvImage hsv;
  PointCloud lidar;
};

Frame load_frame(const FrameInputs& in) {
  Frame f;
  f.K = io::read_calibration(in.calib);
  f.depth = io::read_depth_png(in.depth);
  f.hsv = io::read_hsv_image(in.image);
  f.lidar = io::read_ply(in.cloud);
  if (f.depth.rows() != f.K.height || f.depth.cols() != f.K.width)
    throw ConfigurationError(in.depth + " is " + std::to_string(f.depth.cols()) + "x" + std::to_string(f.depth.rows()) +
                             " but the calibration says " + std::to_string(f.K.width) + "x" + std::to_string(f.K.height));
  if (f.hsv.rows != f.K.height || f.hsv.cols != f.K.width)
    throw ConfigurationError(in.image + " does not match the calibrated image size");
  return f;
}

void print_kv(std::ostream& out, const std::string& key, double v) { out << key << "=" << format_double(v) << "\n"; }
void print_kv(std::ostream& out, const std::string& key, std::uint64_t v) { out << key << "=" << v << "\n"; }

std::string metrics_header() { return "abs_rel,sq_rel,rmse,rmse_log,delta1,delta2,delta3,count"; }

std::string metrics_row(const MetricsReport& m) {
  return format_double(m.abs_rel) + "," + format_double(m.sq_rel) + "," + format_double(m.rmse) + "," +
         format_double(m.rmse_log) + "," + format_double(m.delta1) + "," + format_double(m.delta2) + "," +
         format_double(m.delta3) + "," + std::to_string(m.count);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  return out;
}

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
  std::string scene, case_name, calib, lidar_spec, out;
  std::uint64_t seed = 0;
  double range_noise = -1;
  double init_noise = 0, init_bias = 0;
  std::vector<std::string> holes;
};

HoleRect parse_hole(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double x = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), x);
    if (ec != std::errc() || ptr != item.data() + item.size())
      throw ConfigurationError("--hole expects row,col,rows,cols[,offset], got '" + text + "'");
    v.push_back(x);
  }
  if (v.size() != 4 && v.size() != 5) throw ConfigurationError("--hole expects row,col,rows,cols[,offset], got '" + text + "'");
  HoleRect h{static_cast<int>(v[0]), static_cast<int>(v[1]), static_cast<int>(v[2]), static_cast<int>(v[3])};
  if (v.size() == 5) {
    h.mode = HoleRect::Mode::offset;
    h.offset = v[4];
  } else {
    h.mode = HoleRect::Mode::invalidate;
  }
  return h;
}

json corruption_json(const Corruption& c) {
  json holes = json::array();
  for (const auto& h : c.holes)
    holes.push_back({{"row", h.row},
                     {"col", h.col},
                     {"rows", h.rows},
                     {"cols", h.cols},
                     {"mode", h.mode == HoleRect::Mode::offset ? "offset" : "invalidate"},
                     {"offset", h.offset}});
  return {{"noise_std", c.noise_std}, {"bias", c.bias}, {"holes", holes}};
}

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  Scene scene;
  CameraIntrinsics K;
  LidarSpec spec;
  Corruption corruption;
  bool write_init = false;
  std::string source;
  if (!a.case_name.empty()) {
    SyntheticCase c;
    if (a.case_name == "plane_and_boxes")
      c = plane_and_boxes_case(a.seed);
    else if (a.case_name == "reflective_hole")
      c = reflective_hole_case(a.seed);
    else
      throw ConfigurationError("unknown case '" + a.case_name + "' (plane_and_boxes or reflective_hole)");
    scene = c.scene;
    K = c.K;
    spec = c.lidar;
    corruption = c.corruption;
    write_init = true;
    source = c.name;
  } else {
    if (a.calib.empty()) throw ConfigurationError("--scene needs --calib");
    scene = io::read_scene(a.scene);
    K = io::read_calibration(a.calib);
    spec = LidarSpec::kitti_like(K);
    source = a.scene;
  }
  if (!a.calib.empty() && !a.case_name.empty()) K = io::read_calibration(a.calib);
  if (!a.lidar_spec.empty()) spec = io::lidar_spec_from_json(io::read_json(a.lidar_spec));
  if (a.range_noise >= 0) spec.range_noise_std = a.range_noise;
  if (a.init_noise > 0 || a.init_bias != 0 || !a.holes.empty()) {
    corruption.noise_std = a.init_noise;
    corruption.bias = a.init_bias;
    corruption.holes.clear();
    for (const auto& h : a.holes) corruption.holes.push_back(parse_hole(h));
    write_init = true;
  }

  const fs::path dir(a.out);
  fs::create_directories(dir);
  std::mt19937_64 rng(a.seed);
  const Rendering rendering = render_depth(scene, K);
  const PointCloud lidar = simulate_lidar(scene, spec, Pose::identity(), rng);

  io::write_depth_png(dir / "depth.png", rendering.depth);
  io::write_hsv_pfm(dir / "hsv.pfm", rendering.hsv);
  io::write_ply(dir / "lidar.ply", lidar);
  io::write_calibration(dir / "calib.txt", K);
  io::write_json(dir / "scene.json", io::scene_to_json(scene));
  json files = {{"depth", "depth.png"}, {"hsv", "hsv.pfm"}, {"lidar", "lidar.ply"}, {"calib", "calib.txt"},
                {"scene", "scene.json"}};
  if (write_init) {
    const DepthMap init = corrupt_depth(rendering.depth, corruption, rng);
    io::write_depth_png(dir / "init.png", init);
    files["init"] = "init.png";
  }

  json manifest = {{"seed", a.seed},
                   {"source", source},
                   {"calibration",
                    {{"fx", K.fx}, {"fy", K.fy}, {"cx", K.cx}, {"cy", K.cy}, {"width", K.width}, {"height", K.height}}},
                   {"lidar_spec", io::to_json(spec)},
                   {"lidar_points", lidar.size()},
                   {"valid_pixels", rendering.depth.valid_count()},
                   {"files", files}};
  if (write_init) manifest["corruption"] = corruption_json(corruption);
  io::write_json(dir / "manifest.json", manifest);

  out << "wrote " << (dir / "manifest.json").string() << "\n";
  print_kv(out, "lidar_points", static_cast<std::uint64_t>(lidar.size()));
  print_kv(out, "valid_pixels", static_cast<std::uint64_t>(rendering.depth.valid_count()));
  print_kv(out, "seed", a.seed);
  return 0;
}

// ---------------------------------------------------------------------------
// eval-loss / brute-force

int cmd_eval_loss(const FrameInputs& in, const KernelFlags& kf, std::uint64_t seed, std::ostream& out) {
  const KernelConfig config = kf.config();
  const Frame f = load_frame(in);
  const double s0 = draw_s0(seed, config.s0_law);
  const auto sum = evaluate_depth(f.depth, &f.hsv, f.lidar, f.K, config, s0, LossForm::sum, false, kf.max_depth);
  if (!(sum.inner_product > 0))
    throw DegenerateSceneError("inner product is not positive, the log loss is undefined", sum.pair_count);
  const auto log = evaluate_depth(f.depth, &f.hsv, f.lidar, f.K, config, s0, LossForm::log, false, kf.max_depth);
  print_kv(out, "loss", sum.loss);
  print_kv(out, "log_loss", log.loss);
  print_kv(out, "inner_product", sum.inner_product);
  print_kv(out, "pair_count", static_cast<std::uint64_t>(sum.pair_count));
  print_kv(out, "s0", s0);
  print_kv(out, "seed", seed);
  return 0;
}

int cmd_brute_force(const FrameInputs& in, const KernelFlags& kf, std::uint64_t seed, std::ostream& out) {
  const KernelConfig config = kf.config();
  const Frame f = load_frame(in);
  const double s0 = draw_s0(seed, config.s0_law);
  const PointCloud pred = make_prediction_cloud(f.depth, f.K, &f.hsv, config);
  const PointCloud lidar = prepare_lidar(f.lidar, f.K, &f.hsv, config, kf.max_depth);
  const double inner = brute_force(pred, lidar, config, s0);
  const auto pairs = static_cast<std::uint64_t>(pred.size()) * static_cast<std::uint64_t>(lidar.size());
  if (pairs == 0) throw DegenerateSceneError("brute force over an empty cloud", 0);
  print_kv(out, "loss", -inner);
  if (inner > 0) print_kv(out, "log_loss", -std::log(inner + kLogDelta));
  print_kv(out, "inner_product", inner);
  print_kv(out, "pair_count", pairs);
  print_kv(out, "s0", s0);
  print_kv(out, "seed", seed);
  return 0;
}

// ---------------------------------------------------------------------------
// grad-check

struct GradCheckArgs {
  std::uint64_t seed = 0;
  int scenes = 1;
  int rows = 8, cols = 8;
  std::string mode;
};

int cmd_grad_check(const GradCheckArgs& a, KernelFlags kf, std::ostream& out) {
  if (!a.mode.empty()) kf.normal_grad = a.mode;
  if (a.scenes < 1) throw ConfigurationError("--scenes must be >= 1");
  GradCheckOptions options;
  options.rows = a.rows;
  options.cols = a.cols;
  options.kernel = kf.config();
  const double tolerance = grad_check_tolerance(options.kernel.normal_grad_mode);

  double worst_sum = 0, worst_log = 0;
  std::uint64_t worst_seed = a.seed;
  for (int k = 0; k < a.scenes; ++k) {
    const std::uint64_t seed = a.seed + static_cast<std::uint64_t>(k);
    const auto r = grad_check(seed, options);
    if (r.max_rel_error() > std::max(worst_sum, worst_log)) worst_seed = seed;
    worst_sum = std::max(worst_sum, r.max_rel_error_sum);
    worst_log = std::max(worst_log, r.max_rel_error_log);
  }
  const double worst = std::max(worst_sum, worst_log);
  out << "mode=" << kf.normal_grad << "\n";
  print_kv(out, "scenes", static_cast<std::uint64_t>(a.scenes));
  print_kv(out, "rows", static_cast<std::uint64_t>(a.rows));
  print_kv(out, "cols", static_cast<std::uint64_t>(a.cols));
  print_kv(out, "seed", a.seed);
  print_kv(out, "max_rel_error_sum", worst_sum);
  print_kv(out, "max_rel_error_log", worst_log);
  print_kv(out, "max_rel_error", worst);
  print_kv(out, "worst_seed", worst_seed);
  print_kv(out, "tolerance", tolerance);
  const bool pass = worst < tolerance;
  out << "status=" << (pass ? "pass" : "fail") << "\n";
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// refine / ablation

struct RefineArgs {
  std::string gt, out;
  std::uint64_t seed = 0;
  RefineConfig config;

  void add(CLI::App* app) {
    app->add_option("--gt", gt, "ground-truth depth PNG")->check(CLI::ExistingFile);
    app->add_option("--iterations", config.iterations)->capture_default_str();
    app->add_option("--step", config.step_size, "largest per-pixel step (m)")->capture_default_str();
    app->add_option("--backtracking", config.backtracking)->capture_default_str();
    app->add_option("--max-backtracks", config.max_backtracks)->capture_default_str();
    app->add_option("--anchor-weight", config.anchor_weight)->capture_default_str();
    app->add_option("--anchor-delta", config.anchor_delta)->capture_default_str();
  }
};

int cmd_refine(const FrameInputs& in, const KernelFlags& kf, RefineArgs a, std::ostream& out) {
  if (a.out.empty()) throw ConfigurationError("refine needs --out");
  a.config.kernel = kf.config();
  a.config.seed = a.seed;
  a.config.validate();
  const Frame f = load_frame(in);
  const PointCloud lidar = prepare_lidar(f.lidar, f.K, &f.hsv, a.config.kernel, kf.max_depth);
  const auto result = refine_depth(f.depth, &f.hsv, lidar, f.K, a.config);

  const fs::path dir(a.out);
  fs::create_directories(dir);
  io::write_depth_png(dir / "refined.png", result.depth);
  {
    auto csv = open_out(dir / "loss_history.csv");
    csv << "step,objective\n";
    for (std::size_t k = 0; k < result.history.size(); ++k) csv << k << "," << format_double(result.history[k]) << "\n";
  }
  json record = {{"seed", a.seed},
                 {"inputs", {{"depth", in.depth}, {"image", in.image}, {"cloud", in.cloud}, {"calib", in.calib}}},
                 {"refine", io::to_json(a.config)},
                 {"max_depth", kf.max_depth},
                 {"accepted_steps", result.accepted_steps},
                 {"initial_objective", result.history.front()},
                 {"final_objective", result.history.back()}};
  if (!a.gt.empty()) {
    const DepthMap gt = io::read_depth_png(a.gt);
    const auto before = eval_metrics(f.depth, gt, kf.max_depth);
    const auto after = eval_metrics(io::quantize_depth(result.depth), gt, kf.max_depth);
    auto csv = open_out(dir / "metrics.csv");
    csv << "phase," << metrics_header() << "\n";
    csv << "before," << metrics_row(before) << "\n";
    csv << "after," << metrics_row(after) << "\n";
    record["inputs"]["gt"] = a.gt;
    record["metrics"] = {{"before", io::to_json(before)}, {"after", io::to_json(after)}};
    print_kv(out, "rmse_before", before.rmse);
    print_kv(out, "rmse_after", after.rmse);
  }
  io::write_json(dir / "run_config.json", record);
  print_kv(out, "accepted_steps", static_cast<std::uint64_t>(result.accepted_steps));
  print_kv(out, "initial_objective", result.history.front());
  print_kv(out, "final_objective", result.history.back());
  print_kv(out, "seed", a.seed);
  return 0;
}

int cmd_ablation(const FrameInputs& in, const KernelFlags& kf, RefineArgs a, std::ostream& out) {
  if (a.gt.empty()) throw ConfigurationError("ablation needs --gt");
  a.config.kernel = kf.config();
  a.config.seed = a.seed;
  const Frame f = load_frame(in);
  const PointCloud lidar = crop_frustum(f.lidar, f.K, kf.max_depth);
  const DepthMap gt = io::read_depth_png(a.gt);
  const auto runs = run_ablation(f.depth, f.hsv, lidar, f.K, gt, a.config);

  std::ostringstream csv;
  csv << "config,phase," << metrics_header() << "\n";
  for (const auto& run : runs) {
    const char* name = run.normal_kernel ? "color_normal" : "color";
    csv << name << ",before," << metrics_row(run.before) << "\n";
    csv << name << ",after," << metrics_row(run.after) << "\n";
  }
  if (!a.out.empty()) {
    const fs::path dir(a.out);
    fs::create_directories(dir);
    open_out(dir / "ablation.csv") << csv.str();
    json record = {{"seed", a.seed}, {"refine", io::to_json(a.config)}, {"runs", json::array()}};
    for (const auto& run : runs)
      record["runs"].push_back({{"normal_kernel", run.normal_kernel},
                                {"before", io::to_json(run.before)},
                                {"after", io::to_json(run.after)},
                                {"history", run.history}});
    io::write_json(dir / "ablation.json", record);
  }
  out << csv.str();
  return 0;
}

// ---------------------------------------------------------------------------
// metrics

int cmd_metrics(const std::string& pred_path, const std::string& gt_path, double cap, std::ostream& out) {
  const auto m = eval_metrics(io::read_depth_png(pred_path), io::read_depth_png(gt_path), cap);
  print_kv(out, "abs_rel", m.abs_rel);
  print_kv(out, "sq_rel", m.sq_rel);
  print_kv(out, "rmse", m.rmse);
  print_kv(out, "rmse_log", m.rmse_log);
  print_kv(out, "delta1", m.delta1);
  print_kv(out, "delta2", m.delta2);
  print_kv(out, "delta3", m.delta3);
  print_kv(out, "count", static_cast<std::uint64_t>(m.count));
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Continuous 3D loss: synthesis, evaluation, gradient checks and depth refinement"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "render a scene into depth, color and LIDAR files");
  auto* scene_opt = s->add_option("--scene", synth.scene, "scene JSON")->check(CLI::ExistingFile);
  auto* case_opt = s->add_option("--case", synth.case_name, "built-in case: plane_and_boxes or reflective_hole");
  scene_opt->excludes(case_opt);
  s->add_option("--calib", synth.calib, "calibration file")->check(CLI::ExistingFile);
  s->add_option("--lidar-spec", synth.lidar_spec, "LIDAR spec JSON")->check(CLI::ExistingFile);
  s->add_option("--range-noise", synth.range_noise, "LIDAR range noise std (m)");
  s->add_option("--out", synth.out, "output directory")->required();
  s->add_option("--seed", synth.seed)->capture_default_str();
  s->add_option("--init-noise", synth.init_noise, "noise std of init.png (m)");
  s->add_option("--init-bias", synth.init_bias, "bias of init.png (m)");
  s->add_option("--hole", synth.holes, "row,col,rows,cols[,offset] rectangle in init.png");

  FrameInputs eval_in;
  KernelFlags eval_k;
  std::uint64_t eval_seed = 0;
  auto* e = app.add_subcommand("eval-loss", "print the loss record for one frame");
  eval_in.add(e);
  eval_k.add(e, "sampled");
  e->add_option("--seed", eval_seed)->capture_default_str();

  FrameInputs bf_in;
  KernelFlags bf_k;
  std::uint64_t bf_seed = 0;
  auto* bf = app.add_subcommand("brute-force", "unpruned double sum for one frame");
  bf_in.add(bf);
  bf_k.add(bf, "sampled");
  bf->add_option("--seed", bf_seed)->capture_default_str();

  GradCheckArgs gc;
  KernelFlags gc_k;
  auto* g = app.add_subcommand("grad-check", "compare analytic depth gradients with finite differences");
  gc_k.add(g, "sampled");
  g->add_option("--seed", gc.seed)->capture_default_str();
  g->add_option("--scenes", gc.scenes, "number of seeded scenes")->capture_default_str();
  g->add_option("--rows", gc.rows)->capture_default_str();
  g->add_option("--cols", gc.cols)->capture_default_str();
  g->add_option("--mode", gc.mode, "detached or full (overrides --normal-grad)")
      ->check(CLI::IsMember({"detached", "full"}));

  FrameInputs ref_in;
  KernelFlags ref_k;
  RefineArgs ref;
  auto* rf = app.add_subcommand("refine", "refine a depth map against LIDAR");
  ref_in.add(rf, "initial depth PNG");
  ref_k.add(rf, "fixed:0.03", "full");
  ref.add(rf);
  rf->add_option("--out", ref.out, "output directory")->required();
  rf->add_option("--seed", ref.seed)->capture_default_str();

  FrameInputs abl_in;
  KernelFlags abl_k;
  RefineArgs abl;
  auto* ab = app.add_subcommand("ablation", "refine with and without the normal kernel");
  abl_in.add(ab, "initial depth PNG");
  abl_k.add(ab, "fixed:0.03", "full");
  abl.add(ab);
  ab->add_option("--out", abl.out, "output directory");
  ab->add_option("--seed", abl.seed)->capture_default_str();

  std::string m_pred, m_gt;
  double m_cap = kMaxDepth;
  auto* mt = app.add_subcommand("metrics", "depth metrics of a prediction against ground truth");
  mt->add_option("--pred", m_pred)->required()->check(CLI::ExistingFile);
  mt->add_option("--gt", m_gt)->required()->check(CLI::ExistingFile);
  mt->add_option("--max-depth", m_cap, "ground-truth cap (m)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    return app.exit(ex, out, err);
  }

  try {
    if (s->parsed()) {
      if (synth.scene.empty() && synth.case_name.empty()) throw ConfigurationError("synth needs --scene or --case");
      return cmd_synth(synth, out);
    }
    if (e->parsed()) return cmd_eval_loss(eval_in, eval_k, eval_seed, out);
    if (bf->parsed()) return cmd_brute_force(bf_in, bf_k, bf_seed, out);
    if (g->parsed()) return cmd_grad_check(gc, gc_k, out);
    if (rf->parsed()) return cmd_refine(ref_in, ref_k, ref, out);
    if (ab->parsed()) return cmd_ablation(abl_in, abl_k, abl, out);
    if (mt->parsed()) return cmd_metrics(m_pred, m_gt, m_cap, out);
  } catch (const DegenerateSceneError& ex) {
    err << "degenerate scene: " << ex.what() << "\n";
    return 3;
  } catch (const ParseError& ex) {
    err << "parse error: " << ex.what() << "\n";
    return 2;
  } catch (const ConfigurationError& ex) {
    err << "configuration error: " << ex.what() << "\n";
    return 2;
  } catch (const InputError& ex) {
    err << "input error: " << ex.what() << "\n";
    return 2;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace c3d

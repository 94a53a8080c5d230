#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "trajsfm/cli/pipeline.h"
#include "trajsfm/eval/metrics.h"
#include "trajsfm/motionseg/probes.h"
#include "trajsfm/synth/generate.h"
#include "trajsfm/util/errors.h"
#include "trajsfm/util/parallel.h"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitBadInput = 2;

bool IsInputError(const std::exception& e) {
  return dynamic_cast<const trajsfm::IoError*>(&e) ||
         dynamic_cast<const trajsfm::FormatError*>(&e) ||
         dynamic_cast<const trajsfm::LengthError*>(&e) ||
         dynamic_cast<const trajsfm::ValidationError*>(&e);
}

int Report(const std::string& stage, const std::exception& e) {
  if (const auto* s = dynamic_cast<const trajsfm::StageError*>(&e)) {
    std::cerr << "error: " << s->what() << "\n";
    return s->input_error() ? kExitBadInput : kExitFailure;
  }
  std::cerr << "error: [" << stage << "] " << e.what() << "\n";
  return IsInputError(e) ? kExitBadInput : kExitFailure;
}

int CmdRun(const trajsfm::PipelineConfig& config) {
  const trajsfm::PipelineResult result = trajsfm::RunPipeline(config);
  std::cout << "frames " << result.num_frames << ", trajectories "
            << result.trajectories.size() << ", view-graph edges "
            << result.sfm.kept_edges << "/" << result.sfm.candidate_edges
            << ", triangulated " << result.sfm.triangulated << "/" << result.sfm.tracks
            << "\n";
  std::cout << "bundle adjustment: cost " << result.sfm.bundle_adjustment.initial_cost
            << " -> " << result.sfm.bundle_adjustment.final_cost << " in "
            << result.sfm.bundle_adjustment.iterations << " iterations\n";
  std::cout << trajsfm::FormatTimings(result.timings);
  return 0;
}

int CmdEval(const std::string& est_path, const std::string& gt_path, int delta,
            const std::string& out_path) {
  const auto est = trajsfm::ReadTum(est_path);
  const auto gt = trajsfm::ReadTum(gt_path);
  const trajsfm::MetricsReport report = trajsfm::Evaluate(est, gt, delta);
  std::cout << trajsfm::FormatReport(report);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    out << trajsfm::FormatKeyValue(report);
    if (!out) throw trajsfm::IoError("failed writing " + out_path);
  }
  return 0;
}

int CmdSynth(const std::string& spec_path, const std::string& out_dir, uint64_t seed,
             int threads) {
  const trajsfm::synth::SceneSpec spec = trajsfm::synth::ReadSceneSpec(spec_path);
  const auto manifest = trajsfm::synth::Generate(spec, out_dir, seed, threads);
  std::cout << "wrote " << manifest.num_frames << " frames, " << manifest.flows.size()
            << " flows to " << out_dir << "\n";
  return 0;
}

int CmdCheckWeights(const std::string& weights_path, const std::string& probes_path,
                    double tolerance) {
  const trajsfm::SegNetWeights weights = trajsfm::LoadWeights(weights_path);
  std::cout << "weights: C=" << weights.config.channels
            << " K=" << weights.config.clusters << ", " << weights.tensors.size()
            << " tensors\n";
  if (probes_path.empty()) return 0;
  const auto probes = trajsfm::ReadProbes(probes_path);
  const double deviation = trajsfm::MaxProbeDeviation(probes, weights);
  std::cout << "probes: " << probes.size() << " records, max deviation " << deviation
            << "\n";
  if (deviation > tolerance) {
    std::cerr << "error: [probes] deviation " << deviation << " exceeds " << tolerance
              << "\n";
    return kExitFailure;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dense point-trajectory structure from motion"};
  app.set_config("--config", "", "INI/TOML configuration file; flags override it");
  app.require_subcommand(1);

  trajsfm::PipelineConfig config;
  config.threads = trajsfm::DefaultThreadCount();
  std::string segmenter = "fallback";
  bool no_seg = false;
  bool no_traj_optim = false;

  CLI::App* run = app.add_subcommand("run", "Run the full pipeline on a flow directory");
  run->add_option("--flows", config.flows_dir, "Directory of flow_{i}_{j}.flo files")
      ->required()->envname("TRAJSFM_FLOWS");
  run->add_option("--depths", config.depths_dir, "Directory of depth_{i}.pfm files")
      ->envname("TRAJSFM_DEPTHS");
  run->add_option("--intrinsics", config.intrinsics_path, "Text file 'fx fy cx cy'")
      ->envname("TRAJSFM_INTRINSICS");
  run->add_option("--out", config.out_dir, "Output directory")
      ->required()->envname("TRAJSFM_OUT");
  run->add_option("--lambda", config.lambda, "Trajectory sub-sampling factor")
      ->capture_default_str()->envname("TRAJSFM_LAMBDA");
  run->add_option("--window", config.window, "Segmentation window length")
      ->capture_default_str()->envname("TRAJSFM_WINDOW");
  run->add_option("--window-stride", config.window_stride,
                  "Segmentation window stride (0 = window length)")
      ->capture_default_str()->envname("TRAJSFM_WINDOW_STRIDE");
  run->add_option("--fb-thresh", config.fb_threshold,
                  "Stride-1 forward-backward threshold (px)")
      ->capture_default_str()->envname("TRAJSFM_FB_THRESH");
  run->add_option("--fb-thresh-s2", config.fb_threshold_stride2,
                  "Stride-2 forward-backward threshold (px)")
      ->capture_default_str()->envname("TRAJSFM_FB_THRESH_S2");
  run->add_option("--segmenter", segmenter, "fallback or network")
      ->check(CLI::IsMember({"fallback", "network"}))
      ->capture_default_str()->envname("TRAJSFM_SEGMENTER");
  run->add_option("--weights", config.weights_path, "SGNW weight file")
      ->envname("TRAJSFM_WEIGHTS");
  run->add_option("--motion-thresh", config.motion_threshold,
                  "Probability above which a point is moving")
      ->capture_default_str()->envname("TRAJSFM_MOTION_THRESH");
  run->add_option("--fallback-thresh", config.fallback_threshold,
                  "Sampson scale of the geometric segmenter (px)")
      ->capture_default_str()->envname("TRAJSFM_FALLBACK_THRESH");
  run->add_flag("--no-seg", no_seg, "Treat every trajectory as static")
      ->envname("TRAJSFM_NO_SEG");
  run->add_flag("--no-traj-optim", no_traj_optim, "Disable path-consistency refinement")
      ->envname("TRAJSFM_NO_TRAJ_OPTIM");
  run->add_option("--strides", config.strides, "View-graph frame strides")
      ->delimiter(',')->capture_default_str()->envname("TRAJSFM_STRIDES");
  run->add_option("--min-inliers", config.min_inliers, "Inliers needed per view pair")
      ->capture_default_str()->envname("TRAJSFM_MIN_INLIERS");
  run->add_option("--ransac-thresh", config.ransac_threshold,
                  "Two-view Sampson threshold (px)")
      ->capture_default_str()->envname("TRAJSFM_RANSAC_THRESH");
  run->add_option("--ba-iterations", config.ba_iterations, "Bundle adjustment cap")
      ->capture_default_str()->envname("TRAJSFM_BA_ITERATIONS");
  run->add_option("--seed", config.seed, "RNG seed")
      ->capture_default_str()->envname("TRAJSFM_SEED");
  run->add_option("--threads", config.threads, "Worker threads")
      ->envname("TRAJSFM_THREADS");

  std::string est_path;
  std::string gt_path;
  std::string metrics_path;
  int delta = 1;
  CLI::App* eval = app.add_subcommand("eval", "ATE/RPE of a TUM trajectory");
  eval->add_option("--est", est_path, "Estimated TUM trajectory")->required();
  eval->add_option("--gt", gt_path, "Ground-truth TUM trajectory")->required();
  eval->add_option("--delta", delta, "RPE frame offset")
      ->capture_default_str()->envname("TRAJSFM_DELTA");
  eval->add_option("--out", metrics_path, "key=value metrics file");

  std::string spec_path;
  std::string synth_out;
  uint64_t synth_seed = 0;
  int synth_threads = trajsfm::DefaultThreadCount();
  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  synth->add_option("--spec", spec_path, "Scene JSON")->required();
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--seed", synth_seed, "Noise seed")
      ->capture_default_str()->envname("TRAJSFM_SEED");
  synth->add_option("--threads", synth_threads, "Worker threads")
      ->envname("TRAJSFM_THREADS");

  std::string weights_path;
  std::string probes_path;
  double tolerance = 1e-5;
  CLI::App* check = app.add_subcommand("check-weights",
                                       "Validate an SGNW file against probe records");
  check->add_option("--weights", weights_path, "SGNW weight file")->required();
  check->add_option("--probes", probes_path, "SGPB probe file");
  check->add_option("--tol", tolerance, "Allowed absolute deviation")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitBadInput;
  }

  try {
    if (*run) {
      config.segmentation = !no_seg;
      config.trajectory_optimization = !no_traj_optim;
      config.segmenter = segmenter == "network" ? trajsfm::SegmenterKind::kNetwork
                                                : trajsfm::SegmenterKind::kFallback;
      return CmdRun(config);
    }
    if (*eval) return CmdEval(est_path, gt_path, delta, metrics_path);
    if (*synth) return CmdSynth(spec_path, synth_out, synth_seed, synth_threads);
    if (*check) return CmdCheckWeights(weights_path, probes_path, tolerance);
  } catch (const std::exception& e) {
    const std::string stage = *run     ? "run"
                              : *eval  ? "eval"
                              : *synth ? "synth"
                                       : "check-weights";
    return Report(stage, e);
  }
  return kExitFailure;
}

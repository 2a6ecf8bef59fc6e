#include "pmvos/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <ostream>

#include "pmvos/fusion.hpp"
#include "pmvos/io.hpp"
#include "pmvos/matching.hpp"
#include "pmvos/metrics.hpp"
#include "pmvos/selfcheck.hpp"
#include "pmvos/synth.hpp"
#include "pmvos/tracker.hpp"

namespace pmvos::cli {

namespace {

namespace fs = std::filesystem;

constexpr std::string_view kFramePrefix = "frame_";
constexpr std::string_view kMaskPrefix = "mask_";
constexpr std::string_view kTensorExt = ".pmt";
constexpr std::string_view kMaskExt = ".pgm";

struct CheckFailed {
  std::string what;
};

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  require(!ec, Errc::io, "cannot create " + dir.string() + ": " + ec.message());
}

// ------------------------------------------------------------------ synth

struct SynthArgs {
  std::string spec;
  std::string out;
};

void cmd_synth(const SynthArgs& a, std::ostream& out) {
  const SynthSpec spec = io::read_synth_spec(a.spec);
  const SynthSequence seq = gen_sequence(spec);
  ensure_dir(a.out);
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    io::write_tensor(fs::path(a.out) / io::indexed_name(kFramePrefix, i, kTensorExt), seq.frames[i]);
    io::write_mask(fs::path(a.out) / io::indexed_name(kMaskPrefix, i, kMaskExt), seq.masks[i]);
  }
  out << "wrote " << seq.frames.size() << " frames (" << spec.channels << "x" << spec.height << "x"
      << spec.width << ") and masks to " << a.out << "\n";
}

// ------------------------------------------------------------------ track

struct TrackArgs {
  std::string frames;
  std::string init_mask;
  std::string mode = "GLM";
  double alpha = kDefaultMedialAlpha;
  std::string out;
  std::string fusion;
  bool fit = false;
  double gamma_spatial = 1.0;
  double gamma_channel = 1.0;
};

void cmd_track(const TrackArgs& a, std::ostream& out) {
  const auto files = io::list_indexed(a.frames, kFramePrefix, kTensorExt);
  require(!files.empty(), Errc::io, "no " + std::string(kFramePrefix) + "NNNN" +
                                        std::string(kTensorExt) + " files in " + a.frames);
  std::vector<FeatureGrid> frames;
  frames.reserve(files.size());
  for (const auto& f : files) frames.push_back(io::read_tensor(f.path));

  const LabelMask init = io::read_mask(a.init_mask);
  const std::size_t objects = init.max_label();
  require(objects >= 1, Errc::empty_target, "initial mask contains no object labels");

  TrackerConfig config;
  config.mode = parse_mode(a.mode);
  config.alpha = a.alpha;
  config.gammas = {a.gamma_spatial, a.gamma_channel};
  if (!a.fusion.empty()) {
    config.fusion_source = FusionSource::provided;
    config.fusion = io::read_fusion_params(a.fusion);
  } else if (a.fit) {
    config.fusion_source = FusionSource::first_frame_fit;
  }

  const auto fields = per_object_fields(init, objects);
  std::vector<std::vector<ProbabilityField>> probs(objects);
  ensure_dir(a.out);
  for (std::size_t o = 0; o < objects; ++o) {
    TrackerState state = tracker_init(frames[0], fields[o], config);
    for (std::size_t i = 1; i < frames.size(); ++i) {
      StepResult r = tracker_step(state, frames[i], config);
      probs[o].push_back(std::move(r.mask));
      state = std::move(r.state);
    }
    io::write_state(fs::path(a.out) / ("state_obj" + std::to_string(o + 1) + ".pms"), state);
  }

  io::write_mask(fs::path(a.out) / io::indexed_name(kMaskPrefix, files[0].index, kMaskExt), init);
  std::vector<const ProbabilityField*> at_frame(objects);
  for (std::size_t i = 1; i < frames.size(); ++i) {
    for (std::size_t o = 0; o < objects; ++o) at_frame[o] = &probs[o][i - 1];
    LabelMask labels = combine_objects(at_frame);
    if (labels.height != init.height || labels.width != init.width)
      labels = upsample_labels(labels, init.height, init.width);
    io::write_mask(fs::path(a.out) / io::indexed_name(kMaskPrefix, files[i].index, kMaskExt),
                   labels);
  }
  out << "tracked " << objects << " object(s) over " << frames.size() << " frames, mode "
      << to_string(config.mode) << ", masks in " << a.out << "\n";
}

// ------------------------------------------------------------------ match

struct MatchArgs {
  std::string frame;
  std::string state;
  std::string dump;
  std::string mode = "GLM";
};

void cmd_match(const MatchArgs& a, std::ostream& out) {
  const FeatureGrid frame = io::read_tensor(a.frame);
  const TrackerState state = io::read_state(a.state);
  const SimilarityStack stack = match_all(frame, state.bank, enabled_kinds(parse_mode(a.mode)));
  ensure_dir(a.dump);
  const char* class_names[2] = {"bg", "fg"};
  for (std::size_t cls = 0; cls < 2; ++cls) {
    const FeatureGrid& g = stack.per_class[cls];
    for (std::size_t i = 0; i < stack.kinds.size(); ++i) {
      const auto plane = g.plane(i);
      FeatureGrid map(1, g.height(), g.width(), {plane.begin(), plane.end()});
      const std::string name =
          std::string(class_names[cls]) + "_" + std::string(to_string(stack.kinds[i])) + ".pmt";
      io::write_tensor(fs::path(a.dump) / name, map);
    }
  }
  out << "wrote " << 2 * stack.kinds.size() << " similarity maps to " << a.dump << "\n";
}

// ------------------------------------------------------------------ eval

struct EvalArgs {
  std::string pred;
  std::string gt;
  std::string report;
  int tolerance = -1;
};

std::vector<FrameScore> eval_sequence_dir(const std::string& name, const fs::path& pred_dir,
                                          const fs::path& gt_dir, int tolerance) {
  const auto gt_files = io::list_indexed(gt_dir, kMaskPrefix, kMaskExt);
  std::vector<LabelMask> gts;
  std::size_t objects = 0;
  for (const auto& f : gt_files) {
    gts.push_back(io::read_mask(f.path));
    objects = std::max<std::size_t>(objects, gts.back().max_label());
  }
  objects = std::max<std::size_t>(objects, 1);

  std::vector<FrameScore> rows;
  for (std::size_t i = 0; i < gt_files.size(); ++i) {
    // Only annotated frames are scored; every annotated frame needs a prediction.
    const fs::path pred_path = pred_dir / gt_files[i].path.filename();
    require(fs::exists(pred_path), Errc::io, "missing prediction " + pred_path.string());
    LabelMask pred = io::read_mask(pred_path, 255);
    const LabelMask& gt = gts[i];
    if (pred.height != gt.height || pred.width != gt.width)
      pred = upsample_labels(pred, gt.height, gt.width);
    const std::size_t tol = tolerance >= 0 ? static_cast<std::size_t>(tolerance)
                                           : default_boundary_tolerance(gt.height, gt.width);
    for (std::size_t obj = 1; obj <= objects; ++obj) {
      const auto id = static_cast<std::uint8_t>(obj);
      rows.push_back({name, obj, gt_files[i].index, region_j(pred, gt, id),
                      boundary_f(pred, gt, id, tol)});
    }
  }
  return rows;
}

void cmd_eval(const EvalArgs& a, std::ostream& out) {
  const fs::path gt_root(a.gt);
  const fs::path pred_root(a.pred);
  std::vector<FrameScore> rows;
  if (!io::list_indexed(gt_root, kMaskPrefix, kMaskExt).empty()) {
    rows = eval_sequence_dir(gt_root.filename().string(), pred_root, gt_root, a.tolerance);
  } else {
    // A directory of sequences.
    std::vector<fs::path> seqs;
    for (const auto& e : fs::directory_iterator(gt_root))
      if (e.is_directory()) seqs.push_back(e.path());
    std::sort(seqs.begin(), seqs.end());
    require(!seqs.empty(), Errc::io, "no ground-truth masks or sequences under " + a.gt);
    for (const auto& s : seqs) {
      auto r = eval_sequence_dir(s.filename().string(), pred_root / s.filename(), s, a.tolerance);
      rows.insert(rows.end(), r.begin(), r.end());
    }
  }
  require(!rows.empty(), Errc::io, "no annotated frames to evaluate");

  std::stable_sort(rows.begin(), rows.end(), [](const FrameScore& x, const FrameScore& y) {
    if (x.sequence != y.sequence) return x.sequence < y.sequence;
    if (x.object != y.object) return x.object < y.object;
    return x.frame < y.frame;
  });
  const EvalReport report = jf_mean(rows);

  std::string csv = "sequence,object,frame,J,F\n";
  for (const auto& r : report.rows)
    csv += r.sequence + "," + std::to_string(r.object) + "," + std::to_string(r.frame) + "," +
           fixed(r.j) + "," + fixed(r.f) + "\n";
  csv += "\n# summary\nsequence,J_mean,F_mean,JF\n";
  for (const auto& s : report.sequences)
    csv += s.sequence + "," + fixed(s.j_mean) + "," + fixed(s.f_mean) + "," +
           fixed(0.5 * (s.j_mean + s.f_mean)) + "\n";
  csv += "all," + fixed(report.j_mean) + "," + fixed(report.f_mean) + "," + fixed(report.jf) + "\n";
  io::write_atomic(a.report, csv);

  out << "J = " << fixed(report.j_mean) << "  F = " << fixed(report.f_mean)
      << "  J&F = " << fixed(report.jf) << "\n";
}

// ------------------------------------------------------------------ checks

void cmd_gradcheck(std::size_t seeds, double h, std::ostream& out) {
  double worst = 0.0;
  for (std::size_t s = 0; s < seeds; ++s) worst = std::max(worst, grad_check(s, h));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", worst);
  out << "gradcheck: " << seeds << " seeds, max relative error " << buf << "\n";
  if (!(worst < 1e-4)) throw CheckFailed{"gradient check exceeded 1e-4"};
}

void cmd_selftest(std::ostream& out) {
  using namespace selfcheck;
  std::vector<CheckResult> gated = {
      matching(200, 1, 1e-6),
      attention(200, 2, 1e-6),
      completeness(100, 3, 1e-6),
      ema({0.05, 0.1, 0.5, 1.0}, 50, 4, 1e-9),
      gradients(100, 0, 1e-5, 1e-4),
      boundary(1000, 5, 0, 1e-9),
      region_cases(),
  };
  bool ok = true;
  for (const auto& r : gated) {
    out << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << "\n";
    ok &= r.passed;
  }
  const CheckResult loose = boundary(1000, 5, 1, 1e-9);
  out << "[INFO] " << loose.name << ": " << loose.detail << "\n";
  if (!ok) throw CheckFailed{"one or more oracle suites failed"};
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pixel-level matching video object segmentation toolkit", "pmvos"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Generate a synthetic sequence (frames + masks)");
  s->add_option("--spec", synth.spec, "key = value spec file")->required();
  s->add_option("--out", synth.out, "Output directory")->required();

  TrackArgs track;
  auto* t = app.add_subcommand("track", "Propagate an initial mask through a frame directory");
  t->add_option("--frames", track.frames, "Directory of frame_NNNN.pmt tensors")->required();
  t->add_option("--init-mask", track.init_mask, "PGM label mask of the first frame")->required();
  t->add_option("--mode", track.mode, "Matching configuration")
      ->check(CLI::IsMember({"G", "GL", "GLM", "GLMA"}));
  t->add_option("--alpha", track.alpha, "Medial template EMA rate")->check(CLI::Range(0.0, 1.0));
  t->add_option("--out", track.out, "Output directory")->required();
  auto* fusion_opt = t->add_option("--fusion", track.fusion, "Fusion parameter file");
  t->add_flag("--fit", track.fit, "Fit fusion parameters on the first frame")->excludes(fusion_opt);
  t->add_option("--gamma-spatial", track.gamma_spatial, "Spatial attention residual weight");
  t->add_option("--gamma-channel", track.gamma_channel, "Channel attention residual weight");

  MatchArgs match;
  auto* m = app.add_subcommand("match", "Dump per-kind similarity maps for one frame");
  m->add_option("--frame", match.frame, "Frame tensor")->required();
  m->add_option("--state", match.state, "Tracker state file")->required();
  m->add_option("--dump", match.dump, "Output directory")->required();
  m->add_option("--mode", match.mode, "Matching configuration")
      ->check(CLI::IsMember({"G", "GL", "GLM", "GLMA"}));

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "Score predicted masks against ground truth");
  e->add_option("--pred", eval.pred, "Prediction directory")->required();
  e->add_option("--gt", eval.gt, "Ground-truth directory")->required();
  e->add_option("--report", eval.report, "CSV report path")->required();
  e->add_option("--tolerance", eval.tolerance,
                "Boundary tolerance in px (default: 0.75% of the diagonal, at least 1)")
      ->check(CLI::NonNegativeNumber);

  std::size_t seeds = 100;
  double h = 1e-5;
  auto* g = app.add_subcommand("gradcheck", "Finite-difference check of the fusion gradients");
  g->add_option("--seeds", seeds, "Number of seeded instances")->check(CLI::PositiveNumber);
  g->add_option("--step", h, "Central-difference step")->check(CLI::PositiveNumber);

  auto* st = app.add_subcommand("selftest", "Run every oracle-equivalence suite");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& ex) {
    err << "error: " << ex.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (*s) cmd_synth(synth, out);
    else if (*t) cmd_track(track, out);
    else if (*m) cmd_match(match, out);
    else if (*e) cmd_eval(eval, out);
    else if (*g) cmd_gradcheck(seeds, h, out);
    else if (*st) cmd_selftest(out);
  } catch (const CheckFailed& ex) {
    err << "check failed: " << ex.what << "\n";
    return kCheckFailed;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << "\n";
    return kDataError;
  } catch (const std::filesystem::filesystem_error& ex) {
    err << "error: " << ex.what() << "\n";
    return kDataError;
  }
  return kOk;
}

}  // namespace pmvos::cli

// csmri: mask generation, ADMM reconstruction, PSNR evaluation and
// sparsity diagnostics from the command line.
//
// Exit codes: 0 success, 1 runtime/I-O error, 2 bad flags, 3 divergence.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "csmri/grid.hpp"
#include "csmri/io.hpp"
#include "csmri/masks.hpp"
#include "csmri/metrics.hpp"
#include "csmri/solver.hpp"
#include "csmri/transform.hpp"
#include "csmri/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Globals {
  std::uint64_t seed = 0;
  bool quiet = false;
  std::string manifest_out;
  std::vector<std::string> argv;
};

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

fs::path sibling(const fs::path& out, const std::string& suffix) {
  fs::path p = out;
  p.replace_filename(out.stem().string() + suffix);
  return p;
}

/// Reproducibility record written next to every command's outputs.
class Manifest {
 public:
  Manifest(const Globals& g, std::string command) : globals_(g) {
    doc_["tool"] = "csmri";
    doc_["version"] = csmri::kVersion;
    doc_["command"] = std::move(command);
    doc_["argv"] = g.argv;
    doc_["seed"] = g.seed;
    doc_["started_at"] = utc_now();
  }

  json& config() { return doc_["config"]; }
  void input(const std::string& key, const fs::path& p) { doc_["inputs"][key] = p.string(); }
  void output(const std::string& key, const fs::path& p) { doc_["outputs"][key] = p.string(); }
  void result(const std::string& key, json v) { doc_["results"][key] = std::move(v); }

  void write(const fs::path& default_path) {
    doc_["finished_at"] = utc_now();
    const fs::path path =
        globals_.manifest_out.empty() ? default_path : fs::path(globals_.manifest_out);
    if (path.empty()) return;
    csmri::write_file_atomic(path, doc_.dump(2) + "\n");
  }

 private:
  const Globals& globals_;
  json doc_;
};

std::pair<std::size_t, std::size_t> resolve_dims(std::size_t size, std::size_t rows,
                                                  std::size_t cols) {
  if (rows == 0) rows = size;
  if (cols == 0) cols = size;
  if (rows == 0 || cols == 0) throw UsageError("give --size or both --rows and --cols");
  return {rows, cols};
}

json fmt_psnr(double v) { return std::isinf(v) ? json("inf") : json(v); }

std::string psnr_text(double v) {
  if (std::isinf(v)) return "inf";
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << v;
  return os.str();
}

// ---------------------------------------------------------------- mask

struct MaskArgs {
  std::string kind;
  std::size_t size = 0, rows = 0, cols = 0;
  std::optional<double> fraction;
  std::optional<int> lines;
  bool no_dc = false;
  std::string out;
};

int cmd_mask(const MaskArgs& a, const Globals& g) {
  csmri::MaskSpec spec;
  try {
    spec.kind = csmri::parse_mask_kind(a.kind);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::tie(spec.rows, spec.cols) = resolve_dims(a.size, a.rows, a.cols);
  spec.seed = g.seed;
  spec.include_dc = !a.no_dc;
  spec.fraction = a.fraction;
  spec.lines = a.lines;
  if (spec.fraction && !(*spec.fraction > 0.0 && *spec.fraction <= 1.0))
    throw UsageError("--fraction " + std::to_string(*spec.fraction) + " is outside (0, 1]");
  if (spec.kind != csmri::MaskKind::radial && !spec.fraction)
    throw UsageError("--fraction is required for " + a.kind + " masks");
  if (spec.kind == csmri::MaskKind::radial && !spec.fraction && !spec.lines)
    throw UsageError("radial masks need --lines or --fraction");

  csmri::SamplingMask mask;
  if (spec.kind == csmri::MaskKind::radial && !spec.lines) {
    auto fit = csmri::radial_mask_for_fraction(spec.rows, spec.cols, *spec.fraction);
    spec.lines = fit.lines;
    mask = std::move(fit.mask);
  } else {
    try {
      mask = csmri::make_mask(spec);
    } catch (const std::out_of_range& e) {
      throw UsageError(e.what());
    }
  }

  csmri::save_mask(mask, a.out);
  const double frac = csmri::achieved_fraction(mask);
  std::cout << "achieved fraction " << std::fixed << std::setprecision(6) << frac << " ("
            << mask.sample_count() << " of " << spec.rows * spec.cols << " samples)";
  if (spec.kind == csmri::MaskKind::radial) std::cout << ", " << *spec.lines << " lines";
  std::cout << "\n";

  Manifest m(g, "mask");
  m.config() = {{"kind", csmri::to_string(spec.kind)},
                {"rows", spec.rows},
                {"cols", spec.cols},
                {"fraction", spec.fraction ? json(*spec.fraction) : json(nullptr)},
                {"lines", spec.lines ? json(*spec.lines) : json(nullptr)},
                {"include_dc", spec.include_dc},
                {"seed", spec.seed}};
  m.output("mask", a.out);
  m.result("achieved_fraction", frac);
  m.result("sample_count", mask.sample_count());
  m.write(sibling(a.out, ".manifest.json"));
  return 0;
}

// ---------------------------------------------------------------- reconstruct

struct ReconArgs {
  std::string image, kspace, mask, reference;
  double mu1 = 10.0, mu2 = 20.0, tol = 1e-6;
  int max_iters = 500;
  std::string out, zero_filled, trace;
  int bit_depth = 8;
};

int cmd_reconstruct(const ReconArgs& a, const Globals& g) {
  if (a.image.empty() == a.kspace.empty()) throw UsageError("give exactly one of --image, --kspace");
  csmri::SolverConfig cfg;
  cfg.mu1 = a.mu1;
  cfg.mu2 = a.mu2;
  cfg.max_iters = a.max_iters;
  cfg.tol = a.tol;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const csmri::SamplingMask mask = csmri::load_mask(a.mask);
  std::optional<csmri::ComplexImage> reference;
  csmri::ComplexImage kspace;
  if (!a.image.empty()) {
    const csmri::ComplexImage img = csmri::load_image(a.image);
    csmri::require_same_shape("image vs mask", img.shape(), mask.shape());
    kspace = csmri::TransformPlan(img.shape()).forward(img);
    reference = img;
  } else {
    kspace = csmri::load_kspace(a.kspace);
    csmri::require_same_shape("k-space vs mask", kspace.shape(), mask.shape());
  }
  if (!a.reference.empty()) {
    reference = csmri::load_image(a.reference);
    csmri::require_same_shape("reference vs mask", reference->shape(), mask.shape());
  }

  const csmri::ComplexImage y0 = csmri::mask_apply(kspace, mask);
  const csmri::ComplexImage zero_filled = csmri::TransformPlan(mask.shape()).inverse(y0);
  const auto result = csmri::reconstruct(y0, mask, cfg, reference);
  const auto& rep = result.report;

  const fs::path out = a.out;
  const fs::path zf_path = a.zero_filled.empty() ? sibling(out, "_zero_filled.png") : fs::path(a.zero_filled);
  const fs::path trace_path = a.trace.empty() ? sibling(out, "_trace.csv") : fs::path(a.trace);
  csmri::save_image(result.image, out, a.bit_depth);
  csmri::save_image(zero_filled, zf_path, a.bit_depth);
  csmri::save_trace(rep, trace_path);

  if (!g.quiet)
    std::cout << "iterations " << rep.iterations << " (" << csmri::to_string(rep.termination)
              << ")\n";
  if (rep.initial_psnr) std::cout << "PSNR(init.) " << psnr_text(*rep.initial_psnr) << " dB\n";
  if (rep.final_psnr) std::cout << "PSNR(end) " << psnr_text(*rep.final_psnr) << " dB\n";

  Manifest m(g, "reconstruct");
  m.config() = {{"mu1", cfg.mu1},          {"mu2", cfg.mu2},
                {"max_iters", cfg.max_iters}, {"tol", cfg.tol},
                {"bit_depth", a.bit_depth},  {"rows", mask.rows()},
                {"cols", mask.cols()},       {"mask_samples", mask.sample_count()}};
  if (!a.image.empty()) m.input("image", a.image);
  if (!a.kspace.empty()) m.input("kspace", a.kspace);
  if (!a.reference.empty()) m.input("reference", a.reference);
  m.input("mask", a.mask);
  m.output("image", out);
  m.output("zero_filled", zf_path);
  m.output("trace", trace_path);
  m.result("iterations", rep.iterations);
  m.result("termination", csmri::to_string(rep.termination));
  if (rep.initial_psnr) m.result("psnr_init", fmt_psnr(*rep.initial_psnr));
  if (rep.final_psnr) m.result("psnr_end", fmt_psnr(*rep.final_psnr));
  m.write(sibling(out, ".manifest.json"));
  return 0;
}

// ---------------------------------------------------------------- eval

int cmd_eval(const std::string& ref_path, const std::string& test_path, const Globals& g) {
  const auto ref = csmri::load_image(ref_path);
  const auto test = csmri::load_image(test_path);
  const double value = csmri::psnr(ref, test);
  std::cout << psnr_text(value) << "\n";
  if (!g.manifest_out.empty()) {
    Manifest m(g, "eval");
    m.input("reference", ref_path);
    m.input("test", test_path);
    m.result("psnr", fmt_psnr(value));
    m.write({});
  }
  return 0;
}

// ---------------------------------------------------------------- sparsity

struct SparsityArgs {
  std::string image, mask, out;
  std::size_t bins = 64;
};

int cmd_sparsity(const SparsityArgs& a, const Globals& g) {
  if (a.bins < 2) throw UsageError("--bins must be at least 2");
  const auto img = csmri::load_image(a.image);
  const auto mask = csmri::load_mask(a.mask);
  csmri::require_same_shape("image vs mask", img.shape(), mask.shape());
  const csmri::TransformPlan plan(img.shape());
  const auto zero_filled = plan.inverse(csmri::mask_apply(plan.forward(img), mask));

  const auto orig = csmri::sparsity_report(img, a.bins);
  const auto zf = csmri::sparsity_report(zero_filled, a.bins);
  csmri::save_sparsity_csv(orig, zf, a.out);

  std::cout << std::setprecision(6) << "original     l1 " << orig.l1_value << "  near-zero "
            << orig.near_zero_fraction << "\n"
            << "zero-filled  l1 " << zf.l1_value << "  near-zero " << zf.near_zero_fraction
            << "\n";

  Manifest m(g, "sparsity");
  m.config() = {{"bins", a.bins}};
  m.input("image", a.image);
  m.input("mask", a.mask);
  m.output("histogram", a.out);
  m.result("original", {{"l1", orig.l1_value}, {"near_zero_fraction", orig.near_zero_fraction}});
  m.result("zero_filled", {{"l1", zf.l1_value}, {"near_zero_fraction", zf.near_zero_fraction}});
  m.write(sibling(a.out, ".manifest.json"));
  return 0;
}

// ---------------------------------------------------------------- phantom

struct PhantomArgs {
  std::string kind = "shepp_logan";
  std::size_t size = 0, rows = 0, cols = 0;
  double contrast = 1.0;
  int bit_depth = 8;
  std::string out;
};

int cmd_phantom(const PhantomArgs& a, const Globals& g) {
  csmri::PhantomSpec spec;
  try {
    spec.kind = csmri::parse_phantom_kind(a.kind);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::tie(spec.rows, spec.cols) = resolve_dims(a.size, a.rows, a.cols);
  if (spec.rows < 16 || spec.cols < 16) throw UsageError("phantoms need at least 16x16");
  spec.contrast = a.contrast;
  spec.seed = g.seed;
  csmri::save_image(csmri::make_phantom(spec), a.out, a.bit_depth);
  if (!g.quiet) std::cout << "wrote " << a.out << "\n";

  Manifest m(g, "phantom");
  m.config() = {{"kind", csmri::to_string(spec.kind)},
                {"rows", spec.rows},
                {"cols", spec.cols},
                {"contrast", spec.contrast},
                {"seed", spec.seed},
                {"bit_depth", a.bit_depth}};
  m.output("image", a.out);
  m.write(sibling(a.out, ".manifest.json"));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compressed-sensing MRI reconstruction by l1-ADMM"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", csmri::kVersion);

  Globals g;
  g.argv.assign(argv, argv + argc);
  app.add_option("--seed", g.seed, "Seed for every random choice")->capture_default_str();
  app.add_flag("--quiet", g.quiet, "Suppress progress output");
  app.add_option("--manifest-out", g.manifest_out, "Where to write the run manifest (JSON)");

  auto add_dims = [](CLI::App* cmd, std::size_t& size, std::size_t& rows, std::size_t& cols) {
    cmd->add_option("--size", size, "Square grid size");
    cmd->add_option("--rows", rows, "Grid rows");
    cmd->add_option("--cols", cols, "Grid columns");
  };

  MaskArgs mask_args;
  auto* mask = app.add_subcommand("mask", "Generate a k-space sampling mask");
  mask->add_option("--kind", mask_args.kind, "random | cartesian | radial")->required();
  add_dims(mask, mask_args.size, mask_args.rows, mask_args.cols);
  mask->add_option("--fraction", mask_args.fraction, "Target sampled fraction in (0, 1]");
  mask->add_option("--lines", mask_args.lines, "Radial spoke count")->check(CLI::PositiveNumber);
  mask->add_flag("--no-dc", mask_args.no_dc, "Do not force the DC sample");
  mask->add_option("-o,--out", mask_args.out, "Output PNG")->required();

  ReconArgs recon_args;
  auto* recon = app.add_subcommand("reconstruct", "Reconstruct an image from masked k-space");
  recon->add_option("--image", recon_args.image, "Fully sampled image; acquisition is simulated");
  recon->add_option("--kspace", recon_args.kspace, "Raw k-space file");
  recon->add_option("--mask", recon_args.mask, "Mask PNG")->required();
  recon->add_option("--reference", recon_args.reference, "Reference image for PSNR");
  recon->add_option("--mu1", recon_args.mu1, "Data-consistency penalty")->capture_default_str();
  recon->add_option("--mu2", recon_args.mu2, "Coupling penalty")->capture_default_str();
  recon->add_option("--max-iters", recon_args.max_iters, "Iteration cap")->capture_default_str();
  recon->add_option("--tol", recon_args.tol, "Relative residual tolerance")->capture_default_str();
  recon->add_option("-o,--out", recon_args.out, "Reconstructed image")->required();
  recon->add_option("--zero-filled", recon_args.zero_filled, "Zero-filled image output");
  recon->add_option("--trace", recon_args.trace, "Convergence trace CSV");
  recon->add_option("--bit-depth", recon_args.bit_depth, "8 or 16")->check(CLI::IsMember({8, 16}));

  std::string eval_ref, eval_test;
  auto* eval = app.add_subcommand("eval", "PSNR of a test image against a reference");
  eval->add_option("reference", eval_ref)->required();
  eval->add_option("test", eval_test)->required();

  SparsityArgs sp_args;
  auto* sparsity = app.add_subcommand("sparsity", "Histogram original vs zero-filled magnitudes");
  sparsity->add_option("--image", sp_args.image)->required();
  sparsity->add_option("--mask", sp_args.mask)->required();
  sparsity->add_option("--bins", sp_args.bins)->capture_default_str();
  sparsity->add_option("-o,--out", sp_args.out, "Histogram CSV")->required();

  PhantomArgs ph_args;
  auto* phantom = app.add_subcommand("phantom", "Write a synthetic test image");
  phantom->add_option("--kind", ph_args.kind, "shepp_logan | blocks")->capture_default_str();
  add_dims(phantom, ph_args.size, ph_args.rows, ph_args.cols);
  phantom->add_option("--contrast", ph_args.contrast)->capture_default_str();
  phantom->add_option("--bit-depth", ph_args.bit_depth)->check(CLI::IsMember({8, 16}));
  phantom->add_option("-o,--out", ph_args.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*mask) return cmd_mask(mask_args, g);
    if (*recon) return cmd_reconstruct(recon_args, g);
    if (*eval) return cmd_eval(eval_ref, eval_test, g);
    if (*sparsity) return cmd_sparsity(sp_args, g);
    if (*phantom) return cmd_phantom(ph_args, g);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const csmri::DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

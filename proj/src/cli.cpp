#include "pmri/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "pmri/container.hpp"
#include "pmri/error.hpp"
#include "pmri/fft.hpp"
#include "pmri/grappa.hpp"
#include "pmri/losses.hpp"
#include "pmri/phantom.hpp"
#include "pmri/png_export.hpp"
#include "pmri/report.hpp"
#include "pmri/sampling.hpp"

namespace pmri {
namespace {

namespace fs = std::filesystem;

struct PhantomArgs {
  std::size_t ny = 64;
  std::size_t nx = 64;
  std::size_t coils = 8;
  std::uint64_t seed = 1;
  double noise = 0.0;
  std::string out;
  std::string truth;
};

struct MaskArgs {
  std::size_t ny = 0;
  std::size_t accel = 0;
  double acs = 0.08;
  std::uint64_t seed = 0;
  std::size_t ky_taps = 4;
  std::string out = "m.json";
};

struct ReconArgs {
  std::string in;
  std::string mask;
  std::string out;
  double lambda = 1e-4;
  std::size_t ky_taps = 4;
  std::size_t kx_taps = 5;
  std::string kernel_out;
};

struct MetricsArgs {
  std::string test;
  std::string ref;
  std::string out;
  double range = 0.0;
};

struct ScheduleArgs {
  std::optional<std::size_t> epoch;
  std::size_t max_epoch = 200;
};

struct LossArgs {
  std::string pred;
  std::string target;
  double disc_score = 1.0;
  std::optional<std::size_t> epoch;
  double l1 = 0.0;
  double l2 = 0.0;
  double dc = 0.0;
  double f = 0.0;
  bool pooled_features = false;
};

struct PngArgs {
  std::vector<std::string> inputs;
  std::string out;
};

void run_phantom(const PhantomArgs& a) {
  const MagnitudeImage img = shepp_logan(a.ny, a.nx);
  const CoilSensitivities sens = make_sensitivities(a.coils, a.ny, a.nx, a.seed);
  const KSpaceVolume ksp = simulate_acquisition(img, sens, a.noise, a.seed);
  const nlohmann::json prov = {{"source", "shepp_logan"}, {"ny", a.ny},   {"nx", a.nx},
                               {"coils", a.coils},        {"seed", a.seed}, {"noise_sigma", a.noise}};
  write_container(a.out, ksp, prov);

  const fs::path truth = a.truth.empty() ? fs::path(a.out).parent_path() / "truth.gpks" : fs::path(a.truth);
  nlohmann::json truth_prov = prov;
  truth_prov["recon"] = "rss_full";
  write_container(truth, rss_recon(ksp), truth_prov);
}

void run_mask(const MaskArgs& a) {
  const std::size_t floor = a.ky_taps >= 2 ? KernelGeometry{a.ky_taps, 5}.min_acs(a.accel) : 0;
  const SamplingMask mask = make_mask(a.ny, a.accel, a.acs, a.seed, a.accel > 1 ? floor : 0);
  write_json_file(a.out, mask_to_json(mask));
}

nlohmann::json mask_provenance(const SamplingMask& mask) {
  nlohmann::json p = mask_to_json(mask);
  return {{"mask", p}};
}

void run_apply_mask(const ReconArgs& a) {
  const SamplingMask mask = mask_from_json(read_json_file(a.mask));
  Container in = read_container(a.in);
  const auto* vol = std::get_if<KSpaceVolume>(&in.object);
  if (!vol) throw Error(ErrorCode::kInvalidArgument, a.in + " does not hold a k-space volume");
  nlohmann::json prov = in.provenance;
  prov["mask"] = mask_to_json(mask);
  write_container(a.out, apply_mask(*vol, mask), prov);
}

void run_zero_fill(const ReconArgs& a) {
  const SamplingMask mask = mask_from_json(read_json_file(a.mask));
  const KSpaceVolume vol = read_kspace(a.in);
  nlohmann::json prov = mask_provenance(mask);
  prov["recon"] = "zero_fill_rss";
  write_container(a.out, rss_recon(apply_mask(vol, mask)), prov);
}

void run_grappa(const ReconArgs& a) {
  const SamplingMask mask = mask_from_json(read_json_file(a.mask));
  const KSpaceVolume vol = read_kspace(a.in);
  const KernelGeometry geom{a.ky_taps, a.kx_taps};
  const GrappaRecon recon = grappa_rss_recon(vol, mask, geom, a.lambda);

  nlohmann::json prov = mask_provenance(mask);
  prov["recon"] = "grappa_rss";
  prov["lambda_rel"] = a.lambda;
  prov["geometry"] = geometry_to_json(geom);
  write_container(a.out, recon.image, prov);
  if (!a.kernel_out.empty() && mask.accel() > 1) write_container(a.kernel_out, recon.kernel, prov);
}

void run_metrics(const MetricsArgs& a, std::ostream& out) {
  Container test = read_container(a.test);
  const auto* test_img = std::get_if<MagnitudeImage>(&test.object);
  if (!test_img) throw Error(ErrorCode::kInvalidArgument, a.test + " does not hold a magnitude image");
  const MagnitudeImage ref = read_magnitude(a.ref);

  ReconReport report = evaluate(*test_img, ref, a.range);
  const auto& p = test.provenance;
  if (p.contains("mask")) {
    const auto& m = p.at("mask");
    report.provenance["mask_seed"] = m.value("seed", std::uint64_t{0});
    report.provenance["accel"] = m.value("accel", std::size_t{1});
    report.provenance["acs_fraction"] = m.value("acs_fraction", 0.0);
  }
  if (p.contains("lambda_rel")) report.provenance["lambda_rel"] = p.at("lambda_rel");
  if (p.contains("geometry")) report.provenance["kernel_geometry"] = p.at("geometry");
  if (p.contains("recon")) report.provenance["recon"] = p.at("recon");

  const auto j = report_to_json(report);
  if (a.out.empty()) {
    out << j.dump(2) << "\n";
  } else {
    write_json_file(a.out, j);
  }
}

void print_weights(std::ostream& out, const LossWeights& w) {
  out << w.lambda_1 << ' ' << w.lambda_2 << ' ' << w.lambda_dc << ' ' << w.lambda_f;
}

void run_schedule(const ScheduleArgs& a, std::ostream& out) {
  if (a.epoch) {
    print_weights(out, loss_schedule(*a.epoch));
    out << "\n";
    return;
  }
  out << "# epoch lambda_1 lambda_2 lambda_dc lambda_f\n";
  for (std::size_t e = 0; e <= a.max_epoch; ++e) {
    out << e << ' ';
    print_weights(out, loss_schedule(e));
    out << "\n";
  }
}

void run_loss(const LossArgs& a, std::ostream& out) {
  const MagnitudeImage pred = read_magnitude(a.pred);
  const MagnitudeImage target = read_magnitude(a.target);
  const LossWeights w = a.epoch ? loss_schedule(*a.epoch) : LossWeights{a.l1, a.l2, a.dc, a.f};
  const LossBreakdown b = a.pooled_features ? generator_loss(pred, target, a.disc_score, PooledFeatureExtractor{}, w)
                                            : generator_loss(pred, target, a.disc_score, w);
  const nlohmann::json j = {
      {"adv", b.adv},
      {"l1", b.l1},
      {"l2", b.l2},
      {"dc", b.dc},
      {"feat", b.feat},
      {"total", b.total},
      {"weights", {{"lambda_1", w.lambda_1}, {"lambda_2", w.lambda_2}, {"lambda_dc", w.lambda_dc}, {"lambda_f", w.lambda_f}}},
  };
  out << j.dump(2) << "\n";
}

void run_png(const PngArgs& a) {
  std::vector<MagnitudeImage> panels;
  for (const auto& in : a.inputs) panels.push_back(read_magnitude(in));
  export_png(a.out, panels);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parallel MRI reconstruction: undersampling, regularized GRAPPA, RSS and quality metrics", "pmri"};
  app.require_subcommand(1);

  PhantomArgs phantom;
  auto* cmd_phantom = app.add_subcommand("phantom", "Simulate a fully sampled multi-coil Shepp-Logan acquisition");
  cmd_phantom->add_option("--ny", phantom.ny, "Rows (phase encode)")->check(CLI::Range(8, 4096));
  cmd_phantom->add_option("--nx", phantom.nx, "Columns (frequency encode)")->check(CLI::Range(8, 4096));
  cmd_phantom->add_option("--coils", phantom.coils, "Receive coils")->check(CLI::Range(1, 256));
  cmd_phantom->add_option("--seed", phantom.seed, "Seed for sensitivities and noise");
  cmd_phantom->add_option("--noise", phantom.noise, "Complex noise std per component")->check(CLI::NonNegativeNumber);
  cmd_phantom->add_option("-o,--out", phantom.out, "Output k-space container")->required();
  cmd_phantom->add_option("--truth", phantom.truth, "Ground-truth RSS image (default: truth.gpks next to --out)");

  MaskArgs mask;
  auto* cmd_mask = app.add_subcommand("mask", "Equidistant random undersampling mask with central ACS block");
  cmd_mask->add_option("--ny", mask.ny, "Phase-encode lines")->required();
  cmd_mask->add_option("--accel", mask.accel, "Acceleration R")->required();
  cmd_mask->add_option("--acs", mask.acs, "ACS fraction of ny");
  cmd_mask->add_option("--seed", mask.seed, "Seed for the first-line offset");
  cmd_mask->add_option("--ky-taps", mask.ky_taps,
                       "Kernel ky taps used to floor the ACS length (0 disables the floor)");
  cmd_mask->add_option("-o,--out", mask.out, "Output mask JSON");

  ReconArgs apply;
  auto* cmd_apply = app.add_subcommand("apply-mask", "Zero the non-acquired lines of a k-space container");
  cmd_apply->add_option("--in", apply.in, "Input k-space container")->required();
  cmd_apply->add_option("--mask", apply.mask, "Mask JSON")->required();
  cmd_apply->add_option("-o,--out", apply.out, "Output k-space container")->required();

  ReconArgs zero;
  auto* cmd_zero = app.add_subcommand("zero-fill", "Zero-filled RSS reconstruction");
  cmd_zero->add_option("--in", zero.in, "Input k-space container")->required();
  cmd_zero->add_option("--mask", zero.mask, "Mask JSON")->required();
  cmd_zero->add_option("-o,--out", zero.out, "Output image container")->required();

  ReconArgs grappa;
  auto* cmd_grappa = app.add_subcommand("grappa", "Regularized GRAPPA + RSS reconstruction");
  cmd_grappa->add_option("--in", grappa.in, "Input k-space container (masked or fully sampled)")->required();
  cmd_grappa->add_option("--mask", grappa.mask, "Mask JSON")->required();
  cmd_grappa->add_option("--lambda", grappa.lambda, "Relative Tikhonov weight")->check(CLI::NonNegativeNumber);
  cmd_grappa->add_option("--ky-taps", grappa.ky_taps, "Kernel source lines");
  cmd_grappa->add_option("--kx-taps", grappa.kx_taps, "Kernel columns (odd)");
  cmd_grappa->add_option("-o,--out", grappa.out, "Output image container")->required();
  cmd_grappa->add_option("--kernel-out", grappa.kernel_out, "Also write the calibrated kernel");

  MetricsArgs metrics;
  auto* cmd_metrics = app.add_subcommand("metrics", "RMSE / PSNR / SSIM report");
  cmd_metrics->add_option("--test", metrics.test, "Reconstruction image container")->required();
  cmd_metrics->add_option("--ref", metrics.ref, "Reference image container")->required();
  cmd_metrics->add_option("-o,--out", metrics.out, "Report JSON (default: stdout)");
  cmd_metrics->add_option("--range", metrics.range, "Dynamic range L (default: reference max)")
      ->check(CLI::PositiveNumber);

  ScheduleArgs schedule;
  auto* cmd_schedule = app.add_subcommand("loss-schedule", "Print loss weights per training epoch");
  cmd_schedule->add_option("--epoch", schedule.epoch, "Single epoch: prints lambda_1 lambda_2 lambda_dc lambda_f");
  cmd_schedule->add_option("--max-epoch", schedule.max_epoch, "Last epoch of the table");

  LossArgs loss;
  auto* cmd_loss = app.add_subcommand("loss", "Generator loss breakdown for two image containers");
  cmd_loss->add_option("--pred", loss.pred, "Prediction image container")->required();
  cmd_loss->add_option("--target", loss.target, "Target image container")->required();
  cmd_loss->add_option("--disc-score", loss.disc_score, "Discriminator score on the prediction, (0, 1]");
  auto* epoch_opt = cmd_loss->add_option("--epoch", loss.epoch, "Take weights from the training schedule");
  cmd_loss->add_option("--l1", loss.l1, "lambda_1")->excludes(epoch_opt);
  cmd_loss->add_option("--l2", loss.l2, "lambda_2")->excludes(epoch_opt);
  cmd_loss->add_option("--dc", loss.dc, "lambda_dc")->excludes(epoch_opt);
  cmd_loss->add_option("--f", loss.f, "lambda_f")->excludes(epoch_opt);
  cmd_loss->add_flag("--pooled-features", loss.pooled_features, "Feature term from the built-in pooled extractor");

  PngArgs png;
  auto* cmd_png = app.add_subcommand("export-png", "Side-by-side 8-bit PNG of image containers");
  cmd_png->add_option("--in", png.inputs, "Image containers, left to right")->required();
  cmd_png->add_option("-o,--out", png.out, "Output PNG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*cmd_phantom) run_phantom(phantom);
    else if (*cmd_mask) run_mask(mask);
    else if (*cmd_apply) run_apply_mask(apply);
    else if (*cmd_zero) run_zero_fill(zero);
    else if (*cmd_grappa) run_grappa(grappa);
    else if (*cmd_metrics) run_metrics(metrics, out);
    else if (*cmd_schedule) run_schedule(schedule, out);
    else if (*cmd_loss) run_loss(loss, out);
    else if (*cmd_png) run_png(png);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace pmri

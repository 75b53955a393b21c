#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"
#include "rnip/demosaic.hpp"
#include "rnip/manifest.hpp"
#include "rnip/metrics.hpp"
#include "rnip/pairing.hpp"
#include "rnip/parallel.hpp"
#include "rnip/raw_io.hpp"

namespace fs = std::filesystem;

namespace rnip::cli {

namespace {

struct PrepareOptions {
  fs::path input;
  fs::path output;
  AlignmentParams align;
  MaskParams mask;
  std::string patch_kind = "rgb";
};

struct SceneResult {
  std::vector<PairRecord> records;
  std::vector<std::string> patch_lines;
  std::vector<std::string> log;
  int pairs = 0;
  int failed = 0;
};

bool is_clean_capture(const fs::path& p) {
  const std::string stem = p.stem().string();
  return stem == "clean" || stem.rfind("gt", 0) == 0;
}

struct Developed {
  PlanarF rgb;
  std::string camera_id;
};

Developed load_camrgb(const fs::path& pgm) {
  const LoadedRaw raw = load_raw(pgm);
  const BayerMosaic m = crop_to_rggb(normalize_levels(raw.counts, raw.meta));
  return {demosaic_bilinear(m).pixels, raw.meta.camera_id};
}

SceneResult prepare_scene(const fs::path& dir, const PrepareOptions& opt) {
  SceneResult r;
  const std::string scene = dir.filename().string();
  std::vector<fs::path> clean, noisy;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file() || e.path().extension() != ".pgm") continue;
    (is_clean_capture(e.path()) ? clean : noisy).push_back(e.path());
  }
  std::sort(noisy.begin(), noisy.end());
  r.pairs = static_cast<int>(noisy.size());
  if (clean.size() != 1) {
    r.log.push_back(scene + ": expected one clean capture, found " + std::to_string(clean.size()));
    r.failed = r.pairs;
    return r;
  }
  Developed gt;
  try {
    gt = load_camrgb(clean.front());
  } catch (const std::exception& e) {
    r.log.push_back(scene + "/" + clean.front().filename().string() + ": " + e.what());
    r.failed = r.pairs;
    return r;
  }

  const PatchKind kind = opt.patch_kind == "bayer" ? PatchKind::Bayer : PatchKind::Rgb;
  for (const auto& path : noisy) {
    const std::string stem = path.stem().string();
    try {
      const Developed nz = load_camrgb(path);
      const GainMatch gm = match_gain(nz.rgb, gt.rgb);
      const AlignmentResult al = align_pair(gm.scaled, gt.rgb, opt.align);
      const AlignedPair ap = apply_shift(gm.scaled, gt.rgb, al.shift_y, al.shift_x);
      if (std::min(ap.clean.height(), ap.clean.width()) < msssim::kMinSide) {
        r.log.push_back(scene + "/" + stem + ": aligned overlap " + std::to_string(ap.clean.height()) + "x" +
                        std::to_string(ap.clean.width()) + " is too small for MS-SSIM, skipped");
        ++r.failed;
        continue;
      }
      PairRecord rec;
      rec.scene_id = scene;
      rec.camera_id = gt.camera_id;
      rec.shift_y = al.shift_y;
      rec.shift_x = al.shift_x;
      rec.gain = gm.gain;
      rec.alignment_loss = al.loss;
      rec.msssim = std::clamp(ms_ssim(ap.noisy, ap.clean), 0.0, 1.0);
      rec.discarded = al.discarded;
      if (!al.discarded) {
        const LossMask mask = build_loss_mask(ap.noisy, ap.clean, opt.mask);
        rec.mask_ref = (fs::path("masks") / scene / (stem + ".mask")).generic_string();
        write_mask(opt.output / rec.mask_ref, mask);
        for (const Patch& p : extract_patches(mask, kind).patches) {
          nlohmann::ordered_json j;
          j["scene_id"] = scene;
          j["noisy"] = stem;
          j["origin_y"] = p.origin_y + ap.clean_y0;
          j["origin_x"] = p.origin_x + ap.clean_x0;
          j["size"] = p.size;
          r.patch_lines.push_back(j.dump());
        }
      }
      r.records.push_back(std::move(rec));
    } catch (const std::exception& e) {
      r.log.push_back(scene + "/" + stem + ": " + e.what());
      ++r.failed;
    }
  }
  return r;
}

int run_prepare(const PrepareOptions& opt, int threads) {
  if (!fs::is_directory(opt.input)) throw Error(ErrorCode::IoError, "input directory " + opt.input.string() + " not found");
  std::vector<fs::path> scenes;
  for (const auto& e : fs::directory_iterator(opt.input))
    if (e.is_directory()) scenes.push_back(e.path());
  std::sort(scenes.begin(), scenes.end());

  std::vector<SceneResult> results(scenes.size());
  parallel_for(scenes.size(), threads, [&](std::size_t i, int) { results[i] = prepare_scene(scenes[i], opt); });

  std::vector<PairRecord> records;
  fs::create_directories(opt.output);
  std::ofstream patches(opt.output / "patch_index.jsonl", std::ios::binary);
  int pairs = 0, failed = 0, discarded = 0;
  for (const auto& r : results) {
    for (const auto& line : r.log) std::cerr << line << "\n";
    for (const auto& line : r.patch_lines) patches << line << "\n";
    for (const auto& rec : r.records) discarded += rec.discarded ? 1 : 0;
    records.insert(records.end(), r.records.begin(), r.records.end());
    pairs += r.pairs;
    failed += r.failed;
  }
  write_manifest(opt.output / "manifest.jsonl", records);

  const double frac = records.empty() ? 0.0 : static_cast<double>(discarded) / records.size();
  std::cout << "scenes " << scenes.size() << ", pairs " << pairs << ", failed " << failed << ", discarded "
            << discarded << " (" << std::fixed << std::setprecision(1) << 100.0 * frac << "% of aligned pairs)\n";
  return 2 * failed > pairs ? kExitPartial : kExitOk;
}

}  // namespace

void register_prepare(CLI::App& app, int& exit_code, const int& threads, const unsigned long long&) {
  auto opt = std::make_shared<PrepareOptions>();
  CLI::App* cmd = app.add_subcommand(
      "prepare", "Align noisy captures to the clean capture of each scene; write manifest, masks and patch index");
  cmd->add_option("--input", opt->input, "Directory with one sub-directory per scene")->required();
  cmd->add_option("--output", opt->output, "Output directory")->required();
  cmd->add_option("--align-max-shift", opt->align.max_shift, "Largest shift searched on each axis")
      ->capture_default_str();
  cmd->add_option("--align-discard-threshold", opt->align.discard_threshold,
                  "Pairs whose aligned mean L1 exceeds this are discarded")
      ->capture_default_str();
  cmd->add_option("--mask-l1", opt->mask.l1_threshold, "Per-pixel L1 above which a pixel is masked")
      ->capture_default_str();
  cmd->add_option("--mask-percentile", opt->mask.percentile, "Per-pair L1 percentile above which a pixel is masked")
      ->capture_default_str();
  cmd->add_option("--mask-overexposure", opt->mask.overexposure, "Clean value at or above which a pixel is masked")
      ->capture_default_str();
  cmd->add_option("--mask-opening", opt->mask.opening_size, "Side of the square opening element (<= 1 disables)")
      ->capture_default_str();
  cmd->add_option("--patch-kind", opt->patch_kind, "Patch grid: rgb (1024/256) or bayer (512/128)")
      ->capture_default_str()
      ->check(CLI::IsMember({"rgb", "bayer"}));
  cmd->callback([opt, &exit_code, &threads] { exit_code = run_prepare(*opt, threads); });
}

}  // namespace rnip::cli

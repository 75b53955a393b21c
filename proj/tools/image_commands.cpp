#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "commands.hpp"
#include "rnip/demosaic.hpp"
#include "rnip/devproxy.hpp"
#include "rnip/pairing.hpp"
#include "rnip/raw_io.hpp"

namespace fs = std::filesystem;

namespace rnip::cli {

namespace {

struct Loaded {
  LinearRgbImage rgb;
  SensorMeta meta;
};

Loaded load_linear(const fs::path& pgm, const std::string& method) {
  const LoadedRaw raw = load_raw(pgm);
  const BayerMosaic m = crop_to_rggb(normalize_levels(raw.counts, raw.meta));
  return {method == "edge-aware" ? demosaic_edge_aware(m) : demosaic_bilinear(m), raw.meta};
}

struct PairArgs {
  fs::path noisy, clean;
  AlignmentParams align;
};

void add_pair_options(CLI::App* cmd, PairArgs& a) {
  cmd->add_option("--noisy", a.noisy, "Noisy capture (.pgm with .meta sidecar)")->required();
  cmd->add_option("--clean", a.clean, "Clean capture (.pgm with .meta sidecar)")->required();
  cmd->add_option("--align-max-shift", a.align.max_shift, "Largest shift searched on each axis")->capture_default_str();
  cmd->add_option("--align-discard-threshold", a.align.discard_threshold,
                  "Pairs whose aligned mean L1 exceeds this are discarded")
      ->capture_default_str();
}

struct Aligned {
  GainMatch gain;
  AlignmentResult result;
  PlanarF clean;
};

Aligned align_files(const PairArgs& a) {
  const Loaded nz = load_linear(a.noisy, "bilinear");
  const Loaded gt = load_linear(a.clean, "bilinear");
  Aligned out{match_gain(nz.rgb.pixels, gt.rgb.pixels), {}, gt.rgb.pixels};
  out.result = align_pair(out.gain.scaled, out.clean, a.align);
  return out;
}

}  // namespace

void register_image_commands(CLI::App& app, int& exit_code, const int&, const unsigned long long& seed) {
  {
    auto a = std::make_shared<PairArgs>();
    CLI::App* cmd = app.add_subcommand("align", "Gain-match and align one noisy/clean pair; print the result as JSON");
    add_pair_options(cmd, *a);
    cmd->callback([a, &exit_code] {
      const Aligned al = align_files(*a);
      nlohmann::ordered_json j;
      j["shift_y"] = al.result.shift_y;
      j["shift_x"] = al.result.shift_x;
      j["gain"] = al.gain.gain;
      j["loss"] = al.result.loss;
      j["discarded"] = al.result.discarded;
      j["evaluations"] = al.result.evaluations;
      std::cout << j.dump() << "\n";
      exit_code = kExitOk;
    });
  }
  {
    auto a = std::make_shared<PairArgs>();
    auto mp = std::make_shared<MaskParams>();
    auto out = std::make_shared<fs::path>();
    CLI::App* cmd = app.add_subcommand("mask", "Align one pair and write its loss mask");
    add_pair_options(cmd, *a);
    cmd->add_option("--output", *out, "Mask file to write")->required();
    cmd->add_option("--mask-l1", mp->l1_threshold, "Per-pixel L1 above which a pixel is masked")->capture_default_str();
    cmd->add_option("--mask-percentile", mp->percentile, "Per-pair L1 percentile above which a pixel is masked")
        ->capture_default_str();
    cmd->add_option("--mask-overexposure", mp->overexposure, "Clean value at or above which a pixel is masked")
        ->capture_default_str();
    cmd->add_option("--mask-opening", mp->opening_size, "Side of the square opening element (<= 1 disables)")
        ->capture_default_str();
    cmd->callback([a, mp, out, &exit_code] {
      const Aligned al = align_files(*a);
      const AlignedPair ap = apply_shift(al.gain.scaled, al.clean, al.result.shift_y, al.result.shift_x);
      const LossMask mask = build_loss_mask(ap.noisy, ap.clean, *mp);
      write_mask(*out, mask);
      std::cout << "mask " << mask.height << "x" << mask.width << ", included "
                << static_cast<double>(mask.included()) / static_cast<double>(mask.mask.size()) << "\n";
      exit_code = kExitOk;
    });
  }
  {
    auto in = std::make_shared<fs::path>();
    auto out = std::make_shared<fs::path>();
    auto method = std::make_shared<std::string>("bilinear");
    auto space = std::make_shared<std::string>("camrgb");
    CLI::App* cmd = app.add_subcommand("demosaic", "Demosaic a capture to a planar float .rawpatch file");
    cmd->add_option("--input", *in, "Capture (.pgm with .meta sidecar)")->required();
    cmd->add_option("--output", *out, "Output .rawpatch")->required();
    cmd->add_option("--method", *method, "bilinear or edge-aware")
        ->capture_default_str()
        ->check(CLI::IsMember({"bilinear", "edge-aware"}));
    cmd->add_option("--color", *space, "Output color space: camrgb or rec2020")
        ->capture_default_str()
        ->check(CLI::IsMember({"camrgb", "rec2020"}));
    cmd->callback([in, out, method, space, &exit_code] {
      Loaded l = load_linear(*in, *method);
      if (*space == "rec2020") {
        l.rgb = apply_color_matrix(l.rgb, camrgb_to_rec2020_matrix(l.meta.xyz_to_camrgb));
        l.rgb.space = ColorSpace::Rec2020;
      }
      write_rawpatch(*out, l.rgb.pixels);
      exit_code = kExitOk;
    });
  }
  {
    auto in = std::make_shared<fs::path>();
    auto out = std::make_shared<fs::path>();
    auto params_out = std::make_shared<fs::path>();
    auto dev_seed = std::make_shared<long long>(-1);
    CLI::App* cmd = app.add_subcommand("develop", "Develop a capture with a randomized proxy pipeline");
    cmd->add_option("--input", *in, "Capture (.pgm with .meta sidecar)")->required();
    cmd->add_option("--output", *out, "Output .rawpatch with display-referred values")->required();
    cmd->add_option("--dev-seed", *dev_seed, "Seed for the development parameters (default: --seed)");
    cmd->add_option("--params-out", *params_out, "Write the sampled parameters here");
    cmd->callback([in, out, params_out, dev_seed, &seed, &exit_code] {
      Loaded l = load_linear(*in, "bilinear");
      const LinearRgbImage rec = apply_color_matrix(l.rgb, camrgb_to_rec2020_matrix(l.meta.xyz_to_camrgb));
      const DevParams p = sample_dev_params(*dev_seed >= 0 ? static_cast<std::uint64_t>(*dev_seed) : seed);
      write_rawpatch(*out, develop_proxy(rec, p).pixels);
      if (!params_out->empty()) {
        std::ofstream f(*params_out);
        f << format_dev_params(p) << "\n";
      }
      std::cout << format_dev_params(p) << "\n";
      exit_code = kExitOk;
    });
  }
}

}  // namespace rnip::cli

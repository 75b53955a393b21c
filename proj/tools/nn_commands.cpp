#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"
#include "rnip/metrics.hpp"
#include "rnip/nn/checkpoint.hpp"
#include "rnip/nn/dataset.hpp"
#include "rnip/nn/jddc.hpp"
#include "rnip/nn/macs.hpp"
#include "rnip/nn/range_coder.hpp"
#include "rnip/nn/training_run.hpp"
#include "rnip/rng.hpp"

namespace fs = std::filesystem;

namespace rnip::cli {

namespace {

using nn::TrainConfig;

nlohmann::ordered_json summary_json(const nn::EvalSummary& s) {
  nlohmann::ordered_json j;
  j["distortion"] = s.distortion;
  j["rate_bpp"] = s.rate_bpp;
  j["total"] = s.total;
  j["msssim"] = s.msssim;
  j["coded_bpp"] = s.coded_bpp;
  return j;
}

// Seed given on the command line overrides the file when set.
TrainConfig load_config(const fs::path& path, CLI::App* cmd, unsigned long long seed) {
  TrainConfig cfg = path.empty() ? TrainConfig{} : TrainConfig::load(path);
  if (cmd->get_parent()->count("--seed") > 0) cfg.seed = seed;
  return cfg;
}

std::vector<nn::TrainItem<float>> validation_set(const TrainConfig& cfg, int threads) {
  const int side = cfg.input_kind == nn::InputKind::Bayer4 ? 2 * cfg.input_size : cfg.input_size;
  return nn::make_synthetic_set<float>(cfg.val_pairs, side, side, cfg.input_kind,
                                       derive_seed(cfg.seed, 0x76616cULL), threads);
}

nn::TrainingResult train_with_log(const TrainConfig& cfg, int threads, int log_every) {
  const auto t0 = std::chrono::steady_clock::now();
  return nn::run_training(cfg, threads, [&](long step, const nn::RdLossTerms& t) {
    if (log_every <= 0 || (step + 1) % log_every != 0) return;
    const double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cerr << "step " << step + 1 << "/" << cfg.steps << "  distortion " << std::fixed << std::setprecision(5)
              << t.distortion << "  rate " << t.rate_bpp << " bpp  total " << t.total << "  (" << std::setprecision(0)
              << el << " s)\n";
  });
}

std::string lambda_tag(double lambda) {
  std::ostringstream s;
  s << lambda;
  return s.str();
}

int run_coder_selftest(std::size_t count, std::uint64_t seed) {
  // Laplacian-shaped latent distribution over 256 symbols.
  std::vector<double> pmf(256);
  double z = 0.0;
  for (int i = 0; i < 256; ++i) z += pmf[i] = std::exp(-std::abs(i - 128) / 6.0);
  for (double& p : pmf) p /= z;
  const nn::QuantizedCdf cdf = nn::quantize_pmf(pmf);

  SplitMix64 g(seed);
  std::vector<int> symbols(count);
  double bits = 0.0;
  for (auto& s : symbols) {
    const std::uint32_t u = static_cast<std::uint32_t>(g.next() >> 48);
    s = static_cast<int>(std::upper_bound(cdf.cdf.begin(), cdf.cdf.end(), u) - cdf.cdf.begin()) - 1;
    bits += cdf.bits(s);
  }
  const auto stream = nn::range_encode(symbols, cdf);
  const auto decoded = nn::range_decode(stream, cdf, symbols.size());
  const bool exact = decoded == symbols;
  const double ideal = bits / 8.0;
  std::cout << "symbols " << count << ", stream " << stream.size() << " bytes, ideal " << std::fixed
            << std::setprecision(1) << ideal << " bytes, overhead " << std::setprecision(3)
            << (ideal > 0 ? 100.0 * (stream.size() - ideal) / ideal : 0.0) << "%, roundtrip "
            << (exact ? "exact" : "MISMATCH") << "\n";
  return exact ? kExitOk : kExitPartial;
}

}  // namespace

void register_nn_commands(CLI::App& app, int& exit_code, const int& threads, const unsigned long long& seed) {
  {
    auto config = std::make_shared<fs::path>();
    auto out = std::make_shared<fs::path>();
    auto log_every = std::make_shared<int>(50);
    CLI::App* cmd = app.add_subcommand("train", "Train a model on synthetic noisy/clean pairs and save a checkpoint");
    cmd->add_option("--config", *config, "Training configuration (JSON); defaults are used when omitted");
    cmd->add_option("--output", *out, "Checkpoint to write")->required();
    cmd->add_option("--log-every", *log_every, "Print the batch loss every N steps (0 = never)")->capture_default_str();
    cmd->callback([=, &exit_code, &threads, &seed] {
      const TrainConfig cfg = load_config(*config, cmd, seed);
      const auto r = train_with_log(cfg, threads, *log_every);
      nlohmann::ordered_json meta;
      meta["train_config"] = nlohmann::json::parse(cfg.to_json());
      meta["initial"] = summary_json(r.initial);
      meta["final"] = summary_json(r.final);
      nn::save_checkpoint(*r.model, *out, meta.dump());
      std::cout << meta.dump(2) << "\n";
      exit_code = kExitOk;
    });
  }
  {
    auto ckpt = std::make_shared<fs::path>();
    auto config = std::make_shared<fs::path>();
    CLI::App* cmd = app.add_subcommand("eval", "Evaluate a checkpoint on the synthetic validation pairs");
    cmd->add_option("--checkpoint", *ckpt, "Checkpoint file")->required();
    cmd->add_option("--config", *config, "Training configuration; defaults to the one stored in the checkpoint");
    cmd->callback([=, &exit_code, &threads, &seed] {
      auto loaded = nn::load_checkpoint(*ckpt);
      TrainConfig cfg;
      if (!config->empty()) {
        cfg = load_config(*config, cmd, seed);
      } else {
        const auto meta = nlohmann::json::parse(loaded.metadata);
        if (meta.contains("train_config")) cfg = TrainConfig::from_json(meta["train_config"].dump());
      }
      const auto val = validation_set(cfg, threads);
      const auto loss = nn::synthetic_loss_options(cfg.input_kind, cfg.lambda, cfg.gamma_before_loss);
      std::cout << summary_json(nn::evaluate_set(*loaded.model, val, loss, true, threads)).dump(2) << "\n";
      exit_code = kExitOk;
    });
  }
  {
    auto config = std::make_shared<fs::path>();
    auto out = std::make_shared<fs::path>();
    auto dir = std::make_shared<fs::path>();
    auto lambdas = std::make_shared<std::vector<double>>();
    auto train_missing = std::make_shared<bool>(false);
    auto label = std::make_shared<std::string>();
    CLI::App* cmd = app.add_subcommand("rd-sweep", "Evaluate one checkpoint per lambda and write a bpp/MS-SSIM CSV");
    cmd->add_option("--config", *config, "Training configuration shared by every lambda");
    cmd->add_option("--lambdas", *lambdas, "Rate weights, comma separated")->delimiter(',');
    cmd->add_option("--checkpoint-dir", *dir, "Directory holding lambda_<value>.ckpt files")->required();
    cmd->add_option("--output", *out, "CSV report")->required();
    cmd->add_option("--label", *label, "Row label (default: model and input kind)");
    cmd->add_flag("--train-missing", *train_missing, "Train and save checkpoints that do not exist yet");
    cmd->callback([=, &exit_code, &threads, &seed] {
      const TrainConfig base = load_config(*config, cmd, seed);
      std::vector<RdPoint> rows;
      for (double lambda : *lambdas) {
        TrainConfig cfg = base;
        cfg.lambda = lambda;
        const fs::path path = *dir / ("lambda_" + lambda_tag(lambda) + ".ckpt");
        std::unique_ptr<nn::Model<float>> model;
        if (fs::exists(path) || !*train_missing) {
          model = nn::load_checkpoint(path).model;
        } else {
          std::cerr << "training lambda " << lambda << "\n";
          auto r = train_with_log(cfg, threads, 0);
          nn::save_checkpoint(*r.model, path, nlohmann::json{{"train_config", nlohmann::json::parse(cfg.to_json())}}.dump());
          model = std::move(r.model);
        }
        const auto val = validation_set(cfg, threads);
        const auto s = nn::evaluate_set(*model, val, nn::synthetic_loss_options(cfg.input_kind, lambda), true, threads);
        rows.push_back({label->empty() ? cfg.model + "-" + std::string(to_string(cfg.input_kind)) : *label, lambda,
                        s.coded_bpp, s.msssim});
      }
      std::stable_sort(rows.begin(), rows.end(), [](const RdPoint& a, const RdPoint& b) { return a.bpp < b.bpp; });
      std::ofstream f(*out);
      if (!f) throw Error(ErrorCode::IoError, "cannot write " + out->string());
      write_rd_csv(f, rows);
      std::cout << "wrote " << rows.size() << " rows to " << out->string() << "\n";
      exit_code = kExitOk;
    });
  }
  {
    auto channels = std::make_shared<int>(32);
    auto enc = std::make_shared<int>(64);
    auto latent = std::make_shared<int>(96);
    auto mp = std::make_shared<double>(1.0);
    CLI::App* cmd = app.add_subcommand("mac-count", "Print GMAC per megapixel for the Bayer and RGB model variants");
    cmd->add_option("--unet-channels", *channels, "U-Net base width")->capture_default_str();
    cmd->add_option("--enc-channels", *enc, "JDDC encoder width")->capture_default_str();
    cmd->add_option("--latent-channels", *latent, "JDDC latent channels")->capture_default_str();
    cmd->add_option("--megapixels", *mp, "Image size in megapixels")->capture_default_str();
    cmd->callback([=, &exit_code] {
      using nn::InputKind;
      const auto ub = nn::count_macs(nn::UNetConfig::for_input(InputKind::Bayer4, *channels), *mp);
      const auto ur = nn::count_macs(nn::UNetConfig::for_input(InputKind::Rgb3, *channels), *mp);
      const auto jb = nn::count_macs(nn::JddcConfig::for_input(InputKind::Bayer4, *enc, *latent), *mp);
      const auto jr = nn::count_macs(nn::JddcConfig::for_input(InputKind::Rgb3, *enc, *latent), *mp);
      auto g = [](double v) { return v / 1e9; };
      std::cout << std::fixed << std::setprecision(3) << "model        input  encoder  decoder  total (GMAC)\n"
                << "unet         bayer4 " << std::setw(8) << g(ub.encoder) << " " << std::setw(8) << g(ub.decoder)
                << " " << std::setw(8) << g(ub.total()) << "\n"
                << "unet         rgb3   " << std::setw(8) << g(ur.encoder) << " " << std::setw(8) << g(ur.decoder)
                << " " << std::setw(8) << g(ur.total()) << "\n"
                << "jddc         bayer4 " << std::setw(8) << g(jb.encoder) << " " << std::setw(8) << g(jb.decoder)
                << " " << std::setw(8) << g(jb.total()) << "\n"
                << "jdc          rgb3   " << std::setw(8) << g(jr.encoder) << " " << std::setw(8) << g(jr.decoder)
                << " " << std::setw(8) << g(jr.total()) << "\n"
                << "ratio unet bayer/rgb " << ub.total() / ur.total() << ", encoder bayer/rgb "
                << jb.encoder / jr.encoder << "\n";
      exit_code = kExitOk;
    });
  }
  {
    auto count = std::make_shared<std::size_t>(1000000);
    CLI::App* cmd = app.add_subcommand("coder-selftest", "Range-code random latent symbols and check the roundtrip");
    cmd->add_option("--symbols", *count, "Number of symbols")->capture_default_str();
    cmd->callback([=, &exit_code, &seed] { exit_code = run_coder_selftest(*count, seed); });
  }
}

}  // namespace rnip::cli

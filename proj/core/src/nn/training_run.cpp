#include "rnip/nn/training_run.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "rnip/nn/dataset.hpp"
#include "rnip/nn/jddc.hpp"
#include "rnip/nn/unet.hpp"
#include "rnip/parallel.hpp"

namespace rnip::nn {

void TrainConfig::validate() const {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::ParseError, "training config: " + what); };
  if (model != "jddc" && model != "unet") bad("model must be jddc or unet");
  if (!(lambda >= 0.0)) bad("lambda must be >= 0");
  if (!(lr >= 0.0)) bad("lr must be >= 0");
  if (steps < 0 || batch < 1 || channels < 1 || latent_channels < 1) bad("counts must be positive");
  if (train_pairs < 1 || val_pairs < 0) bad("pair counts must be positive");
  const int out_side = input_kind == InputKind::Bayer4 ? 2 * input_size : input_size;
  if (out_side < 176) bad("output side " + std::to_string(out_side) + " is below the MS-SSIM minimum of 176");
  if (input_size % 16 != 0) bad("input_size must be a multiple of 16");
}

std::string TrainConfig::to_json() const {
  nlohmann::ordered_json j;
  j["model"] = model;
  j["input_kind"] = std::string(to_string(input_kind));
  j["lambda"] = lambda;
  j["lr"] = lr;
  j["steps"] = steps;
  j["seed"] = seed;
  j["batch"] = batch;
  j["channels"] = channels;
  j["latent_channels"] = latent_channels;
  j["train_pairs"] = train_pairs;
  j["val_pairs"] = val_pairs;
  j["input_size"] = input_size;
  j["gamma_before_loss"] = gamma_before_loss;
  return j.dump(2);
}

TrainConfig TrainConfig::from_json(const std::string& text) {
  static const char* const known[] = {"model",    "input_kind",      "lambda",      "lr",        "steps",
                                      "seed",     "batch",           "channels",    "latent_channels",
                                      "train_pairs", "val_pairs",    "input_size",  "gamma_before_loss"};
  try {
    const auto j = nlohmann::json::parse(text);
    if (!j.is_object()) throw Error(ErrorCode::ParseError, "training config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (std::find(std::begin(known), std::end(known), key) == std::end(known))
        throw Error(ErrorCode::ParseError, "training config: unknown field '" + key + "'");
    }
    TrainConfig c;
    c.model = j.value("model", c.model);
    c.input_kind = parse_input_kind(j.value("input_kind", std::string(to_string(c.input_kind))));
    c.lambda = j.value("lambda", c.lambda);
    c.lr = j.value("lr", c.lr);
    c.steps = j.value("steps", c.steps);
    c.seed = j.value("seed", c.seed);
    c.batch = j.value("batch", c.batch);
    c.channels = j.value("channels", c.channels);
    c.latent_channels = j.value("latent_channels", c.latent_channels);
    c.train_pairs = j.value("train_pairs", c.train_pairs);
    c.val_pairs = j.value("val_pairs", c.val_pairs);
    c.input_size = j.value("input_size", c.input_size);
    c.gamma_before_loss = j.value("gamma_before_loss", c.gamma_before_loss);
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("training config: ") + e.what());
  }
}

TrainConfig TrainConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

std::unique_ptr<Model<float>> build_model(const TrainConfig& cfg) {
  const std::uint64_t seed = derive_seed(cfg.seed, 0x6d6f64656cULL);
  if (cfg.model == "unet") {
    UNetConfig u = UNetConfig::for_input(cfg.input_kind, cfg.channels);
    u.gamma_before_loss = cfg.gamma_before_loss;
    return std::make_unique<UNet<float>>(u, seed);
  }
  JddcConfig j = JddcConfig::for_input(cfg.input_kind, cfg.channels, cfg.latent_channels);
  j.lambda = cfg.lambda;
  j.gamma_before_loss = cfg.gamma_before_loss;
  return std::make_unique<Jddc<float>>(j, seed);
}

EvalSummary evaluate_set(Model<float>& model, const std::vector<TrainItem<float>>& items, const RdLossOptions& loss,
                         bool range_code, int threads) {
  EvalSummary s;
  if (items.empty()) return s;
  const int workers = std::max(1, std::min(threads, static_cast<int>(items.size())));
  std::vector<std::unique_ptr<Model<float>>> replicas;
  for (int w = 0; w < workers; ++w) replicas.push_back(model.clone());
  std::vector<RdLossTerms> terms(items.size());
  std::vector<double> coded(items.size(), 0.0);
  parallel_for(items.size(), workers, [&](std::size_t i, int w) {
    Model<float>& m = *replicas[w];
    terms[i] = evaluate_item(m, items[i], loss, ForwardOptions{}, false);
    if (range_code) {
      if (auto* j = dynamic_cast<Jddc<float>*>(&m)) {
        const Shape out = j->output_shape(items[i].input.shape());
        coded[i] = 8.0 * static_cast<double>(j->compress(items[i].input).bitstream.size()) / (out.h * out.w);
      }
    }
  });
  const double inv = 1.0 / static_cast<double>(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    s.distortion += terms[i].distortion * inv;
    s.rate_bpp += terms[i].rate_bpp * inv;
    s.coded_bpp += coded[i] * inv;
  }
  s.msssim = 1.0 - s.distortion;
  s.total = s.distortion + loss.lambda * s.rate_bpp;
  return s;
}

TrainingResult run_training(const TrainConfig& cfg, int threads,
                            const std::function<void(long, const RdLossTerms&)>& progress) {
  cfg.validate();
  const int out_side = cfg.input_kind == InputKind::Bayer4 ? 2 * cfg.input_size : cfg.input_size;
  const auto train = make_synthetic_set<float>(cfg.train_pairs, out_side, out_side, cfg.input_kind,
                                               derive_seed(cfg.seed, 0x747261696eULL), threads);
  const auto val = make_synthetic_set<float>(cfg.val_pairs, out_side, out_side, cfg.input_kind,
                                             derive_seed(cfg.seed, 0x76616cULL), threads);
  const RdLossOptions loss = synthetic_loss_options(cfg.input_kind, cfg.lambda, cfg.gamma_before_loss);

  TrainingResult r;
  r.model = build_model(cfg);
  r.initial = evaluate_set(*r.model, val, loss, false, threads);

  TrainOptions opts;
  opts.adam.lr = cfg.lr;
  opts.loss = loss;
  opts.seed = derive_seed(cfg.seed, 0x6e6f697365ULL);
  opts.threads = threads;
  Trainer<float> trainer(*r.model, opts);

  // Batches walk a per-epoch permutation of the training set.
  std::vector<std::size_t> order(train.size());
  std::vector<const TrainItem<float>*> batch(cfg.batch);
  std::size_t cursor = order.size();
  std::uint64_t epoch = 0;
  for (long step = 0; step < cfg.steps; ++step) {
    for (int b = 0; b < cfg.batch; ++b) {
      if (cursor == order.size()) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        SplitMix64 g(derive_seed(cfg.seed, 0x65706f6368ULL, epoch++));
        for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[g.next() % i]);
        cursor = 0;
      }
      batch[b] = &train[order[cursor++]];
    }
    const RdLossTerms t = trainer.step(batch);
    r.history.push_back(t);
    if (progress) progress(step, t);
  }
  r.final = evaluate_set(*r.model, val, loss, true, threads);
  return r;
}

}  // namespace rnip::nn

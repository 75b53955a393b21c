#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include "rnip/nn/model.hpp"

namespace rnip::nn {

inline constexpr std::uint32_t kCheckpointVersion = 1;

// Builds a freshly initialized model from its kind ("unet" or "jddc") and
// configuration JSON.
template <typename T>
std::unique_ptr<Model<T>> make_model(const std::string& kind, const std::string& config_json, std::uint64_t seed);

// Layout: "RNIPCKPT", u32 version, then length-prefixed strings for the model
// kind, the model configuration and free-form metadata JSON, a u32 tensor
// count, one (name, rank, dims) entry per tensor and finally all tensor data
// as little-endian f32 in table order.
template <typename T>
void save_checkpoint(Model<T>& model, const std::filesystem::path& path, const std::string& metadata = "{}");

struct LoadedCheckpoint {
  std::unique_ptr<Model<float>> model;
  std::string metadata;
};

// Throws MissingCheckpoint when the file does not exist.
LoadedCheckpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace rnip::nn

#include "rnip/nn/checkpoint.hpp"

#include "binary_io.hpp"
#include "rnip/nn/jddc.hpp"
#include "rnip/nn/unet.hpp"

namespace rnip::nn {

namespace {

constexpr std::string_view kMagic = "RNIPCKPT";

void put_str(std::vector<unsigned char>& out, const std::string& s) {
  detail::put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.insert(out.end(), s.begin(), s.end());
}

std::string get_str(detail::ByteReader& r) { return r.str(r.u32()); }

}  // namespace

template <typename T>
std::unique_ptr<Model<T>> make_model(const std::string& kind, const std::string& config_json, std::uint64_t seed) {
  if (kind == "unet") return std::make_unique<UNet<T>>(UNetConfig::from_json(config_json), seed);
  if (kind == "jddc") return std::make_unique<Jddc<T>>(JddcConfig::from_json(config_json), seed);
  throw Error(ErrorCode::ParseError, "unknown model kind '" + kind + "'");
}

template <typename T>
void save_checkpoint(Model<T>& model, const std::filesystem::path& path, const std::string& metadata) {
  std::vector<unsigned char> out(kMagic.begin(), kMagic.end());
  detail::put_u32(out, kCheckpointVersion);
  put_str(out, model.kind());
  put_str(out, model.config_json());
  put_str(out, metadata);
  const auto params = model.parameters();
  detail::put_u32(out, static_cast<std::uint32_t>(params.size()));
  for (const auto* p : params) {
    put_str(out, p->name);
    const Shape& s = p->value.shape();
    detail::put_u32(out, 4);
    for (int d : {s.n, s.c, s.h, s.w}) detail::put_u32(out, static_cast<std::uint32_t>(d));
  }
  for (const auto* p : params)
    for (T v : p->value.data()) detail::put_f32(out, static_cast<float>(v));
  detail::write_file(path, out);
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::MissingCheckpoint, "no checkpoint at " + path.string());
  detail::ByteReader r(detail::read_file(path), path.string());
  r.expect_magic(kMagic);
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion)
    throw Error(ErrorCode::ParseError, path.string() + ": unsupported checkpoint version " + std::to_string(version));
  LoadedCheckpoint ck;
  const std::string kind = get_str(r);
  const std::string config = get_str(r);
  ck.metadata = get_str(r);
  ck.model = make_model<float>(kind, config, 0);
  const auto params = ck.model->parameters();
  const std::uint32_t count = r.u32();
  if (count != params.size()) throw Error(ErrorCode::ParseError, path.string() + ": tensor count does not match model");
  for (auto* p : params) {
    const std::string name = get_str(r);
    const std::uint32_t rank = r.u32();
    if (rank != 4) throw Error(ErrorCode::ParseError, path.string() + ": tensor " + name + " has rank " + std::to_string(rank));
    Shape s;
    s.n = static_cast<int>(r.u32());
    s.c = static_cast<int>(r.u32());
    s.h = static_cast<int>(r.u32());
    s.w = static_cast<int>(r.u32());
    if (name != p->name || !(s == p->value.shape()))
      throw Error(ErrorCode::ParseError, path.string() + ": tensor " + name + " " + s.str() + " does not match " +
                                             p->name + " " + p->value.shape().str());
  }
  for (auto* p : params)
    for (float& v : p->value.data()) v = r.f32();
  if (!r.at_end()) throw Error(ErrorCode::ParseError, path.string() + ": trailing bytes");
  return ck;
}

template std::unique_ptr<Model<float>> make_model<float>(const std::string&, const std::string&, std::uint64_t);
template std::unique_ptr<Model<double>> make_model<double>(const std::string&, const std::string&, std::uint64_t);
template void save_checkpoint<float>(Model<float>&, const std::filesystem::path&, const std::string&);
template void save_checkpoint<double>(Model<double>&, const std::filesystem::path&, const std::string&);

}  // namespace rnip::nn

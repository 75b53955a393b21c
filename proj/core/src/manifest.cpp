#include "rnip/manifest.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rnip/error.hpp"

namespace rnip {

using ojson = nlohmann::ordered_json;

std::string format_record(const PairRecord& r) {
  ojson j;
  j["scene_id"] = r.scene_id;
  j["camera_id"] = r.camera_id;
  j["shift_y"] = r.shift_y;
  j["shift_x"] = r.shift_x;
  j["gain"] = r.gain;
  j["alignment_loss"] = r.alignment_loss;
  j["msssim"] = r.msssim;
  j["mask_ref"] = r.mask_ref;
  j["discarded"] = r.discarded;
  return j.dump();
}

PairRecord parse_record(const std::string& line, int lineno) {
  auto fail = [&](const std::string& why) {
    return Error(ErrorCode::ParseError, "manifest line " + std::to_string(lineno) + ": " + why);
  };
  ojson j;
  try {
    j = ojson::parse(line);
  } catch (const ojson::parse_error& e) {
    throw fail(e.what());
  }
  if (!j.is_object()) throw fail("expected an object");
  auto field = [&](const char* key) -> const ojson& {
    if (!j.contains(key)) throw fail(std::string("missing field ") + key);
    return j.at(key);
  };
  PairRecord r;
  try {
    r.scene_id = field("scene_id").get<std::string>();
    r.camera_id = field("camera_id").get<std::string>();
    r.shift_y = field("shift_y").get<int>();
    r.shift_x = field("shift_x").get<int>();
    r.gain = field("gain").get<double>();
    r.alignment_loss = field("alignment_loss").get<double>();
    r.msssim = field("msssim").get<double>();
    r.mask_ref = field("mask_ref").get<std::string>();
    r.discarded = field("discarded").get<bool>();
  } catch (const ojson::type_error& e) {
    throw fail(e.what());
  }
  if (!(r.gain > 0.0)) throw fail("gain must be positive");
  if (!(r.msssim >= 0.0 && r.msssim <= 1.0)) throw fail("msssim must lie in [0, 1]");
  if (!(r.alignment_loss >= 0.0)) throw fail("alignment_loss must be non-negative");
  return r;
}

void write_manifest(std::ostream& out, const std::vector<PairRecord>& records) {
  for (const auto& r : records) out << format_record(r) << '\n';
}

void write_manifest(const std::filesystem::path& path, const std::vector<PairRecord>& records) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  write_manifest(out, records);
}

std::vector<PairRecord> read_manifest(std::istream& in) {
  std::vector<PairRecord> records;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    records.push_back(parse_record(line, lineno));
  }
  return records;
}

std::vector<PairRecord> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return read_manifest(in);
}

}  // namespace rnip

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace rnip {

struct PairRecord {
  std::string scene_id;
  std::string camera_id;
  int shift_y = 0;
  int shift_x = 0;
  double gain = 1.0;
  double alignment_loss = 0.0;
  double msssim = 1.0;
  std::string mask_ref;
  bool discarded = false;

  bool operator==(const PairRecord&) const = default;
};

// JSON Lines, one object per record, keys in declaration order.
std::string format_record(const PairRecord& r);
// Throws ParseError naming `lineno` on malformed input or violated invariants.
PairRecord parse_record(const std::string& line, int lineno);

void write_manifest(std::ostream& out, const std::vector<PairRecord>& records);
void write_manifest(const std::filesystem::path& path, const std::vector<PairRecord>& records);
std::vector<PairRecord> read_manifest(std::istream& in);
std::vector<PairRecord> read_manifest(const std::filesystem::path& path);

}  // namespace rnip

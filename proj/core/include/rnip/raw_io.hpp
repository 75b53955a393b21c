#pragma once

#include <filesystem>
#include <string>

#include "rnip/raw.hpp"

namespace rnip {

// Binary PGM (P5). maxval > 255 means 16-bit big-endian samples.
RawCounts read_pgm(const std::filesystem::path& path);
void write_pgm16(const std::filesystem::path& path, const RawCounts& raw);

// Sidecar metadata: one key=value per line. Keys: cfa, black_level (1 or 4
// values), white_level, xyz_to_camrgb (9 values, row-major), camera_id.
struct Sidecar {
  CfaPattern cfa = CfaPattern::RGGB;
  SensorMeta meta;
};

Sidecar parse_sidecar(const std::string& text);
std::string format_sidecar(const Sidecar& s);
Sidecar read_sidecar(const std::filesystem::path& path);
void write_sidecar(const std::filesystem::path& path, const Sidecar& s);

// Loads foo.pgm together with foo.meta and applies the sidecar's CFA tag.
struct LoadedRaw {
  RawCounts counts;
  SensorMeta meta;
};
LoadedRaw load_raw(const std::filesystem::path& pgm_path);

}  // namespace rnip

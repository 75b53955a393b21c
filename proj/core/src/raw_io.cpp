#include "rnip/raw_io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

namespace rnip {

namespace {

std::vector<char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Reads the next whitespace-delimited header token, skipping '#' comments.
std::string next_token(const std::vector<char>& buf, std::size_t& pos) {
  for (;;) {
    while (pos < buf.size() && std::isspace(static_cast<unsigned char>(buf[pos]))) ++pos;
    if (pos < buf.size() && buf[pos] == '#') {
      while (pos < buf.size() && buf[pos] != '\n') ++pos;
      continue;
    }
    break;
  }
  std::string tok;
  while (pos < buf.size() && !std::isspace(static_cast<unsigned char>(buf[pos]))) tok += buf[pos++];
  return tok;
}

int parse_int(const std::string& s, const std::string& what) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw Error(ErrorCode::ParseError, "bad " + what + " '" + s + "'");
  return v;
}

double parse_double(const std::string& s, const std::string& key) {
  std::istringstream is(s);
  is.imbue(std::locale::classic());
  double v = 0;
  if (!(is >> v)) throw Error(ErrorCode::ParseError, "bad number '" + s + "' for " + key);
  return v;
}

std::vector<double> parse_doubles(const std::string& s, const std::string& key) {
  std::istringstream is(s);
  is.imbue(std::locale::classic());
  std::vector<double> out;
  std::string tok;
  while (is >> tok) out.push_back(parse_double(tok, key));
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

RawCounts read_pgm(const std::filesystem::path& path) {
  const auto buf = slurp(path);
  std::size_t pos = 0;
  if (next_token(buf, pos) != "P5") throw Error(ErrorCode::ParseError, path.string() + ": not a P5 PGM");
  RawCounts raw;
  raw.width = parse_int(next_token(buf, pos), "width");
  raw.height = parse_int(next_token(buf, pos), "height");
  const int maxval = parse_int(next_token(buf, pos), "maxval");
  if (raw.width <= 0 || raw.height <= 0 || maxval <= 0 || maxval > 65535)
    throw Error(ErrorCode::ParseError, path.string() + ": bad PGM header");
  ++pos;  // single whitespace after maxval
  const std::size_t n = static_cast<std::size_t>(raw.width) * raw.height;
  const std::size_t bps = maxval > 255 ? 2 : 1;
  if (buf.size() < pos + n * bps) throw Error(ErrorCode::ParseError, path.string() + ": truncated PGM");
  raw.data.resize(n);
  const auto* p = reinterpret_cast<const unsigned char*>(buf.data() + pos);
  for (std::size_t i = 0; i < n; ++i)
    raw.data[i] = bps == 2 ? static_cast<std::uint16_t>((p[2 * i] << 8) | p[2 * i + 1]) : p[i];
  return raw;
}

void write_pgm16(const std::filesystem::path& path, const RawCounts& raw) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << "P5\n" << raw.width << " " << raw.height << "\n65535\n";
  std::vector<unsigned char> bytes(raw.data.size() * 2);
  for (std::size_t i = 0; i < raw.data.size(); ++i) {
    bytes[2 * i] = static_cast<unsigned char>(raw.data[i] >> 8);
    bytes[2 * i + 1] = static_cast<unsigned char>(raw.data[i] & 0xFF);
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

Sidecar parse_sidecar(const std::string& text) {
  Sidecar s;
  bool have_cfa = false, have_black = false, have_white = false, have_matrix = false;
  std::istringstream lines(text);
  std::string line;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "cfa") {
      s.cfa = parse_cfa(value);
      have_cfa = true;
    } else if (key == "black_level") {
      const auto v = parse_doubles(value, key);
      if (v.size() == 1) {
        s.meta.black_level.fill(v[0]);
      } else if (v.size() == 4) {
        std::copy(v.begin(), v.end(), s.meta.black_level.begin());
      } else {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": black_level needs 1 or 4 values");
      }
      have_black = true;
    } else if (key == "white_level") {
      s.meta.white_level = parse_double(value, key);
      have_white = true;
    } else if (key == "xyz_to_camrgb") {
      const auto v = parse_doubles(value, key);
      if (v.size() != 9)
        throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": xyz_to_camrgb needs 9 values");
      std::copy(v.begin(), v.end(), s.meta.xyz_to_camrgb.m.begin());
      have_matrix = true;
    } else if (key == "camera_id") {
      s.meta.camera_id = value;
    } else {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (!have_cfa || !have_black || !have_white || !have_matrix)
    throw Error(ErrorCode::ParseError, "sidecar is missing one of cfa, black_level, white_level, xyz_to_camrgb");
  return s;
}

std::string format_sidecar(const Sidecar& s) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17);
  os << "cfa=" << to_string(s.cfa) << "\n";
  const auto& b = s.meta.black_level;
  if (b[0] == b[1] && b[1] == b[2] && b[2] == b[3])
    os << "black_level=" << b[0] << "\n";
  else
    os << "black_level=" << b[0] << " " << b[1] << " " << b[2] << " " << b[3] << "\n";
  os << "white_level=" << s.meta.white_level << "\n";
  os << "xyz_to_camrgb=";
  for (int i = 0; i < 9; ++i) os << (i ? " " : "") << s.meta.xyz_to_camrgb.m[i];
  os << "\ncamera_id=" << s.meta.camera_id << "\n";
  return os.str();
}

Sidecar read_sidecar(const std::filesystem::path& path) {
  const auto buf = slurp(path);
  try {
    return parse_sidecar(std::string(buf.begin(), buf.end()));
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void write_sidecar(const std::filesystem::path& path, const Sidecar& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << format_sidecar(s);
}

LoadedRaw load_raw(const std::filesystem::path& pgm_path) {
  auto sidecar_path = pgm_path;
  sidecar_path.replace_extension(".meta");
  const Sidecar s = read_sidecar(sidecar_path);
  LoadedRaw out{read_pgm(pgm_path), s.meta};
  out.counts.cfa = s.cfa;
  return out;
}

}  // namespace rnip

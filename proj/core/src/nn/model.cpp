#include "rnip/nn/model.hpp"

namespace rnip::nn {

std::string_view to_string(InputKind k) {
  switch (k) {
    case InputKind::Bayer4: return "bayer4";
    case InputKind::Rgb3: return "rgb3";
    case InputKind::Developed3: return "developed3";
  }
  return "?";
}

InputKind parse_input_kind(std::string_view s) {
  if (s == "bayer4" || s == "bayer") return InputKind::Bayer4;
  if (s == "rgb3" || s == "rgb") return InputKind::Rgb3;
  if (s == "developed3" || s == "developed") return InputKind::Developed3;
  throw Error(ErrorCode::ParseError, "unknown input kind '" + std::string(s) + "'");
}

}  // namespace rnip::nn

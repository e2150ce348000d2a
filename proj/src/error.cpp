#include "parrot/error.hpp"

namespace parrot {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::not_found: return "not_found";
    case ErrorCode::validation_failed: return "validation_failed";
    case ErrorCode::already_ingested: return "already_ingested";
    case ErrorCode::unsupported_media: return "unsupported_media";
    case ErrorCode::degenerate_fit: return "degenerate_fit";
    case ErrorCode::non_invertible_trend: return "non_invertible_trend";
    case ErrorCode::internal: return "internal";
  }
  return "internal";
}

}  // namespace parrot

#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

namespace parrot {

// Closed set of failure categories. The service maps these 1:1 onto its
// error envelope codes.
enum class ErrorCode {
  not_found,
  validation_failed,
  already_ingested,
  unsupported_media,
  degenerate_fit,
  non_invertible_trend,
  internal,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::map<std::string, std::string> details = {})
      : std::runtime_error(message), code_(code), details_(std::move(details)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::map<std::string, std::string>& details() const noexcept { return details_; }

 private:
  ErrorCode code_;
  std::map<std::string, std::string> details_;
};

}  // namespace parrot

#pragma once

#include <stdexcept>
#include <string>

namespace ncx {

enum class ErrorCode {
  ok = 0,
  config = 1,
  dimension = 2,
  contract = 3,
  index = 4,
  numeric = 5,
  io = 6,
  diverged = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error(ErrorCode::config, msg) {}
};
struct DimensionError : Error {
  explicit DimensionError(const std::string& msg) : Error(ErrorCode::dimension, msg) {}
};
struct ContractError : Error {
  explicit ContractError(const std::string& msg) : Error(ErrorCode::contract, msg) {}
};
struct IndexError : Error {
  explicit IndexError(const std::string& msg) : Error(ErrorCode::index, msg) {}
};
struct NumericError : Error {
  explicit NumericError(const std::string& msg) : Error(ErrorCode::numeric, msg) {}
};
struct IoError : Error {
  explicit IoError(const std::string& msg) : Error(ErrorCode::io, msg) {}
};
struct DivergedError : Error {
  explicit DivergedError(const std::string& msg) : Error(ErrorCode::diverged, msg) {}
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::ok: return "ok";
    case ErrorCode::config: return "config";
    case ErrorCode::dimension: return "dimension";
    case ErrorCode::contract: return "contract";
    case ErrorCode::index: return "index";
    case ErrorCode::numeric: return "numeric";
    case ErrorCode::io: return "io";
    case ErrorCode::diverged: return "diverged";
  }
  return "unknown";
}

}  // namespace ncx

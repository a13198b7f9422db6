#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace brw {

/// Index outside the generated window.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Caller violated a documented precondition (e.g. even index passed to is_bad).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A request exceeds a fixed resource limit (enumeration size, window cap).
class ResourceError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// The generated window is too short to certify a truncated quantity.
/// `extra_back_len` is a lower bound on the additional past steps required.
class CertificationError : public std::runtime_error {
 public:
  CertificationError(const std::string& what, std::int64_t extra_back_len, std::int64_t extra_fwd_len = 0)
      : std::runtime_error(what), extra_back_len_(extra_back_len), extra_fwd_len_(extra_fwd_len) {}

  std::int64_t extra_back_len() const noexcept { return extra_back_len_; }
  std::int64_t extra_fwd_len() const noexcept { return extra_fwd_len_; }

 private:
  std::int64_t extra_back_len_;
  std::int64_t extra_fwd_len_;
};

/// Too few (or degenerate) samples for a statistical procedure.
class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed command line.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace brw

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace k2t {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed record in a line-delimited input. `line()` is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Structural problems with token/word embeddings (bad sub-word runs,
/// dimension mismatches, zero vectors).
class EmbeddingError : public Error {
 public:
  using Error::Error;
};

/// The provider could not be reached at all (transport failure, retries
/// exhausted). Pipelines abort on this rather than rejecting the document.
class ProviderUnavailable : public Error {
 public:
  ProviderUnavailable(const std::string& what, int attempts)
      : Error(what), attempts_(attempts) {}

  int attempts() const noexcept { return attempts_; }

 private:
  int attempts_;
};

/// The remote side answered, but not in the agreed wire format.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// The remote side refused the request (HTTP 4xx). Not retried.
class RequestRejected : public Error {
 public:
  RequestRejected(int status, const std::string& what)
      : Error("HTTP " + std::to_string(status) + ": " + what), status_(status) {}

  int status() const noexcept { return status_; }

 private:
  int status_;
};

/// Prediction and gold files disagree on their id sets.
class IdMismatch : public Error {
 public:
  IdMismatch(const std::string& id, const std::string& what)
      : Error(what + ": " + id), id_(id) {}

  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

class ConstraintUnsatisfiable : public Error {
 public:
  explicit ConstraintUnsatisfiable(std::vector<std::string> missing)
      : Error(format(missing)), missing_(std::move(missing)) {}

  const std::vector<std::string>& missing() const noexcept { return missing_; }

 private:
  static std::string format(const std::vector<std::string>& missing) {
    std::string msg = "no hypothesis satisfies all constraints; missing:";
    for (const auto& m : missing) msg += " " + m;
    return msg;
  }

  std::vector<std::string> missing_;
};

}  // namespace k2t

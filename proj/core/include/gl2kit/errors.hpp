#pragma once

#include <stdexcept>
#include <string>

namespace gl2kit {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: wrong modulus, singular matrix, unmet hypothesis of a lemma.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Unreadable or malformed input file.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A computation would exceed a configured size cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// A mathematical statement the library checks turned out false on a concrete
/// instance. Never thrown for bad input; reserved for falsification events.
class LemmaViolation : public Error {
 public:
  LemmaViolation(std::string lemma, const std::string& detail)
      : Error(lemma + ": " + detail), lemma_(std::move(lemma)) {}

  const std::string& lemma() const noexcept { return lemma_; }

 private:
  std::string lemma_;
};

}  // namespace gl2kit

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace karyograph {

/// Base class for all karyograph errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
};

/// Malformed band or karyotype text; carries the offending character offset.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& message)
      : Error(message + " (at offset " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Atlas file violates the band-atlas invariants or the file format.
class AtlasError : public Error {
 public:
  using Error::Error;
};

/// A band address that is not present in the atlas.
class UnknownBandError : public Error {
 public:
  using Error::Error;
};

/// Bands on different chromosomes or arms cannot be ordered.
class IncomparableError : public Error {
 public:
  using Error::Error;
};

/// Copy-number baseline cannot be stated, e.g. sex-chromosome bands under a
/// 46,XN base where the unknown chromosome may or may not carry the band.
class UndeterminedBaselineError : public Error {
 public:
  using Error::Error;
};

/// Name mangling/demangling failure.
class CodecError : public Error {
 public:
  using Error::Error;
};

/// Corpus file failure (unparseable entry, duplicate name).
class CorpusError : public Error {
 public:
  using Error::Error;
};

}  // namespace karyograph

#ifndef STATIONMATCH_ERROR_H_
#define STATIONMATCH_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stationmatch {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input document (XML, TSV row). Carries the byte offset where
// parsing stopped, or npos if unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t offset = npos)
      : Error(offset == npos
                  ? msg
                  : msg + " (at byte " + std::to_string(offset) + ")"),
        _offset(offset) {}

  std::size_t offset() const { return _offset; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::size_t _offset;
};

// Structurally invalid model or data file.
class FormatError : public Error {
 public:
  using Error::Error;
};

class VersionError : public FormatError {
 public:
  using FormatError::FormatError;
};

// File cannot be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Inconsistent configuration, detected before any work starts.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace stationmatch

#endif  // STATIONMATCH_ERROR_H_

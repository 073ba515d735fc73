#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace transkb {

#ifdef TRANSKB_REAL32
using real = float;
inline constexpr const char* kPrecisionName = "f32";
#else
using real = double;
inline constexpr const char* kPrecisionName = "f64";
#endif

using EntityId = std::int64_t;
using RelationId = std::int64_t;

// One symbolic fact: head and tail are dense entity indices, relation a dense
// relation index, all assigned by a Vocabulary.
struct Triple {
  EntityId head = 0;
  RelationId relation = 0;
  EntityId tail = 0;

  friend bool operator==(const Triple& a, const Triple& b) {
    return a.head == b.head && a.relation == b.relation && a.tail == b.tail;
  }
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file content. Carries file name and 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::int64_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what),
        line_(line) {}
  std::int64_t line() const { return line_; }

 private:
  std::int64_t line_;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class StateError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Checkpoint file damaged: short read or checksum mismatch.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

}  // namespace transkb

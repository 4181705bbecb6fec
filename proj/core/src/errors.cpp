#include "lungsynth/errors.hpp"

namespace lungsynth {

DimensionMismatch::DimensionMismatch(const std::string& what_op, int w1, int h1,
                                     int w2, int h2)
    : Error(what_op + ": dimension mismatch " + std::to_string(w1) + "x" +
            std::to_string(h1) + " vs " + std::to_string(w2) + "x" +
            std::to_string(h2)) {}

ParseError::ParseError(const std::string& source, int line,
                       const std::string& message)
    : ConfigError(source + ":" + std::to_string(line) + ": " + message),
      line_(line) {}

UnknownKey::UnknownKey(const std::string& source, int line,
                       const std::string& key)
    : ConfigError(source + ":" + std::to_string(line) + ": unknown key '" +
                  key + "'"),
      key_(key) {}

}  // namespace lungsynth

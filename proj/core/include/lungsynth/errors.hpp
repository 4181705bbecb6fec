#pragma once

#include <stdexcept>
#include <string>

namespace lungsynth {

// Base of every error raised by the library. Subclasses map onto the error
// classes the CLI turns into exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(const std::string& what_op, int w1, int h1, int w2, int h2);
};

class EmptyLungMask : public Error {
 public:
  EmptyLungMask() : Error("lung mask has no foreground pixels") {}
};

class NoLungFound : public Error {
 public:
  NoLungFound() : Error("no lung candidate survived any threshold") {}
};

class ZeroVector : public Error {
 public:
  ZeroVector() : Error("feature vector has zero norm") {}
};

class SingleClass : public Error {
 public:
  SingleClass() : Error("scores contain only one label class") {}
};

class NoPositives : public Error {
 public:
  NoPositives() : Error("scores contain no positive samples") {}
};

class IoError : public Error {
 public:
  using Error::Error;
};

class DirNotFound : public IoError {
 public:
  explicit DirNotFound(const std::string& path)
      : IoError("directory not found: " + path) {}
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public ConfigError {
 public:
  ParseError(const std::string& source, int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

class UnknownKey : public ConfigError {
 public:
  UnknownKey(const std::string& source, int line, const std::string& key);
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

}  // namespace lungsynth

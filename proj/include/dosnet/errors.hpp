#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dosnet {

/// Malformed or unusable input data (edge lists, label files, samples).
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
  InputError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_ = 0;
};

}  // namespace dosnet

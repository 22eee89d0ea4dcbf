#pragma once

#include <stdexcept>
#include <string>

namespace tq {

// Violated precondition or invalid configuration. CLI maps this to exit code 1.
class contract_error : public std::invalid_argument {
 public:
  explicit contract_error(const std::string& what) : std::invalid_argument(what) {}
};

// Work or memory limit exceeded. CLI maps this to exit code 2.
class resource_error : public std::runtime_error {
 public:
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tq

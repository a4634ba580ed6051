#pragma once

#include <stdexcept>
#include <string>

namespace superpat {

// Invalid input or a precondition violated by the caller.
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// A configured enumeration cap would be exceeded. Never a silent truncation.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace superpat

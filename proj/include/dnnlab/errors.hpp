#pragma once

#include <stdexcept>
#include <string>

namespace dnnlab {

// Thrown when vector/matrix dimensions do not line up.
struct ShapeError : std::runtime_error {
  explicit ShapeError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a documented precondition of an operation is violated.
struct ContractError : std::runtime_error {
  explicit ContractError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown for arguments outside an operation's mathematical domain.
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dnnlab

#pragma once

#include <stdexcept>
#include <string>

namespace histnet {

// Raised when caller-supplied data violates an operation's precondition.
class InputError : public std::invalid_argument
{
public:
  explicit InputError(const std::string& what)
    : std::invalid_argument(what)
  {
  }
};

// Raised when a structured object (net, inflated histogram) cannot be built
// from otherwise well-formed inputs.
class ConstructionError : public std::runtime_error
{
public:
  explicit ConstructionError(const std::string& what)
    : std::runtime_error(what)
  {
  }
};

} // namespace histnet

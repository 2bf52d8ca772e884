#pragma once

#include <stdexcept>
#include <string>

namespace avalanche {

// Invalid user input (bad layer count, negative disorder, mismatched sizes).
// The CLI maps it to exit code 2.
using ArgumentError = std::invalid_argument;

// A request that would exceed the desk-scale limits (dense guards, memory).
// The CLI maps it to exit code 3.
class ResourceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Output file could not be written. Exit code 3.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Linear-algebra result outside tolerance, e.g. a density matrix with a
// clearly negative eigenvalue.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace avalanche

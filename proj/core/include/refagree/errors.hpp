#pragma once

#include <stdexcept>
#include <string>

namespace refagree {

/// Input data failed parsing or validation.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation could not be carried out on otherwise valid data
/// (degenerate series, zero denominators, sampler exhaustion).
class ComputeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace refagree

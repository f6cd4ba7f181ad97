#pragma once

#include <stdexcept>

namespace physcorrect {

struct InvalidShape : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SimDiverged : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateAlignment : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TooShort : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptySequence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace physcorrect

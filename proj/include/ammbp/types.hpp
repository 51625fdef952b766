#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ammbp {

template <std::size_t D>
using State = std::array<double, D>;

enum class BoundaryKind { Periodic, Free };

// A cell or sub-cell state left the invariant domain. The message names the
// cell and stage when they are known.
class AdmissibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The step could not satisfy the accuracy-preserving CFL bound within the
// configured number of halvings.
class HalvingLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <std::size_t D>
State<D> operator+(const State<D>& a, const State<D>& b) {
  State<D> r;
  for (std::size_t k = 0; k < D; ++k) r[k] = a[k] + b[k];
  return r;
}

template <std::size_t D>
State<D> operator-(const State<D>& a, const State<D>& b) {
  State<D> r;
  for (std::size_t k = 0; k < D; ++k) r[k] = a[k] - b[k];
  return r;
}

template <std::size_t D>
State<D> operator*(double s, const State<D>& a) {
  State<D> r;
  for (std::size_t k = 0; k < D; ++k) r[k] = s * a[k];
  return r;
}

}  // namespace ammbp

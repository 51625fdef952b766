#include "ammbp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ammbp::linalg {

std::array<double, 3> solve3(std::array<double, 9> a, std::array<double, 3> b) {
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::abs(a[3 * r + col]) > std::abs(a[3 * pivot + col])) pivot = r;
    }
    if (!(std::abs(a[3 * pivot + col]) > 1e-14 * scale)) throw std::runtime_error("singular 3x3 system");
    if (pivot != col) {
      for (int c = 0; c < 3; ++c) std::swap(a[3 * col + c], a[3 * pivot + c]);
      std::swap(b[col], b[pivot]);
    }
    for (int r = col + 1; r < 3; ++r) {
      const double f = a[3 * r + col] / a[3 * col + col];
      for (int c = col; c < 3; ++c) a[3 * r + c] -= f * a[3 * col + c];
      b[r] -= f * b[col];
    }
  }
  std::array<double, 3> x{};
  for (int r = 2; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < 3; ++c) s -= a[3 * r + c] * x[c];
    x[r] = s / a[3 * r + r];
  }
  return x;
}

std::vector<double> inverse(std::span<const double> a_in, std::size_t n) {
  std::vector<double> a(a_in.begin(), a_in.end());
  std::vector<double> inv(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = 1.0;
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    }
    if (!(std::abs(a[pivot * n + col]) > 0.0)) throw std::runtime_error("singular matrix");
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(a[col * n + c], a[pivot * n + c]);
        std::swap(inv[col * n + c], inv[pivot * n + c]);
      }
    }
    const double d = a[col * n + col];
    for (std::size_t c = 0; c < n; ++c) {
      a[col * n + c] /= d;
      inv[col * n + c] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r * n + col];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) {
        a[r * n + c] -= f * a[col * n + c];
        inv[r * n + c] -= f * inv[col * n + c];
      }
    }
  }
  return inv;
}

std::vector<double> multiply(std::span<const double> a, std::span<const double> b, std::size_t n) {
  std::vector<double> c(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i * n + j] += a[i * n + k] * b[k * n + j];
  return c;
}

double condition_estimate(std::span<const double> left, std::span<const double> right, std::size_t n) {
  std::vector<double> r(right.begin(), right.end());
  std::vector<double> l(left.begin(), left.end());
  // Columns of R (rows of L) first, then rows of R (columns of L).
  for (std::size_t c = 0; c < n; ++c) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(r[i * n + c]));
    if (!(m > 0.0)) return INFINITY;
    for (std::size_t i = 0; i < n; ++i) {
      r[i * n + c] /= m;
      l[c * n + i] *= m;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double m = 0.0;
    for (std::size_t c = 0; c < n; ++c) m = std::max(m, std::abs(r[i * n + c]));
    if (!(m > 0.0)) return INFINITY;
    for (std::size_t c = 0; c < n; ++c) {
      r[i * n + c] /= m;
      l[c * n + i] *= m;
    }
  }
  auto norm_inf = [n](const std::vector<double>& m) {
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t c = 0; c < n; ++c) s += std::abs(m[i * n + c]);
      best = std::max(best, s);
    }
    return best;
  };
  const double cond = norm_inf(r) * norm_inf(l);
  return std::isfinite(cond) ? cond : INFINITY;
}

}  // namespace ammbp::linalg

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

// Small dense helpers for the eigenvector bases and the 3x3 reconstruction
// systems. Matrices are row-major.
namespace ammbp::linalg {

inline constexpr double kMaxCondition = 1e12;

// Gaussian elimination with partial pivoting; throws on a singular matrix.
std::array<double, 3> solve3(std::array<double, 9> a, std::array<double, 3> b);

// Inverse of an n x n matrix; throws on a singular matrix.
std::vector<double> inverse(std::span<const double> a, std::size_t n);

std::vector<double> multiply(std::span<const double> a, std::span<const double> b, std::size_t n);

// ||R'||_inf * ||L'||_inf after equilibrating the right basis R by column and
// row maxima (and the left basis L accordingly), so the estimate ignores both
// eigenvector normalisation and variable units.
double condition_estimate(std::span<const double> left, std::span<const double> right, std::size_t n);

}  // namespace ammbp::linalg

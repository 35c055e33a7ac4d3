#pragma once

#include <cstddef>
#include <span>

namespace dpadmm::kernels {

// Elementwise kernels on the hot path of a prox sweep. Each kernel has a
// serial reference and an OpenMP version; the two must agree bitwise, since
// every output entry is computed by the same expression in both.
//
// Reductions (norms, inner products) are deliberately not here: they stay
// serial so iteration counts do not depend on the thread count.

/// Vectors shorter than this run serially inside the parallel kernels.
inline constexpr std::size_t kParallelMinSize = 4096;

namespace serial {

/// out[j*n + i] += w[j] * u[i]  for the stacked-identity operator u -> (w_0 u, ..., w_{r-1} u).
void stacked_apply_add(std::span<const double> weights, std::span<const double> u, std::span<double> out);

/// out[i] = sum_j w[j] * y[j*n + i]
void stacked_adjoint(std::span<const double> weights, std::span<const double> y, std::span<double> out);

/// out[i] = clamp(rhs[i] / diag, -radius, radius)
void box_diag_solve(std::span<const double> rhs, double diag, double radius, std::span<double> out);

/// out[i] = clamp(v[i], -radius, radius)
void box_project(std::span<const double> v, double radius, std::span<double> out);

/// out[i] = a * x[i] + b * y[i]
void axpby(double a, std::span<const double> x, double b, std::span<const double> y, std::span<double> out);

}  // namespace serial

namespace parallel {

void stacked_apply_add(std::span<const double> weights, std::span<const double> u, std::span<double> out);
void stacked_adjoint(std::span<const double> weights, std::span<const double> y, std::span<double> out);
void box_diag_solve(std::span<const double> rhs, double diag, double radius, std::span<double> out);
void box_project(std::span<const double> v, double radius, std::span<double> out);
void axpby(double a, std::span<const double> x, double b, std::span<const double> y, std::span<double> out);

}  // namespace parallel

}  // namespace dpadmm::kernels

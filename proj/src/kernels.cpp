#include "dpadmm/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdint>

namespace dpadmm::kernels {

namespace {

inline double clamp_box(double value, double radius) { return std::clamp(value, -radius, radius); }

}  // namespace

namespace serial {

void stacked_apply_add(std::span<const double> weights, std::span<const double> u, std::span<double> out) {
  const std::size_t n = u.size();
  for (std::size_t j = 0; j < weights.size(); ++j) {
    const double w = weights[j];
    if (w == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) out[j * n + i] += w * u[i];
  }
}

void stacked_adjoint(std::span<const double> weights, std::span<const double> y, std::span<double> out) {
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < weights.size(); ++j) s += weights[j] * y[j * n + i];
    out[i] = s;
  }
}

void box_diag_solve(std::span<const double> rhs, double diag, double radius, std::span<double> out) {
  for (std::size_t i = 0; i < rhs.size(); ++i) out[i] = clamp_box(rhs[i] / diag, radius);
}

void box_project(std::span<const double> v, double radius, std::span<double> out) {
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = clamp_box(v[i], radius);
}

void axpby(double a, std::span<const double> x, double b, std::span<const double> y, std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b * y[i];
}

}  // namespace serial

namespace parallel {

namespace {

// Below the size threshold, or with a single thread, the fork costs more than the loop.
bool run_serial(std::size_t n) { return n < kParallelMinSize || omp_get_max_threads() == 1; }

}  // namespace

void stacked_apply_add(std::span<const double> weights, std::span<const double> u, std::span<double> out) {
  if (run_serial(u.size())) return serial::stacked_apply_add(weights, u, out);
  const auto n = static_cast<std::int64_t>(u.size());
  const std::size_t r = weights.size();
  // The weight loop is inside so that each thread touches disjoint output rows.
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      const double w = weights[j];
      if (w == 0.0) continue;
      out[j * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] += w * u[static_cast<std::size_t>(i)];
    }
  }
}

void stacked_adjoint(std::span<const double> weights, std::span<const double> y, std::span<double> out) {
  if (run_serial(out.size())) return serial::stacked_adjoint(weights, y, out);
  const auto n = static_cast<std::int64_t>(out.size());
  const std::size_t r = weights.size();
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < r; ++j) s += weights[j] * y[j * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = s;
  }
}

void box_diag_solve(std::span<const double> rhs, double diag, double radius, std::span<double> out) {
  if (run_serial(rhs.size())) return serial::box_diag_solve(rhs, diag, radius, out);
  const auto n = static_cast<std::int64_t>(rhs.size());
#pragma omp parallel for simd schedule(static)
  for (std::int64_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = clamp_box(rhs[static_cast<std::size_t>(i)] / diag, radius);
}

void box_project(std::span<const double> v, double radius, std::span<double> out) {
  if (run_serial(v.size())) return serial::box_project(v, radius, out);
  const auto n = static_cast<std::int64_t>(v.size());
#pragma omp parallel for simd schedule(static)
  for (std::int64_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = clamp_box(v[static_cast<std::size_t>(i)], radius);
}

void axpby(double a, std::span<const double> x, double b, std::span<const double> y, std::span<double> out) {
  if (run_serial(x.size())) return serial::axpby(a, x, b, y, out);
  const auto n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for simd schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = a * x[k] + b * y[k];
  }
}

}  // namespace parallel

}  // namespace dpadmm::kernels

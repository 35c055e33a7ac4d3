#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the solver; everything works on dense matrices and plain loops.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include <Eigen/Dense>

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// [[I, 0, -I], [0, I, -I]] written out entry by entry.
inline MatrixXd consensus_matrix(int n) {
  MatrixXd A = MatrixXd::Zero(2 * n, 3 * n);
  for (int i = 0; i < n; ++i) {
    A(i, i) = 1.0;
    A(i, 2 * n + i) = -1.0;
    A(n + i, n + i) = 1.0;
    A(n + i, 2 * n + i) = -1.0;
  }
  return A;
}

/// Minimizes a convex scalar function on [lo, hi]: a uniform grid of `points`
/// samples, then ternary search inside the bracketing cells.
inline double grid_argmin(const std::function<double(double)>& g, double lo, double hi, int points = 1000000) {
  const double h = (hi - lo) / (points - 1);
  int best = 0;
  double best_val = g(lo);
  for (int i = 1; i < points; ++i) {
    const double val = g(lo + i * h);
    if (val < best_val) {
      best_val = val;
      best = i;
    }
  }
  double a = std::max(lo, lo + (best - 1) * h);
  double b = std::min(hi, lo + (best + 1) * h);
  for (int it = 0; it < 200; ++it) {
    const double m1 = a + (b - a) / 3.0;
    const double m2 = b - (b - a) / 3.0;
    if (g(m1) < g(m2)) {
      b = m2;
    } else {
      a = m1;
    }
  }
  return 0.5 * (a + b);
}

/// Objective of the three-block family: -sum_{i<2} [a_i/2 ||x_i||^2 + <b_i, x_i>].
inline double family_f(const VectorXd& x, int n, double a1, double a2, const VectorXd& b1, const VectorXd& b2) {
  const VectorXd x1 = x.segment(0, n);
  const VectorXd x2 = x.segment(n, n);
  return -(0.5 * a1 * x1.squaredNorm() + b1.dot(x1)) - (0.5 * a2 * x2.squaredNorm() + b2.dot(x2));
}

/// L(x; p) = f(x) + (1 - theta) <p, A x - d> + (c/2) ||A x - d||^2 for x inside the box.
inline double dense_dal(double f_value, const MatrixXd& A, const VectorXd& x, const VectorXd& d, const VectorXd& p,
                        double c, double theta) {
  const VectorXd r = A * x - d;
  return f_value + (1.0 - theta) * p.dot(r) + 0.5 * c * r.squaredNorm();
}

inline VectorXd random_vector(std::mt19937_64& gen, int n, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = dist(gen);
  return v;
}

}  // namespace oracle

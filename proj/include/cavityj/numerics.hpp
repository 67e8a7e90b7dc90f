#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace cavityj {

// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Fixed Gauss-Legendre rule on [-1, 1], full node set.
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};
const GaussRule& gauss_legendre_rule(int order);  // order in {10, 20, 30}

// Adaptive Gauss-Kronrod on [a, b], b may be +inf. Throws NumericalError when the
// estimated error stays above max(tol_rel*|I|, tol_abs).
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol_rel, double tol_abs = 0.0, int max_depth = 30);

// Double-exponential quadrature on a finite interval; tolerant to endpoint singularities.
double integrate_tanh_sinh(const std::function<double(double)>& f, double a, double b,
                           double tol_rel);

// Chebyshev interpolant of f on [a, b].
class Chebyshev {
 public:
  Chebyshev() = default;
  // Doubles the node count until trailing coefficients fall below tol * max|c|.
  Chebyshev(const std::function<double(double)>& f, double a, double b, double tol,
            int n_start = 32, int n_max = 1024);

  double operator()(double x) const;
  std::size_t size() const { return c_.size(); }
  bool converged() const { return converged_; }

 private:
  double a_ = 0.0, b_ = 1.0;
  std::vector<double> c_;
  bool converged_ = false;
};

// Least-squares slope and intercept of y against x.
std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// Worker count: CAVITYJ_THREADS, else hardware concurrency.
int default_thread_count();

// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is handled by exactly
// one worker, so results written per index are independent of scheduling.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

}  // namespace cavityj

#include "cavityj/numerics.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "cavityj/errors.hpp"

namespace cavityj {

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) comp_ += (sum_ - t) + x;
  else comp_ += (x - t) + sum_;
  sum_ = t;
}

namespace {

template <int N>
GaussRule make_rule() {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& ax = G::abscissa();
  const auto& wt = G::weights();
  GaussRule r;
  // boost stores the non-negative half; the zero node (odd N) sits at index 0
  for (std::size_t i = ax.size(); i-- > 0;) {
    if (ax[i] == 0.0) continue;
    r.x.push_back(-ax[i]);
    r.w.push_back(wt[i]);
  }
  for (std::size_t i = 0; i < ax.size(); ++i) {
    r.x.push_back(ax[i]);
    r.w.push_back(wt[i]);
  }
  return r;
}

}  // namespace

const GaussRule& gauss_legendre_rule(int order) {
  static const GaussRule r10 = make_rule<10>();
  static const GaussRule r20 = make_rule<20>();
  static const GaussRule r30 = make_rule<30>();
  switch (order) {
    case 10: return r10;
    case 20: return r20;
    case 30: return r30;
    default: throw DomainError("gauss_legendre_rule: order must be 10, 20 or 30");
  }
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol_rel, double tol_abs, int max_depth) {
  if (a == b) return 0.0;
  double err = 0.0, l1 = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, a, b, static_cast<unsigned>(max_depth), tol_rel, &err, &l1);
  if (!std::isfinite(v)) throw NumericalError("integrate_adaptive: non-finite result");
  const double target = std::max(tol_rel * std::abs(v), tol_abs);
  if (err > 10.0 * target && err > 1e-15 * l1)
    throw NumericalError("integrate_adaptive: tolerance not met (error estimate " +
                         std::to_string(err) + ")");
  return v;
}

double integrate_tanh_sinh(const std::function<double(double)>& f, double a, double b,
                           double tol_rel) {
  if (a == b) return 0.0;
  static thread_local boost::math::quadrature::tanh_sinh<double> ts(15);
  double err = 0.0, l1 = 0.0;
  std::size_t levels = 0;
  const double v = ts.integrate(f, a, b, tol_rel, &err, &l1, &levels);
  if (!std::isfinite(v)) throw NumericalError("integrate_tanh_sinh: non-finite result");
  if (err > 100.0 * tol_rel * std::max(std::abs(v), 1e-300) && err > 1e-15 * l1)
    throw NumericalError("integrate_tanh_sinh: tolerance not met");
  return v;
}

Chebyshev::Chebyshev(const std::function<double(double)>& f, double a, double b, double tol,
                     int n_start, int n_max)
    : a_(a), b_(b) {
  for (int n = n_start; n <= n_max; n *= 2) {
    std::vector<double> fv(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      const double t = std::cos(std::numbers::pi * (k + 0.5) / n);
      fv[static_cast<std::size_t>(k)] = f(0.5 * (b - a) * t + 0.5 * (b + a));
    }
    c_.assign(static_cast<std::size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) {
      CompensatedSum s;
      for (int k = 0; k < n; ++k)
        s.add(fv[static_cast<std::size_t>(k)] * std::cos(std::numbers::pi * j * (k + 0.5) / n));
      c_[static_cast<std::size_t>(j)] = 2.0 * s.value() / n;
    }
    c_[0] *= 0.5;
    double cmax = 0.0;
    for (double c : c_) cmax = std::max(cmax, std::abs(c));
    double tail = 0.0;
    for (int j = n - 4; j < n; ++j) tail = std::max(tail, std::abs(c_[static_cast<std::size_t>(j)]));
    if (tail <= tol * cmax || cmax == 0.0) {
      converged_ = true;
      return;
    }
  }
}

double Chebyshev::operator()(double x) const {
  const double t = (2.0 * x - a_ - b_) / (b_ - a_);
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t j = c_.size(); j-- > 1;) {
    const double tmp = 2.0 * t * b1 - b2 + c_[j];
    b2 = b1;
    b1 = tmp;
  }
  return t * b1 - b2 + (c_.empty() ? 0.0 : c_[0]);
}

std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("linear_fit: need >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) { sx += x[i]; sy += y[i]; }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

int default_thread_count() {
  if (const char* env = std::getenv("CAVITYJ_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  const std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (std::size_t t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace cavityj

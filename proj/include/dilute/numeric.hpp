#pragma once
// Small numerical helpers shared by every module.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace dilute {

inline constexpr double pi = std::numbers::pi;

// Neumaier variant of Kahan summation.
class KahanSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  KahanSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
  }
  return std::sin(x) / x;
}

// log(1 - e^{-x}) for x > 0
inline double log1mexp(double x) { return std::log(-std::expm1(-x)); }

// C-infinity step: 1 for t <= 0, 0 for t >= 1.
inline double smooth_step_down(double t) {
  if (t <= 0.0) return 1.0;
  if (t >= 1.0) return 0.0;
  auto h = [](double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; };
  const double a = h(1.0 - t);
  const double b = h(t);
  return a / (a + b);
}

// radial cutoff: 1 below P/2, 0 above P
inline double radial_cutoff(double k, double P) { return smooth_step_down(2.0 * k / P - 1.0); }

// ---------------------------------------------------------------- threads

namespace detail {
inline std::atomic<unsigned>& thread_setting() {
  static std::atomic<unsigned> n{0};
  return n;
}
}  // namespace detail

inline void set_threads(unsigned n) { detail::thread_setting() = n; }

inline unsigned threads() {
  unsigned n = detail::thread_setting();
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

// Runs fn(i) for i in [0, n). Each index is written by exactly one worker, so
// callers that store into result[i] get thread-count independent output.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t nt = std::min<std::size_t>(threads(), n);
  if (nt <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::atomic<bool> failed{false};
  pool.reserve(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n && !failed; i += nt) fn(i);
      } catch (...) {
        if (!failed.exchange(true)) err = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

// ---------------------------------------------------------------- quadrature

// 16-point Gauss-Legendre on n equal panels of [a, b].
template <class F>
double gauss_panels(F&& f, double a, double b, int n) {
  using GL = boost::math::quadrature::gauss<double, 16>;
  if (n < 1) n = 1;
  const double h = (b - a) / n;
  KahanSum s;
  for (int i = 0; i < n; ++i) {
    const double lo = a + i * h;
    s += GL::integrate(f, lo, i + 1 == n ? b : lo + h);
  }
  return s.value();
}

struct QuadResult {
  double value;
  double error;
};

// Adaptive Gauss-Kronrod (31 point) on a finite interval.
template <class F>
QuadResult integrate_gk(F&& f, double a, double b, double rel_tol = 1e-12, unsigned depth = 15) {
  double err = 0.0;
  double l1 = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, depth, rel_tol,
                                                                                  &err, &l1);
  return {v, err};
}

// Golden-section maximisation of f on [a, b].
template <class F>
double golden_max(F&& f, double a, double b, double tol = 1e-14) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol * std::max(1.0, std::abs(a) + std::abs(b))) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? c : d;
}

}  // namespace dilute

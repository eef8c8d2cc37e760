#pragma once

// Adaptive Gauss-Kronrod (10/21) quadrature on finite intervals, plus a
// log-space driver for sharply peaked positive integrands.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "confgas/error.hpp"

namespace confgas::quad {

/// Drop below the peak (in log units) at which the log-space driver stops
/// extending the window: e^-46 ~ 1e-20.
inline constexpr double kLogWindowDrop = 46.0;

struct Options {
  double abs_tol = 1e-14;
  double rel_tol = 1e-12;
  int max_intervals = 4000;
  double window_drop = kLogWindowDrop;  ///< used by log_integrate only
};

template <class T>
struct Result {
  T value{};
  double error = 0.0;
  int intervals = 0;
};

namespace detail {

// QUADPACK qk21 abscissae/weights. xgk[1,3,5,7,9] are the 10-point Gauss nodes.
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208938914323, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

template <class T>
struct Panel {
  double a, b;
  T value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

// One GK21 panel with the QUADPACK error heuristic.
template <class F>
auto gk21(F& f, double a, double b) {
  using T = decltype(f(a));
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T fc = f(center);
  T resk = fc * kWgk[10];
  T resg{};
  double resabs = magnitude(fc) * kWgk[10];
  std::array<T, 10> f1{}, f2{};
  for (int i = 0; i < 10; ++i) {
    const double dx = half * kXgk[i];
    f1[i] = f(center - dx);
    f2[i] = f(center + dx);
    resk += (f1[i] + f2[i]) * kWgk[i];
    resabs += (magnitude(f1[i]) + magnitude(f2[i])) * kWgk[i];
    if (i % 2 == 1) resg += (f1[i] + f2[i]) * kWg[i / 2];
  }
  const T mean = resk * 0.5;
  double resasc = magnitude(fc - mean) * kWgk[10];
  for (int i = 0; i < 10; ++i)
    resasc += kWgk[i] * (magnitude(f1[i] - mean) + magnitude(f2[i] - mean));
  resasc *= std::abs(half);
  resabs *= std::abs(half);
  double err = magnitude((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50 * eps)) err = std::max(50 * eps * resabs, err);
  return Panel<T>{a, b, resk * half, err};
}

inline std::string failure_message(double err, double value, double a, double b) {
  std::ostringstream os;
  os.precision(6);
  os << "adaptive quadrature did not converge on [" << a << ", " << b << "]: estimated error "
     << err << " for value " << value;
  return os.str();
}

}  // namespace detail

/// Adaptive bisection driven by the largest panel error. `breaks` must be
/// sorted and contain at least the two endpoints.
template <class F>
auto integrate(F&& f, std::span<const double> breaks, const Options& opt = {}) {
  using T = decltype(f(breaks.front()));
  using Panel = detail::Panel<T>;
  std::priority_queue<Panel> heap;
  std::vector<Panel> frozen;
  T total{};
  double err_total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    auto p = detail::gk21(f, breaks[i], breaks[i + 1]);
    total += p.value;
    err_total += p.error;
    heap.push(p);
  }
  int count = static_cast<int>(heap.size());
  auto tolerance = [&] { return std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(total)); };
  while (!heap.empty() && err_total > tolerance()) {
    if (count >= opt.max_intervals) break;
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // panel at roundoff width; cannot refine further
      frozen.push_back(worst);
      continue;
    }
    auto left = detail::gk21(f, worst.a, mid);
    auto right = detail::gk21(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err_total += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }
  // recompute the sum from the panels to shed accumulated roundoff
  T sum{};
  double err_sum = 0.0;
  for (const auto& p : frozen) {
    sum += p.value;
    err_sum += p.error;
  }
  while (!heap.empty()) {
    sum += heap.top().value;
    err_sum += heap.top().error;
    heap.pop();
  }
  if (err_sum > 10.0 * std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(sum)))
    throw ToleranceError(detail::failure_message(err_sum, detail::magnitude(sum), breaks.front(),
                                                 breaks.back()));
  return Result<T>{sum, err_sum, count};
}

template <class F>
auto integrate(F&& f, double a, double b, const Options& opt = {}) {
  const std::array<double, 2> br{a, b};
  return integrate(std::forward<F>(f), std::span<const double>(br), opt);
}

/// Peak-relative truncation window for exp(logf): logf(peak) and the
/// abscissae where logf has dropped by kLogWindowDrop (or the bounds).
struct Window {
  double ref, left, right;
};

template <class LogF>
Window find_window(LogF& logf, double lo, double hi, double peak, double width,
                   double drop = kLogWindowDrop) {
  peak = std::clamp(peak, lo, hi);
  const double ref = logf(peak);
  if (ref == std::numeric_limits<double>::infinity())
    throw DomainError("log_integrate: integrand is infinite at the peak");
  if (!std::isfinite(ref)) return {ref, peak, peak};
  width = std::max(width, 1e-300);
  auto extend = [&](double dir, double bound) {
    double step = width;
    for (int it = 0; it < 200; ++it) {
      const double t = peak + dir * step;
      if ((dir < 0 && t <= bound) || (dir > 0 && t >= bound)) return bound;
      if (logf(t) < ref - drop) return t;
      step *= 2.0;
    }
    throw ToleranceError("log_integrate: integrand does not decay");
  };
  const double left = extend(-1.0, lo);
  const double right = extend(1.0, hi);
  if (!std::isfinite(left) || !std::isfinite(right))
    throw ToleranceError("log_integrate: unbounded integration window");
  return {ref, left, right};
}

/// Golden-section search for the maximizer of a unimodal f on [a, b].
template <class F>
double argmax_unimodal(F&& f, double a, double b, double tol = 1e-10) {
  constexpr double g = 0.6180339887498949;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol * (1.0 + std::abs(a) + std::abs(b))) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    }
  }
  const double m = 0.5 * (a + b);
  return m;
}

/// log of the integral of exp(logf) over [lo, hi] for a unimodal logf whose
/// maximum sits near `peak`. `width` is a length scale used to grow the window.
/// Either bound may be infinite.
template <class LogF>
double log_integrate(LogF&& logf, double lo, double hi, double peak, double width,
                     std::span<const double> extra_breaks = {}, const Options& opt = {}) {
  if (!(hi > lo)) return -std::numeric_limits<double>::infinity();
  const Window w = find_window(logf, lo, hi, peak, width, opt.window_drop);
  if (!std::isfinite(w.ref)) return -std::numeric_limits<double>::infinity();
  peak = std::clamp(peak, lo, hi);
  std::vector<double> br{w.left, w.right};
  if (peak > w.left && peak < w.right) br.push_back(peak);
  for (double b : extra_breaks)
    if (b > w.left && b < w.right) br.push_back(b);
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  Options o = opt;
  o.abs_tol = std::min(o.abs_tol, 1e-300);
  auto scaled = [&](double t) {
    const double v = logf(t) - w.ref;
    return v < -745.0 ? 0.0 : std::exp(v);
  };
  const auto r = integrate(scaled, std::span<const double>(br), o);
  if (!(r.value > 0.0)) return -std::numeric_limits<double>::infinity();
  return w.ref + std::log(r.value);
}

}  // namespace confgas::quad

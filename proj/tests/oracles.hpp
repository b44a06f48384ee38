#pragma once

// Independent reference formulas used by the tests. Nothing here calls into
// the library's numerical paths.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

/// Monatomic nearest-neighbour chain, 2 sqrt(C/M) |sin(k g0 / 2)|.
inline double chain_omega(double stiffness, double mass, double k, double g0) {
  return 2.0 * std::sqrt(stiffness / mass) * std::abs(std::sin(0.5 * k * g0));
}

/// Direct summation of V(0) + V(1) e^{ikg} + V(-1) e^{-ikg} for the chain.
inline double chain_fourier_force(double stiffness, double mass, double k, double g0) {
  return 2.0 * stiffness * (1.0 - std::cos(k * g0)) / mass;
}

/// tau (e^{ikg} + e^{-ikg}).
inline double chain_fourier_coupling(double tau, double k, double g0) {
  return 2.0 * tau * std::cos(k * g0);
}

/// Cloud amplitude composed in closed form: h c / (M v^2).
inline double cloud_amplitude_closed_form(double h, double c, double mass, double v) {
  return h * c / (mass * v * v);
}

/// Argmax of f on [lo, hi] by dense scan followed by golden-section refinement.
inline double argmax(const std::function<double(double)>& f, double lo, double hi) {
  const int n = 20000;
  int best = 0;
  double best_val = f(lo);
  for (int i = 1; i <= n; ++i) {
    const double v = f(lo + (hi - lo) * i / n);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  double a = lo + (hi - lo) * std::max(best - 1, 0) / n;
  double b = lo + (hi - lo) * std::min(best + 1, n) / n;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200; ++it) {
    const double x1 = b - g * (b - a);
    const double x2 = a + g * (b - a);
    if (f(x1) < f(x2)) a = x1; else b = x2;
  }
  return 0.5 * (a + b);
}

/// Amplitude of the w-component of a uniformly sampled signal via a
/// trapezoidal lock-in projection over the full record.
inline double lock_in_amplitude(const std::vector<double>& t, const std::vector<double>& x,
                                double w) {
  double s = 0.0, c = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double dt = t[i] - t[i - 1];
    s += 0.5 * dt * (x[i] * std::sin(w * t[i]) + x[i - 1] * std::sin(w * t[i - 1]));
    c += 0.5 * dt * (x[i] * std::cos(w * t[i]) + x[i - 1] * std::cos(w * t[i - 1]));
  }
  const double span = t.back() - t.front();
  return 2.0 / span * std::hypot(s, c);
}

}  // namespace oracle

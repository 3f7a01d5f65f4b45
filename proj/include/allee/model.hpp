#pragma once

#include "allee/rational.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace allee {

// Nondimensional parameters of the rescaled predator-prey system.
template <class T>
struct Params {
  T alpha, beta, gamma, delta, eta;

  void validate() const {
    const char* names[] = {"alpha", "beta", "gamma", "delta", "eta"};
    const T* vals[] = {&alpha, &beta, &gamma, &delta, &eta};
    for (int i = 0; i < 5; ++i)
      if (!(*vals[i] > 0)) throw std::domain_error(std::string("parameter ") + names[i] + " must be positive");
  }

  template <class U>
  Params<U> as() const {
    auto cv = [](const T& v) {
      if constexpr (std::is_same_v<T, Rational>) return from_rational<U>(v);
      else return U(v);
    };
    return {cv(alpha), cv(beta), cv(gamma), cv(delta), cv(eta)};
  }
};

// Dimensional parameters: prey growth r, capacity K, Allee constants A and B,
// predation p, predator growth h, food quality n, alternative food d.
template <class T>
struct DimensionalParams {
  T r, K, A, B, p, h, n, d;
};

template <class T>
struct State {
  T x, y;
};

template <class T>
using Mat2 = std::array<std::array<T, 2>, 2>;

template <class T>
Params<T> nondimensionalize(const DimensionalParams<T>& dp) {
  for (const T* v : {&dp.r, &dp.K, &dp.A, &dp.B, &dp.p, &dp.h, &dp.n, &dp.d})
    if (!(*v > 0)) throw std::domain_error("dimensional parameters must be positive");
  Params<T> q{dp.B / dp.K, dp.A / dp.K, dp.K * dp.p * dp.h / (dp.r * dp.n), dp.h / dp.r, dp.d / dp.K};
  return q;
}

// State and time scalings between the two models: x = K xb, y = (K h / n) yb, t = tb / r.
template <class T>
State<T> to_dimensional(const DimensionalParams<T>& dp, const State<T>& s) {
  return {dp.K * s.x, dp.K * dp.h / dp.n * s.y};
}

template <class T>
State<T> dimensional_field(const DimensionalParams<T>& dp, const State<T>& s) {
  const T& x = s.x;
  const T& y = s.y;
  if (x + dp.B == 0 || x + dp.d == 0) throw std::domain_error("pole in the dimensional model");
  return {dp.r * x * (T(1) - x / dp.K - dp.A / (x + dp.B)) - dp.p * x * y, y * (dp.h - dp.n * y / (x + dp.d))};
}

template <class T>
State<T> vector_field(const Params<T>& p, const State<T>& s) {
  const T& x = s.x;
  const T& y = s.y;
  T xa = x + p.alpha, xe = x + p.eta;
  if (xa == 0) throw std::domain_error("pole at x = -alpha");
  if (xe == 0) throw std::domain_error("pole at x = -eta");
  T fx = x * (T(1) - x) - p.gamma * x * y - p.beta * x / xa;
  T gy = p.delta * y * (T(1) - y / xe);
  return {fx, gy};
}

// Polynomial system obtained by multiplying the field by (x+alpha)(x+eta).
template <class T>
State<T> rescaled_vector_field(const Params<T>& p, const State<T>& s) {
  const T& x = s.x;
  const T& y = s.y;
  T xa = x + p.alpha, xe = x + p.eta;
  T P = x * xe * ((T(1) - x) * xa - p.gamma * y * xa - p.beta);
  T Q = p.delta * y * xa * (xe - y);
  return {P, Q};
}

template <class T>
Mat2<T> jacobian(const Params<T>& p, const State<T>& s) {
  const T& x = s.x;
  const T& y = s.y;
  T xa = x + p.alpha, xe = x + p.eta;
  if (xa == 0 || xe == 0) throw std::domain_error("pole in the vector field");
  Mat2<T> J;
  J[0][0] = T(1) - T(2) * x - p.gamma * y - p.beta * p.alpha / (xa * xa);
  J[0][1] = -p.gamma * x;
  J[1][0] = p.delta * y * y / (xe * xe);
  J[1][1] = p.delta * (T(1) - T(2) * y / xe);
  return J;
}

template <class T>
Mat2<T> rescaled_jacobian(const Params<T>& p, const State<T>& s) {
  const T& x = s.x;
  const T& y = s.y;
  T xa = x + p.alpha, xe = x + p.eta;
  T inner = (T(1) - x) * xa - p.gamma * y * xa - p.beta;
  T dinner_dx = T(1) - T(2) * x - p.alpha - p.gamma * y;
  Mat2<T> J;
  J[0][0] = (xe + x) * inner + x * xe * dinner_dx;
  J[0][1] = -x * xe * p.gamma * xa;
  J[1][0] = p.delta * y * ((xe - y) + xa);
  J[1][1] = p.delta * xa * (xe - T(2) * y);
  return J;
}

template <class T>
T trace(const Mat2<T>& J) {
  return J[0][0] + J[1][1];
}
template <class T>
T det(const Mat2<T>& J) {
  return J[0][0] * J[1][1] - J[0][1] * J[1][0];
}

}  // namespace allee

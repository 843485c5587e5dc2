#include "pinn/activation.hpp"

#include <algorithm>
#include <cmath>

#include "pinn/errors.hpp"

namespace pinn {

namespace {

// tanh derivatives as polynomials in t = tanh(z).
std::array<double, 5> tanh_all(double z) {
  const double t = std::tanh(z);
  const double s1 = 1.0 - t * t;
  return {t, s1, -2.0 * t * s1, s1 * (6.0 * t * t - 2.0), 8.0 * t * s1 * (2.0 - 3.0 * t * t)};
}

// logistic derivatives as polynomials in s = 1/(1+e^{-z}).
std::array<double, 5> sigmoid_all(double z) {
  const double s = z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
  const double s1 = s * (1.0 - s);
  return {s, s1, s1 * (1.0 - 2.0 * s), s1 * (1.0 - 6.0 * s + 6.0 * s * s),
          s1 * (1.0 - 2.0 * s) * (1.0 - 12.0 * s + 12.0 * s * s)};
}

std::array<double, 5> sine_all(double z) {
  const double s = std::sin(z), c = std::cos(z);
  return {s, c, -s, -c, s};
}

// Dense grid maximization of |sigma^{(k)}| over [-10, 10]; the derivatives of
// tanh and the logistic function decay exponentially outside that window. The
// grid maximum is rounded up by a relative 1e-7 so it bounds the true supremum.
ActivationBounds grid_bounds(std::array<double, 5> (*f)(double)) {
  constexpr int n = 400001;
  std::array<double, 5> best{};
  for (int j = 0; j < n; ++j) {
    const double z = -10.0 + 20.0 * j / (n - 1);
    const auto v = f(z);
    for (int k = 1; k <= 4; ++k) best[k] = std::max(best[k], std::abs(v[k]));
  }
  constexpr double pad = 1.0 + 1e-7;
  return {best[1] * pad, best[2] * pad, best[3] * pad, best[4] * pad};
}

}  // namespace

double ActivationBounds::operator[](int k) const {
  switch (k) {
    case 1: return s1;
    case 2: return s2;
    case 3: return s3;
    case 4: return s4;
    default: throw ContractViolation("activation bound index must be 1..4");
  }
}

Activation Activation::from_name(std::string_view name) {
  if (name == "tanh") return Activation(ActivationKind::Tanh);
  if (name == "sigmoid") return Activation(ActivationKind::Sigmoid);
  if (name == "sine") return Activation(ActivationKind::Sine);
  throw ContractViolation("unknown activation '" + std::string(name) + "'");
}

std::string Activation::name() const {
  switch (kind_) {
    case ActivationKind::Tanh: return "tanh";
    case ActivationKind::Sigmoid: return "sigmoid";
    case ActivationKind::Sine: return "sine";
  }
  return "?";
}

std::array<double, 5> Activation::eval_all(double z) const {
  switch (kind_) {
    case ActivationKind::Tanh: return tanh_all(z);
    case ActivationKind::Sigmoid: return sigmoid_all(z);
    case ActivationKind::Sine: return sine_all(z);
  }
  return {};
}

double Activation::eval(int order, double z) const {
  if (order < 0 || order > 4)
    throw ContractViolation("activation derivative order must be in 0..4, got " +
                            std::to_string(order));
  return eval_all(z)[order];
}

ActivationBounds Activation::bounds() const {
  switch (kind_) {
    case ActivationKind::Tanh: {
      static const ActivationBounds b = [] {
        auto g = grid_bounds(tanh_all);
        g.s1 = 1.0;
        return g;
      }();
      return b;
    }
    case ActivationKind::Sigmoid: {
      static const ActivationBounds b = [] {
        auto g = grid_bounds(sigmoid_all);
        g.s1 = 0.25;
        return g;
      }();
      return b;
    }
    case ActivationKind::Sine: return {1.0, 1.0, 1.0, 1.0};
  }
  return {};
}

}  // namespace pinn

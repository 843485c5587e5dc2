#pragma once

#include <array>
#include <string>
#include <string_view>

namespace pinn {

enum class ActivationKind { Tanh, Sigmoid, Sine };

/// Global sup-norms of the first four derivatives.
struct ActivationBounds {
  double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
  double operator[](int k) const;
};

/// Smooth scalar activation with closed-form derivatives of orders 0..4.
/// Stateless value type; safe to share across threads.
class Activation {
 public:
  constexpr explicit Activation(ActivationKind kind = ActivationKind::Tanh) : kind_(kind) {}

  static Activation from_name(std::string_view name);

  ActivationKind kind() const { return kind_; }
  std::string name() const;

  /// sigma^{(order)}(z); throws ContractViolation unless 0 <= order <= 4.
  double eval(int order, double z) const;

  /// All five derivatives at once, sharing the transcendental evaluation.
  std::array<double, 5> eval_all(double z) const;

  ActivationBounds bounds() const;

 private:
  ActivationKind kind_;
};

}  // namespace pinn

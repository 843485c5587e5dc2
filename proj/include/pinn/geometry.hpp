#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>

#include "pinn/types.hpp"

namespace pinn {

struct Ball {
  Vec center;
  double radius = 1.0;
};

struct Box {
  Vec lo;
  Vec hi;
};

/// Ball or axis-aligned box in R^d.
class Domain {
 public:
  Domain(Ball b);  // NOLINT(google-explicit-constructor)
  Domain(Box b);   // NOLINT(google-explicit-constructor)

  int dim() const { return dim_; }
  const std::variant<Ball, Box>& shape() const { return shape_; }

  /// sup{|x| : x in Omega}.
  double c_omega() const;
  /// Lebesgue measure of Omega.
  double volume() const;
  /// Surface measure of the boundary. For d = 1 this counts the two endpoints.
  double surface() const;

  bool contains_strictly(const VecIn& x) const;
  /// Distance-like residual of the boundary equation; 0 on the boundary.
  double boundary_residual(const VecIn& x) const;

 private:
  std::variant<Ball, Box> shape_;
  int dim_;
};

/// n i.i.d. uniform points in Omega, one per row.
Mat sample_interior(const Domain& dom, int n, Rng& rng);
/// n i.i.d. points uniform w.r.t. surface measure on the boundary.
Mat sample_boundary(const Domain& dom, int n, Rng& rng);

using ScalarField = std::function<double(const VecIn&)>;
using VectorField = std::function<Vec(const VecIn&)>;

struct AnalyticSolution {
  ScalarField value;
  VectorField gradient;  // empty: use central differences
};

/// -Delta u = f in Omega, u = 0 on the boundary, with boundary penalty lambda.
struct PoissonProblem {
  Domain domain;
  ScalarField source;
  /// Upper bound on |f| over Omega (feeds the gradient-norm bound constants).
  double source_sup = 0.0;
  double lambda = 1.0;
  std::optional<AnalyticSolution> solution;
  std::string source_name;
};

/// Builds the source term from its config name: "constant:<c>" or
/// "affine:<c0>,<g1>,...,<gd>" (f(x) = c0 + g^T x). A Ball domain with a
/// constant source gets its analytic solution c (R^2 - |x - center|^2) / (2d).
PoissonProblem make_problem(Domain dom, const std::string& source_name, double lambda);

/// -Delta u = 1 on the disc B((0,2), 1), u*(x) = (1 - |x - (0,2)|^2) / 4.
PoissonProblem reference_disc_problem(double lambda = 1.0);

}  // namespace pinn

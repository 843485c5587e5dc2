#include "pinn/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pinn/errors.hpp"

namespace pinn {

namespace {

double unit_ball_volume(int d) {
  return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

Vec gaussian_direction(int d, Rng& rng) {
  std::normal_distribution<double> normal;
  Vec g(d);
  double n2 = 0.0;
  do {
    for (int k = 0; k < d; ++k) g[k] = normal(rng);
    n2 = g.squaredNorm();
  } while (n2 == 0.0);
  return g / std::sqrt(n2);
}

}  // namespace

Domain::Domain(Ball b) : shape_(std::move(b)) {
  const auto& ball = std::get<Ball>(shape_);
  require(ball.center.size() > 0, "ball center must be nonempty");
  require(ball.radius > 0, "ball radius must be positive");
  dim_ = static_cast<int>(ball.center.size());
}

Domain::Domain(Box b) : shape_(std::move(b)) {
  const auto& box = std::get<Box>(shape_);
  require(box.lo.size() > 0 && box.lo.size() == box.hi.size(), "box corners must share a dimension");
  require((box.lo.array() < box.hi.array()).all(), "box requires lo < hi componentwise");
  dim_ = static_cast<int>(box.lo.size());
}

double Domain::c_omega() const {
  if (const auto* b = std::get_if<Ball>(&shape_)) return b->center.norm() + b->radius;
  const auto& box = std::get<Box>(shape_);
  // The farthest point of a box from the origin is the corner picking the
  // larger-magnitude end in each coordinate.
  return box.lo.cwiseAbs().cwiseMax(box.hi.cwiseAbs()).norm();
}

double Domain::volume() const {
  if (const auto* b = std::get_if<Ball>(&shape_)) return unit_ball_volume(dim_) * std::pow(b->radius, dim_);
  const auto& box = std::get<Box>(shape_);
  return (box.hi - box.lo).prod();
}

double Domain::surface() const {
  if (const auto* b = std::get_if<Ball>(&shape_))
    return dim_ * unit_ball_volume(dim_) * std::pow(b->radius, dim_ - 1);
  const auto& box = std::get<Box>(shape_);
  const Vec side = box.hi - box.lo;
  double s = 0.0;
  for (int k = 0; k < dim_; ++k) s += 2.0 * side.prod() / side[k];
  return s;
}

bool Domain::contains_strictly(const VecIn& x) const {
  if (const auto* b = std::get_if<Ball>(&shape_)) return (x - b->center).norm() < b->radius;
  const auto& box = std::get<Box>(shape_);
  return (x.array() > box.lo.array()).all() && (x.array() < box.hi.array()).all();
}

double Domain::boundary_residual(const VecIn& x) const {
  if (const auto* b = std::get_if<Ball>(&shape_)) return std::abs((x - b->center).norm() - b->radius);
  const auto& box = std::get<Box>(shape_);
  // Signed distance to the box boundary for points inside or on it.
  double dist = std::numeric_limits<double>::infinity();
  for (int k = 0; k < dim_; ++k)
    dist = std::min({dist, std::abs(x[k] - box.lo[k]), std::abs(x[k] - box.hi[k])});
  return dist;
}

Mat sample_interior(const Domain& dom, int n, Rng& rng) {
  require(n >= 1, "sample count must be positive");
  const int d = dom.dim();
  Mat out(n, d);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  if (const auto* b = std::get_if<Ball>(&dom.shape())) {
    for (int j = 0; j < n; ++j) {
      const Vec dir = gaussian_direction(d, rng);
      // U in [0,1) so r < radius strictly.
      const double r = b->radius * std::pow(unif(rng), 1.0 / d);
      out.row(j) = (b->center + r * dir).transpose();
    }
    return out;
  }
  const auto& box = std::get<Box>(dom.shape());
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < d; ++k) {
      double u;
      do u = unif(rng);
      while (u == 0.0);
      out(j, k) = box.lo[k] + u * (box.hi[k] - box.lo[k]);
    }
  }
  return out;
}

Mat sample_boundary(const Domain& dom, int n, Rng& rng) {
  require(n >= 1, "sample count must be positive");
  const int d = dom.dim();
  Mat out(n, d);
  if (const auto* b = std::get_if<Ball>(&dom.shape())) {
    for (int j = 0; j < n; ++j) out.row(j) = (b->center + b->radius * gaussian_direction(d, rng)).transpose();
    return out;
  }
  const auto& box = std::get<Box>(dom.shape());
  const Vec side = box.hi - box.lo;
  // Faces 2k (x_k = lo_k) and 2k+1 (x_k = hi_k) both have measure prod_{j != k} side_j.
  std::vector<double> face_measure(2 * d);
  for (int k = 0; k < d; ++k) face_measure[2 * k] = face_measure[2 * k + 1] = side.prod() / side[k];
  std::discrete_distribution<int> face(face_measure.begin(), face_measure.end());
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int j = 0; j < n; ++j) {
    const int f = face(rng);
    const int k = f / 2;
    for (int l = 0; l < d; ++l) out(j, l) = box.lo[l] + unif(rng) * side[l];
    out(j, k) = (f % 2 == 0) ? box.lo[k] : box.hi[k];
  }
  return out;
}

namespace {

std::vector<double> parse_numbers(const std::string& list, const std::string& full) {
  std::vector<double> vals;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ContractViolation("malformed source term '" + full + "'");
    }
  }
  return vals;
}

}  // namespace

PoissonProblem make_problem(Domain dom, const std::string& source_name, double lambda) {
  require(lambda > 0, "boundary penalty lambda must be positive");
  const auto colon = source_name.find(':');
  const std::string kind = source_name.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : source_name.substr(colon + 1);
  const int d = dom.dim();

  PoissonProblem prob{std::move(dom), {}, 0.0, lambda, std::nullopt, source_name};
  if (kind == "constant") {
    const auto v = parse_numbers(args, source_name);
    if (v.size() != 1) throw ContractViolation("constant source takes one value: '" + source_name + "'");
    const double c = v[0];
    prob.source = [c](const VecIn&) { return c; };
    prob.source_sup = std::abs(c);
    if (const auto* b = std::get_if<Ball>(&prob.domain.shape())) {
      const Vec center = b->center;
      const double r2 = b->radius * b->radius;
      prob.solution = AnalyticSolution{
          [=](const VecIn& x) { return c * (r2 - (x - center).squaredNorm()) / (2.0 * d); },
          [=](const VecIn& x) -> Vec { return (-c / d) * (x - center); }};
    }
  } else if (kind == "affine") {
    const auto v = parse_numbers(args, source_name);
    if (static_cast<int>(v.size()) != d + 1)
      throw ContractViolation("affine source needs 1 + d coefficients: '" + source_name + "'");
    const double c0 = v[0];
    Vec g(d);
    for (int k = 0; k < d; ++k) g[k] = v[k + 1];
    prob.source = [c0, g](const VecIn& x) { return c0 + g.dot(x); };
    // |c0 + g^T x| <= |c0| + |g| c_Omega on Omega.
    prob.source_sup = std::abs(c0) + g.norm() * prob.domain.c_omega();
  } else {
    throw ContractViolation("unknown source term '" + source_name + "'");
  }
  return prob;
}

PoissonProblem reference_disc_problem(double lambda) {
  Vec center(2);
  center << 0.0, 2.0;
  return make_problem(Domain(Ball{center, 1.0}), "constant:1", lambda);
}

}  // namespace pinn

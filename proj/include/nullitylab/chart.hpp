#pragma once

// Immersion patches: a Chart maps a parameter box into Euclidean space or a
// round sphere, evaluable to any jet order. Evaluators receive the seeded
// parameter jets produced by evaluate_tower and must return one jet per
// ambient coordinate.

#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "jet.hpp"

namespace nlab {

struct AmbientSpace {
  enum class Kind { Euclidean, Sphere };
  Kind kind = Kind::Euclidean;
  int dim = 3;  // m: the space is R^m or S^m (embedded in R^{m+1})

  static AmbientSpace euclidean(int m) { return {Kind::Euclidean, m}; }
  static AmbientSpace sphere(int m) { return {Kind::Sphere, m}; }

  int coord_count() const { return kind == Kind::Sphere ? dim + 1 : dim; }
  double curvature() const { return kind == Kind::Sphere ? 1.0 : 0.0; }
  bool is_sphere() const { return kind == Kind::Sphere; }
};

struct Box {
  std::vector<std::pair<double, double>> intervals;

  int dims() const { return static_cast<int>(intervals.size()); }
  bool contains(const std::vector<double>& p, double margin = 0.0) const {
    if (static_cast<int>(p.size()) != dims()) return false;
    for (int i = 0; i < dims(); ++i)
      if (p[i] < intervals[i].first - margin || p[i] > intervals[i].second + margin) return false;
    return true;
  }
};

struct singular_point_error : std::runtime_error {
  std::vector<double> point;
  explicit singular_point_error(std::vector<double> p)
      : std::runtime_error(describe(p)), point(std::move(p)) {}

  static std::string describe(const std::vector<double>& p) {
    std::ostringstream os;
    os << "degenerate metric at parameter point (";
    for (size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
    os << ")";
    return os.str();
  }
};

struct hypothesis_violation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using ChartEvaluator = std::function<std::vector<RJet>(const std::vector<RJet>&)>;

struct Chart {
  int dim = 2;
  AmbientSpace ambient;
  Box domain;
  ChartEvaluator eval;
  std::string label;
};

struct DerivativeTower {
  std::vector<double> point;
  int order = 0;
  std::vector<RJet> coords;

  int dims() const { return static_cast<int>(point.size()); }
  int ambient_count() const { return static_cast<int>(coords.size()); }

  double coord_partial(int c, const MultiIndex& mi) const { return partial(coords[c], mi); }
  std::vector<double> position() const {
    std::vector<double> x(coords.size());
    for (size_t i = 0; i < coords.size(); ++i) x[i] = coords[i].value();
    return x;
  }
};

inline DerivativeTower evaluate_tower(const Chart& chart, const std::vector<double>& point,
                                      int order) {
  if (static_cast<int>(point.size()) != chart.dim)
    throw std::invalid_argument("point dimension does not match chart");
  if (!chart.domain.contains(point, 1e-12))
    throw std::invalid_argument("point outside chart domain: " + chart.label);
  DerivativeTower t;
  t.point = point;
  t.order = order;
  t.coords = chart.eval(seed_variables(point, {.dims = chart.dim, .max_order = order}));
  if (static_cast<int>(t.coords.size()) != chart.ambient.coord_count())
    throw std::runtime_error("chart evaluator returned wrong coordinate count: " + chart.label);
  if (chart.ambient.is_sphere()) {
    double n2 = 0.0;
    for (const auto& c : t.coords) n2 += c.value() * c.value();
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-10)
      throw std::runtime_error("sphere chart not normalized at evaluation point: " + chart.label);
  }
  return t;
}

// ---- stock charts used across tests and scenarios ----

inline Chart plane_chart(double extent = 2.0) {
  Chart c;
  c.dim = 2;
  c.ambient = AmbientSpace::euclidean(3);
  c.domain = Box{{{-extent, extent}, {-extent, extent}}};
  c.eval = [](const std::vector<RJet>& p) {
    return std::vector<RJet>{p[0], p[1], RJet(p[0].dims(), p[0].order())};
  };
  c.label = "plane";
  return c;
}

inline Chart graph_chart(std::function<RJet(const RJet&, const RJet&)> height,
                         std::string label = "graph", double extent = 1.0) {
  Chart c;
  c.dim = 2;
  c.ambient = AmbientSpace::euclidean(3);
  c.domain = Box{{{-extent, extent}, {-extent, extent}}};
  c.eval = [h = std::move(height)](const std::vector<RJet>& p) {
    return std::vector<RJet>{p[0], p[1], h(p[0], p[1])};
  };
  c.label = std::move(label);
  return c;
}

// saddle z = (x^2 - y^2)/2, shape operator diag(1,-1) at the origin
inline Chart saddle_chart(double extent = 1.0) {
  return graph_chart(
      [](const RJet& x, const RJet& y) { return (x * x - y * y) * 0.5; }, "saddle", extent);
}

inline Chart sphere_latlon_chart(double extent = 1.2) {
  Chart c;
  c.dim = 2;
  c.ambient = AmbientSpace::euclidean(3);
  c.domain = Box{{{-extent, extent}, {-extent, extent}}};
  c.eval = [](const std::vector<RJet>& p) {
    RJet clat = nlab::cos(p[0]);
    return std::vector<RJet>{clat * nlab::cos(p[1]), clat * nlab::sin(p[1]), nlab::sin(p[0])};
  };
  c.label = "unit-sphere";
  return c;
}

// circle x line, the canonical nullity-one example
inline Chart circle_cylinder_chart(double length = 2.0) {
  Chart c;
  c.dim = 2;
  c.ambient = AmbientSpace::euclidean(3);
  c.domain = Box{{{-3.5, 3.5}, {-length, length}}};
  c.eval = [](const std::vector<RJet>& p) {
    return std::vector<RJet>{nlab::cos(p[0]), nlab::sin(p[0]), p[1]};
  };
  c.label = "circle-cylinder";
  return c;
}

inline Chart polar_plane_chart() {
  Chart c;
  c.dim = 2;
  c.ambient = AmbientSpace::euclidean(2);
  c.domain = Box{{{0.2, 3.0}, {-3.2, 3.2}}};
  c.eval = [](const std::vector<RJet>& p) {
    return std::vector<RJet>{p[0] * nlab::cos(p[1]), p[0] * nlab::sin(p[1])};
  };
  c.label = "polar-plane";
  return c;
}

inline Chart catenoid_classic_chart(double extent = 0.8) {
  Chart c;
  c.dim = 2;
  c.ambient = AmbientSpace::euclidean(3);
  c.domain = Box{{{-extent, extent}, {-extent, extent}}};
  c.eval = [](const std::vector<RJet>& p) {
    RJet ch = (nlab::exp(p[0]) + nlab::exp(-p[0])) * 0.5;
    return std::vector<RJet>{ch * nlab::cos(p[1]), ch * nlab::sin(p[1]), p[0]};
  };
  c.label = "catenoid-classic";
  return c;
}

// Composes a chart with a parameter-space diffeomorphism given as jets.
inline Chart reparametrize(const Chart& base,
                           std::function<std::vector<RJet>(const std::vector<RJet>&)> diffeo,
                           Box new_domain, std::string label) {
  Chart c = base;
  c.domain = std::move(new_domain);
  c.eval = [inner = base.eval, d = std::move(diffeo)](const std::vector<RJet>& p) {
    return inner(d(p));
  };
  c.label = std::move(label);
  return c;
}

}  // namespace nlab

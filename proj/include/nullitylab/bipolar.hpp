#pragma once

// The unit-tangent-bundle parametrization of a conformal surface
// g: L^2 -> R^q,
//     Phi(u, v, theta) = (cos(theta) d_u g + sin(theta) d_v g) / lambda(u, v),
// a three-parameter chart into the unit sphere S^{q-1}. The fiber direction
// d_theta spans the distribution whose structure the verification scenarios
// exercise.

#include <Eigen/Dense>

#include "distribution.hpp"
#include "forms.hpp"

namespace nlab {

struct UnitTangentChart {
  Chart base;   // the conformal surface g
  Chart chart;  // Phi into Sphere(q-1)
  Distribution fiber;
  std::function<double(double, double)> conformal_factor;  // lambda of the base
  std::vector<std::vector<double>> singular_points;  // recorded by the scan
};

// Conformality of g within rel_tol, scanned over a coarse grid.
inline void require_conformal(const Chart& g, double rel_tol = 1e-8, int scan = 7) {
  const auto& iv = g.domain.intervals;
  for (int i = 0; i < scan; ++i)
    for (int j = 0; j < scan; ++j) {
      const double u = iv[0].first + (iv[0].second - iv[0].first) * i / (scan - 1);
      const double v = iv[1].first + (iv[1].second - iv[1].first) * j / (scan - 1);
      auto ff = fundamental_forms(evaluate_tower(g, {u, v}, 2), g.ambient);
      const double lam2 = 0.5 * (ff.metric(0, 0) + ff.metric(1, 1));
      if (std::abs(ff.metric(0, 0) - ff.metric(1, 1)) > rel_tol * lam2 ||
          std::abs(ff.metric(0, 1)) > rel_tol * lam2)
        throw std::invalid_argument("unit tangent bundle parametrization needs a conformal chart");
      if (lam2 <= 0.0) throw singular_point_error({u, v});
    }
}

inline UnitTangentChart bipolar_chart(const Chart& g, int singular_scan_u = 9,
                                      int singular_scan_v = 9, int singular_scan_theta = 8) {
  if (g.dim != 2) throw std::invalid_argument("base of the unit tangent bundle must be a surface");
  if (g.ambient.is_sphere() || g.ambient.coord_count() < 4)
    throw std::invalid_argument("base surface must sit in R^q with q >= 4");
  require_conformal(g);

  const int q = g.ambient.coord_count();
  UnitTangentChart ut;
  ut.base = g;
  ut.chart.dim = 3;
  ut.chart.ambient = AmbientSpace::sphere(q - 1);
  ut.chart.domain = g.domain;
  ut.chart.domain.intervals.push_back({-2.0 * M_PI - 0.5, 2.0 * M_PI + 0.5});
  ut.chart.label = g.label + "-unit-tangent";
  ut.chart.eval = [inner = g.eval, q](const std::vector<RJet>& p) {
    const int order = p[0].order();
    // derivatives of g need one extra order; the incoming jets are seeds,
    // so the surface factors embed by variable relabeling
    const double u0 = p[0].value(), v0 = p[1].value();
    auto g_jets = inner(seed_variables({u0, v0}, {.dims = 2, .max_order = order + 1}));
    std::vector<RJet> du(q, RJet(3, order)), dv(q, RJet(3, order));
    RJet lam2(3, order);
    for (int c = 0; c < q; ++c) {
      du[c] = embed_vars(derivative(g_jets[c], 0), 3, {0, 1, 0});
      dv[c] = embed_vars(derivative(g_jets[c], 1), 3, {0, 1, 0});
      lam2 += du[c] * du[c];
    }
    const RJet inv_lam = reciprocal(nlab::sqrt(lam2));
    const RJet ct = nlab::cos(p[2]);
    const RJet st = nlab::sin(p[2]);
    std::vector<RJet> out;
    out.reserve(q);
    for (int c = 0; c < q; ++c) out.push_back((ct * du[c] + st * dv[c]) * inv_lam);
    return out;
  };
  ut.fiber = Distribution::coordinate_axis(3, 2);
  ut.conformal_factor = [inner = g.eval](double u, double v) {
    auto jets = inner(seed_variables({u, v}, {.dims = 2, .max_order = 1}));
    double s = 0.0;
    MultiIndex du(1, 0);
    for (const auto& c : jets) s += partial(c, du) * partial(c, du);
    return std::sqrt(s);
  };

  // regularity scan; singular points recorded, not fatal
  const auto& iv = g.domain.intervals;
  for (int i = 0; i < singular_scan_u; ++i)
    for (int j = 0; j < singular_scan_v; ++j)
      for (int t = 0; t < singular_scan_theta; ++t) {
        const double u = iv[0].first + (iv[0].second - iv[0].first) * i / (singular_scan_u - 1);
        const double v = iv[1].first + (iv[1].second - iv[1].first) * j / (singular_scan_v - 1);
        const double th = 2.0 * M_PI * t / singular_scan_theta;
        try {
          auto ff = fundamental_forms(evaluate_tower(ut.chart, {u, v, th}, 2), ut.chart.ambient);
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ff.metric);
          if (es.eigenvalues()(0) < 1e-8 * es.eigenvalues()(2))
            ut.singular_points.push_back({u, v, th});
        } catch (const singular_point_error&) {
          ut.singular_points.push_back({u, v, th});
        }
      }
  return ut;
}

}  // namespace nlab

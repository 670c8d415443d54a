#pragma once

// Product constructions: cylinders g x id_{R^k} and compositions
// f = (gamma x id) o F that replace one coordinate of a hypersurface by a
// unit-speed plane curve evaluated at the height function F_a.

#include <Eigen/Dense>

#include "curves.hpp"
#include "forms.hpp"

namespace nlab {

inline Chart cylinder_chart(const Chart& g, int extra, double half_length = 2.0) {
  if (extra < 1) throw std::invalid_argument("cylinder needs at least one flat factor");
  if (g.dim + extra > kMaxVars)
    throw std::invalid_argument("cylinder parameter count exceeds the jet variable budget");
  if (g.ambient.is_sphere())
    throw std::invalid_argument("cylinders are products with Euclidean factors");
  Chart c;
  c.dim = g.dim + extra;
  c.ambient = AmbientSpace::euclidean(g.ambient.coord_count() + extra);
  c.domain = g.domain;
  for (int i = 0; i < extra; ++i) c.domain.intervals.push_back({-half_length, half_length});
  c.label = g.label + "-cylinder";
  c.eval = [inner = g.eval, gdim = g.dim, extra](const std::vector<RJet>& p) {
    std::vector<RJet> base(p.begin(), p.begin() + gdim);
    std::vector<RJet> out = inner(base);
    for (int i = 0; i < extra; ++i) out.push_back(p[gdim + i]);
    return out;
  };
  return c;
}

struct CompositionData {
  Chart hypersurface;  // F into R^{n+1}
  PlaneCurve curve;
  int axis = 0;
  Chart composed;  // f into R^{n+2}

  struct PointCheck {
    double height = 0.0;      // F_a
    double gauss_height = 0.0;  // <xi, a>
    double grad_height_sq = 0.0;
    double mean_f = 0.0;  // H of the composition
    double mean_F = 0.0;  // H of the hypersurface
    double curvature_at_height = 0.0;
  };

  PointCheck evaluate(const std::vector<double>& point, int order = 2) const {
    PointCheck pc;
    auto tower_F = evaluate_tower(hypersurface, point, order);
    auto ff_F = fundamental_forms(tower_F, hypersurface.ambient);
    if (ff_F.codim() != 1)
      throw std::invalid_argument("composition requires a hypersurface factor");
    pc.height = tower_F.coords[axis].value();
    pc.gauss_height = ff_F.normal_frame(axis, 0);
    pc.grad_height_sq = ff_F.tangent_frame.row(axis).squaredNorm();
    pc.mean_F = ff_F.mean_curvature;
    pc.curvature_at_height = curve.curvature_at(pc.height);
    auto tower_f = evaluate_tower(composed, point, order);
    pc.mean_f = fundamental_forms(tower_f, composed.ambient).mean_curvature;
    return pc;
  }
};

inline CompositionData compose_with_curve_cylinder(const Chart& F, PlaneCurve curve,
                                                   int axis = 0) {
  if (F.ambient.is_sphere())
    throw std::invalid_argument("curve-cylinder compositions act on Euclidean hypersurfaces");
  if (axis < 0 || axis >= F.ambient.coord_count())
    throw std::invalid_argument("composition axis out of range");

  // the height function must stay inside the integrated arclength range
  {
    const int probes = 4;
    std::vector<int> counts(F.dim, probes);
    std::vector<double> p(F.dim);
    int total = 1;
    for (int d = 0; d < F.dim; ++d) total *= probes + 1;
    for (int lin = 0; lin < total; ++lin) {
      int rest = lin;
      for (int d = 0; d < F.dim; ++d) {
        const int i = rest % (probes + 1);
        rest /= probes + 1;
        const auto& iv = F.domain.intervals[d];
        p[d] = iv.first + (iv.second - iv.first) * i / probes;
      }
      const double h = evaluate_tower(F, p, 0).coords[axis].value();
      if (h < curve.s_min - 1e-9 || h > curve.s_max + 1e-9)
        throw std::out_of_range("height function leaves the curve's arclength range");
    }
  }

  CompositionData cd;
  cd.hypersurface = F;
  cd.curve = std::move(curve);
  cd.axis = axis;
  cd.composed.dim = F.dim;
  cd.composed.ambient = AmbientSpace::euclidean(F.ambient.coord_count() + 1);
  cd.composed.domain = F.domain;
  cd.composed.label = F.label + "-curved";
  cd.composed.eval = [inner = F.eval, curve = cd.curve, axis](const std::vector<RJet>& p) {
    std::vector<RJet> base = inner(p);
    const RJet& s_jet = base[static_cast<size_t>(axis)];
    auto gj = curve.position_jets(s_jet.value(), s_jet.order());
    std::vector<std::vector<double>> coeffs(2);
    std::vector<RJet> out;
    out.reserve(base.size() + 1);
    for (size_t c = 0; c < base.size(); ++c) {
      if (static_cast<int>(c) == axis) {
        for (int comp = 0; comp < 2; ++comp) {
          std::vector<double> cc(gj[comp].size());
          for (int k = 0; k < gj[comp].size(); ++k) cc[k] = gj[comp][k];
          out.push_back(compose_series(cc, s_jet));
        }
      } else {
        out.push_back(base[c]);
      }
    }
    return out;
  };
  return cd;
}

}  // namespace nlab

#pragma once

// Unit-speed plane curves from a prescribed curvature function k(s):
// the Frenet system gamma' = T, T' = kN, N' = -kT integrated by a
// fourth-order method with per-step renormalization, plus exact local
// Taylor models recovered from the system for jet-level composition.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "jet.hpp"

namespace nlab {

using ScalarJetFn = std::function<RJet(const RJet&)>;

inline ScalarJetFn constant_curvature(double k) {
  return [k](const RJet& s) { return RJet(s.dims(), s.order(), k); };
}

struct PlaneCurve {
  double s_min = 0.0, s_max = 1.0;
  double step = 1e-3;
  ScalarJetFn curvature;
  std::vector<double> samples_s;
  std::vector<Eigen::Vector2d> positions;
  std::vector<Eigen::Vector2d> tangents;
  std::vector<Eigen::Vector2d> normals;

  struct State {
    Eigen::Vector2d pos, tan, nor;
  };

  double curvature_at(double s) const { return curvature(RJet(1, 0, s)).value(); }

  State state_at(double s) const;

  // 1-variable jets of the two position components about s0
  std::array<RJet, 2> position_jets(double s0, int order) const;
};

namespace detail {

struct FrenetState {
  Eigen::Vector2d pos, tan, nor;
};

inline FrenetState frenet_rhs(const FrenetState& y, double k) {
  return {y.tan, k * y.nor, -k * y.tan};
}

inline FrenetState frenet_axpy(const FrenetState& y, double h, const FrenetState& d) {
  return {y.pos + h * d.pos, y.tan + h * d.tan, y.nor + h * d.nor};
}

inline FrenetState frenet_rk4(const FrenetState& y, double s, double h,
                              const std::function<double(double)>& k) {
  const FrenetState k1 = frenet_rhs(y, k(s));
  const FrenetState k2 = frenet_rhs(frenet_axpy(y, h / 2, k1), k(s + h / 2));
  const FrenetState k3 = frenet_rhs(frenet_axpy(y, h / 2, k2), k(s + h / 2));
  const FrenetState k4 = frenet_rhs(frenet_axpy(y, h, k3), k(s + h));
  FrenetState out = y;
  out.pos += (h / 6) * (k1.pos + 2 * k2.pos + 2 * k3.pos + k4.pos);
  out.tan += (h / 6) * (k1.tan + 2 * k2.tan + 2 * k3.tan + k4.tan);
  out.nor += (h / 6) * (k1.nor + 2 * k2.nor + 2 * k3.nor + k4.nor);
  // unit-speed invariant: renormalize the frame, keep N the left normal
  out.tan.normalize();
  out.nor = Eigen::Vector2d(-out.tan.y(), out.tan.x());
  return out;
}

}  // namespace detail

inline PlaneCurve plane_curve_from_curvature(ScalarJetFn k, double s_min, double s_max,
                                             int samples = 2048) {
  if (!(s_max > s_min)) throw std::invalid_argument("empty arclength range");
  PlaneCurve c;
  c.s_min = s_min;
  c.s_max = s_max;
  c.curvature = std::move(k);
  c.step = (s_max - s_min) / (samples - 1);
  auto kv = [&c](double s) { return c.curvature_at(s); };
  detail::FrenetState y{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  c.samples_s.reserve(samples);
  c.positions.reserve(samples);
  c.tangents.reserve(samples);
  c.normals.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    const double s = s_min + i * c.step;
    c.samples_s.push_back(s);
    c.positions.push_back(y.pos);
    c.tangents.push_back(y.tan);
    c.normals.push_back(y.nor);
    if (i + 1 < samples) y = detail::frenet_rk4(y, s, c.step, kv);
  }
  return c;
}

inline PlaneCurve::State PlaneCurve::state_at(double s) const {
  if (s < s_min - 1e-9 || s > s_max + 1e-9)
    throw std::out_of_range("arclength outside the integrated range");
  const int last = static_cast<int>(samples_s.size()) - 1;
  int i = static_cast<int>(std::floor((s - s_min) / step));
  i = std::max(0, std::min(i, last));
  detail::FrenetState y{positions[i], tangents[i], normals[i]};
  const double rest = s - samples_s[i];
  auto kv = [this](double t) { return curvature_at(t); };
  if (std::abs(rest) > 1e-14) y = detail::frenet_rk4(y, samples_s[i], rest, kv);
  return {y.pos, y.tan, y.nor};
}

inline std::array<RJet, 2> PlaneCurve::position_jets(double s0, int order) const {
  const State st = state_at(s0);
  const RJet s_seed = RJet::variable(1, order, 0, s0);
  const RJet kj = curvature(s_seed);
  RJet gx(1, order, st.pos.x()), gy(1, order, st.pos.y());
  RJet tx(1, order, st.tan.x()), ty(1, order, st.tan.y());
  RJet nx(1, order, st.nor.x()), ny(1, order, st.nor.y());
  // order-by-order reconstruction from gamma' = T, T' = kN, N' = -kT:
  // the coefficient at order m+1 only reads factors up to order m
  for (int m = 0; m + 1 <= order; ++m) {
    const double inv = 1.0 / (m + 1);
    gx[m + 1] = tx[m] * inv;
    gy[m + 1] = ty[m] * inv;
    const RJet kN_x = kj * nx, kN_y = kj * ny;
    const RJet kT_x = kj * tx, kT_y = kj * ty;
    tx[m + 1] = kN_x[m] * inv;
    ty[m + 1] = kN_y[m] * inv;
    nx[m + 1] = -kT_x[m] * inv;
    ny[m + 1] = -kT_y[m] * inv;
  }
  return {gx, gy};
}

}  // namespace nlab

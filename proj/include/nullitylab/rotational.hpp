#pragma once

// Rotational charts over a scalar profile and the constant-mean-curvature
// profile equation
//   phi phi'' - 1 - phi'^2 = +- phi sqrt((1+phi'^2)(n^2 H^2 (1+phi'^2)^2 - k^2)),
//   k = c0 (1 + phi'^2),
// integrated by a classical fourth-order method with dense output. Local
// Taylor models of the solution are rebuilt from the equation itself, so
// rotational charts over integrated profiles stay jet-evaluable.

#include <cmath>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "chart.hpp"

namespace nlab {

struct ProfileFunction {
  double x_min = 0.0, x_max = 1.0;
  std::function<RJet(const RJet&)> eval_jet;

  double value(double x) const { return eval_jet(RJet(1, 0, x)).value(); }
  double slope(double x) const {
    return partial(eval_jet(RJet::variable(1, 1, 0, x)), MultiIndex(1));
  }
};

inline ProfileFunction profile_from_jet_fn(std::function<RJet(const RJet&)> fn, double x_min,
                                           double x_max) {
  return {x_min, x_max, std::move(fn)};
}

// (x, theta) -> (x cos(theta), x sin(theta), phi(x)); needs x > 0
inline Chart rotational_surface(const ProfileFunction& profile, std::string label = "rotational") {
  if (profile.x_min <= 0.0)
    throw std::invalid_argument("rotational charts require x > 0 on the domain");
  Chart c;
  c.dim = 2;
  c.ambient = AmbientSpace::euclidean(3);
  c.domain = Box{{{profile.x_min, profile.x_max}, {-2.0 * M_PI - 0.5, 2.0 * M_PI + 0.5}}};
  c.label = std::move(label);
  c.eval = [fn = profile.eval_jet](const std::vector<RJet>& p) {
    const RJet h = fn(p[0]);
    return std::vector<RJet>{p[0] * nlab::cos(p[1]), p[0] * nlab::sin(p[1]), h};
  };
  return c;
}

// (x, theta) -> (x, phi(x) cos(theta), phi(x) sin(theta)): the rotation about
// the first coordinate axis with radius profile phi > 0. Along this chart the
// first-coordinate height function is the parameter x itself.
inline Chart rotational_about_axis(const ProfileFunction& profile,
                                   std::string label = "rotational-axis") {
  Chart c;
  c.dim = 2;
  c.ambient = AmbientSpace::euclidean(3);
  c.domain = Box{{{profile.x_min, profile.x_max}, {-2.0 * M_PI - 0.5, 2.0 * M_PI + 0.5}}};
  c.label = std::move(label);
  c.eval = [fn = profile.eval_jet](const std::vector<RJet>& p) {
    const RJet r = fn(p[0]);
    return std::vector<RJet>{p[0], r * nlab::cos(p[1]), r * nlab::sin(p[1])};
  };
  return c;
}

struct DelaunayProfile {
  ProfileFunction profile;
  Chart chart;  // the rotational chart over the profile
  double mean_curvature = 0.0;  // target H of the composed immersion
  double c0 = 0.0;
  int composed_dim = 3;  // n
  int sign_branch = +1;
  double step = 0.0;
  std::vector<double> xs, values, slopes;
  int sqrt_clamp_events = 0;
};

namespace detail {

struct DelaunayRhs {
  double n2h2 = 0.0;  // (nH)^2
  double c0 = 0.0;
  int sign = +1;
  mutable int clamp_events = 0;

  double sqrt_argument(double dphi) const {
    const double w = 1.0 + dphi * dphi;
    const double k = c0 * w;
    return w * (n2h2 * w * w - k * k);
  }

  double second(double phi, double dphi) const {
    if (phi <= 1e-9) throw std::runtime_error("profile collapsed to the axis during integration");
    double arg = sqrt_argument(dphi);
    if (arg < 0.0) {
      if (arg < -1e-12) throw std::runtime_error("square-root argument significantly negative");
      arg = 0.0;
      ++clamp_events;
    }
    return (1.0 + dphi * dphi + sign * phi * std::sqrt(arg)) / phi;
  }
};

}  // namespace detail

inline DelaunayProfile delaunay_profile(double mean_curvature, double c0,
                                        std::pair<double, double> x_range, int composed_dim,
                                        double phi0 = 1.0, double dphi0 = 0.0,
                                        int sign_branch = +1, int grid = 4096) {
  const double n = composed_dim;
  if (!(mean_curvature > 0.0)) throw std::invalid_argument("mean curvature must be positive");
  if (!(std::abs(c0) > 0.0 && std::abs(c0) < n * mean_curvature))
    throw std::invalid_argument("curve constant must satisfy 0 < |c0| < n H");
  if (!(x_range.second > x_range.first)) throw std::invalid_argument("empty profile range");

  DelaunayProfile out;
  out.mean_curvature = mean_curvature;
  out.c0 = c0;
  out.composed_dim = composed_dim;
  out.sign_branch = sign_branch;
  out.step = (x_range.second - x_range.first) / (grid - 1);

  detail::DelaunayRhs rhs{n * n * mean_curvature * mean_curvature, c0, sign_branch, 0};
  double phi = phi0, dphi = dphi0;
  out.xs.reserve(grid);
  for (int i = 0; i < grid; ++i) {
    const double x = x_range.first + i * out.step;
    if (std::abs(dphi) > 1e3)
      throw std::runtime_error("profile slope blew up before the end of the range");
    out.xs.push_back(x);
    out.values.push_back(phi);
    out.slopes.push_back(dphi);
    if (i + 1 == grid) break;
    const double h = out.step;
    auto f = [&rhs](double p, double dp) { return rhs.second(p, dp); };
    const double k1p = dphi, k1d = f(phi, dphi);
    const double k2p = dphi + h / 2 * k1d, k2d = f(phi + h / 2 * k1p, dphi + h / 2 * k1d);
    const double k3p = dphi + h / 2 * k2d, k3d = f(phi + h / 2 * k2p, dphi + h / 2 * k2d);
    const double k4p = dphi + h * k3d, k4d = f(phi + h * k3p, dphi + h * k3d);
    phi += h / 6 * (k1p + 2 * k2p + 2 * k3p + k4p);
    dphi += h / 6 * (k1d + 2 * k2d + 2 * k3d + k4d);
  }
  out.sqrt_clamp_events = rhs.clamp_events;

  // dense output + a local Taylor model regenerated from the equation
  struct Shared {
    std::vector<double> xs, values, slopes;
    double x0, step;
    detail::DelaunayRhs rhs;
  };
  auto shared = std::make_shared<Shared>(Shared{out.xs, out.values, out.slopes, x_range.first,
                                                out.step, rhs});
  out.profile.x_min = x_range.first;
  out.profile.x_max = x_range.second;
  out.profile.eval_jet = [shared](const RJet& x_jet) {
    const double x = x_jet.value();
    const int last = static_cast<int>(shared->xs.size()) - 1;
    int i = static_cast<int>(std::floor((x - shared->x0) / shared->step));
    i = std::max(0, std::min(i, last));
    double phi = shared->values[i], dphi = shared->slopes[i];
    const double rest = x - shared->xs[i];
    if (std::abs(rest) > 1e-14) {
      auto f = [&](double p, double dp) { return shared->rhs.second(p, dp); };
      const double h = rest;
      const double k1p = dphi, k1d = f(phi, dphi);
      const double k2p = dphi + h / 2 * k1d, k2d = f(phi + h / 2 * k1p, dphi + h / 2 * k1d);
      const double k3p = dphi + h / 2 * k2d, k3d = f(phi + h / 2 * k2p, dphi + h / 2 * k2d);
      const double k4p = dphi + h * k3d, k4d = f(phi + h * k3p, dphi + h * k3d);
      phi += h / 6 * (k1p + 2 * k2p + 2 * k3p + k4p);
      dphi += h / 6 * (k1d + 2 * k2d + 2 * k3d + k4d);
    }
    const int order = x_jet.order();
    RJet local(1, order, phi);
    if (order >= 1) local[1] = dphi;
    const double beta2 = shared->rhs.n2h2 - shared->rhs.c0 * shared->rhs.c0;
    for (int m = 0; m + 2 <= order; ++m) {
      // phi'' = (1 + phi'^2 + sign * phi * ((1+phi'^2)^3 * beta^2)^(1/2)) / phi;
      // the order-m coefficient of the right side only reads entries of
      // `local` that previous iterations already filled
      RJet fp(1, order);
      for (int k = 0; k + 1 <= order; ++k) fp[k] = local[k + 1] * (k + 1);
      RJet w = fp * fp + 1.0;
      RJet g = w * w * w * beta2;
      RJet rhs_jet = (w + local * nlab::sqrt(g) * double(shared->rhs.sign)) / local;
      local[m + 2] = rhs_jet[m] / double((m + 2) * (m + 1));
    }
    // recenter onto the incoming jet via univariate composition
    std::vector<double> cc(local.size());
    for (int k = 0; k < local.size(); ++k) cc[k] = local[k];
    return compose_series(cc, x_jet);
  };
  out.chart = rotational_surface(out.profile, "delaunay-profile");
  return out;
}

// max-norm residual of the profile equation over the dense grid, with the
// second derivative taken from fourth-order centered differences of the
// stored slopes
inline double delaunay_ode_residual(const DelaunayProfile& p) {
  detail::DelaunayRhs rhs{p.composed_dim * p.composed_dim * p.mean_curvature * p.mean_curvature,
                          p.c0, p.sign_branch, 0};
  double worst = 0.0;
  for (size_t i = 2; i + 2 < p.xs.size(); ++i) {
    const double ddphi = (-p.slopes[i + 2] + 8.0 * p.slopes[i + 1] - 8.0 * p.slopes[i - 1] +
                          p.slopes[i - 2]) /
                         (12.0 * p.step);
    const double phi = p.values[i], dphi = p.slopes[i];
    double arg = rhs.sqrt_argument(dphi);
    if (arg < 0.0) arg = 0.0;
    const double lhs = phi * ddphi - 1.0 - dphi * dphi;
    const double rv = p.sign_branch * phi * std::sqrt(arg);
    worst = std::max(worst, std::abs(lhs - rv) / (1.0 + std::abs(rv)));
  }
  return worst;
}

}  // namespace nlab

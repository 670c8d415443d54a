#pragma once

// Minimal surfaces in R^3 from holomorphic data, their associated families,
// and the orthogonal-sum surface
//     ghat = cos(phi) g_theta  (+)  sin(phi) g_{theta+pi/2}   in R^6.
//
// Holomorphic data are truncated power series with explicit radius
// bookkeeping: integration and differentiation are coefficient shifts and
// the truncation tail is auditable.

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <limits>
#include <memory>
#include <vector>

#include "chart.hpp"

namespace nlab {

using Complex = std::complex<double>;

struct HolomorphicSeries {
  Complex base{0.0, 0.0};
  std::vector<Complex> c{Complex(0.0)};
  double radius = std::numeric_limits<double>::infinity();
  bool truncated = false;  // exact polynomials carry no tail

  static HolomorphicSeries constant(Complex value) { return {Complex(0), {value}, inf()}; }
  static HolomorphicSeries identity() { return {Complex(0), {Complex(0), Complex(1)}, inf()}; }
  static HolomorphicSeries exponential(double scale, int terms = 48) {
    // exp(scale * z) about 0
    HolomorphicSeries s;
    s.c.assign(terms, Complex(0));
    s.c[0] = Complex(1);
    for (int k = 1; k < terms; ++k) s.c[k] = s.c[k - 1] * Complex(scale) / Complex(double(k));
    s.radius = inf();
    s.truncated = true;
    return s;
  }

  static double inf() { return std::numeric_limits<double>::infinity(); }

  int terms() const { return static_cast<int>(c.size()); }

  friend HolomorphicSeries operator+(const HolomorphicSeries& a, const HolomorphicSeries& b) {
    check_base(a, b);
    HolomorphicSeries r = a;
    r.radius = std::min(a.radius, b.radius);
    r.truncated = a.truncated || b.truncated;
    if (b.terms() > r.terms()) r.c.resize(b.terms(), Complex(0));
    for (int k = 0; k < b.terms(); ++k) r.c[k] += b.c[k];
    return r;
  }
  friend HolomorphicSeries operator-(const HolomorphicSeries& a, const HolomorphicSeries& b) {
    return a + (b * Complex(-1.0));
  }
  friend HolomorphicSeries operator*(const HolomorphicSeries& a, Complex s) {
    HolomorphicSeries r = a;
    for (auto& x : r.c) x *= s;
    return r;
  }
  friend HolomorphicSeries operator*(const HolomorphicSeries& a, const HolomorphicSeries& b) {
    check_base(a, b);
    HolomorphicSeries r;
    r.base = a.base;
    r.radius = std::min(a.radius, b.radius);
    const int n = std::min(kMaxTerms, a.terms() + b.terms() - 1);
    r.truncated = a.truncated || b.truncated || (a.terms() + b.terms() - 1 > kMaxTerms);
    r.c.assign(n, Complex(0));
    for (int i = 0; i < a.terms(); ++i)
      for (int j = 0; j < b.terms() && i + j < n; ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
  }

  HolomorphicSeries derivative() const {
    HolomorphicSeries r;
    r.base = base;
    r.radius = radius;
    r.truncated = truncated;
    r.c.assign(std::max(1, terms() - 1), Complex(0));
    for (int k = 1; k < terms(); ++k) r.c[k - 1] = c[k] * Complex(double(k));
    return r;
  }

  HolomorphicSeries antiderivative() const {
    HolomorphicSeries r;
    r.base = base;
    r.radius = radius;
    r.truncated = truncated;
    r.c.assign(terms() + 1, Complex(0));
    for (int k = 0; k < terms(); ++k) r.c[k + 1] = c[k] / Complex(double(k + 1));
    return r;
  }

  Complex eval(Complex z) const {
    const Complex t = z - base;
    Complex acc = c.empty() ? Complex(0) : c.back();
    for (int k = terms() - 2; k >= 0; --k) acc = acc * t + c[k];
    return acc;
  }

  CJet eval(const CJet& z) const {
    CJet t = z;
    t -= base;
    CJet acc(z.dims(), z.order(), c.empty() ? Complex(0) : c.back());
    for (int k = terms() - 2; k >= 0; --k) {
      acc = acc * t;
      acc += c[k];
    }
    return acc;
  }

  // geometric extrapolation of the trailing coefficients; exact polynomials
  // carry no tail at all
  double tail_estimate(double r) const {
    if (!truncated) return 0.0;
    const int n = terms();
    if (n < 2) return 0.0;
    const double last = std::abs(c[n - 1]) * std::pow(r, n - 1);
    const double prev = std::abs(c[n - 2]) * std::pow(r, n - 2);
    double q = prev > 0.0 ? last / prev : 0.0;
    if (q > 0.9) return std::numeric_limits<double>::infinity();
    return 10.0 * last * (q > 0.0 ? q / (1.0 - q) : 1.0);
  }

  static void check_base(const HolomorphicSeries& a, const HolomorphicSeries& b) {
    if (std::abs(a.base - b.base) > 0.0)
      throw std::invalid_argument("holomorphic series have different base points");
  }

  static constexpr int kMaxTerms = 96;
};

struct WeierstrassData {
  HolomorphicSeries f;  // height differential factor
  HolomorphicSeries g;  // Gauss map
  Box domain;           // (u, v) box, z = u + iv
  std::string label;
};

inline WeierstrassData enneper_data(double extent = 0.8) {
  WeierstrassData d;
  d.f = HolomorphicSeries::constant(Complex(1.0));
  d.g = HolomorphicSeries::identity();
  d.domain = Box{{{-extent, extent}, {-extent, extent}}};
  d.label = "enneper";
  return d;
}

inline WeierstrassData catenoid_data(double extent = 0.6) {
  WeierstrassData d;
  d.f = HolomorphicSeries::exponential(-1.0);
  d.g = HolomorphicSeries::exponential(1.0);
  d.domain = Box{{{-extent, extent}, {-extent, extent}}};
  d.label = "catenoid";
  return d;
}

namespace detail {

struct WeierstrassCore {
  std::array<HolomorphicSeries, 3> psi;  // antiderivatives of the rep integrands
  HolomorphicSeries g, gp, f;

  explicit WeierstrassCore(const WeierstrassData& data) : g(data.g), gp(data.g.derivative()), f(data.f) {
    const auto one = HolomorphicSeries::constant(Complex(1.0));
    const auto g2 = data.g * data.g;
    const auto phi0 = (one - g2) * Complex(0.5) * data.f;
    const auto phi1 = (one + g2) * Complex(0.0, 0.5) * data.f;
    const auto phi2 = data.g * data.f;
    psi = {phi0.antiderivative(), phi1.antiderivative(), phi2.antiderivative()};
  }

  double lambda(Complex z) const {
    const double ag = std::abs(g.eval(z));
    return std::abs(f.eval(z)) * (1.0 + ag * ag) * 0.5;
  }

  // positive principal-curvature function under the convention A E = k Ebar
  double k(Complex z) const {
    const double ag = std::abs(g.eval(z));
    const double den = std::abs(f.eval(z)) * (1.0 + ag * ag) * (1.0 + ag * ag);
    return 4.0 * std::abs(gp.eval(z)) / den;
  }

  Eigen::Vector3d gauss_map(Complex z) const {
    const Complex gz = g.eval(z);
    const double a2 = std::norm(gz);
    return Eigen::Vector3d(2.0 * gz.real(), 2.0 * gz.imag(), a2 - 1.0) / (1.0 + a2);
  }
};

inline void validate_weierstrass(const WeierstrassData& data, const WeierstrassCore& core,
                                 bool require_negative_curvature) {
  double max_r = 0.0;
  const auto& iv = data.domain.intervals;
  for (double u : {iv[0].first, iv[0].second})
    for (double v : {iv[1].first, iv[1].second}) max_r = std::max(max_r, std::abs(Complex(u, v)));
  if (max_r >= core.psi[0].radius)
    throw std::invalid_argument("weierstrass domain exceeds the series radius");
  for (const auto& s : core.psi)
    if (s.tail_estimate(max_r) > 1e-12)
      throw std::invalid_argument("weierstrass series truncation tail too large on the domain");
  const int scan = 9;
  for (int i = 0; i < scan; ++i)
    for (int j = 0; j < scan; ++j) {
      const double u = iv[0].first + (iv[0].second - iv[0].first) * i / (scan - 1);
      const double v = iv[1].first + (iv[1].second - iv[1].first) * j / (scan - 1);
      const Complex z(u, v);
      if (core.lambda(z) < 1e-10)
        throw std::invalid_argument("branch point inside weierstrass domain: " + data.label);
      if (require_negative_curvature && core.k(z) < 1e-8)
        throw std::invalid_argument("flat point inside weierstrass domain: " + data.label);
    }
}

}  // namespace detail

struct MinimalSurfaceChart {
  Chart chart;
  WeierstrassData data;
  double theta = 0.0;
  std::function<double(double, double)> conformal_factor;  // lambda(u,v)
  std::function<double(double, double)> principal_curvature;  // k(u,v) >= 0
  std::function<Eigen::Vector3d(double, double)> gauss_map;
};

inline MinimalSurfaceChart weierstrass_chart(const WeierstrassData& data, double theta = 0.0) {
  auto core = std::make_shared<detail::WeierstrassCore>(data);
  detail::validate_weierstrass(data, *core, /*require_negative_curvature=*/false);

  MinimalSurfaceChart ms;
  ms.data = data;
  ms.theta = theta;
  ms.chart.dim = 2;
  ms.chart.ambient = AmbientSpace::euclidean(3);
  ms.chart.domain = data.domain;
  ms.chart.label = data.label + "@" + std::to_string(theta);
  const Complex rot = std::exp(Complex(0.0, -theta));
  ms.chart.eval = [core, rot](const std::vector<RJet>& p) {
    const CJet z = complexify(p[0], p[1]);
    std::vector<RJet> out;
    out.reserve(3);
    for (int j = 0; j < 3; ++j) out.push_back(real_part(core->psi[j].eval(z) * rot));
    return out;
  };
  ms.conformal_factor = [core](double u, double v) { return core->lambda(Complex(u, v)); };
  ms.principal_curvature = [core](double u, double v) { return core->k(Complex(u, v)); };
  ms.gauss_map = [core](double u, double v) { return core->gauss_map(Complex(u, v)); };
  return ms;
}

// ghat = cos(phi) g_theta (+) sin(phi) g_{theta+pi/2} into R^3 (+) R^3;
// minimal and conformal with the same conformal factor as g.
inline Chart orthogonal_sum_hat(const WeierstrassData& data, double theta, double phi) {
  if (!(phi > 1e-12 && phi < M_PI_2 - 1e-12))
    throw std::invalid_argument("orthogonal sum requires phi strictly inside (0, pi/2)");
  auto core = std::make_shared<detail::WeierstrassCore>(data);
  detail::validate_weierstrass(data, *core, /*require_negative_curvature=*/true);

  Chart c;
  c.dim = 2;
  c.ambient = AmbientSpace::euclidean(6);
  c.domain = data.domain;
  c.label = data.label + "-hat";
  const Complex rot = std::exp(Complex(0.0, -theta));
  const double cphi = std::cos(phi), sphi = std::sin(phi);
  c.eval = [core, rot, cphi, sphi](const std::vector<RJet>& p) {
    const CJet z = complexify(p[0], p[1]);
    std::vector<RJet> out;
    out.reserve(6);
    std::array<CJet, 3> w = {core->psi[0].eval(z) * rot, core->psi[1].eval(z) * rot,
                             core->psi[2].eval(z) * rot};
    for (int j = 0; j < 3; ++j) out.push_back(real_part(w[j]) * cphi);
    // the quarter-turn family member is the imaginary part of the same data
    for (int j = 0; j < 3; ++j) out.push_back(imag_part(w[j]) * sphi);
    return out;
  };
  return c;
}

}  // namespace nlab

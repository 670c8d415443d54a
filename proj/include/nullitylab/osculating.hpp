#pragma once

// Higher normal spaces N_1 c N_1+N_2 c ..., s-th fundamental forms,
// curvature ellipses with semi-axes and circle defects, and the
// ellipticity/isotropy tests for surfaces.
//
// Stage s adds the numerical column space of the order-s pure derivatives
// after projecting out the tangent plane, lower stages, and (for sphere
// ambients) the position vector. Pure directional powers suffice for all
// ellipse sampling.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <complex>
#include <vector>

#include "forms.hpp"

namespace nlab {

struct OsculatingFlag {
  std::vector<double> point;
  FundamentalForms ff;
  std::vector<int> ranks;                  // dim N_l, l = 1..tau
  std::vector<Eigen::MatrixXd> bases;      // orthonormal basis of each N_l
  int tau = 0;
  bool nicely_curved_ok = true;
  double rel_tol = 1e-6;

  // last stage usable for ellipse computations: odd substantial codimension
  // ends in a rank-one stage whose "ellipse" degenerates to a segment
  int tau_circ() const {
    const int substantial = ff.m - (ff.spherical ? 1 : 0);
    return ((substantial - ff.n) % 2 != 0) ? tau - 1 : tau;
  }
};

// sum over |alpha| = s of s!/alpha! v^alpha d^alpha(Phi), one entry per coordinate
template <class S>
inline std::vector<S> directional_power_derivative(const DerivativeTower& tower,
                                                   const std::vector<S>& v, int s) {
  const int n = tower.dims();
  const int m = tower.ambient_count();
  std::vector<S> out(m, S{});
  const RJet& probe = tower.coords[0];
  double sfact = 1.0;
  for (int k = 2; k <= s; ++k) sfact *= k;
  for (int idx = 0; idx < probe.size(); ++idx) {
    const auto& e = probe.exponents(idx);
    if (e[0] + e[1] + e[2] != s) continue;
    S weight{sfact};
    double alpha_fact = 1.0;
    for (int a = 0; a < n; ++a) {
      for (int p = 0; p < e[a]; ++p) weight = weight * v[a];
      for (int p = 2; p <= e[a]; ++p) alpha_fact *= p;
    }
    weight = weight * S{1.0 / alpha_fact};
    MultiIndex mi(e[0], e[1], e[2]);
    for (int c = 0; c < m; ++c) out[c] = out[c] + weight * S{partial(tower.coords[c], mi)};
  }
  return out;
}

inline OsculatingFlag osculating_flag(const DerivativeTower& tower, const AmbientSpace& ambient,
                                      double rel_tol = 1e-6) {
  OsculatingFlag flag;
  flag.point = tower.point;
  flag.ff = fundamental_forms(tower, ambient);
  flag.rel_tol = rel_tol;
  const int n = flag.ff.n;
  const int m = flag.ff.m;

  Eigen::MatrixXd spanned(m, 0);
  {
    int cols = n + (ambient.is_sphere() ? 1 : 0);
    spanned.resize(m, cols);
    spanned.leftCols(n) = flag.ff.tangent_frame;
    if (ambient.is_sphere()) spanned.col(n) = flag.ff.position / flag.ff.position.norm();
  }

  const auto& lay_probe = tower.coords[0];
  for (int s = 2; s <= tower.order; ++s) {
    if (spanned.cols() >= m) break;
    // pure partials of order s
    std::vector<Eigen::VectorXd> cand;
    for (int idx = 0; idx < lay_probe.size(); ++idx) {
      const auto& e = lay_probe.exponents(idx);
      if (e[0] + e[1] + e[2] != s) continue;
      Eigen::VectorXd d(m);
      MultiIndex mi(e[0], e[1], e[2]);
      for (int c = 0; c < m; ++c) d(c) = tower.coord_partial(c, mi);
      cand.push_back(d);
    }
    Eigen::MatrixXd C(m, cand.size());
    for (size_t j = 0; j < cand.size(); ++j) {
      Eigen::VectorXd v = cand[j];
      v -= spanned * (spanned.transpose() * v);
      C.col(j) = v;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() ? sv(0) : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (smax > 0.0 && sv(i) > rel_tol * smax) ++rank;
    rank = std::min<int>(rank, m - static_cast<int>(spanned.cols()));
    if (rank == 0) break;
    Eigen::MatrixXd basis = svd.matrixU().leftCols(rank);
    flag.ranks.push_back(rank);
    flag.bases.push_back(basis);
    Eigen::MatrixXd grown(m, spanned.cols() + rank);
    grown.leftCols(spanned.cols()) = spanned;
    grown.rightCols(rank) = basis;
    spanned = grown;
  }
  flag.tau = static_cast<int>(flag.ranks.size());
  return flag;
}

// five-point rank-stability probe around the base point
inline OsculatingFlag osculating_flag_probed(const Chart& chart, const std::vector<double>& point,
                                             int order, double rel_tol = 1e-6,
                                             double probe_h = 1e-3) {
  auto flag = osculating_flag(evaluate_tower(chart, point, order), chart.ambient, rel_tol);
  for (int a = 0; a < chart.dim && flag.nicely_curved_ok; ++a) {
    for (double sgn : {-1.0, 1.0}) {
      std::vector<double> q = point;
      q[a] += sgn * probe_h;
      if (!chart.domain.contains(q, 1e-12)) continue;
      auto other = osculating_flag(evaluate_tower(chart, q, order), chart.ambient, rel_tol);
      if (other.ranks != flag.ranks) {
        flag.nicely_curved_ok = false;
        break;
      }
    }
  }
  return flag;
}

// alpha_s(Z,...,Z): projection of the s-th directional derivative onto N_{s-1};
// Z in orthonormal-frame components. Beyond the flag depth the projection is
// onto the empty space, so the zero vector comes back.
inline Eigen::VectorXd higher_form(const DerivativeTower& tower, const OsculatingFlag& flag,
                                   int s, const Eigen::VectorXd& z_frame) {
  if (s < 2) throw std::invalid_argument("higher forms start at s = 2");
  if (s > tower.order) throw std::invalid_argument("tower order too small for the requested form");
  const Eigen::VectorXd v = flag.ff.coord_components(z_frame);
  std::vector<double> vv(v.data(), v.data() + v.size());
  auto d = directional_power_derivative(tower, vv, s);
  Eigen::VectorXd dv = Eigen::Map<Eigen::VectorXd>(d.data(), d.size());
  if (s - 1 > flag.tau) return Eigen::VectorXd::Zero(flag.ff.m);
  const Eigen::MatrixXd& B = flag.bases[s - 2];
  return B * (B.transpose() * dv);
}

struct EllipticStructure {
  Eigen::Matrix2d J;
  double b = 1.0;

  static EllipticStructure rotation() {
    EllipticStructure e;
    e.J << 0.0, -1.0, 1.0, 0.0;
    e.b = 1.0;
    return e;
  }
  static EllipticStructure from_matrix(const Eigen::Matrix2d& M, double tol = 1e-10) {
    if ((M * M + Eigen::Matrix2d::Identity()).norm() > tol)
      throw std::invalid_argument("matrix does not square to -identity");
    EllipticStructure e;
    e.J = M;
    e.b = M.col(0).norm();
    return e;
  }
};

struct CurvatureEllipse {
  int order = 0;       // ell
  double kappa = 0.0;  // major semi-axis
  double mu = 0.0;     // minor semi-axis
  double circle_defect = 0.0;
  double center_norm = 0.0;
};

namespace detail {

// unit z in the J-plane with <z, Jz> = 0; exists by ellipticity
inline Eigen::Vector2d conjugate_direction(const Eigen::Matrix2d& J) {
  const double A = 0.5 * (J(0, 0) - J(1, 1));
  const double B = 0.5 * (J(0, 1) + J(1, 0));
  const double t = 0.5 * (std::atan2(B, A) + M_PI_2);
  return Eigen::Vector2d(std::cos(t), std::sin(t));
}

// semi-axes of a sampled closed curve theta -> sample(theta), theta in [0,2pi)
inline CurvatureEllipse ellipse_from_sampler(
    const std::function<Eigen::VectorXd(double)>& sample, int n_samples, int order) {
  const int n_eff = 2 * std::max(8, n_samples);
  std::vector<Eigen::VectorXd> pts(n_eff);
  for (int j = 0; j < n_eff; ++j) pts[j] = sample(2.0 * M_PI * j / n_eff);
  Eigen::VectorXd center = Eigen::VectorXd::Zero(pts[0].size());
  for (const auto& p : pts) center += p;
  center /= n_eff;
  Eigen::MatrixXd X(n_eff, pts[0].size());
  for (int j = 0; j < n_eff; ++j) X.row(j) = (pts[j] - center).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(X);
  const auto& sv = svd.singularValues();
  CurvatureEllipse e;
  e.order = order;
  const double scale = std::sqrt(2.0 / n_eff);
  e.kappa = sv.size() > 0 ? sv(0) * scale : 0.0;
  e.mu = sv.size() > 1 ? sv(1) * scale : 0.0;
  const double denom = e.kappa * e.kappa + e.mu * e.mu;
  e.circle_defect = denom > 0.0 ? (e.kappa * e.kappa - e.mu * e.mu) / denom : 0.0;
  e.center_norm = center.norm();
  return e;
}

}  // namespace detail

// ellipse of order ell for a surface chart: theta -> alpha_{ell+1}(Z_theta,...)
inline CurvatureEllipse curvature_ellipse(const DerivativeTower& tower, const OsculatingFlag& flag,
                                          int ell, const EllipticStructure& J, int n_samples = 16) {
  if (flag.ff.n != 2) throw std::invalid_argument("curvature ellipses here require surface charts");
  if (ell < 0 || (ell > 0 && ell > flag.tau))
    throw std::invalid_argument("ellipse order beyond the flag depth");
  if (ell > 0 && ell > flag.tau_circ())
    throw std::invalid_argument("the last rank-one stage has no curvature ellipse");
  const Eigen::Vector2d z = detail::conjugate_direction(J.J);
  const Eigen::Vector2d jz = J.J * z;
  auto sampler = [&](double theta) -> Eigen::VectorXd {
    const Eigen::Vector2d zt = std::cos(theta) * z + std::sin(theta) * jz;
    if (ell == 0) {
      // N_0 is the tangent plane itself; alpha_1 is the differential
      return flag.ff.tangent_frame * zt;
    }
    Eigen::VectorXd zf(2);
    zf << zt(0), zt(1);
    return higher_form(tower, flag, ell + 1, zf);
  };
  return detail::ellipse_from_sampler(sampler, n_samples, ell);
}

// first curvature ellipse on the orthogonal complement of a distribution:
// theta -> alpha(Z_theta, Z_theta) with Z_theta in the plane D-perp
inline CurvatureEllipse complement_ellipse(const FundamentalForms& ff,
                                           const Eigen::MatrixXd& complement_frame,
                                           const EllipticStructure& J, int n_samples = 16) {
  if (complement_frame.cols() != 2)
    throw std::invalid_argument("complement ellipse needs a two-dimensional complement");
  const Eigen::Vector2d z2 = detail::conjugate_direction(J.J);
  const Eigen::Vector2d jz2 = J.J * z2;
  auto lift = [&](const Eigen::Vector2d& w) -> Eigen::VectorXd {
    return complement_frame * w;
  };
  auto sampler = [&](double theta) -> Eigen::VectorXd {
    const Eigen::VectorXd zt = lift(std::cos(theta) * z2 + std::sin(theta) * jz2);
    return ff.alpha_frame(zt, zt);
  };
  return detail::ellipse_from_sampler(sampler, n_samples, 1);
}

namespace detail {

inline void require_conformal_minimal(const FundamentalForms& ff) {
  const double lam2 = 0.5 * (ff.metric(0, 0) + ff.metric(1, 1));
  const double off = std::abs(ff.metric(0, 1));
  const double aniso = std::abs(ff.metric(0, 0) - ff.metric(1, 1));
  if (off > 1e-8 * lam2 || aniso > 1e-8 * lam2)
    throw hypothesis_violation("chart is not conformal at the point");
  const double scale = std::max(1.0, ff.sff_scale());
  if (ff.mean_curvature > 1e-8 * scale)
    throw hypothesis_violation("chart is not minimal at the point");
}

}  // namespace detail

// |<xi, xi>| / <xi, xi-bar> for xi = alpha_r(E,...,E), E = e1 + i e2 from the
// conformal frame; 0 means the order r-1 ellipse is a circle, 1 a segment.
inline double isotropy_defect(const DerivativeTower& tower, const OsculatingFlag& flag, int r) {
  if (tower.dims() != 2) throw std::invalid_argument("isotropy defect requires a surface chart");
  if (r < 2 || r > tower.order) throw std::invalid_argument("isotropy order out of range");
  detail::require_conformal_minimal(flag.ff);
  const double lam = std::sqrt(flag.ff.metric(0, 0));
  std::vector<std::complex<double>> w = {std::complex<double>(1.0 / lam, 0.0),
                                         std::complex<double>(0.0, 1.0 / lam)};
  auto d = directional_power_derivative(tower, w, r);
  if (r - 1 > flag.tau) return 0.0;
  const Eigen::MatrixXd& B = flag.bases[r - 2];
  Eigen::VectorXcd dv(flag.ff.m);
  for (int c = 0; c < flag.ff.m; ++c) dv(c) = d[c];
  Eigen::VectorXcd xi = B.transpose().cast<std::complex<double>>() * dv;
  std::complex<double> bilinear(0.0, 0.0);
  double hermitian = 0.0;
  for (int i = 0; i < xi.size(); ++i) {
    bilinear += xi(i) * xi(i);
    hermitian += std::norm(xi(i));
  }
  if (hermitian <= 0.0) return 0.0;
  return std::abs(bilinear) / hermitian;
}

// max_X |alpha(X,X) + alpha(JX,JX)| / (|alpha(X,X)| + |alpha(JX,JX)|)
// over the complement directions; 0 for elliptic pairs, 1 for umbilic ones.
inline double ellipticity_defect(const FundamentalForms& ff, const EllipticStructure& J,
                                 const Eigen::MatrixXd& complement_frame) {
  if (complement_frame.cols() != 2)
    throw std::invalid_argument("ellipticity defect needs a two-dimensional complement");
  const Eigen::VectorXd x1 = complement_frame.col(0);
  const Eigen::VectorXd x2 = complement_frame.col(1);
  std::vector<Eigen::Vector2d> dirs = {{1.0, 0.0}, {0.0, 1.0}, {M_SQRT1_2, M_SQRT1_2}};
  double worst = 0.0;
  for (const auto& d : dirs) {
    const Eigen::VectorXd X = x1 * d(0) + x2 * d(1);
    const Eigen::Vector2d jd = J.J * d;
    const Eigen::VectorXd JX = x1 * jd(0) + x2 * jd(1);
    const Eigen::VectorXd axx = ff.alpha_frame(X, X);
    const Eigen::VectorXd ajj = ff.alpha_frame(JX, JX);
    const double denom = axx.norm() + ajj.norm();
    if (denom <= 0.0) continue;
    worst = std::max(worst, (axx + ajj).norm() / denom);
  }
  return worst;
}

inline double ellipticity_defect(const FundamentalForms& ff, const EllipticStructure& J) {
  if (ff.n != 2)
    throw std::invalid_argument("two-argument ellipticity defect expects a surface chart");
  return ellipticity_defect(ff, J, Eigen::MatrixXd::Identity(2, 2));
}

}  // namespace nlab

#pragma once

// Distributions inside the relative nullity, the splitting tensor
// C(T,X) = -(nabla_X T)^h, and pointwise residual checks of the structural
// identities the tensor satisfies along totally geodesic nullity
// distributions.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "forms.hpp"

namespace nlab {

using VectorField = std::function<std::vector<RJet>(const std::vector<RJet>&)>;

struct Distribution {
  int rank = 1;
  std::vector<VectorField> fields;  // coordinate components, jet-evaluable

  static Distribution coordinate_axis(int n, int axis) {
    Distribution d;
    d.rank = 1;
    d.fields.push_back([n, axis](const std::vector<RJet>& p) {
      std::vector<RJet> comps(n, RJet(p[0].dims(), p[0].order()));
      comps[axis] = RJet(p[0].dims(), p[0].order(), 1.0);
      return comps;
    });
    return d;
  }

  static Distribution coordinate_axes(int n, std::vector<int> axes) {
    Distribution d;
    d.rank = static_cast<int>(axes.size());
    for (int axis : axes) d.fields.push_back(coordinate_axis(n, axis).fields[0]);
    return d;
  }
};

struct SplittingTensorData {
  std::vector<double> point;
  Eigen::MatrixXd d_frame;           // n x k, frame components of the D basis
  Eigen::MatrixXd complement_frame;  // n x q, frame components of the D-perp basis
  std::vector<Eigen::MatrixXd> matrices;  // one q x q matrix per input field
};

struct IdentityResidualReport {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::vector<double> point;
};

inline double symmetry_defect(const Eigen::MatrixXd& B) {
  return (B - B.transpose()).norm() / (1.0 + B.norm());
}

namespace detail {

struct PointGeometry {
  DerivativeTower tower;
  FundamentalForms ff;
  Christoffel gamma;
  std::vector<std::vector<RJet>> field_jets;   // per field, n coordinate jets
  Eigen::MatrixXd field_frame;                 // n x k, frame comps of field values
  Eigen::MatrixXd d_frame;                     // n x k orthonormal
  Eigen::MatrixXd complement_frame;            // n x q orthonormal
};

inline PointGeometry point_geometry(const Chart& chart, const std::vector<double>& point,
                                    const Distribution& D, int order = 3) {
  PointGeometry pg{evaluate_tower(chart, point, order), {}, {}, {}, {}, {}, {}};
  pg.ff = fundamental_forms(pg.tower, chart.ambient);
  pg.gamma = christoffel(pg.tower);
  const int n = chart.dim;
  auto seeds = seed_variables(point, {.dims = n, .max_order = 2});
  pg.field_frame = Eigen::MatrixXd(n, D.rank);
  for (int r = 0; r < D.rank; ++r) {
    auto comps = D.fields[r](seeds);
    if (static_cast<int>(comps.size()) != n)
      throw std::invalid_argument("distribution field has wrong component count");
    Eigen::VectorXd v(n);
    for (int a = 0; a < n; ++a) v(a) = comps[a].value();
    pg.field_frame.col(r) = pg.ff.frame_components(v);
    pg.field_jets.push_back(std::move(comps));
  }
  Eigen::MatrixXd no_against(n, 0);
  Eigen::MatrixXd combo;
  pg.d_frame = detail::orthonormalize(pg.field_frame, no_against, 1e-9, &combo);
  if (pg.d_frame.cols() != D.rank)
    throw std::invalid_argument("distribution fields are linearly dependent at the point");
  pg.complement_frame =
      detail::orthonormalize(Eigen::MatrixXd::Identity(n, n), pg.d_frame, 1e-9);
  return pg;
}

// (nabla_X T)^a = X^b d_b T^a + X^b Gamma^a_bc T^c for a closed-form field T
inline Eigen::VectorXd covariant_derivative(const PointGeometry& pg,
                                            const std::vector<RJet>& field,
                                            const Eigen::VectorXd& x_coords) {
  const int n = static_cast<int>(field.size());
  Eigen::VectorXd out(n);
  for (int a = 0; a < n; ++a) {
    double v = 0.0;
    for (int b = 0; b < n; ++b) {
      MultiIndex mi;
      mi.e[b] = 1;
      v += x_coords(b) * partial(field[a], mi);
      for (int c = 0; c < n; ++c)
        v += x_coords(b) * pg.gamma(a, b, c) * field[c].value();
    }
    out(a) = v;
  }
  return out;
}

// matrices of C_T in a supplied orthonormal basis X of D-perp (frame comps)
inline std::vector<Eigen::MatrixXd> splitting_matrices(const PointGeometry& pg,
                                                       const Eigen::MatrixXd& x_frame) {
  const int q = static_cast<int>(x_frame.cols());
  std::vector<Eigen::MatrixXd> out;
  for (const auto& field : pg.field_jets) {
    Eigen::MatrixXd C(q, q);
    for (int j = 0; j < q; ++j) {
      const Eigen::VectorXd xj_coords = pg.ff.coord_components(x_frame.col(j));
      const Eigen::VectorXd nab = covariant_derivative(pg, field, xj_coords);
      const Eigen::VectorXd w = pg.ff.frame_components(nab);
      for (int i = 0; i < q; ++i) C(i, j) = -w.dot(x_frame.col(i));
    }
    out.push_back(std::move(C));
  }
  return out;
}

}  // namespace detail

inline SplittingTensorData splitting_tensor(const Chart& chart, const std::vector<double>& point,
                                            const Distribution& D) {
  auto pg = detail::point_geometry(chart, point, D);
  SplittingTensorData out;
  out.point = point;
  out.d_frame = pg.d_frame;
  out.complement_frame = pg.complement_frame;
  out.matrices = detail::splitting_matrices(pg, pg.complement_frame);
  return out;
}

inline IdentityResidualReport check_totally_geodesic(const Chart& chart,
                                                     const std::vector<double>& point,
                                                     const Distribution& D,
                                                     double tolerance = 1e-6) {
  auto pg = detail::point_geometry(chart, point, D);
  double worst = 0.0;
  for (int r = 0; r < D.rank; ++r)
    for (int s = 0; s < D.rank; ++s) {
      const Eigen::VectorXd t_coords = pg.ff.coord_components(pg.field_frame.col(r));
      const Eigen::VectorXd nab = detail::covariant_derivative(pg, pg.field_jets[s], t_coords);
      const Eigen::VectorXd w = pg.ff.frame_components(nab);
      const Eigen::VectorXd h_part = pg.complement_frame.transpose() * w;
      worst = std::max(worst, h_part.norm() / (1.0 + w.norm()));
    }
  IdentityResidualReport rep;
  rep.name = "totally-geodesic";
  rep.residual = worst;
  rep.tolerance = tolerance;
  rep.pass = worst < tolerance;
  rep.point = point;
  return rep;
}

namespace detail {

inline void require_nullity_hypothesis(const PointGeometry& pg, const Distribution& D,
                                       double hyp_tol) {
  for (int r = 0; r < D.rank; ++r) {
    const Eigen::VectorXd t_coords = pg.ff.coord_components(pg.field_frame.col(r));
    const double res = nullity_membership_residual(pg.ff, t_coords);
    if (res > hyp_tol)
      throw hypothesis_violation("distribution is not inside the relative nullity (residual " +
                                 std::to_string(res) + ")");
  }
}

}  // namespace detail

inline IdentityResidualReport residual_codazzi_symmetry(const Chart& chart,
                                                        const std::vector<double>& point,
                                                        const Distribution& D,
                                                        double tolerance = 1e-5,
                                                        double hyp_tol = 1e-4) {
  auto pg = detail::point_geometry(chart, point, D);
  detail::require_nullity_hypothesis(pg, D, hyp_tol);
  auto mats = detail::splitting_matrices(pg, pg.complement_frame);
  const int q = static_cast<int>(pg.complement_frame.cols());
  double worst = 0.0;
  for (int b = 0; b < pg.ff.codim(); ++b) {
    const Eigen::VectorXd xi = pg.ff.normal_frame.col(b);
    Eigen::MatrixXd A(q, q);
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j)
        A(i, j) = xi.dot(pg.ff.alpha_frame(pg.complement_frame.col(i), pg.complement_frame.col(j)));
    for (const auto& C : mats) worst = std::max(worst, symmetry_defect(A * C));
  }
  IdentityResidualReport rep;
  rep.name = "shape-splitting-symmetry";
  rep.residual = worst;
  rep.tolerance = tolerance;
  rep.pass = worst < tolerance;
  rep.point = point;
  return rep;
}

// Residual of the structural identity
//   nabla^h_S C_T = C_T o C_S + C_{nabla_S T} + c <S,T> I
// on D-perp. The directional derivative of the assembled C_T matrices is
// taken along S by central differences with Richardson extrapolation
// (steps h, h/2); the frame-correction terms use the transported D-perp
// gauge so the matrix entries are comparable across nearby points.
inline IdentityResidualReport residual_C1(const Chart& chart, const std::vector<double>& point,
                                          const Distribution& D, double space_curvature,
                                          double tolerance = 1e-5, double fd_step = 1e-3,
                                          double hyp_tol = 1e-4) {
  auto pg = detail::point_geometry(chart, point, D);
  detail::require_nullity_hypothesis(pg, D, hyp_tol);
  {
    auto tg = check_totally_geodesic(chart, point, D, hyp_tol);
    if (!tg.pass)
      throw hypothesis_violation("distribution is not totally geodesic (residual " +
                                 std::to_string(tg.residual) + ")");
  }

  const int n = chart.dim;
  const int q = static_cast<int>(pg.complement_frame.cols());
  const int k = D.rank;

  // coordinate components of the base D-perp frame, held fixed across probes
  std::vector<Eigen::VectorXd> x_coords(q);
  for (int i = 0; i < q; ++i) x_coords[i] = pg.ff.coord_components(pg.complement_frame.col(i));

  auto base_mats = detail::splitting_matrices(pg, pg.complement_frame);

  struct Probe {
    std::vector<Eigen::MatrixXd> mats;             // per field, in transported gauge
    std::vector<Eigen::VectorXd> x_coords_probe;   // transported frame, coordinate comps
  };

  auto probe_at = [&](const std::vector<double>& qpt) {
    auto pgq = detail::point_geometry(chart, qpt, D);
    // transported gauge: project the frozen coordinate frame onto D-perp(q),
    // then order-preserving Gram-Schmidt (no pivoting, to stay smooth in q)
    Eigen::MatrixXd Xq(n, q);
    for (int i = 0; i < q; ++i) {
      Eigen::VectorXd w = pgq.ff.frame_components(x_coords[i]);
      w -= pgq.d_frame * (pgq.d_frame.transpose() * w);
      for (int l = 0; l < i; ++l) w -= Xq.col(l) * Xq.col(l).dot(w);
      const double nn = w.norm();
      if (nn < 1e-10) throw std::runtime_error("transported frame degenerated during probe");
      Xq.col(i) = w / nn;
    }
    Probe pr;
    pr.mats = detail::splitting_matrices(pgq, Xq);
    for (int i = 0; i < q; ++i) pr.x_coords_probe.push_back(pgq.ff.coord_components(Xq.col(i)));
    return pr;
  };

  double worst = 0.0;
  for (int s_idx = 0; s_idx < k; ++s_idx) {
    const Eigen::VectorXd s_coords = pg.ff.coord_components(pg.field_frame.col(s_idx));
    const double step = fd_step / std::max(1.0, s_coords.lpNorm<Eigen::Infinity>());

    auto offset_point = [&](double s) {
      std::vector<double> qpt = point;
      for (int a = 0; a < n; ++a) qpt[a] += s * s_coords(a);
      return qpt;
    };
    const Probe p_p1 = probe_at(offset_point(step));
    const Probe p_m1 = probe_at(offset_point(-step));
    const Probe p_p2 = probe_at(offset_point(step / 2));
    const Probe p_m2 = probe_at(offset_point(-step / 2));

    // Omega_{l,i} = < nabla_S X_i, X_l > with the frozen base frame at p
    Eigen::MatrixXd omega(q, q);
    for (int i = 0; i < q; ++i) {
      Eigen::VectorXd d_h = (p_p1.x_coords_probe[i] - p_m1.x_coords_probe[i]) / (2 * step);
      Eigen::VectorXd d_h2 = (p_p2.x_coords_probe[i] - p_m2.x_coords_probe[i]) / step;
      Eigen::VectorXd dcomp = (4.0 * d_h2 - d_h) / 3.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c)
            dcomp(a) += s_coords(b) * pg.gamma(a, b, c) * x_coords[i](c);
      const Eigen::VectorXd w = pg.ff.frame_components(dcomp);
      for (int l = 0; l < q; ++l) omega(l, i) = w.dot(pg.complement_frame.col(l));
    }

    for (int t_idx = 0; t_idx < k; ++t_idx) {
      Eigen::MatrixXd d_h = (p_p1.mats[t_idx] - p_m1.mats[t_idx]) / (2 * step);
      Eigen::MatrixXd d_h2 = (p_p2.mats[t_idx] - p_m2.mats[t_idx]) / step;
      Eigen::MatrixXd m_prime = (4.0 * d_h2 - d_h) / 3.0;
      const Eigen::MatrixXd lhs =
          m_prime - omega.transpose() * base_mats[t_idx] - base_mats[t_idx] * omega;

      // nabla_S T, expressed back in the supplied field basis (tensorial slot)
      const Eigen::VectorXd nab =
          detail::covariant_derivative(pg, pg.field_jets[t_idx], s_coords);
      const Eigen::VectorXd nab_frame = pg.ff.frame_components(nab);
      const Eigen::VectorXd coeffs =
          pg.field_frame.colPivHouseholderQr().solve(nab_frame);
      Eigen::MatrixXd c_nab = Eigen::MatrixXd::Zero(q, q);
      for (int r = 0; r < k; ++r) c_nab += coeffs(r) * base_mats[r];

      const double st = pg.field_frame.col(s_idx).dot(pg.field_frame.col(t_idx));
      const Eigen::MatrixXd rhs = base_mats[t_idx] * base_mats[s_idx] + c_nab +
                                  space_curvature * st * Eigen::MatrixXd::Identity(q, q);
      worst = std::max(worst, (lhs - rhs).norm() / (1.0 + rhs.norm()));
    }
  }

  IdentityResidualReport rep;
  rep.name = "splitting-derivative-identity";
  rep.residual = worst;
  rep.tolerance = tolerance;
  rep.pass = worst < tolerance;
  rep.point = point;
  return rep;
}

}  // namespace nlab

#pragma once

// Pointwise extrinsic geometry of a chart: metric, orthonormal frames,
// second fundamental form with normal values, mean curvature, shape
// operators, relative nullity, Christoffel symbols.
//
// Sphere ambients are handled extrinsically: the normal space of a chart
// into S^m is the orthogonal complement of span(tangent, position) in
// R^{m+1}, so second fundamental forms are computed inside the sphere.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <vector>

#include "chart.hpp"

namespace nlab {

namespace detail {

// Deterministic orthonormalization: pivot on the largest remaining column
// norm, fix signs so the first significant component is positive.
// Columns whose residual drops below drop_tol * (largest input norm) are
// discarded. Returns Q; if combo != nullptr, stores the combination matrix
// with Q = V * combo (only meaningful when no columns were dropped).
inline Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& V,
                                      const Eigen::MatrixXd& against,
                                      double drop_tol, Eigen::MatrixXd* combo = nullptr) {
  const int m = static_cast<int>(V.rows());
  const int k = static_cast<int>(V.cols());
  Eigen::MatrixXd W = V;
  Eigen::MatrixXd C = Eigen::MatrixXd::Identity(k, k);
  for (int c = 0; c < against.cols(); ++c) {
    const Eigen::VectorXd q = against.col(c);
    for (int j = 0; j < k; ++j) W.col(j) -= q * q.dot(W.col(j));
  }
  double max_norm = 0.0;
  for (int j = 0; j < k; ++j) max_norm = std::max(max_norm, V.col(j).norm());
  if (max_norm == 0.0) max_norm = 1.0;

  Eigen::MatrixXd Q(m, k);
  Eigen::MatrixXd QC(k, k);
  std::vector<bool> used(k, false);
  int out = 0;
  for (int step = 0; step < k; ++step) {
    int pivot = -1;
    double best = drop_tol * max_norm;
    for (int j = 0; j < k; ++j)
      if (!used[j] && W.col(j).norm() > best) {
        best = W.col(j).norm();
        pivot = j;
      }
    if (pivot < 0) break;
    used[pivot] = true;
    Eigen::VectorXd q = W.col(pivot);
    Eigen::VectorXd cc = C.col(pivot);
    const double nn = q.norm();
    q /= nn;
    cc /= nn;
    // sign convention: first significant component positive
    for (int r = 0; r < m; ++r)
      if (std::abs(q(r)) > 1e-9) {
        if (q(r) < 0) {
          q = -q;
          cc = -cc;
        }
        break;
      }
    Q.col(out) = q;
    QC.col(out) = cc;
    ++out;
    for (int j = 0; j < k; ++j)
      if (!used[j]) {
        const double proj = q.dot(W.col(j));
        W.col(j) -= q * proj;
        C.col(j) -= cc * proj;
      }
  }
  Q.conservativeResize(m, out);
  QC.conservativeResize(k, out);
  if (combo) *combo = QC;
  return Q;
}

}  // namespace detail

struct FundamentalForms {
  int n = 0;  // intrinsic dimension
  int m = 0;  // ambient coordinate count
  bool spherical = false;
  Eigen::VectorXd position;
  Eigen::MatrixXd jacobian;       // m x n, columns d_a(Phi)
  Eigen::MatrixXd metric;         // n x n
  Eigen::MatrixXd tangent_frame;  // m x n, orthonormal columns e_i
  Eigen::MatrixXd frame_coeffs;   // n x n, e_i = sum_a frame_coeffs(a,i) d_a
  Eigen::MatrixXd coords_of;      // n x n, inverse: w = coords_of * v gives frame comps
  Eigen::MatrixXd normal_frame;   // m x p
  std::vector<Eigen::VectorXd> sff_store;  // n*n ambient vectors alpha(e_i, e_j)
  Eigen::VectorXd mean_curvature_vector;
  double mean_curvature = 0.0;

  int codim() const { return static_cast<int>(normal_frame.cols()); }
  const Eigen::VectorXd& sff(int i, int j) const { return sff_store[i * n + j]; }

  // alpha on arbitrary tangent vectors given in orthonormal-frame components
  Eigen::VectorXd alpha_frame(const Eigen::VectorXd& w1, const Eigen::VectorXd& w2) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out += w1(i) * w2(j) * sff(i, j);
    return out;
  }

  Eigen::VectorXd frame_components(const Eigen::VectorXd& coord_vec) const {
    return coords_of * coord_vec;
  }
  Eigen::VectorXd coord_components(const Eigen::VectorXd& frame_vec) const {
    return frame_coeffs * frame_vec;
  }

  // largest singular value of the flattened second fundamental form
  double sff_scale() const {
    if (codim() == 0) return 0.0;
    Eigen::MatrixXd M(n * codim(), n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        M.block(j * codim(), i, codim(), 1) = normal_frame.transpose() * sff(i, j);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    return svd.singularValues()(0);
  }
};

inline FundamentalForms fundamental_forms(const DerivativeTower& tower,
                                          const AmbientSpace& ambient) {
  if (tower.order < 2) throw std::invalid_argument("fundamental forms need a tower of order >= 2");
  FundamentalForms ff;
  ff.n = tower.dims();
  ff.m = tower.ambient_count();
  ff.spherical = ambient.is_sphere();

  ff.position = Eigen::VectorXd(ff.m);
  for (int c = 0; c < ff.m; ++c) ff.position(c) = tower.coords[c].value();

  ff.jacobian = Eigen::MatrixXd(ff.m, ff.n);
  for (int a = 0; a < ff.n; ++a) {
    MultiIndex mi;
    mi.e[a] = 1;
    for (int c = 0; c < ff.m; ++c) ff.jacobian(c, a) = tower.coord_partial(c, mi);
  }
  ff.metric = ff.jacobian.transpose() * ff.jacobian;

  Eigen::MatrixXd none(ff.m, 0);
  ff.tangent_frame = detail::orthonormalize(ff.jacobian, none, 1e-9, &ff.frame_coeffs);
  if (ff.tangent_frame.cols() != ff.n) throw singular_point_error(tower.point);
  ff.coords_of = ff.frame_coeffs.inverse();

  Eigen::MatrixXd excluded = ff.tangent_frame;
  if (ff.spherical) {
    Eigen::MatrixXd with_pos(ff.m, ff.n + 1);
    with_pos.leftCols(ff.n) = ff.tangent_frame;
    with_pos.col(ff.n) = ff.position / ff.position.norm();
    excluded = with_pos;
  }
  ff.normal_frame =
      detail::orthonormalize(Eigen::MatrixXd::Identity(ff.m, ff.m), excluded, 1e-7);

  // ambient second partials pulled back to the orthonormal frame
  std::vector<Eigen::VectorXd> dd(ff.n * ff.n, Eigen::VectorXd(ff.m));
  for (int a = 0; a < ff.n; ++a)
    for (int b = 0; b < ff.n; ++b) {
      MultiIndex mi;
      mi.e[a] += 1;
      mi.e[b] += 1;
      for (int c = 0; c < ff.m; ++c) dd[a * ff.n + b](c) = tower.coord_partial(c, mi);
    }

  auto project_normal = [&](Eigen::VectorXd v) {
    v -= ff.tangent_frame * (ff.tangent_frame.transpose() * v);
    if (ff.spherical) {
      const Eigen::VectorXd pos = ff.position / ff.position.norm();
      v -= pos * pos.dot(v);
    }
    return v;
  };

  ff.sff_store.assign(ff.n * ff.n, Eigen::VectorXd::Zero(ff.m));
  for (int i = 0; i < ff.n; ++i)
    for (int j = 0; j < ff.n; ++j) {
      Eigen::VectorXd s = Eigen::VectorXd::Zero(ff.m);
      for (int a = 0; a < ff.n; ++a)
        for (int b = 0; b < ff.n; ++b)
          s += ff.frame_coeffs(a, i) * ff.frame_coeffs(b, j) * dd[a * ff.n + b];
      ff.sff_store[i * ff.n + j] = project_normal(s);
    }

  ff.mean_curvature_vector = Eigen::VectorXd::Zero(ff.m);
  for (int i = 0; i < ff.n; ++i) ff.mean_curvature_vector += ff.sff(i, i);
  ff.mean_curvature_vector /= ff.n;
  ff.mean_curvature = ff.mean_curvature_vector.norm();
  return ff;
}

inline Eigen::MatrixXd shape_operator(const FundamentalForms& ff, const Eigen::VectorXd& xi) {
  if (std::abs(xi.norm() - 1.0) > 1e-8)
    throw std::invalid_argument("shape operator direction must be unit length");
  const Eigen::VectorXd in_normal = ff.normal_frame * (ff.normal_frame.transpose() * xi);
  if ((xi - in_normal).norm() > 1e-8)
    throw std::invalid_argument("shape operator direction is not normal to the chart");
  Eigen::MatrixXd A(ff.n, ff.n);
  for (int i = 0; i < ff.n; ++i)
    for (int j = 0; j < ff.n; ++j) A(i, j) = xi.dot(ff.sff(i, j));
  return 0.5 * (A + A.transpose());
}

struct NullityData {
  int index = 0;
  Eigen::MatrixXd basis_frame;    // n x nu, frame components
  Eigen::MatrixXd basis_ambient;  // m x nu
  Eigen::VectorXd singular_values;
  double tolerance = 0.0;
};

inline NullityData relative_nullity(const FundamentalForms& ff, double rel_tol = 1e-7) {
  NullityData nd;
  nd.tolerance = rel_tol;
  const int p = ff.codim();
  if (p == 0) {
    nd.index = ff.n;
    nd.basis_frame = Eigen::MatrixXd::Identity(ff.n, ff.n);
    nd.basis_ambient = ff.tangent_frame;
    nd.singular_values = Eigen::VectorXd::Zero(ff.n);
    return nd;
  }
  Eigen::MatrixXd M(ff.n * p, ff.n);
  for (int i = 0; i < ff.n; ++i)
    for (int j = 0; j < ff.n; ++j)
      M.block(j * p, i, p, 1) = ff.normal_frame.transpose() * ff.sff(i, j);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
  nd.singular_values = svd.singularValues();
  const double smax = nd.singular_values.size() ? nd.singular_values(0) : 0.0;
  if (smax == 0.0) {
    nd.index = ff.n;
    nd.basis_frame = Eigen::MatrixXd::Identity(ff.n, ff.n);
  } else {
    int nu = 0;
    for (int i = 0; i < nd.singular_values.size(); ++i)
      if (nd.singular_values(i) < rel_tol * smax) ++nu;
    nd.index = nu;
    nd.basis_frame = svd.matrixV().rightCols(nu);
  }
  nd.basis_ambient = ff.tangent_frame * nd.basis_frame;
  return nd;
}

// max_j |alpha(T, e_j)| / sigma_max for a tangent direction T in coordinate
// components; 0 means T lies in the relative nullity.
inline double nullity_membership_residual(const FundamentalForms& ff,
                                          const Eigen::VectorXd& coord_dir) {
  Eigen::VectorXd w = ff.frame_components(coord_dir);
  const double wl = w.norm();
  if (wl == 0.0) throw std::invalid_argument("zero direction");
  w /= wl;
  const double smax = ff.sff_scale();
  if (smax == 0.0) return 0.0;
  double worst = 0.0;
  for (int j = 0; j < ff.n; ++j) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(ff.m);
    for (int i = 0; i < ff.n; ++i) a += w(i) * ff.sff(i, j);
    worst = std::max(worst, a.norm());
  }
  return worst / smax;
}

// ---- Christoffel symbols via metric jets ----

// g_ij as jets of order (tower.order - 1), row-major n*n
inline std::vector<RJet> metric_jets(const DerivativeTower& tower) {
  const int n = tower.dims();
  std::vector<RJet> dphi;
  dphi.reserve(n * tower.ambient_count());
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < tower.ambient_count(); ++c) dphi.push_back(derivative(tower.coords[c], a));
  std::vector<RJet> g;
  g.reserve(n * n);
  const int m = tower.ambient_count();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      RJet s(n, tower.order - 1);
      for (int c = 0; c < m; ++c) s += dphi[a * m + c] * dphi[b * m + c];
      g.push_back(s);
    }
  return g;
}

// closed-form inverse of a symmetric jet matrix, n <= 3
inline std::vector<RJet> invert_jet_matrix(const std::vector<RJet>& g, int n) {
  if (n == 1) return {reciprocal(g[0])};
  if (n == 2) {
    RJet det = g[0] * g[3] - g[1] * g[2];
    RJet id = reciprocal(det);
    return {g[3] * id, -g[1] * id, -g[2] * id, g[0] * id};
  }
  auto at = [&](int i, int j) -> const RJet& { return g[i * 3 + j]; };
  RJet det = at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1)) -
             at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0)) +
             at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0));
  RJet id = reciprocal(det);
  std::vector<RJet> inv;
  inv.reserve(9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const int r1 = (i + 1) % 3, r2 = (i + 2) % 3;
      const int c1 = (j + 1) % 3, c2 = (j + 2) % 3;
      // adjugate transpose: cofactor of (j,i)
      inv.push_back((at(c1, r1) * at(c2, r2) - at(c1, r2) * at(c2, r1)) * id);
    }
  return inv;
}

// Gamma^k_ij as jets of order (tower.order - 2), index k*n*n + i*n + j
inline std::vector<RJet> christoffel_jets(const DerivativeTower& tower) {
  if (tower.order < 2) throw std::invalid_argument("christoffel needs tower order >= 2");
  const int n = tower.dims();
  auto g = metric_jets(tower);
  auto ginv = invert_jet_matrix(g, n);
  std::vector<RJet> dg;  // d_l g_ij at [l][i][j]
  dg.reserve(n * n * n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dg.push_back(derivative(g[i * n + j], l));
  auto dgat = [&](int l, int i, int j) -> const RJet& { return dg[(l * n + i) * n + j]; };
  std::vector<RJet> gamma;
  gamma.reserve(n * n * n);
  const int ord = tower.order - 2;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        RJet s(n, ord);
        for (int l = 0; l < n; ++l) {
          RJet term = dgat(i, j, l) + dgat(j, i, l) - dgat(l, i, j);
          // all factors truncated to the common output order
          RJet gkl(n, ord);
          RJet tt(n, ord);
          for (int q = 0; q < gkl.size(); ++q) {
            gkl[q] = ginv[k * n + l][q];
            tt[q] = term[q];
          }
          s += gkl * tt;
        }
        gamma.push_back(s * 0.5);
      }
  return gamma;
}

struct Christoffel {
  int n = 0;
  std::vector<double> values;  // k*n*n + i*n + j
  double operator()(int k, int i, int j) const { return values[(k * n + i) * n + j]; }
};

inline Christoffel christoffel(const DerivativeTower& tower) {
  auto jets = christoffel_jets(tower);
  Christoffel c;
  c.n = tower.dims();
  c.values.resize(jets.size());
  for (size_t i = 0; i < jets.size(); ++i) c.values[i] = jets[i].value();
  return c;
}

// Intrinsic Gauss curvature of a surface chart from Christoffel jets:
// K = <R(e1,e2)e2, e1> for the coordinate pair, normalized by det(g).
inline double gauss_curvature_intrinsic(const DerivativeTower& tower) {
  if (tower.dims() != 2) throw std::invalid_argument("intrinsic curvature needs a surface chart");
  if (tower.order < 3) throw std::invalid_argument("intrinsic curvature needs tower order >= 3");
  const int n = 2;
  auto g = metric_jets(tower);
  auto gamma = christoffel_jets(tower);
  auto G = [&](int k, int i, int j) -> const RJet& { return gamma[(k * n + i) * n + j]; };
  // R^l_{k i j} = d_i Gamma^l_{jk} - d_j Gamma^l_{ik} + sum_s (G^l_{is}G^s_{jk} - G^l_{js}G^s_{ik})
  auto Rlkij = [&](int l, int k, int i, int j) {
    double v = partial(derivative(G(l, j, k), i), MultiIndex()) -
               partial(derivative(G(l, i, k), j), MultiIndex());
    for (int s = 0; s < n; ++s)
      v += G(l, i, s).value() * G(s, j, k).value() - G(l, j, s).value() * G(s, i, k).value();
    return v;
  };
  // lower the first index with the metric: R_{1212} = g_{1l} R^l_{2 1 2}
  double r1212 = 0.0;
  for (int l = 0; l < n; ++l) r1212 += g[0 * n + l].value() * Rlkij(l, 1, 0, 1);
  const double detg = g[0].value() * g[3].value() - g[1].value() * g[2].value();
  return r1212 / detg;
}

}  // namespace nlab

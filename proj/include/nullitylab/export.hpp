#pragma once

// Mesh and table exporters. OBJ meshes sample two-parameter charts over a
// grid (three-parameter charts export the middle slice of their last
// parameter); CSV tables carry per-point geometry for external analysis.
// Charts into more than three coordinates write their first three to OBJ;
// the CSV rows always carry the full position.

#include <iomanip>
#include <sstream>

#include "forms.hpp"
#include "grid.hpp"
#include "osculating.hpp"
#include "report.hpp"

namespace nlab {

inline std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline void write_obj(const Chart& chart, const SampleGrid& grid, const std::string& path) {
  if (grid.dims() < 2) throw std::invalid_argument("OBJ export needs a two-parameter grid");
  const int nu = grid.counts[0], nv = grid.counts[1];
  std::ostringstream os;
  os << "# " << chart.label << "\n";
  for (int j = 0; j < nv; ++j)
    for (int i = 0; i < nu; ++i) {
      std::vector<double> p(chart.dim, 0.0);
      p[0] = grid.ranges[0].first +
             (grid.ranges[0].second - grid.ranges[0].first) * (nu > 1 ? double(i) / (nu - 1) : 0.5);
      p[1] = grid.ranges[1].first +
             (grid.ranges[1].second - grid.ranges[1].first) * (nv > 1 ? double(j) / (nv - 1) : 0.5);
      for (int d = 2; d < chart.dim; ++d)
        p[d] = 0.5 * (chart.domain.intervals[d].first + chart.domain.intervals[d].second);
      auto x = evaluate_tower(chart, p, 0).position();
      os << "v";
      for (int c = 0; c < 3; ++c) os << " " << format_double(c < (int)x.size() ? x[c] : 0.0);
      os << "\n";
    }
  for (int j = 0; j + 1 < nv; ++j)
    for (int i = 0; i + 1 < nu; ++i) {
      const int a = j * nu + i + 1;
      os << "f " << a << " " << a + 1 << " " << a + nu + 1 << " " << a + nu << "\n";
    }
  write_file_atomic(path, os.str());
}

// per-point table: parameters, position, mean curvature, nullity index, and
// for minimal conformal surface charts the first two ellipse defects
inline void write_surface_csv(const Chart& chart, const SampleGrid& grid,
                              const std::string& path) {
  std::ostringstream os;
  os << "# " << chart.label << "\n";
  for (int d = 0; d < grid.dims(); ++d) os << "p" << d << ",";
  const int m = chart.ambient.coord_count();
  for (int c = 0; c < m; ++c) os << "x" << c << ",";
  os << "H,nu,defect1,defect2\n";
  const int total = grid.total();
  std::vector<std::string> rows(total);
  parallel_for(total, [&](int lin) {
    const auto p = grid.point(lin);
    std::ostringstream row;
    for (double v : p) row << format_double(v) << ",";
    try {
      auto tower = evaluate_tower(chart, p, chart.dim == 2 ? 4 : 2);
      auto ff = fundamental_forms(tower, chart.ambient);
      for (int c = 0; c < m; ++c) row << format_double(ff.position(c)) << ",";
      row << format_double(ff.mean_curvature) << "," << relative_nullity(ff).index;
      std::string d1 = "", d2 = "";
      if (chart.dim == 2) {
        try {
          auto flag = osculating_flag(tower, chart.ambient);
          if (flag.tau >= 1)
            d1 = format_double(
                curvature_ellipse(tower, flag, 1, EllipticStructure::rotation(), 16)
                    .circle_defect);
          if (flag.tau >= 2)
            d2 = format_double(isotropy_defect(tower, flag, 3));
        } catch (const std::exception&) {
          // defects stay blank off the minimal conformal case
        }
      }
      row << "," << d1 << "," << d2;
      rows[lin] = row.str();
    } catch (const singular_point_error&) {
      rows[lin].clear();  // singular points are excluded from the table
    }
  });
  for (const auto& r : rows)
    if (!r.empty()) os << r << "\n";
  write_file_atomic(path, os.str());
}

// ellipse table for surface charts: one row per (point, order)
inline void write_ellipse_csv(const Chart& chart, const SampleGrid& grid,
                              const std::string& path) {
  if (chart.dim != 2) throw std::invalid_argument("ellipse tables require surface charts");
  std::ostringstream os;
  os << "u,v,ell,kappa,mu,defect\n";
  const int total = grid.total();
  std::vector<std::string> rows(total);
  parallel_for(total, [&](int lin) {
    const auto p = grid.point(lin);
    std::ostringstream row;
    try {
      auto tower = evaluate_tower(chart, p, 4);
      auto flag = osculating_flag(tower, chart.ambient);
      for (int ell = 0; ell <= flag.tau_circ(); ++ell) {
        auto e = curvature_ellipse(tower, flag, ell, EllipticStructure::rotation(), 16);
        row << format_double(p[0]) << "," << format_double(p[1]) << "," << ell << ","
            << format_double(e.kappa) << "," << format_double(e.mu) << ","
            << format_double(e.circle_defect) << "\n";
      }
      rows[lin] = row.str();
    } catch (const std::exception&) {
      rows[lin].clear();
    }
  });
  for (const auto& r : rows) os << r;
  write_file_atomic(path, os.str());
}

inline void write_profile_csv(const std::vector<double>& xs, const std::vector<double>& values,
                              const std::vector<double>& slopes, const std::string& path) {
  std::ostringstream os;
  os << "x,phi,dphi\n";
  for (size_t i = 0; i < xs.size(); ++i)
    os << format_double(xs[i]) << "," << format_double(values[i]) << ","
       << format_double(slopes[i]) << "\n";
  write_file_atomic(path, os.str());
}

}  // namespace nlab

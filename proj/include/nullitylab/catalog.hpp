#pragma once

// Named surface constructions shared by the CLI and the scenario harness.

#include <json.hpp>

#include "bipolar.hpp"
#include "products.hpp"
#include "rotational.hpp"
#include "weierstrass.hpp"

namespace nlab {

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline WeierstrassData weierstrass_data_by_name(const std::string& kind, double extent = 0.0) {
  if (kind == "enneper") return extent > 0.0 ? enneper_data(extent) : enneper_data();
  if (kind == "catenoid") return extent > 0.0 ? catenoid_data(extent) : catenoid_data();
  throw config_error("unknown weierstrass data kind: " + kind);
}

// Resolves a surface description {kind, phi?, theta?, extent?} into a chart.
inline Chart chart_from_config(const nlohmann::ordered_json& surface) {
  if (!surface.contains("kind")) throw config_error("surface.kind missing");
  const std::string kind = surface["kind"].get<std::string>();
  const double phi = surface.value("phi", M_PI / 6.0);
  const double theta = surface.value("theta", 0.0);
  const double extent = surface.value("extent", 0.0);

  if (kind == "plane") return plane_chart();
  if (kind == "saddle") return saddle_chart();
  if (kind == "sphere") return sphere_latlon_chart();
  if (kind == "cylinder") return circle_cylinder_chart();
  if (kind == "enneper" || kind == "catenoid")
    return weierstrass_chart(weierstrass_data_by_name(kind, extent), theta).chart;
  if (kind == "helicoid")
    return weierstrass_chart(weierstrass_data_by_name("catenoid", extent), M_PI_2).chart;
  if (kind == "enneper-hat")
    return orthogonal_sum_hat(weierstrass_data_by_name("enneper", extent), theta, phi);
  if (kind == "catenoid-hat")
    return orthogonal_sum_hat(weierstrass_data_by_name("catenoid", extent), theta, phi);
  if (kind == "bipolar" || kind == "bipolar-enneper")
    return bipolar_chart(
               orthogonal_sum_hat(weierstrass_data_by_name("enneper", extent), theta, phi))
        .chart;
  if (kind == "bipolar-catenoid")
    return bipolar_chart(
               orthogonal_sum_hat(weierstrass_data_by_name("catenoid", extent), theta, phi))
        .chart;
  if (kind == "delaunay") {
    const double H = surface.value("mean_curvature", 0.2);
    const double c0 = surface.value("c0", 0.3);
    const int n = surface.value("n", 3);
    const double x0 = surface.value("x_min", 1.0);
    const double x1 = surface.value("x_max", 1.6);
    const int sign_branch = surface.value("sign_branch", 1);
    auto prof = delaunay_profile(H, c0, {x0, x1}, n, surface.value("phi0", 1.0),
                                 surface.value("dphi0", 0.0), sign_branch);
    return rotational_about_axis(prof.profile, "delaunay");
  }
  throw config_error("unknown surface kind: " + kind);
}

}  // namespace nlab

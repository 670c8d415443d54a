#include <doctest.h>

#include <nullitylab/forms.hpp>
#include <nullitylab/products.hpp>
#include <nullitylab/rotational.hpp>

#include "oracles.hpp"

using namespace nlab;

TEST_CASE("rotational chart over a constant profile is flat") {
  auto prof = profile_from_jet_fn(
      [](const RJet& x) { return RJet(x.dims(), x.order(), 0.7); }, 0.5, 2.0);
  Chart c = rotational_surface(prof, "flat-annulus");
  auto ff = fundamental_forms(evaluate_tower(c, {1.0, 0.4}, 2), c.ambient);
  CHECK(ff.sff_scale() <= 1e-10);
  CHECK(relative_nullity(ff).index == 2);
}

TEST_CASE("rotational chart over phi(x) = x is a cone: flat but nonminimal") {
  auto prof = profile_from_jet_fn([](const RJet& x) { return x; }, 0.5, 2.0);
  Chart c = rotational_surface(prof, "cone");
  auto tower = evaluate_tower(c, {1.2, 0.8}, 4);
  auto ff = fundamental_forms(tower, c.ambient);
  CHECK(ff.mean_curvature > 0.01);
  CHECK(std::abs(gauss_curvature_intrinsic(tower)) <= 1e-9);
  CHECK(relative_nullity(ff).index == 1);
}

TEST_CASE("catenary profile produces a minimal rotational chart") {
  // acosh via log(x + sqrt(x^2 - 1)) for x > 1
  auto prof = profile_from_jet_fn(
      [](const RJet& x) { return nlab::log(x + nlab::sqrt(x * x - 1.0)); }, 1.1, 2.5);
  Chart c = rotational_surface(prof, "catenoid-rot");
  for (auto p : {std::vector<double>{1.3, 0.5}, {2.0, -1.0}}) {
    auto ff = fundamental_forms(evaluate_tower(c, p, 2), c.ambient);
    CHECK(ff.mean_curvature <= 1e-8 * std::max(1.0, ff.sff_scale()));
  }
  CHECK_THROWS_AS(
      rotational_surface(profile_from_jet_fn([](const RJet& x) { return x; }, -1.0, 1.0)),
      std::invalid_argument);
}

TEST_CASE("profile equation guards its parameter ranges") {
  CHECK_THROWS_AS(delaunay_profile(0.2, 3 * 0.2, {1.0, 1.5}, 3), std::invalid_argument);  // |c0| = nH
  CHECK_THROWS_AS(delaunay_profile(0.2, 0.0, {1.0, 1.5}, 3), std::invalid_argument);      // c0 = 0
  CHECK_THROWS_AS(delaunay_profile(0.2, 0.9, {1.0, 1.5}, 3), std::invalid_argument);      // beyond
}

TEST_CASE("integrated profile satisfies its equation on the dense grid") {
  auto prof = delaunay_profile(0.2, 0.3, {1.0, 1.6}, 3);
  CHECK(delaunay_ode_residual(prof) <= 1e-7);
  CHECK(prof.sqrt_clamp_events == 0);
}

TEST_CASE("profile jets agree with dense-output differences") {
  auto prof = delaunay_profile(0.25, 0.4, {1.0, 1.7}, 3);
  const double x0 = 1.3;
  auto jet = prof.profile.eval_jet(RJet::variable(1, 4, 0, x0));
  oracle::ScalarFn f = [&](const std::vector<double>& p) { return prof.profile.value(p[0]); };
  for (int order = 1; order <= 3; ++order) {
    const double ref = oracle::richardson_fd(f, {x0}, {order, 0, 0}, 5e-3);
    CHECK(partial(jet, MultiIndex(order)) == doctest::Approx(ref).epsilon(1e-5));
  }
}

TEST_CASE("composed curve-cylinder over the profile has the prescribed mean curvature") {
  const double H = 0.2, c0 = 0.3;
  const int n = 3;
  auto prof = delaunay_profile(H, c0, {1.0, 1.6}, n);
  // rotation about the composition axis: the height function along the chart
  // is the arclength parameter itself, so k(F_a) = c0 (1 + phi'(F_a)^2)
  Chart g = rotational_about_axis(prof.profile, "delaunay-axis");
  Chart F = cylinder_chart(g, n - 2, 1.0);
  ScalarJetFn curv = [prof, c0](const RJet& s) {
    const RJet phij = prof.profile.eval_jet(RJet::variable(1, s.order() + 1, 0, s.value()));
    const RJet dphi = derivative(phij, 0);
    const RJet klocal = (dphi * dphi + 1.0) * c0;
    std::vector<double> cc(klocal.size());
    for (int k = 0; k < klocal.size(); ++k) cc[k] = klocal[k];
    return compose_series(cc, s);
  };
  auto curve = plane_curve_from_curvature(curv, 0.9, 1.7, 2048);
  auto cd = compose_with_curve_cylinder(F, curve, 0);
  for (auto p : {std::vector<double>{1.1, 0.4, 0.2}, {1.3, -0.9, -0.5}, {1.5, 2.0, 0.8}}) {
    auto pc = cd.evaluate(p);
    CHECK(pc.mean_f == doctest::Approx(H).epsilon(1e-6));
    const double lhs = pc.mean_f * pc.mean_f - pc.mean_F * pc.mean_F;
    const double rhs = pc.curvature_at_height * pc.curvature_at_height *
                       std::pow(1.0 - pc.gauss_height * pc.gauss_height, 2) / double(n * n);
    CHECK(std::abs(lhs - rhs) <= 1e-8 * (1.0 + std::abs(lhs) + std::abs(rhs)));
  }
}

#include <doctest.h>

#include <nullitylab/osculating.hpp>
#include <nullitylab/weierstrass.hpp>

#include "oracles.hpp"

using namespace nlab;

namespace {
OsculatingFlag flag_at(const Chart& c, std::vector<double> p, int order = 4) {
  return osculating_flag(evaluate_tower(c, p, order), c.ambient);
}
}  // namespace

TEST_CASE("flag of a plane is empty; the round sphere has one rank-one stage") {
  auto fplane = flag_at(plane_chart(), {0.1, 0.4});
  CHECK(fplane.tau == 0);

  auto fsphere = flag_at(sphere_latlon_chart(), {0.3, 0.5});
  CHECK(fsphere.tau == 1);
  REQUIRE(fsphere.ranks.size() == 1);
  CHECK(fsphere.ranks[0] == 1);
}

TEST_CASE("flag of the orthogonal-sum surface has ranks (2,2)") {
  Chart hat = orthogonal_sum_hat(enneper_data(), 0.0, M_PI / 6.0);
  auto flag = osculating_flag_probed(hat, {0.2, -0.3}, 4);
  CHECK(flag.tau == 2);
  REQUIRE(flag.ranks.size() == 2);
  CHECK(flag.ranks[0] == 2);
  CHECK(flag.ranks[1] == 2);
  CHECK(flag.nicely_curved_ok);
  // stage bases are mutually orthogonal and normal to the tangent plane
  Eigen::MatrixXd all(flag.ff.m, 2 + 4);
  all.leftCols(2) = flag.ff.tangent_frame;
  all.block(0, 2, flag.ff.m, 2) = flag.bases[0];
  all.rightCols(2) = flag.bases[1];
  CHECK((all.transpose() * all - Eigen::MatrixXd::Identity(6, 6)).norm() <= 1e-9);
}

TEST_CASE("surface flags have stage ranks at most two, first normal space at most three") {
  for (const Chart& c : {saddle_chart(), catenoid_classic_chart(),
                         orthogonal_sum_hat(catenoid_data(), 0.4, M_PI / 3.0)}) {
    auto flag = flag_at(c, {0.15, -0.2});
    if (!flag.ranks.empty()) CHECK(flag.ranks[0] <= 3);
    for (int r : flag.ranks) CHECK(r <= 2);
  }
}

TEST_CASE("second fundamental form of the round sphere via higher_form is -Phi") {
  Chart sph = sphere_latlon_chart();
  auto tower = evaluate_tower(sph, {0.2, 0.7}, 3);
  auto flag = osculating_flag(tower, sph.ambient);
  Eigen::VectorXd z(2);
  z << std::cos(0.3), std::sin(0.3);
  Eigen::VectorXd a2 = higher_form(tower, flag, 2, z);
  CHECK((a2 + flag.ff.position).norm() <= 1e-9);
}

TEST_CASE("third form of a cylinder is the zero vector (flag depth exceeded)") {
  Chart cyl = circle_cylinder_chart();
  auto tower = evaluate_tower(cyl, {0.4, 0.2}, 3);
  auto flag = osculating_flag(tower, cyl.ambient);
  CHECK(flag.tau == 1);
  Eigen::VectorXd z(2);
  z << 1.0, 0.0;
  CHECK(higher_form(tower, flag, 3, z).norm() <= 1e-12);
}

TEST_CASE("ellipse radii on the orthogonal sum match the closed-form pattern") {
  // kappa^2 + mu^2 equals k^2 of the seed surface, and the defect is |cos 2phi|
  const double phi = M_PI / 6.0;
  auto data = enneper_data();
  Chart hat = orthogonal_sum_hat(data, 0.0, phi);
  auto seed = weierstrass_chart(data, 0.0);
  for (auto p : {std::vector<double>{0.0, 0.0}, {0.3, -0.4}, {-0.5, 0.2}}) {
    auto tower = evaluate_tower(hat, p, 4);
    auto flag = osculating_flag(tower, hat.ambient);
    auto e1 = curvature_ellipse(tower, flag, 1, EllipticStructure::rotation(), 16);
    const double k = seed.principal_curvature(p[0], p[1]);
    CHECK(e1.kappa * e1.kappa + e1.mu * e1.mu == doctest::Approx(k * k).epsilon(1e-8));
    CHECK(e1.circle_defect == doctest::Approx(std::abs(std::cos(2 * phi))).epsilon(1e-8));
    CHECK(e1.center_norm <= 1e-10 * k);
  }
}

TEST_CASE("tangent ellipse of a minimal chart is a circle") {
  auto ms = weierstrass_chart(catenoid_data(), 0.0);
  auto tower = evaluate_tower(ms.chart, {0.2, 0.3}, 3);
  auto flag = osculating_flag(tower, ms.chart.ambient);
  auto e0 = curvature_ellipse(tower, flag, 0, EllipticStructure::rotation(), 16);
  CHECK(e0.circle_defect <= 1e-8);
  CHECK(e0.kappa == doctest::Approx(1.0).epsilon(1e-10));  // unit directions, isometric push
}

TEST_CASE("second ellipse of the orthogonal sum is a circle for any phi") {
  for (double phi : {M_PI / 6.0, M_PI / 3.0, 0.9}) {
    Chart hat = orthogonal_sum_hat(enneper_data(), 0.2, phi);
    auto tower = evaluate_tower(hat, {0.25, 0.15}, 4);
    auto flag = osculating_flag(tower, hat.ambient);
    auto e2 = curvature_ellipse(tower, flag, 2, EllipticStructure::rotation(), 16);
    CHECK(e2.circle_defect <= 1e-6);
  }
}

TEST_CASE("isotropy defects reproduce |cos 2phi| at order two and vanish at order three") {
  auto run = [](double phi, int r) {
    Chart hat = orthogonal_sum_hat(enneper_data(), 0.0, phi);
    auto tower = evaluate_tower(hat, {0.3, -0.2}, 4);
    auto flag = osculating_flag(tower, hat.ambient);
    return isotropy_defect(tower, flag, r);
  };
  CHECK(run(M_PI / 6.0, 2) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(run(M_PI / 3.0, 2) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(run(M_PI / 6.0, 3) <= 1e-8);
  CHECK(run(M_PI / 3.0, 3) <= 1e-8);
  // the excluded circle case: phi = pi/4 makes the first ellipse circular
  CHECK(run(M_PI / 4.0, 2) <= 1e-8);
}

TEST_CASE("isotropy defect rejects non-conformal and non-minimal charts") {
  Chart sph = sphere_latlon_chart();
  auto tower = evaluate_tower(sph, {0.0, 0.4}, 3);
  auto flag = osculating_flag(tower, sph.ambient);
  CHECK_THROWS_AS(isotropy_defect(tower, flag, 2), hypothesis_violation);
}

TEST_CASE("SVD circle defect and isotropy defect agree at matching orders") {
  Chart hat = orthogonal_sum_hat(catenoid_data(), 0.1, 0.7);
  for (auto p : {std::vector<double>{0.1, 0.1}, {-0.3, 0.25}}) {
    auto tower = evaluate_tower(hat, p, 4);
    auto flag = osculating_flag(tower, hat.ambient);
    for (int ell : {1, 2}) {
      auto e = curvature_ellipse(tower, flag, ell, EllipticStructure::rotation(), 24);
      const double iso = isotropy_defect(tower, flag, ell + 1);
      CHECK(std::abs(e.circle_defect - iso) <= 2e-3);
    }
  }
}

TEST_CASE("ellipse summary does not depend on the starting direction") {
  Chart hat = orthogonal_sum_hat(enneper_data(), 0.0, M_PI / 6.0);
  auto tower = evaluate_tower(hat, {0.2, 0.2}, 4);
  auto flag = osculating_flag(tower, hat.ambient);
  auto base_sampler = [&](double theta) -> Eigen::VectorXd {
    Eigen::VectorXd z(2);
    z << std::cos(theta), std::sin(theta);
    return higher_form(tower, flag, 2, z);
  };
  auto e_base = detail::ellipse_from_sampler(base_sampler, 16, 1);
  for (double offset : {0.37, 1.1, 2.4}) {
    auto shifted = [&](double theta) { return base_sampler(theta + offset); };
    auto e_shift = detail::ellipse_from_sampler(shifted, 16, 1);
    CHECK(e_shift.kappa == doctest::Approx(e_base.kappa).epsilon(1e-8));
    CHECK(e_shift.mu == doctest::Approx(e_base.mu).epsilon(1e-8));
    CHECK(std::abs(e_shift.circle_defect - e_base.circle_defect) <= 1e-8);
  }
}

TEST_CASE("ellipticity defect: minimal surfaces pass, the round sphere is the control") {
  auto ms = weierstrass_chart(enneper_data(), 0.0);
  auto ff = fundamental_forms(evaluate_tower(ms.chart, {0.2, 0.5}, 2), ms.chart.ambient);
  CHECK(ellipticity_defect(ff, EllipticStructure::rotation()) <= 1e-8);

  auto ffs = fundamental_forms(evaluate_tower(sphere_latlon_chart(), {0.2, 0.3}, 2),
                               AmbientSpace::euclidean(3));
  CHECK(ellipticity_defect(ffs, EllipticStructure::rotation()) ==
        doctest::Approx(1.0).epsilon(1e-10));
}

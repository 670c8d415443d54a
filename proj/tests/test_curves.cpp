#include <doctest.h>

#include <nullitylab/curves.hpp>

#include "oracles.hpp"

using namespace nlab;

TEST_CASE("constant curvature one closes into the unit circle") {
  auto c = plane_curve_from_curvature(constant_curvature(1.0), 0.0, 2.0 * M_PI + 0.1, 4096);
  auto start = c.state_at(0.0);
  auto loop = c.state_at(2.0 * M_PI);
  CHECK((loop.pos - start.pos).norm() <= 1e-7);
  CHECK((loop.tan - start.tan).norm() <= 1e-7);
  // radius one around the center (0,1) with the left-normal convention
  auto mid = c.state_at(M_PI);
  CHECK((mid.pos - Eigen::Vector2d(0.0, 2.0)).norm() <= 1e-8);
}

TEST_CASE("zero curvature yields a straight line at unit speed") {
  auto c = plane_curve_from_curvature(constant_curvature(0.0), -1.0, 3.0, 512);
  for (double s : {-0.5, 0.0, 1.7, 2.9}) {
    auto st = c.state_at(s);
    CHECK(st.pos.x() == doctest::Approx(s + 1.0).epsilon(1e-12));
    CHECK(st.pos.y() == doctest::Approx(0.0));
    CHECK(st.tan.x() == doctest::Approx(1.0));
  }
}

TEST_CASE("unit-speed invariant holds along the clothoid") {
  auto c = plane_curve_from_curvature([](const RJet& s) { return s; }, 0.0, 2.0, 2048);
  for (double s : {0.3, 0.9, 1.5}) {
    auto st = c.state_at(s);
    CHECK(st.tan.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(st.tan.dot(st.nor)) <= 1e-12);
  }
}

TEST_CASE("clothoid curvature recovered from second differences matches k(s) = s") {
  auto c = plane_curve_from_curvature([](const RJet& s) { return s; }, 0.0, 2.0, 4096);
  const double h = 1e-4;
  for (double s : {0.4, 1.0, 1.6}) {
    const Eigen::Vector2d gpp =
        (c.state_at(s + h).pos - 2.0 * c.state_at(s).pos + c.state_at(s - h).pos) / (h * h);
    CHECK(gpp.norm() == doctest::Approx(s).epsilon(1e-6));
  }
}

TEST_CASE("position jets solve the Frenet system to high order") {
  auto c = plane_curve_from_curvature(
      [](const RJet& s) { return nlab::sin(s) * 0.5 + 1.0; }, 0.0, 3.0, 4096);
  const double s0 = 1.2;
  auto jets = c.position_jets(s0, 4);
  // compare against dense-output finite differences
  oracle::ScalarFn fx = [&](const std::vector<double>& p) { return c.state_at(p[0]).pos.x(); };
  oracle::ScalarFn fy = [&](const std::vector<double>& p) { return c.state_at(p[0]).pos.y(); };
  for (int order = 1; order <= 3; ++order) {
    std::array<int, 3> mi{order, 0, 0};
    const double rx = oracle::richardson_fd(fx, {s0}, mi, 1e-2);
    const double ry = oracle::richardson_fd(fy, {s0}, mi, 1e-2);
    CHECK(partial(jets[0], MultiIndex(order)) == doctest::Approx(rx).epsilon(1e-5));
    CHECK(partial(jets[1], MultiIndex(order)) == doctest::Approx(ry).epsilon(1e-5));
  }
  // first derivative is the unit tangent
  CHECK(std::hypot(partial(jets[0], MultiIndex(1)), partial(jets[1], MultiIndex(1))) ==
        doctest::Approx(1.0).epsilon(1e-10));
}

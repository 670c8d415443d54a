#include <doctest.h>

#include <nullitylab/jet.hpp>

#include "oracles.hpp"

using namespace nlab;

TEST_CASE("seeding places constants and unit first-order slots") {
  auto jets = seed_variables({2.0, 3.0}, {.dims = 2, .max_order = 2});
  CHECK(jets[0].value() == 2.0);
  CHECK(jets[1].value() == 3.0);
  CHECK(jets[0].coeff(MultiIndex(1, 0)) == 1.0);
  CHECK(jets[0].coeff(MultiIndex(0, 1)) == 0.0);
  CHECK(jets[1].coeff(MultiIndex(0, 1)) == 1.0);

  // degenerate order-0 seed: constant only, no derivative slots
  auto z = seed_variables({0.0}, {.dims = 1, .max_order = 0});
  CHECK(z[0].size() == 1);
  CHECK(z[0].value() == 0.0);

  CHECK_THROWS_AS(seed_variables({1.0}, {.dims = 2, .max_order = 2}), std::invalid_argument);
}

TEST_CASE("product of seeds matches the symbolic expansion of x*y") {
  auto jets = seed_variables({2.0, 3.0}, {.dims = 2, .max_order = 2});
  RJet p = jets[0] * jets[1];
  CHECK(p.value() == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(p.coeff(MultiIndex(1, 0)) == doctest::Approx(3.0));
  CHECK(p.coeff(MultiIndex(0, 1)) == doctest::Approx(2.0));
  CHECK(p.coeff(MultiIndex(1, 1)) == doctest::Approx(1.0));
  CHECK(p.coeff(MultiIndex(2, 0)) == doctest::Approx(0.0));
}

TEST_CASE("a - a is the zero jet") {
  auto jets = seed_variables({0.7, -1.3}, {.dims = 2, .max_order = 4});
  RJet a = nlab::sin(jets[0] * jets[1]) + jets[0];
  RJet z = a - a;
  for (int i = 0; i < z.size(); ++i) CHECK(z[i] == 0.0);
}

TEST_CASE("division reproduces the geometric series 1/(1-x)") {
  auto x = RJet::variable(1, 3, 0, 0.0);
  RJet one(1, 3, 1.0);
  RJet g = one / (one - x);
  for (int k = 0; k <= 3; ++k) CHECK(g[k] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(one / x, std::domain_error);
}

TEST_CASE("exp of the zero jet is one") {
  RJet z(2, 3, 0.0);
  RJet e = nlab::exp(z);
  CHECK(e.value() == 1.0);
  for (int i = 1; i < e.size(); ++i) CHECK(e[i] == 0.0);
}

TEST_CASE("sin seeded at pi/2 gives the 1 - dx^2/2 pattern") {
  auto x = RJet::variable(1, 2, 0, M_PI_2);
  RJet s = nlab::sin(x);
  CHECK(s.value() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.coeff(MultiIndex(1)) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(s.coeff(MultiIndex(2)) == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("sqrt(4 + x) has slope 1/4 from the binomial series") {
  auto x = RJet::variable(1, 3, 0, 0.0);
  RJet r = nlab::sqrt(x + 4.0);
  CHECK(r.value() == doctest::Approx(2.0));
  CHECK(r.coeff(MultiIndex(1)) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK_THROWS_AS(nlab::sqrt(x - 1.0), std::domain_error);
  CHECK_THROWS_AS(nlab::log(x), std::domain_error);
}

TEST_CASE("partial extraction rescales by the multi-index factorial") {
  auto jets = seed_variables({1.5, -0.5}, {.dims = 2, .max_order = 4});
  CHECK(partial(jets[0], MultiIndex(1, 0)) == 1.0);
  RJet f = jets[0] * jets[0] * jets[1];  // x^2 y
  CHECK(partial(f, MultiIndex(2, 1)) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(partial(f, MultiIndex(0, 0)) == doctest::Approx(1.5 * 1.5 * -0.5));
  CHECK_THROWS_AS(partial(f, MultiIndex(3, 3)), std::out_of_range);
}

TEST_CASE("elementary functions match central finite differences") {
  // first and second partials, step 1e-5, relative tolerance 1e-6
  struct Case {
    const char* name;
    std::function<RJet(const std::vector<RJet>&)> jet_fn;
    oracle::ScalarFn ref;
    std::vector<double> point;
  };
  const std::vector<Case> cases = {
      {"exp(x*y)",
       [](const std::vector<RJet>& v) { return nlab::exp(v[0] * v[1]); },
       [](const std::vector<double>& p) { return std::exp(p[0] * p[1]); },
       {0.4, -0.7}},
      {"sin(x)+cos(y)",
       [](const std::vector<RJet>& v) { return nlab::sin(v[0]) + nlab::cos(v[1]); },
       [](const std::vector<double>& p) { return std::sin(p[0]) + std::cos(p[1]); },
       {0.9, 0.3}},
      {"log(2+x)*sqrt(1+y*y)",
       [](const std::vector<RJet>& v) {
         return nlab::log(v[0] + 2.0) * nlab::sqrt(v[1] * v[1] + 1.0);
       },
       [](const std::vector<double>& p) {
         return std::log(2 + p[0]) * std::sqrt(1 + p[1] * p[1]);
       },
       {0.2, 1.1}},
      {"atan(x/(1+y^2))",
       [](const std::vector<RJet>& v) { return nlab::atan(v[0] / (v[1] * v[1] + 1.0)); },
       [](const std::vector<double>& p) { return std::atan(p[0] / (1 + p[1] * p[1])); },
       {0.8, -0.4}},
      {"pow_int(1+x+y,3)",
       [](const std::vector<RJet>& v) { return pow_int(v[0] + v[1] + 1.0, 3); },
       [](const std::vector<double>& p) { return std::pow(1 + p[0] + p[1], 3); },
       {0.25, 0.5}},
  };
  const std::array<std::array<int, 3>, 5> orders = {{{1, 0, 0}, {0, 1, 0}, {2, 0, 0}, {1, 1, 0}, {0, 2, 0}}};
  for (const auto& c : cases) {
    auto jets = seed_variables(c.point, {.dims = 2, .max_order = 2});
    RJet j = c.jet_fn(jets);
    for (const auto& mi : orders) {
      const double got = partial(j, MultiIndex(mi[0], mi[1], mi[2]));
      // step 1e-5 for first partials; second differences need a larger step
      // to stay above the double-precision roundoff floor
      const double h = (mi[0] + mi[1] > 1) ? 1e-4 : 1e-5;
      const double ref = oracle::central_fd(c.ref, c.point, mi, h);
      CHECK_MESSAGE(std::abs(got - ref) <= 1e-6 * std::max(std::abs(ref), 0.1), c.name);
    }
  }
}

TEST_CASE("ring axioms hold to rounding: a*(b+c) = a*b + a*c") {
  for (int trial = 0; trial < 20; ++trial) {
    auto mk = [&] {
      RJet j(3, 4);
      for (int i = 0; i < j.size(); ++i) j[i] = oracle::uniform(-2.0, 2.0);
      return j;
    };
    RJet a = mk(), b = mk(), c = mk();
    RJet lhs = a * (b + c);
    RJet rhs = a * b + a * c;
    for (int i = 0; i < lhs.size(); ++i)
      CHECK(std::abs(lhs[i] - rhs[i]) <= 1e-12 * (std::abs(lhs[i]) + 1.0));
  }
}

TEST_CASE("complex jets with zero imaginary parts reproduce the real path bit-for-bit") {
  auto xs = seed_variables({0.8, -0.35}, {.dims = 2, .max_order = 4});
  RJet rr = nlab::exp(xs[0] * xs[1]) / (xs[0] + 3.0) + nlab::sin(xs[1]) * xs[0];
  CJet cx = complexify(xs[0]);
  CJet cy = complexify(xs[1]);
  CJet cc = nlab::exp(cx * cy) / (cx + std::complex<double>(3.0)) +
            nlab::sin(cy) * cx;
  for (int i = 0; i < rr.size(); ++i) {
    CHECK(cc[i].imag() == 0.0);
    CHECK(cc[i].real() == rr[i]);
  }
}

TEST_CASE("derivative jets shift coefficients consistently") {
  auto jets = seed_variables({0.3, 0.6}, {.dims = 2, .max_order = 4});
  RJet f = nlab::sin(jets[0]) * nlab::exp(jets[1]);
  RJet fu = derivative(f, 0);
  CHECK(fu.order() == 3);
  CHECK(fu.value() == doctest::Approx(std::cos(0.3) * std::exp(0.6)).epsilon(1e-14));
  CHECK(partial(fu, MultiIndex(1, 1)) ==
        doctest::Approx(partial(f, MultiIndex(2, 1))).epsilon(1e-13));
}

TEST_CASE("embed_vars preserves coefficients under variable relabeling") {
  auto jets = seed_variables({1.2, 0.4}, {.dims = 2, .max_order = 3});
  RJet f = jets[0] * jets[0] * jets[1];
  RJet g = embed_vars(f, 3, {0, 2, 0});
  CHECK(g.dims() == 3);
  CHECK(partial(g, MultiIndex(2, 0, 1)) == doctest::Approx(partial(f, MultiIndex(2, 1))));
  CHECK(partial(g, MultiIndex(0, 1, 0)) == 0.0);
}

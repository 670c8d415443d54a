#pragma once

// Truncated multivariate Taylor arithmetic in 1..3 real variables.
//
// A Jet stores the Taylor coefficients c_alpha = d^alpha f / alpha! of a
// scalar function about a base point, dense up to a truncation order K.
// Storing the 1/alpha!-scaled coefficients makes multiplication a plain
// convolution over multi-indices; partial() rescales on the way out.
// Complex coefficients share the same arithmetic core (Scalar = complex).

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlab {

inline constexpr int kMaxVars = 3;
inline constexpr int kMaxJetOrder = 8;

struct MultiIndex {
  std::array<int, kMaxVars> e{0, 0, 0};

  MultiIndex() = default;
  MultiIndex(int a, int b = 0, int c = 0) : e{a, b, c} {}

  int order() const { return e[0] + e[1] + e[2]; }
  double factorial() const {
    double f = 1.0;
    for (int k = 0; k < kMaxVars; ++k)
      for (int j = 2; j <= e[k]; ++j) f *= j;
    return f;
  }
};

struct JetBudget {
  int dims = 2;
  int max_order = 5;
};

namespace detail {

// Dense enumeration of multi-indices with |alpha| <= order in graded
// lexicographic order, plus rank lookup and the multiplication table.
struct JetLayout {
  int dims = 1;
  int order = 0;
  int count = 0;
  std::vector<std::array<int, 3>> exps;
  std::vector<int> rank_table;  // packed exponents -> linear index
  struct ProdEntry {
    int ia, ib, iout;
  };
  std::vector<ProdEntry> prod;

  int pack(int a, int b, int c) const {
    const int s = order + 1;
    return a + s * (b + s * c);
  }
  int rank(const std::array<int, 3>& x) const {
    return rank_table[pack(x[0], x[1], x[2])];
  }

  static const JetLayout& get(int dims, int order);
};

inline JetLayout build_layout(int dims, int order) {
  JetLayout L;
  L.dims = dims;
  L.order = order;
  const int s = order + 1;
  L.rank_table.assign(s * s * s, -1);
  for (int total = 0; total <= order; ++total) {
    // lexicographic within each total degree, leading variable first
    if (dims == 1) {
      L.exps.push_back({total, 0, 0});
    } else if (dims == 2) {
      for (int a = total; a >= 0; --a) L.exps.push_back({a, total - a, 0});
    } else {
      for (int a = total; a >= 0; --a)
        for (int b = total - a; b >= 0; --b) L.exps.push_back({a, b, total - a - b});
    }
  }
  L.count = static_cast<int>(L.exps.size());
  for (int i = 0; i < L.count; ++i)
    L.rank_table[L.pack(L.exps[i][0], L.exps[i][1], L.exps[i][2])] = i;
  for (int ia = 0; ia < L.count; ++ia) {
    const auto& A = L.exps[ia];
    const int oa = A[0] + A[1] + A[2];
    for (int ib = 0; ib < L.count; ++ib) {
      const auto& B = L.exps[ib];
      if (oa + B[0] + B[1] + B[2] > order) continue;
      L.prod.push_back({ia, ib, L.rank({A[0] + B[0], A[1] + B[1], A[2] + B[2]})});
    }
  }
  return L;
}

inline const JetLayout& JetLayout::get(int dims, int order) {
  if (dims < 1 || dims > kMaxVars) throw std::invalid_argument("jet dims must be 1..3");
  if (order < 0 || order > kMaxJetOrder) throw std::invalid_argument("jet order out of range");
  static const std::vector<JetLayout> all = [] {
    std::vector<JetLayout> v;
    v.reserve(kMaxVars * (kMaxJetOrder + 1));
    for (int d = 1; d <= kMaxVars; ++d)
      for (int k = 0; k <= kMaxJetOrder; ++k) v.push_back(build_layout(d, k));
    return v;
  }();
  return all[(dims - 1) * (kMaxJetOrder + 1) + order];
}

template <class S>
struct scalar_traits {
  static double abs(const S& x) { return std::abs(x); }
  static bool is_zero(const S& x) { return x == S{}; }
};

}  // namespace detail

template <class Scalar>
class Jet {
 public:
  Jet() : lay_(&detail::JetLayout::get(1, 0)), c_(1, Scalar{}) {}

  Jet(int dims, int order, Scalar constant = Scalar{})
      : lay_(&detail::JetLayout::get(dims, order)), c_(lay_->count, Scalar{}) {
    c_[0] = constant;
  }

  static Jet variable(int dims, int order, int var, Scalar value) {
    if (var < 0 || var >= dims) throw std::invalid_argument("variable index out of range");
    Jet j(dims, order, value);
    if (order >= 1) {
      std::array<int, 3> e{0, 0, 0};
      e[var] = 1;
      j.c_[j.lay_->rank(e)] = Scalar(1);
    }
    return j;
  }

  int dims() const { return lay_->dims; }
  int order() const { return lay_->order; }
  int size() const { return lay_->count; }
  Scalar value() const { return c_[0]; }

  Scalar& operator[](int i) { return c_[i]; }
  const Scalar& operator[](int i) const { return c_[i]; }
  const std::vector<Scalar>& coeffs() const { return c_; }
  const std::array<int, 3>& exponents(int i) const { return lay_->exps[i]; }

  Scalar coeff(const MultiIndex& mi) const {
    if (mi.order() > order()) throw std::out_of_range("multi-index order exceeds jet order");
    for (int k = dims(); k < kMaxVars; ++k)
      if (mi.e[k] != 0) throw std::invalid_argument("multi-index uses variable beyond jet dims");
    return c_[lay_->rank(mi.e)];
  }

  Jet& operator+=(const Jet& o) {
    check_same(o);
    for (int i = 0; i < size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    check_same(o);
    for (int i = 0; i < size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Jet& operator+=(Scalar s) {
    c_[0] += s;
    return *this;
  }
  Jet& operator-=(Scalar s) {
    c_[0] -= s;
    return *this;
  }
  Jet& operator*=(Scalar s) {
    for (auto& x : c_) x *= s;
    return *this;
  }
  Jet& operator/=(Scalar s) {
    for (auto& x : c_) x /= s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, Scalar s) { return a += s; }
  friend Jet operator+(Scalar s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, Scalar s) { return a -= s; }
  friend Jet operator-(Scalar s, const Jet& a) { return -a + s; }
  friend Jet operator*(Jet a, Scalar s) { return a *= s; }
  friend Jet operator*(Scalar s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, Scalar s) { return a /= s; }

  Jet operator-() const {
    Jet r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }

  friend Jet operator*(const Jet& a, const Jet& b) {
    a.check_same(b);
    Jet r(a.dims(), a.order());
    for (const auto& t : a.lay_->prod) r.c_[t.iout] += a.c_[t.ia] * b.c_[t.ib];
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
  friend Jet operator/(Scalar s, const Jet& b) { return reciprocal(b) * s; }

  // 1/b by the geometric series about the constant term.
  friend Jet reciprocal(const Jet& b) {
    if (detail::scalar_traits<Scalar>::is_zero(b.value()))
      throw std::domain_error("jet division by zero constant term");
    const Scalar b0 = b.value();
    Jet u = b;
    u.c_[0] = Scalar{};
    u *= Scalar(-1) / b0;  // u = -(b - b0)/b0
    Jet acc(b.dims(), b.order(), Scalar(1));
    for (int k = 0; k < b.order(); ++k) {
      acc = acc * u;
      acc.c_[0] += Scalar(1);
    }
    return acc / b0;
  }

  void check_same(const Jet& o) const {
    if (lay_ != o.lay_) throw std::invalid_argument("jet dims/order mismatch");
  }

 private:
  const detail::JetLayout* lay_;
  std::vector<Scalar> c_;
};

using RJet = Jet<double>;
using CJet = Jet<std::complex<double>>;

inline std::vector<RJet> seed_variables(const std::vector<double>& point, const JetBudget& budget) {
  if (static_cast<int>(point.size()) != budget.dims)
    throw std::invalid_argument("point dimension does not match budget dims");
  std::vector<RJet> out;
  out.reserve(point.size());
  for (int i = 0; i < budget.dims; ++i)
    out.push_back(RJet::variable(budget.dims, budget.max_order, i, point[i]));
  return out;
}

// d^mi f, i.e. the raw partial derivative (coefficient rescaled by mi!).
template <class S>
S partial(const Jet<S>& a, const MultiIndex& mi) {
  return a.coeff(mi) * S(mi.factorial());
}

// Jet of df/dx_var, one order lower.
template <class S>
Jet<S> derivative(const Jet<S>& a, int var) {
  if (a.order() < 1) throw std::invalid_argument("cannot differentiate an order-0 jet");
  if (var < 0 || var >= a.dims()) throw std::invalid_argument("variable index out of range");
  Jet<S> r(a.dims(), a.order() - 1);
  const auto& lay = detail::JetLayout::get(a.dims(), a.order());
  for (int i = 0; i < r.size(); ++i) {
    std::array<int, 3> e = r.exponents(i);
    e[var] += 1;
    r[i] = a[lay.rank(e)] * S(e[var]);
  }
  return r;
}

// Re-expresses a jet in a larger variable space: variable i of `a` becomes
// variable var_map[i] of the result. Valid when the new variables are
// independent seeds, as in chart towers.
template <class S>
Jet<S> embed_vars(const Jet<S>& a, int new_dims, const std::array<int, 3>& var_map) {
  Jet<S> r(new_dims, a.order());
  const auto& lay = detail::JetLayout::get(new_dims, a.order());
  for (int i = 0; i < a.size(); ++i) {
    const auto& e = a.exponents(i);
    std::array<int, 3> ne{0, 0, 0};
    for (int k = 0; k < a.dims(); ++k) ne[var_map[k]] += e[k];
    r[lay.rank(ne)] = a[i];
  }
  return r;
}

// Univariate Taylor composition: given coefficients c[k] = f^(k)(a0)/k!
// of a scalar function about a0 = a.value(), returns the jet of f(a).
template <class S>
Jet<S> compose_series(const std::vector<S>& c, const Jet<S>& a) {
  Jet<S> s = a;
  s[0] = S{};
  const int K = a.order();
  Jet<S> r(a.dims(), a.order(), K < static_cast<int>(c.size()) ? c[K] : S{});
  for (int k = K - 1; k >= 0; --k) {
    r = r * s;
    if (k < static_cast<int>(c.size())) r[0] += c[k];
  }
  return r;
}

namespace detail {
template <class S>
void require_real_domain(const char* fn, bool ok) {
  if (!ok) throw std::domain_error(std::string(fn) + ": argument outside function domain");
}
}  // namespace detail

template <class S>
Jet<S> exp(const Jet<S>& a) {
  std::vector<S> c(a.order() + 1);
  c[0] = std::exp(a.value());
  for (int k = 1; k <= a.order(); ++k) c[k] = c[k - 1] / S(k);
  return compose_series(c, a);
}

template <class S>
Jet<S> log(const Jet<S>& a) {
  if constexpr (std::is_floating_point_v<S>)
    detail::require_real_domain<S>("log", a.value() > 0);
  else
    detail::require_real_domain<S>("log", std::abs(a.value()) > 0);
  std::vector<S> c(a.order() + 1);
  c[0] = std::log(a.value());
  S p = S(1);
  for (int k = 1; k <= a.order(); ++k) {
    p = (k == 1) ? S(1) / a.value() : -p / a.value();
    c[k] = p / S(k);
  }
  return compose_series(c, a);
}

template <class S>
Jet<S> sqrt(const Jet<S>& a) {
  if constexpr (std::is_floating_point_v<S>)
    detail::require_real_domain<S>("sqrt", a.value() > 0);
  else
    detail::require_real_domain<S>("sqrt", std::abs(a.value()) > 0);
  std::vector<S> c(a.order() + 1);
  const S s0 = std::sqrt(a.value());
  S binom = S(1);
  S pw = S(1);
  c[0] = s0;
  for (int k = 1; k <= a.order(); ++k) {
    binom *= (S(0.5) - S(k - 1)) / S(k);
    pw /= a.value();
    c[k] = s0 * binom * pw;
  }
  return compose_series(c, a);
}

template <class S>
Jet<S> sin(const Jet<S>& a) {
  std::vector<S> c(a.order() + 1);
  const S sn = std::sin(a.value()), cs = std::cos(a.value());
  const S cycle[4] = {sn, cs, -sn, -cs};
  S invfact = S(1);
  for (int k = 0; k <= a.order(); ++k) {
    if (k > 0) invfact /= S(k);
    c[k] = cycle[k % 4] * invfact;
  }
  return compose_series(c, a);
}

template <class S>
Jet<S> cos(const Jet<S>& a) {
  std::vector<S> c(a.order() + 1);
  const S sn = std::sin(a.value()), cs = std::cos(a.value());
  const S cycle[4] = {cs, -sn, -cs, sn};
  S invfact = S(1);
  for (int k = 0; k <= a.order(); ++k) {
    if (k > 0) invfact /= S(k);
    c[k] = cycle[k % 4] * invfact;
  }
  return compose_series(c, a);
}

// Coefficients from (1 + x^2) d/dx atan(x) = 1 applied along the shifted series.
template <class S>
Jet<S> atan(const Jet<S>& a) {
  const int K = a.order();
  std::vector<S> c(K + 1);
  const S a0 = a.value();
  const S q = S(1) + a0 * a0;
  if (detail::scalar_traits<S>::is_zero(q)) throw std::domain_error("atan: pole at argument");
  c[0] = std::atan(a0);
  if (K >= 1) c[1] = S(1) / q;
  for (int m = 1; m + 1 <= K; ++m)
    c[m + 1] = -(S(2) * a0 * S(m) * c[m] + S(m - 1) * c[m - 1]) / (q * S(m + 1));
  return compose_series(c, a);
}

template <class S>
Jet<S> pow_int(const Jet<S>& a, int n) {
  if (n == 0) return Jet<S>(a.dims(), a.order(), S(1));
  const bool neg = n < 0;
  unsigned e = neg ? static_cast<unsigned>(-static_cast<long>(n)) : static_cast<unsigned>(n);
  Jet<S> base = a;
  Jet<S> r(a.dims(), a.order(), S(1));
  while (e) {
    if (e & 1u) r = r * base;
    e >>= 1u;
    if (e) base = base * base;
  }
  return neg ? reciprocal(r) : r;
}

inline CJet complexify(const RJet& re, const RJet& im) {
  re.check_same(im);
  CJet r(re.dims(), re.order());
  for (int i = 0; i < re.size(); ++i) r[i] = {re[i], im[i]};
  return r;
}

inline CJet complexify(const RJet& re) {
  CJet r(re.dims(), re.order());
  for (int i = 0; i < re.size(); ++i) r[i] = {re[i], 0.0};
  return r;
}

inline RJet real_part(const CJet& a) {
  RJet r(a.dims(), a.order());
  for (int i = 0; i < a.size(); ++i) r[i] = a[i].real();
  return r;
}

inline RJet imag_part(const CJet& a) {
  RJet r(a.dims(), a.order());
  for (int i = 0; i < a.size(); ++i) r[i] = a[i].imag();
  return r;
}

}  // namespace nlab

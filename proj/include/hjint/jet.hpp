// SPDX-License-Identifier: MIT
//
// Truncated multivariate power series ("jets") with a joint total-degree cap.
//
// A Jet represents a polynomial in the variables (t, u_1..u_m) around an
// expansion center, keeping every monomial of total degree <= degree_cap.
// By convention variable 0 is the time-like variable t and variables 1..m
// are the chart variables u.  Jets are the universal scalar of this library:
// the same chart/Hamiltonian expressions run on plain doubles (real
// evaluation) and on Jets (series expansion, exact derivatives).
//
// Coefficients are stored densely over all multi-indices of total degree
// <= degree_cap, ordered by total degree and lexicographically within a
// degree.  Because the grading bounds which coefficient pairs can interact,
// products walk a precomputed ragged "product rank" table; for the sizes
// used here (num_vars <= 8, caps <= 10) a full product costs a few 10^4
// fused multiply-adds.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hjint/error.hpp"

namespace hjint {

// Divisors whose constant term is smaller than this are treated as singular.
inline constexpr double kSingularDivisionThreshold = 1e-13;

// Immutable index bookkeeping shared by all Jets of one (num_vars,
// degree_cap) shape.  Instances are interned: Jets of the same shape point
// at the same layout, so shape compatibility is a pointer comparison.
class JetLayout {
 public:
  static constexpr int kMaxVars = 8;
  using Exponents = std::array<std::uint8_t, kMaxVars>;

  static const JetLayout& get(int num_vars, int degree_cap) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::unique_ptr<const JetLayout>>
        registry;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = registry[{num_vars, degree_cap}];
    if (!slot) slot.reset(new JetLayout(num_vars, degree_cap));
    return *slot;
  }

  int num_vars() const { return num_vars_; }
  int degree_cap() const { return degree_cap_; }
  int size() const { return static_cast<int>(exps_.size()); }
  const Exponents& exponents(int rank) const { return exps_[rank]; }
  int degree(int rank) const { return degree_[rank]; }
  // Number of ranks with total degree <= deg (ranks are graded, so these
  // form a prefix).
  int rank_limit(int deg) const {
    if (deg < 0) return 0;
    return rank_limit_[deg > degree_cap_ ? degree_cap_ : deg];
  }
  // Rank of the given exponent vector, or -1 if its degree exceeds the cap.
  int rank_of(const Exponents& e) const {
    auto it = rank_map_.find(pack(e));
    return it == rank_map_.end() ? -1 : it->second;
  }
  // Product table row for `rank`: entry j is the rank of exps_[rank] +
  // exps_[j], valid for j < rank_limit(degree_cap - degree(rank)).
  const std::uint32_t* product_row(int rank) const {
    return prod_.data() + row_offset_[rank];
  }

 private:
  JetLayout(int num_vars, int degree_cap)
      : num_vars_(num_vars), degree_cap_(degree_cap) {
    if (num_vars < 1 || num_vars > kMaxVars)
      throw Error("jet layout: num_vars must be in [1, " +
                  std::to_string(kMaxVars) + "]");
    if (degree_cap < 0) throw Error("jet layout: negative degree_cap");
    // Enumerate multi-indices grouped by total degree, lexicographic within
    // a degree; the ordering is part of the on-disk/test-visible contract
    // only via exponents(), never via raw rank numbers.
    Exponents e{};
    rank_limit_.resize(degree_cap + 1);
    for (int d = 0; d <= degree_cap; ++d) {
      enumerate(e, 0, d);
      rank_limit_[d] = static_cast<int>(exps_.size());
    }
    rank_map_.reserve(exps_.size() * 2);
    for (int r = 0; r < size(); ++r) rank_map_.emplace(pack(exps_[r]), r);
    row_offset_.resize(size());
    std::size_t total = 0;
    for (int r = 0; r < size(); ++r) {
      row_offset_[r] = total;
      total += rank_limit(degree_cap_ - degree_[r]);
    }
    prod_.resize(total);
    for (int i = 0; i < size(); ++i) {
      const int jmax = rank_limit(degree_cap_ - degree_[i]);
      for (int j = 0; j < jmax; ++j) {
        Exponents sum{};
        for (int v = 0; v < num_vars_; ++v)
          sum[v] = static_cast<std::uint8_t>(exps_[i][v] + exps_[j][v]);
        prod_[row_offset_[i] + j] = static_cast<std::uint32_t>(
            rank_map_.at(pack(sum)));
      }
    }
  }

  void enumerate(Exponents& e, int var, int remaining) {
    if (var == num_vars_ - 1) {
      e[var] = static_cast<std::uint8_t>(remaining);
      exps_.push_back(e);
      degree_.push_back(sum_degree(e));
      e[var] = 0;
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      e[var] = static_cast<std::uint8_t>(k);
      enumerate(e, var + 1, remaining - k);
    }
    e[var] = 0;
  }

  int sum_degree(const Exponents& e) const {
    int d = 0;
    for (int v = 0; v < num_vars_; ++v) d += e[v];
    return d;
  }

  static std::uint64_t pack(const Exponents& e) {
    std::uint64_t key = 0;
    for (int v = 0; v < kMaxVars; ++v)
      key |= static_cast<std::uint64_t>(e[v]) << (8 * v);
    return key;
  }

  int num_vars_;
  int degree_cap_;
  std::vector<Exponents> exps_;
  std::vector<int> degree_;
  std::vector<int> rank_limit_;
  std::unordered_map<std::uint64_t, int> rank_map_;
  std::vector<std::uint32_t> prod_;
  std::vector<std::size_t> row_offset_;
};

class Jet {
 public:
  static Jet constant(double value, int num_vars, int degree_cap) {
    Jet j(JetLayout::get(num_vars, degree_cap));
    j.c_[0] = value;
    return j;
  }

  // base_value + (x_index - center): constant term base_value, coefficient 1
  // on the unit multi-index of `index` (dropped when degree_cap = 0).
  static Jet variable(int index, double base_value, int num_vars,
                      int degree_cap) {
    if (index < 0 || index >= num_vars)
      throw Error("jet_variable: index out of range");
    Jet j = constant(base_value, num_vars, degree_cap);
    if (degree_cap >= 1) {
      JetLayout::Exponents e{};
      e[index] = 1;
      j.c_[j.layout_->rank_of(e)] = 1.0;
    }
    return j;
  }

  int num_vars() const { return layout_->num_vars(); }
  int degree_cap() const { return layout_->degree_cap(); }
  const JetLayout& layout() const { return *layout_; }
  const std::vector<double>& coefficients() const { return c_; }
  double constant_term() const { return c_[0]; }

  // Coefficient of the monomial with the given exponents (0 if the degree
  // exceeds the cap).
  double coeff(std::span<const int> exponents) const {
    if (static_cast<int>(exponents.size()) != num_vars())
      throw Error("jet coeff: exponent count does not match num_vars");
    JetLayout::Exponents e{};
    int deg = 0;
    for (int v = 0; v < num_vars(); ++v) {
      if (exponents[v] < 0) throw Error("jet coeff: negative exponent");
      e[v] = static_cast<std::uint8_t>(exponents[v]);
      deg += exponents[v];
    }
    if (deg > degree_cap()) return 0.0;
    return c_[layout_->rank_of(e)];
  }
  double coeff(std::initializer_list<int> exponents) const {
    return coeff(std::span<const int>(exponents.begin(), exponents.size()));
  }

  // Overwrites one coefficient; unlike the getter, exponents beyond the
  // degree cap are an error rather than an implicit zero.
  void set_coeff(std::span<const int> exponents, double value) {
    if (static_cast<int>(exponents.size()) != num_vars())
      throw Error("jet set_coeff: exponent count does not match num_vars");
    JetLayout::Exponents e{};
    for (int v = 0; v < num_vars(); ++v) {
      if (exponents[v] < 0) throw Error("jet set_coeff: negative exponent");
      e[v] = static_cast<std::uint8_t>(exponents[v]);
    }
    const int rank = layout_->rank_of(e);
    if (rank < 0) throw Error("jet set_coeff: exponents exceed degree cap");
    c_[rank] = value;
  }
  void set_coeff(std::initializer_list<int> exponents, double value) {
    set_coeff(std::span<const int>(exponents.begin(), exponents.size()),
              value);
  }

  Jet truncated(int new_cap) const {
    if (new_cap < 0) throw Error("jet truncated: negative cap");
    Jet out(JetLayout::get(num_vars(), new_cap));
    const int copy = layout_->rank_limit(new_cap < degree_cap() ? new_cap
                                                                : degree_cap());
    // Graded enumeration is identical across caps, so ranks transfer.
    for (int r = 0; r < copy; ++r) out.c_[r] = c_[r];
    return out;
  }

  Jet operator-() const {
    Jet out(*layout_);
    for (int r = 0; r < layout_->size(); ++r) out.c_[r] = -c_[r];
    return out;
  }

  friend Jet operator+(const Jet& a, const Jet& b) {
    a.check_shape(b);
    Jet out = a;
    for (int r = 0; r < a.layout_->size(); ++r) out.c_[r] += b.c_[r];
    return out;
  }
  friend Jet operator-(const Jet& a, const Jet& b) {
    a.check_shape(b);
    Jet out = a;
    for (int r = 0; r < a.layout_->size(); ++r) out.c_[r] -= b.c_[r];
    return out;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    a.check_shape(b);
    const JetLayout& L = *a.layout_;
    Jet out(L);
    for (int i = 0; i < L.size(); ++i) {
      const double ai = a.c_[i];
      if (ai == 0.0) continue;
      const std::uint32_t* row = L.product_row(i);
      const int jmax = L.rank_limit(L.degree_cap() - L.degree(i));
      for (int j = 0; j < jmax; ++j) {
        const double bj = b.c_[j];
        if (bj != 0.0) out.c_[row[j]] += ai * bj;
      }
    }
    return out;
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    a.check_shape(b);
    Jet out = a * b.reciprocal();
    // Make the constant term the directly rounded quotient so that degree-0
    // jet arithmetic is bit-for-bit identical to plain double arithmetic.
    out.c_[0] = a.c_[0] / b.c_[0];
    return out;
  }

  friend Jet operator+(const Jet& a, double s) {
    Jet out = a;
    out.c_[0] += s;
    return out;
  }
  friend Jet operator+(double s, const Jet& a) { return a + s; }
  friend Jet operator-(const Jet& a, double s) { return a + (-s); }
  friend Jet operator-(double s, const Jet& a) { return (-a) + s; }
  friend Jet operator*(const Jet& a, double s) {
    Jet out(*a.layout_);
    for (int r = 0; r < a.layout_->size(); ++r) out.c_[r] = a.c_[r] * s;
    return out;
  }
  friend Jet operator*(double s, const Jet& a) { return a * s; }
  friend Jet operator/(const Jet& a, double s) {
    Jet out(*a.layout_);
    for (int r = 0; r < a.layout_->size(); ++r) out.c_[r] = a.c_[r] / s;
    return out;
  }
  friend Jet operator/(double s, const Jet& a) {
    Jet out = a.reciprocal() * s;
    out.c_[0] = s / a.c_[0];
    return out;
  }

  // 1/this via the geometric series 1/(c+h) = (1/c) sum_k (-h/c)^k with h
  // the nilpotent part; exact up to the cap because h^(cap+1) truncates away.
  Jet reciprocal() const {
    const double c0 = c_[0];
    if (std::abs(c0) < kSingularDivisionThreshold)
      throw SingularDivision(
          "jet division: divisor constant term below 1e-13");
    Jet h = *this;
    h.c_[0] = 0.0;
    const Jet mt = h * (-1.0 / c0);  // -h/c
    Jet acc = Jet::constant(1.0, num_vars(), degree_cap());
    Jet power = acc;
    for (int k = 0; k < degree_cap(); ++k) {
      power = power * mt;
      acc = acc + power;
    }
    return acc * (1.0 / c0);
  }

  // Formal partial derivative; top-degree information is lost (the result
  // has no coefficients of degree >= degree_cap by construction).
  Jet partial(int var) const {
    if (var < 0 || var >= num_vars())
      throw Error("jet_partial: var out of range");
    const JetLayout& L = *layout_;
    Jet out(L);
    for (int r = 0; r < L.size(); ++r) {
      const double cr = c_[r];
      if (cr == 0.0) continue;
      const JetLayout::Exponents& e = L.exponents(r);
      if (e[var] == 0) continue;
      JetLayout::Exponents d = e;
      d[var] = static_cast<std::uint8_t>(d[var] - 1);
      out.c_[L.rank_of(d)] += cr * e[var];
    }
    return out;
  }

  // Polynomial evaluation at center + offsets.
  double eval(std::span<const double> offsets) const {
    if (static_cast<int>(offsets.size()) != num_vars())
      throw Error("jet_eval: offsets length does not match num_vars");
    const JetLayout& L = *layout_;
    // Power table: pows[v][e] = offsets[v]^e.
    std::array<std::array<double, 16>, JetLayout::kMaxVars> pows;
    for (int v = 0; v < num_vars(); ++v) {
      pows[v][0] = 1.0;
      for (int e = 1; e <= degree_cap(); ++e)
        pows[v][e] = pows[v][e - 1] * offsets[v];
    }
    double total = 0.0;
    for (int r = 0; r < L.size(); ++r) {
      const double cr = c_[r];
      if (cr == 0.0) continue;
      const JetLayout::Exponents& e = L.exponents(r);
      double term = cr;
      for (int v = 0; v < num_vars(); ++v)
        if (e[v] != 0) term *= pows[v][e[v]];
      total += term;
    }
    return total;
  }
  double eval(std::initializer_list<double> offsets) const {
    return eval(std::span<const double>(offsets.begin(), offsets.size()));
  }

  // sin and cos of the series, expanded around the constant term g0:
  //   sin(g0+h) = sin(g0) cos(h) + cos(g0) sin(h),
  //   cos(g0+h) = cos(g0) cos(h) - sin(g0) sin(h),
  // with sin(h), cos(h) finite Maclaurin sums in the nilpotent part h.
  std::pair<Jet, Jet> sin_cos() const {
    const double g0 = c_[0];
    const double s0 = std::sin(g0);
    const double c0 = std::cos(g0);
    Jet h = *this;
    h.c_[0] = 0.0;
    Jet sinh_part = Jet::constant(0.0, num_vars(), degree_cap());
    Jet cosh_part = Jet::constant(1.0, num_vars(), degree_cap());
    Jet term = cosh_part;  // h^k / k!
    for (int k = 1; k <= degree_cap(); ++k) {
      term = term * h / static_cast<double>(k);
      switch (k % 4) {
        case 1: sinh_part = sinh_part + term; break;
        case 2: cosh_part = cosh_part - term; break;
        case 3: sinh_part = sinh_part - term; break;
        default: cosh_part = cosh_part + term; break;
      }
    }
    return {sinh_part * c0 + cosh_part * s0, cosh_part * c0 - sinh_part * s0};
  }

 private:
  explicit Jet(const JetLayout& layout)
      : layout_(&layout), c_(layout.size(), 0.0) {}

  void check_shape(const Jet& other) const {
    if (layout_ != other.layout_)
      throw Error("jet arithmetic: operands have different shapes");
  }

  const JetLayout* layout_;
  std::vector<double> c_;
};

// Contract-style free-function spellings.
inline Jet jet_variable(int index, double base_value, int num_vars,
                        int degree_cap) {
  return Jet::variable(index, base_value, num_vars, degree_cap);
}
inline Jet jet_add(const Jet& a, const Jet& b) { return a + b; }
inline Jet jet_sub(const Jet& a, const Jet& b) { return a - b; }
inline Jet jet_mul(const Jet& a, const Jet& b) { return a * b; }
inline Jet jet_div(const Jet& a, const Jet& b) { return a / b; }
inline Jet jet_partial(const Jet& a, int var) { return a.partial(var); }
inline double jet_eval(const Jet& a, std::span<const double> offsets) {
  return a.eval(offsets);
}
inline std::pair<Jet, Jet> jet_sin_cos(const Jet& a) { return a.sin_cos(); }

// Unqualified sin/cos/abs resolve for both doubles and Jets inside generic
// chart and Hamiltonian expressions.
using std::abs;
using std::cos;
using std::sin;
inline Jet sin(const Jet& a) { return a.sin_cos().first; }
inline Jet cos(const Jet& a) { return a.sin_cos().second; }

}  // namespace hjint

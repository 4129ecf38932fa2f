#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

namespace subriem {

// Dense truncated Taylor arithmetic in nv variables up to total order ord,
// centered at a configurable point. Supports division by series with nonzero
// constant term, which keeps kernel-field constructions exact.
class TaylorH {
public:
  struct Layout {
    int nv = 0, ord = 0;
    std::vector<std::vector<int>> expo;    // rank -> exponents
    std::map<uint64_t, int> rank;          // packed exponents -> rank
    std::vector<int> degree;               // rank -> total degree
    static std::shared_ptr<const Layout> get(int nv, int ord);
  };

  TaylorH() = default;
  TaylorH(int nv, int ord) : lay_(Layout::get(nv, ord)), c_(lay_->expo.size(), 0.0) {}

  static TaylorH constant(int nv, int ord, double v) {
    TaylorH t(nv, ord);
    t.c_[0] = v;
    return t;
  }
  // center + delta_i as a series
  static TaylorH variable(int nv, int ord, int i, double center);

  int nvars() const { return lay_ ? lay_->nv : 0; }
  int order() const { return lay_ ? lay_->ord : 0; }
  bool valid() const { return bool(lay_); }

  double value() const { return c_.empty() ? 0.0 : c_[0]; }
  double coeff(int rank) const { return c_[rank]; }

  TaylorH& operator+=(const TaylorH& o);
  TaylorH& operator-=(const TaylorH& o);
  TaylorH& operator*=(double s);
  friend TaylorH operator+(TaylorH a, const TaylorH& b) { a += b; return a; }
  friend TaylorH operator-(TaylorH a, const TaylorH& b) { a -= b; return a; }
  friend TaylorH operator*(TaylorH a, double s) { a *= s; return a; }
  friend TaylorH operator*(double s, TaylorH a) { a *= s; return a; }
  TaylorH operator*(const TaylorH& o) const;

  TaylorH deriv(int var) const;
  TaylorH inverse() const;  // 1/f, requires f(center) != 0
  friend TaylorH operator/(const TaylorH& a, const TaylorH& b) { return a * b.inverse(); }

  bool is_zero(double tol = 0.0) const;

private:
  std::shared_ptr<const Layout> lay_;
  std::vector<double> c_;
};

}  // namespace subriem

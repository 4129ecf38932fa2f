#include "subriem/trig.hpp"

#include <cmath>
#include <stdexcept>

namespace subriem {

namespace {

void padd(std::vector<double>& a, const std::vector<double>& b, double s) {
  if (a.size() < b.size()) a.resize(b.size(), 0.0);
  for (size_t i = 0; i < b.size(); ++i) a[i] += s * b[i];
}

std::vector<double> pmul(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> r(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

std::vector<double> pderiv(const std::vector<double>& a) {
  if (a.size() <= 1) return {};
  std::vector<double> r(a.size() - 1);
  for (size_t i = 1; i < a.size(); ++i) r[i - 1] = a[i] * double(i);
  return r;
}

std::vector<double> pint(const std::vector<double>& a) {
  std::vector<double> r(a.size() + 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i) r[i + 1] = a[i] / double(i + 1);
  return r;
}

double peval(const std::vector<double>& a, double u) {
  double s = 0.0;
  for (size_t i = a.size(); i-- > 0;) s = s * u + a[i];
  return s;
}

bool pzero(const std::vector<double>& a, double tol) {
  for (double c : a)
    if (std::abs(c) > tol) return false;
  return true;
}

void pclean(std::vector<double>& a) {
  while (!a.empty() && a.back() == 0.0) a.pop_back();
}

}  // namespace

TrigPoly TrigPoly::constant(double c) {
  TrigPoly p;
  if (c != 0.0) p.t_.push_back({0.0, {c}, {}});
  return p;
}

TrigPoly TrigPoly::poly(std::vector<double> coeffs) {
  TrigPoly p;
  pclean(coeffs);
  if (!coeffs.empty()) p.t_.push_back({0.0, std::move(coeffs), {}});
  return p;
}

TrigPoly TrigPoly::harmonic(double omega, double ca, double cb) {
  TrigPoly p;
  p.add_term(omega, ca != 0 ? std::vector<double>{ca} : std::vector<double>{},
             cb != 0 ? std::vector<double>{cb} : std::vector<double>{});
  return p;
}

bool TrigPoly::is_zero(double tol) const {
  for (const auto& t : t_)
    if (!pzero(t.a, tol) || !pzero(t.b, tol)) return false;
  return true;
}

double TrigPoly::max_abs() const {
  double m = 0;
  for (const auto& t : t_) {
    for (double c : t.a) m = std::max(m, std::abs(c));
    for (double c : t.b) m = std::max(m, std::abs(c));
  }
  return m;
}

void TrigPoly::add_term(double omega, const std::vector<double>& a, const std::vector<double>& b,
                        double sign) {
  double w = omega;
  double sb = sign;
  if (w < 0) {  // cos is even, sin odd
    w = -w;
    sb = -sb;
  }
  if (w < kFreqSnap) {
    w = 0.0;  // sin(w u) is identically zero here, its coefficient is dropped
  } else if (w <= kFreqResonance) {
    throw std::domain_error("TrigPoly: near-resonant frequency " + std::to_string(w));
  }
  // locate or insert
  size_t lo = 0;
  for (; lo < t_.size() && t_[lo].omega < w - kFreqSnap; ++lo) {
  }
  if (lo == t_.size() || std::abs(t_[lo].omega - w) > kFreqSnap) {
    Term nt;
    nt.omega = w;
    t_.insert(t_.begin() + lo, nt);
  }
  Term& tt = t_[lo];
  padd(tt.a, a, sign);
  if (tt.omega != 0.0) padd(tt.b, b, sb);
  pclean(tt.a);
  pclean(tt.b);
}

TrigPoly& TrigPoly::operator+=(const TrigPoly& o) {
  for (const auto& t : o.t_) add_term(t.omega, t.a, t.b);
  return *this;
}

TrigPoly& TrigPoly::operator-=(const TrigPoly& o) {
  for (const auto& t : o.t_) add_term(t.omega, t.a, t.b, -1.0);
  return *this;
}

TrigPoly& TrigPoly::operator*=(double s) {
  for (auto& t : t_) {
    for (double& c : t.a) c *= s;
    for (double& c : t.b) c *= s;
  }
  return *this;
}

TrigPoly TrigPoly::operator*(const TrigPoly& o) const {
  TrigPoly r;
  for (const auto& s : t_) {
    for (const auto& t : o.t_) {
      // (a1 c1 + b1 s1)(a2 c2 + b2 s2) with product-to-sum identities.
      double wm = s.omega - t.omega, wp = s.omega + t.omega;
      auto aa = pmul(s.a, t.a), bb = pmul(s.b, t.b);
      auto ab = pmul(s.a, t.b), ba = pmul(s.b, t.a);
      // cos cos = (cos(wm) + cos(wp))/2 ; sin sin = (cos(wm) - cos(wp))/2
      // sin1 cos2 = (sin(wp) + sin(wm))/2 ; cos1 sin2 = (sin(wp) - sin(wm))/2
      std::vector<double> am, bm, ap, bp;
      padd(am, aa, 0.5);
      padd(am, bb, 0.5);
      padd(ap, aa, 0.5);
      padd(ap, bb, -0.5);
      padd(bp, ba, 0.5);
      padd(bp, ab, 0.5);
      padd(bm, ba, 0.5);
      padd(bm, ab, -0.5);
      r.add_term(wm, am, bm);
      r.add_term(wp, ap, bp);
    }
  }
  return r;
}

TrigPoly TrigPoly::deriv() const {
  TrigPoly r;
  for (const auto& t : t_) {
    if (t.omega == 0.0) {
      r.add_term(0.0, pderiv(t.a), {});
      continue;
    }
    // d/du [a cos + b sin] = (a' + w b) cos + (b' - w a) sin
    std::vector<double> na = pderiv(t.a), nb = pderiv(t.b);
    padd(na, t.b, t.omega);
    padd(nb, t.a, -t.omega);
    r.add_term(t.omega, na, nb);
  }
  return r;
}

TrigPoly TrigPoly::antideriv() const {
  TrigPoly r;
  for (const auto& t : t_) {
    if (t.omega == 0.0) {
      r.add_term(0.0, pint(t.a), {});
      continue;
    }
    // Repeated integration by parts; terminates because coefficients are
    // polynomials.
    //   int a cos = sin*(a/w - a''/w^3 + ...) + cos*(a'/w^2 - a'''/w^4 + ...)
    //   int b sin = -cos*(b/w - b''/w^3 + ...) + sin*(b'/w^2 - b'''/w^4 + ...)
    std::vector<double> ca, cb;
    {
      std::vector<double> d = t.a;
      double wpow = t.omega;
      int order = 0;
      while (!d.empty()) {
        if (order % 2 == 0)
          padd(cb, d, ((order / 2) % 2 == 0 ? 1.0 : -1.0) / wpow);
        else
          padd(ca, d, (((order - 1) / 2) % 2 == 0 ? 1.0 : -1.0) / wpow);
        d = pderiv(d);
        wpow *= t.omega;
        ++order;
      }
    }
    {
      std::vector<double> d = t.b;
      double wpow = t.omega;
      int order = 0;
      while (!d.empty()) {
        if (order % 2 == 0)
          padd(ca, d, ((order / 2) % 2 == 0 ? -1.0 : 1.0) / wpow);
        else
          padd(cb, d, (((order - 1) / 2) % 2 == 0 ? 1.0 : -1.0) / wpow);
        d = pderiv(d);
        wpow *= t.omega;
        ++order;
      }
    }
    r.add_term(t.omega, ca, cb);
  }
  // enforce F(0) = 0
  double f0 = r.eval(0.0);
  if (f0 != 0.0) r.add_term(0.0, {-f0}, {});
  return r;
}

double TrigPoly::eval(double u) const {
  double s = 0.0;
  for (const auto& t : t_) {
    if (t.omega == 0.0) {
      s += peval(t.a, u);
    } else {
      s += peval(t.a, u) * std::cos(t.omega * u) + peval(t.b, u) * std::sin(t.omega * u);
    }
  }
  return s;
}

double TrigPoly::eval_deriv(double u, int k) const {
  if (k == 0) return eval(u);
  TrigPoly d = *this;
  for (int i = 0; i < k; ++i) d = d.deriv();
  return d.eval(u);
}

}  // namespace subriem

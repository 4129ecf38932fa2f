#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace subriem {

// Finite sum  sum_k [ a_k(u) cos(w_k u) + b_k(u) sin(w_k u) ]  with polynomial
// coefficients: closed under products, derivatives and antiderivatives, which
// makes the oscillatory integrals of the perturbation series exact.
class TrigPoly {
public:
  struct Term {
    double omega = 0.0;      // >= 0; omega == 0 is the plain polynomial part
    std::vector<double> a;   // cos coefficient polynomial in u
    std::vector<double> b;   // sin coefficient polynomial in u
  };

  static constexpr double kFreqSnap = 1e-9;       // frequencies closer than this merge
  static constexpr double kFreqResonance = 1e-7;  // (snap, this]: ill-conditioned, rejected

  TrigPoly() = default;
  static TrigPoly constant(double c);
  static TrigPoly poly(std::vector<double> coeffs);
  static TrigPoly harmonic(double omega, double ca, double cb);

  bool is_zero(double tol = 0.0) const;
  double max_abs() const;

  TrigPoly& operator+=(const TrigPoly& o);
  TrigPoly& operator-=(const TrigPoly& o);
  TrigPoly& operator*=(double s);
  friend TrigPoly operator+(TrigPoly x, const TrigPoly& y) { x += y; return x; }
  friend TrigPoly operator-(TrigPoly x, const TrigPoly& y) { x -= y; return x; }
  friend TrigPoly operator*(TrigPoly x, double s) { x *= s; return x; }
  friend TrigPoly operator*(double s, TrigPoly x) { x *= s; return x; }
  TrigPoly operator*(const TrigPoly& o) const;

  TrigPoly deriv() const;
  TrigPoly antideriv() const;  // primitive F with F(0) = 0

  double eval(double u) const;
  // Value of the k-th derivative at u.
  double eval_deriv(double u, int k) const;

  const std::vector<Term>& terms() const { return t_; }

private:
  void add_term(double omega, const std::vector<double>& a, const std::vector<double>& b,
                double sign = 1.0);
  std::vector<Term> t_;  // sorted by omega
};

}  // namespace subriem

#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "subriem/structural.hpp"
#include "subriem/trig.hpp"

namespace subriem {

// Function of (tau, h) written as a finite sum over monomials in h of
// quasi-trig functions of tau. Keys pack the exponents of h_1..h_{2n} six
// bits per variable.
class HTrig {
public:
  HTrig() = default;

  void add(uint64_t key, const TrigPoly& t);
  HTrig& operator+=(const HTrig& o);
  HTrig& operator-=(const HTrig& o);
  HTrig& operator*=(double s);
  friend HTrig operator+(HTrig a, const HTrig& b) { a += b; return a; }
  friend HTrig operator-(HTrig a, const HTrig& b) { a -= b; return a; }
  friend HTrig operator*(HTrig a, double s) { a *= s; return a; }

  HTrig times(const TrigPoly& t) const;
  friend HTrig mul(const HTrig& x, const HTrig& y, int hdeg_cap);

  HTrig antideriv() const;
  HTrig deriv_h(int var) const;

  double eval(double tau, const std::vector<double>& h) const;
  // h-polynomial at fixed tau: monomial -> value of the k-th tau-derivative.
  std::map<uint64_t, double> at_tau(double tau, int deriv = 0) const;

  bool is_zero(double tol = 0.0) const;
  const std::map<uint64_t, TrigPoly>& terms() const { return t_; }

private:
  std::map<uint64_t, TrigPoly> t_;
};

// Power-series coefficients of the rescaled geodesic flow as exact functions
// of (tau, h):
//   x = eta xhat + eta^2 x2 + eta^3 x3 + ...,  z = eta^2 zhat + eta^3 z3 + ...
//   h = hhat + eta h1 + eta^2 h2 + ..., w = 1 + eta^2 w2 + ...
struct FlowSeries {
  int n = 0, d2 = 0;
  std::vector<double> b;
  std::vector<HTrig> xhat, hhat;
  HTrig zhat;
  std::vector<HTrig> h1, x2;
  HTrig w2;
  std::vector<HTrig> h2, x3;
  HTrig z3;
};

FlowSeries build_flow_series(const ContactModel& m, const StructuralData& sd);

}  // namespace subriem

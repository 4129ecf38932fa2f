#pragma once

#include <map>
#include <vector>

#include "subriem/flow.hpp"
#include "subriem/hseries.hpp"
#include "subriem/invariants.hpp"
#include "subriem/taylor.hpp"

namespace subriem {

// Graded expansion  sum_{s,m} eta^{s/2} u^m c_{s,m}(hbar)  around a base
// covector direction, with u = tau - 2 pi/b_1 and Taylor coefficients in the
// blown-up variables hbar.
class EtaU {
public:
  using Key = std::pair<int, int>;  // (s: half powers of eta, m: power of u)

  EtaU() = default;
  void add(int s, int m, const TaylorH& c);
  EtaU& operator+=(const EtaU& o);
  EtaU& operator-=(const EtaU& o);
  EtaU& operator*=(double v);
  friend EtaU operator+(EtaU a, const EtaU& b) { a += b; return a; }
  friend EtaU operator-(EtaU a, const EtaU& b) { a -= b; return a; }
  friend EtaU operator*(EtaU a, double s) { a *= s; return a; }

  EtaU mul(const EtaU& o, int smax, int mmax) const;
  EtaU mul_taylor(const TaylorH& c, int shift_s = 0) const;
  EtaU shift_eta(int ds) const;  // multiply by eta^{ds/2}
  EtaU deriv_h(int var) const;
  // The h0-direction operator  -eta^2 d_eta + eta (tau0 + u) d_u.
  EtaU d5(double tau0, int smax, int mmax) const;
  // Substitute u -> sum_j ucoef[j] eta^{j/2}; the result carries m = 0 only.
  EtaU subst_u(const std::vector<double>& ucoef, int smax) const;
  // Coefficient of eta^{s/2} (requires prior u substitution).
  TaylorH at(int s, int nv, int ord) const;

  const std::map<Key, TaylorH>& terms() const { return t_; }
  bool empty() const { return t_.empty(); }

private:
  std::map<Key, TaylorH> t_;
};

// Expansion of the exponential on one blowup domain around a base direction:
// components of F and its Jacobian columns as EtaU data, with the conjugate
// time offset u0(eta) of the base covector.
struct DomainData {
  DomainTag tag = DomainTag::generic;
  int n = 0, d2 = 0, ord = 0;
  int smax = 9, mmax = 5;
  double b1 = 0.0, tau0 = 0.0;
  std::vector<double> hb;       // base direction
  std::vector<double> u0;       // u0(eta) = sum_j u0[j] eta^{j/2}
  std::vector<EtaU> F;          // 2n+1 components
  std::vector<std::vector<EtaU>> col;  // col[v][comp]; v<2n: d/dh_v, v==2n: d5 op

  TaylorH block(int comp, int var, int s) const;  // after u substitution
  TaylorH comp_at(int comp, int s) const;
  TaylorH hvar(int i) const;                      // hbar_i as Taylor data
  TaylorH tconst(double v) const;
};

// u0 must contain the half-power coefficients of the conjugate-time offset of
// the base covector (generic: {0, 0, tau_c1}; near S1: {0, 0, tc2_root};
// near S2: {0, 0, tau_c1, 0, tau_c2}).
DomainData build_domain_data(const ContactModel& m, const FlowSeries& fs, DomainTag tag,
                             const std::vector<double>& hbase, int order,
                             const std::vector<double>& u0);

// Rescaled conjugate-time corrections on the near-S2 domain computed from the
// order-by-order vanishing of the Jacobian determinant (exact series path).
// Returns {tau_c1, tau_c2}.
std::pair<double, double> near_s2_tau_corrections(const ContactModel& m, const FlowSeries& fs,
                                                  const std::vector<double>& hbar);

}  // namespace subriem

#include "subriem/domain_series.hpp"

#include <cmath>
#include <functional>

namespace subriem {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void EtaU::add(int s, int m, const TaylorH& c) {
  if (!c.valid() || c.is_zero()) return;
  auto key = Key{s, m};
  auto it = t_.find(key);
  if (it == t_.end())
    t_[key] = c;
  else {
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
  }
}

EtaU& EtaU::operator+=(const EtaU& o) {
  for (const auto& [k, c] : o.t_) add(k.first, k.second, c);
  return *this;
}

EtaU& EtaU::operator-=(const EtaU& o) {
  for (const auto& [k, c] : o.t_) {
    TaylorH neg = c;
    neg *= -1.0;
    add(k.first, k.second, neg);
  }
  return *this;
}

EtaU& EtaU::operator*=(double v) {
  for (auto& [k, c] : t_) c *= v;
  return *this;
}

EtaU EtaU::mul(const EtaU& o, int smax, int mmax) const {
  EtaU r;
  for (const auto& [ka, ca] : t_)
    for (const auto& [kb, cb] : o.t_) {
      int s = ka.first + kb.first, m = ka.second + kb.second;
      if (s > smax || m > mmax) continue;
      r.add(s, m, ca * cb);
    }
  return r;
}

EtaU EtaU::mul_taylor(const TaylorH& c, int shift_s) const {
  EtaU r;
  for (const auto& [k, v] : t_) r.add(k.first + shift_s, k.second, v * c);
  return r;
}

EtaU EtaU::shift_eta(int ds) const {
  EtaU r;
  for (const auto& [k, v] : t_) r.add(k.first + ds, k.second, v);
  return r;
}

EtaU EtaU::deriv_h(int var) const {
  EtaU r;
  for (const auto& [k, v] : t_) r.add(k.first, k.second, v.deriv(var));
  return r;
}

EtaU EtaU::d5(double tau0, int smax, int mmax) const {
  EtaU r;
  for (const auto& [k, v] : t_) {
    int s = k.first, m = k.second;
    if (s + 2 > smax) continue;
    if (s != 0) {
      // -eta^2 d_eta: eta^{s/2} -> -(s/2) eta^{(s+2)/2}
      TaylorH c = v;
      c *= -0.5 * double(s);
      r.add(s + 2, m, c);
    }
    if (m > 0) {
      // eta (tau0 + u) d_u
      TaylorH c = v;
      c *= tau0 * double(m);
      r.add(s + 2, m - 1, c);
      if (m <= mmax) {
        TaylorH c2 = v;
        c2 *= double(m);
        r.add(s + 2, m, c2);
      }
    }
  }
  return r;
}

EtaU EtaU::subst_u(const std::vector<double>& ucoef, int smax) const {
  int maxm = 0;
  for (const auto& [k, v] : t_) maxm = std::max(maxm, k.second);
  std::vector<std::vector<double>> upow(maxm + 1);
  upow[0] = {1.0};
  for (int m = 1; m <= maxm; ++m) {
    const auto& prev = upow[m - 1];
    std::vector<double> cur(size_t(smax) + 1, 0.0);
    for (size_t a = 0; a < prev.size(); ++a)
      for (size_t b = 0; b < ucoef.size(); ++b) {
        if (prev[a] == 0.0 || ucoef[b] == 0.0) continue;
        if (a + b < cur.size()) cur[a + b] += prev[a] * ucoef[b];
      }
    upow[m] = cur;
  }
  EtaU r;
  for (const auto& [k, v] : t_) {
    const auto& pw = upow[k.second];
    for (size_t j = 0; j < pw.size(); ++j) {
      if (pw[j] == 0.0) continue;
      int s = k.first + int(j);
      if (s > smax) continue;
      TaylorH c = v;
      c *= pw[j];
      r.add(s, 0, c);
    }
  }
  return r;
}

TaylorH EtaU::at(int s, int nv, int ord) const {
  auto it = t_.find(Key{s, 0});
  if (it == t_.end()) return TaylorH::constant(nv, ord, 0.0);
  return it->second;
}

TaylorH DomainData::block(int comp, int var, int s) const {
  return col[var][comp].subst_u(u0, smax).at(s, d2, ord);
}

TaylorH DomainData::comp_at(int comp, int s) const {
  return F[comp].subst_u(u0, smax).at(s, d2, ord);
}

TaylorH DomainData::hvar(int i) const { return TaylorH::variable(d2, ord, i, hb[i]); }
TaylorH DomainData::tconst(double v) const { return TaylorH::constant(d2, ord, v); }

namespace {

// hbar^alpha as Taylor data around the base point.
TaylorH mono_taylor(const std::vector<double>& hb, uint64_t key, int nv, int ord) {
  TaylorH r = TaylorH::constant(nv, ord, 1.0);
  for (int v = 0; v < nv; ++v) {
    int e = Poly::key_exponent(key, v);
    for (int j = 0; j < e; ++j) r = r * TaylorH::variable(nv, ord, v, hb[v]);
  }
  return r;
}

void add_series(DomainData& dd, EtaU& dst, const HTrig& src, int base_s,
                const std::vector<int>& weight) {
  for (const auto& [key, trig] : src.terms()) {
    int s = base_s;
    for (size_t v = 0; v < weight.size(); ++v) s += weight[v] * Poly::key_exponent(key, int(v));
    if (s > dd.smax) continue;
    TaylorH mono = mono_taylor(dd.hb, key, dd.d2, dd.ord);
    double fact = 1.0;
    for (int m = 0; m <= dd.mmax; ++m) {
      if (m > 0) fact *= m;
      double c = trig.eval_deriv(dd.tau0, m) / fact;
      if (c != 0.0) {
        TaylorH t = mono;
        t *= c;
        dst.add(s, m, t);
      }
    }
  }
}

}  // namespace

DomainData build_domain_data(const ContactModel& m, const FlowSeries& fs, DomainTag tag,
                             const std::vector<double>& hbase, int order,
                             const std::vector<double>& u0) {
  DomainData dd;
  dd.tag = tag;
  dd.n = m.n;
  dd.d2 = 2 * m.n;
  dd.ord = order;
  dd.b1 = m.b[0];
  dd.tau0 = 2 * kPi / m.b[0];
  dd.hb = hbase;
  dd.u0 = u0;

  std::vector<int> weight(dd.d2, 0);
  if (tag == DomainTag::nearS1) {
    weight[0] = weight[1] = 1;
  } else if (tag == DomainTag::nearS2) {
    for (int v = 2; v < dd.d2; ++v) weight[v] = 2;
  }

  const int nc = dd.d2 + 1;
  dd.F.assign(nc, EtaU());
  for (int r = 0; r < dd.d2; ++r) {
    add_series(dd, dd.F[r], fs.xhat[r], 2, weight);
    add_series(dd, dd.F[r], fs.x2[r], 4, weight);
    add_series(dd, dd.F[r], fs.x3[r], 6, weight);
  }
  add_series(dd, dd.F[dd.d2], fs.zhat, 4, weight);
  add_series(dd, dd.F[dd.d2], fs.z3, 6, weight);

  dd.col.assign(dd.d2 + 1, std::vector<EtaU>(nc));
  for (int v = 0; v < dd.d2; ++v)
    for (int c = 0; c < nc; ++c) dd.col[v][c] = dd.F[c].deriv_h(v);
  for (int c = 0; c < nc; ++c) dd.col[dd.d2][c] = dd.F[c].d5(dd.tau0, dd.smax, dd.mmax);
  return dd;
}

std::pair<double, double> near_s2_tau_corrections(const ContactModel& m, const FlowSeries& fs,
                                                  const std::vector<double>& hbar) {
  const int d2 = 2 * m.n, nc = d2 + 1;

  // First-order correction in closed form from the second-order invariants of
  // the pair block.
  std::vector<int> e1(m.dim(), 0);
  double b1 = m.b[0];
  auto cjet = [&](int field, std::vector<int> expo) {
    return m.jets[field][m.dim() - 1].coeff(expo);
  };
  std::vector<int> E12(m.dim(), 0), E22(m.dim(), 0), E11(m.dim(), 0);
  E12[0] = 1;
  E12[1] = 1;
  E22[1] = 2;
  E11[0] = 2;
  double alpha = (kPi / (b1 * b1 * b1)) * (cjet(1, E12) - 2.0 * cjet(0, E22));
  double beta = -(kPi / (b1 * b1 * b1)) * (2.0 * cjet(1, E11) - cjet(0, E12));
  double t1 = -2.0 * (alpha * hbar[0] + beta * hbar[1]);

  const int det_smax = 2 * (4 * m.n + 4) + 2;

  auto phi_coeff = [&](double t2, int s_target) {
    std::vector<double> u0 = {0, 0, t1, 0, t2};
    DomainData dd = build_domain_data(m, fs, DomainTag::nearS2, hbar, 0, u0);
    std::vector<std::vector<std::vector<double>>> colv(
        nc, std::vector<std::vector<double>>(nc, std::vector<double>(det_smax + 1, 0.0)));
    for (int v = 0; v < nc; ++v)
      for (int c = 0; c < nc; ++c) {
        EtaU e = dd.col[v][c];
        if (v == d2) {
          e = e.shift_eta(-2);
          e *= -1.0;  // -(1/eta) d5 = eta d_eta - tau d_tau column
        }
        EtaU sub = e.subst_u(u0, dd.smax);
        for (const auto& [k, t] : sub.terms())
          if (k.second == 0 && k.first >= 0 && k.first <= det_smax)
            colv[v][c][k.first] += t.value();
      }
    // Truncated eta-series determinant by permutation expansion with pruning.
    std::vector<double> det(det_smax + 1, 0.0);
    std::vector<bool> used(nc, false);
    std::vector<double> acc(det_smax + 1, 0.0);
    acc[0] = 1.0;
    std::function<void(int, int, const std::vector<double>&)> go =
        [&](int row, int sgn, const std::vector<double>& a) {
          if (row == nc) {
            for (int s = 0; s <= det_smax; ++s) det[s] += sgn * a[s];
            return;
          }
          for (int v = 0; v < nc; ++v) {
            if (used[v]) continue;
            std::vector<double> nxt(det_smax + 1, 0.0);
            bool nonzero = false;
            for (int s1 = 0; s1 <= det_smax; ++s1) {
              if (a[s1] == 0.0) continue;
              for (int s2 = 0; s1 + s2 <= det_smax; ++s2) {
                double c = colv[v][row][s2];
                if (c != 0.0) {
                  nxt[s1 + s2] += a[s1] * c;
                  nonzero = true;
                }
              }
            }
            if (nonzero) {
              used[v] = true;
              int swaps = 0;
              for (int w = 0; w < v; ++w)
                if (!used[w]) ++swaps;
              go(row + 1, (swaps % 2 == 0) ? sgn : -sgn, nxt);
              used[v] = false;
            }
          }
        };
    go(0, 1, acc);
    return det[s_target];
  };

  // t2 kills the eta^{4n+4} coefficient of the (scaled) determinant; it
  // enters (almost) linearly, so fit with three evaluations and take the root
  // nearest the linear estimate.
  int sB = 2 * (4 * m.n + 4);
  double f0 = phi_coeff(0.0, sB);
  double fp = phi_coeff(1.0, sB);
  double fm = phi_coeff(-1.0, sB);
  double c2 = 0.5 * (fp + fm) - f0;          // quadratic coefficient
  double c1 = 0.5 * (fp - fm);               // linear coefficient
  double t2;
  if (std::abs(c2) < 1e-12 * std::max(1.0, std::abs(c1))) {
    t2 = (c1 != 0.0) ? -f0 / c1 : 0.0;
  } else {
    double disc = c1 * c1 - 4 * c2 * f0;
    if (disc < 0) {
      t2 = -f0 / c1;
    } else {
      double rt = std::sqrt(disc);
      double r1 = (-c1 + rt) / (2 * c2), r2 = (-c1 - rt) / (2 * c2);
      double lin = (c1 != 0.0) ? -f0 / c1 : 0.0;
      t2 = (std::abs(r1 - lin) < std::abs(r2 - lin)) ? r1 : r2;
    }
  }
  return {t1, t2};
}

}  // namespace subriem

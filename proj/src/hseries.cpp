#include "subriem/hseries.hpp"

#include <cmath>

#include "subriem/poly.hpp"

namespace subriem {

void HTrig::add(uint64_t key, const TrigPoly& t) {
  if (t.is_zero()) return;
  t_[key] += t;
  if (t_[key].is_zero()) t_.erase(key);
}

HTrig& HTrig::operator+=(const HTrig& o) {
  for (const auto& [k, t] : o.t_) add(k, t);
  return *this;
}

HTrig& HTrig::operator-=(const HTrig& o) {
  for (const auto& [k, t] : o.t_) {
    TrigPoly neg = t;
    neg *= -1.0;
    add(k, neg);
  }
  return *this;
}

HTrig& HTrig::operator*=(double s) {
  if (s == 0.0) {
    t_.clear();
    return *this;
  }
  for (auto& [k, t] : t_) t *= s;
  return *this;
}

HTrig HTrig::times(const TrigPoly& t) const {
  HTrig r;
  for (const auto& [k, u] : t_) r.add(k, u * t);
  return r;
}

HTrig mul(const HTrig& x, const HTrig& y, int hdeg_cap) {
  HTrig r;
  for (const auto& [ka, ta] : x.t_) {
    int da = Poly::key_degree(ka);
    for (const auto& [kb, tb] : y.t_) {
      if (hdeg_cap >= 0 && da + Poly::key_degree(kb) > hdeg_cap) continue;
      r.add(ka + kb, ta * tb);
    }
  }
  return r;
}

HTrig HTrig::antideriv() const {
  HTrig r;
  for (const auto& [k, t] : t_) r.add(k, t.antideriv());
  return r;
}

HTrig HTrig::deriv_h(int var) const {
  HTrig r;
  for (const auto& [k, t] : t_) {
    int e = Poly::key_exponent(k, var);
    if (e == 0) continue;
    TrigPoly s = t;
    s *= double(e);
    r.add(k - Poly::key_of_var(var), s);
  }
  return r;
}

double HTrig::eval(double tau, const std::vector<double>& h) const {
  double acc = 0.0;
  for (const auto& [k, t] : t_) {
    double mono = 1.0;
    uint64_t key = k;
    for (size_t i = 0; i < h.size() && key; ++i, key >>= 6) {
      int e = int(key & 0x3f);
      for (int j = 0; j < e; ++j) mono *= h[i];
    }
    acc += mono * t.eval(tau);
  }
  return acc;
}

std::map<uint64_t, double> HTrig::at_tau(double tau, int deriv) const {
  std::map<uint64_t, double> r;
  for (const auto& [k, t] : t_) {
    double v = t.eval_deriv(tau, deriv);
    if (v != 0.0) r[k] = v;
  }
  return r;
}

bool HTrig::is_zero(double tol) const {
  for (const auto& [k, t] : t_)
    if (!t.is_zero(tol)) return false;
  return true;
}

namespace {

// e^{s * sign * Jbar} applied componentwise to a vector of series.
std::vector<HTrig> rotate(const std::vector<HTrig>& v, const std::vector<double>& b, int sign) {
  int n = int(b.size());
  std::vector<HTrig> out(2 * n);
  for (int i = 0; i < n; ++i) {
    TrigPoly c = TrigPoly::harmonic(b[i], 1.0, 0.0);
    TrigPoly s = TrigPoly::harmonic(b[i], 0.0, double(sign));
    TrigPoly ns = TrigPoly::harmonic(b[i], 0.0, -double(sign));
    out[2 * i] = v[2 * i].times(c) + v[2 * i + 1].times(s);
    out[2 * i + 1] = v[2 * i].times(ns) + v[2 * i + 1].times(c);
  }
  return out;
}

std::vector<HTrig> matvec(const Eigen::MatrixXd& M, const std::vector<HTrig>& v) {
  int rows = int(M.rows()), cols = int(M.cols());
  std::vector<HTrig> out(rows);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      if (M(r, c) != 0.0) {
        HTrig t = v[c];
        t *= M(r, c);
        out[r] += t;
      }
  return out;
}

}  // namespace

FlowSeries build_flow_series(const ContactModel& m, const StructuralData& sd) {
  FlowSeries fs;
  fs.n = m.n;
  fs.d2 = 2 * m.n;
  fs.b = m.b;
  const int n = m.n, d2 = 2 * n, nv = m.dim();

  fs.xhat.assign(d2, HTrig());
  fs.hhat.assign(d2, HTrig());
  for (int i = 0; i < n; ++i) {
    double bi = m.b[i];
    uint64_t k1 = Poly::key_of_var(2 * i), k2 = Poly::key_of_var(2 * i + 1);
    TrigPoly c = TrigPoly::harmonic(bi, 1.0, 0.0);
    TrigPoly s = TrigPoly::harmonic(bi, 0.0, 1.0);
    TrigPoly one = TrigPoly::constant(1.0);
    fs.hhat[2 * i].add(k1, c);
    fs.hhat[2 * i].add(k2, s);
    fs.hhat[2 * i + 1].add(k1, TrigPoly::harmonic(bi, 0.0, -1.0));
    fs.hhat[2 * i + 1].add(k2, c);
    // xhat block: (1/b) [sin, 1-cos; cos-1, sin]
    fs.xhat[2 * i].add(k1, s * (1.0 / bi));
    fs.xhat[2 * i].add(k2, (one - c) * (1.0 / bi));
    fs.xhat[2 * i + 1].add(k1, (c - one) * (1.0 / bi));
    fs.xhat[2 * i + 1].add(k2, s * (1.0 / bi));
    // zhat block: (h1^2 + h2^2)(b tau - sin b tau)/(2 b)
    TrigPoly zt = TrigPoly::poly({0.0, 0.5}) - s * (0.5 / bi);
    fs.zhat.add(2 * k1, zt);
    fs.zhat.add(2 * k2, zt);
  }

  // J1(xhat) hhat
  std::vector<HTrig> g(d2);
  for (int mm = 0; mm < d2; ++mm) {
    auto contrib = matvec(sd.J1[mm], fs.hhat);
    for (int r = 0; r < d2; ++r) g[r] += mul(fs.xhat[mm], contrib[r], 3);
  }
  {
    auto inner = rotate(g, m.b, -1);
    std::vector<HTrig> acc(d2);
    for (int r = 0; r < d2; ++r) acc[r] = inner[r].antideriv();
    fs.h1 = rotate(acc, m.b, +1);
  }
  fs.x2.assign(d2, HTrig());
  for (int r = 0; r < d2; ++r) fs.x2[r] = fs.h1[r].antideriv();

  // w2 = -int sum_j (sum_m L1(m,j) xhat_m) hhat_j
  {
    HTrig acc;
    for (int j = 0; j < d2; ++j)
      for (int mm = 0; mm < d2; ++mm)
        if (sd.L1(mm, j) != 0.0) {
          HTrig t = mul(fs.xhat[mm], fs.hhat[j], 3);
          t *= sd.L1(mm, j);
          acc += t;
        }
    acc *= -1.0;
    fs.w2 = acc.antideriv();
  }

  // h2 integrand: J1(x2) hhat + J1(xhat) h1 + J2(xhat,xhat) hhat + Jz zhat hhat
  //               + Q1(xhat, hhat) - w2 Jbar hhat
  std::vector<HTrig> ig(d2);
  for (int mm = 0; mm < d2; ++mm) {
    auto c1 = matvec(sd.J1[mm], fs.hhat);
    for (int r = 0; r < d2; ++r) ig[r] += mul(fs.x2[mm], c1[r], 4);
    auto c2 = matvec(sd.J1[mm], fs.h1);
    for (int r = 0; r < d2; ++r) ig[r] += mul(fs.xhat[mm], c2[r], 4);
  }
  for (int a = 0; a < d2; ++a)
    for (int bb = a; bb < d2; ++bb) {
      auto cj = matvec(sd.J2[a][bb], fs.hhat);
      HTrig xx = mul(fs.xhat[a], fs.xhat[bb], 3);
      for (int r = 0; r < d2; ++r) ig[r] += mul(xx, cj[r], 4);
    }
  {
    auto cz = matvec(sd.Jz, fs.hhat);
    for (int r = 0; r < d2; ++r) ig[r] += mul(fs.zhat, cz[r], 4);
    auto jb = matvec(sd.Jbar, fs.hhat);
    for (int r = 0; r < d2; ++r) ig[r] -= mul(fs.w2, jb[r], 4);
  }
  for (int i = 0; i < d2; ++i) {
    HTrig q1;
    for (int mm = 0; mm < d2; ++mm) {
      HTrig quad;
      for (int j = 0; j < d2; ++j)
        for (int k = 0; k < d2; ++k)
          if (sd.Qx[mm][i](j, k) != 0.0) {
            HTrig t = mul(fs.hhat[j], fs.hhat[k], 3);
            t *= sd.Qx[mm][i](j, k);
            quad += t;
          }
      q1 += mul(fs.xhat[mm], quad, 4);
    }
    ig[i] += q1;
  }
  {
    auto inner = rotate(ig, m.b, -1);
    std::vector<HTrig> acc(d2);
    for (int r = 0; r < d2; ++r) acc[r] = inner[r].antideriv();
    fs.h2 = rotate(acc, m.b, +1);
  }

  // z3 integrand: sum_i [ h1_i V1_i(xhat) + hhat_i (V1_i(x2) + V2_i(xhat,xhat)) ]
  {
    std::vector<int> e(nv, 0);
    HTrig acc;
    for (int i = 0; i < d2; ++i) {
      for (int a = 0; a < d2; ++a) {
        std::fill(e.begin(), e.end(), 0);
        e[a] = 1;
        double v1 = m.jets[i][nv - 1].coeff(e);
        if (v1 != 0.0) {
          HTrig t = mul(fs.h1[i], fs.xhat[a], 4);
          t *= v1;
          acc += t;
          HTrig t2 = mul(fs.hhat[i], fs.x2[a], 4);
          t2 *= v1;
          acc += t2;
        }
        for (int bb = a; bb < d2; ++bb) {
          std::fill(e.begin(), e.end(), 0);
          e[a] = 1;
          e[bb] += 1;
          double v2 = m.jets[i][nv - 1].coeff(e);
          if (v2 != 0.0) {
            HTrig t = mul(fs.hhat[i], mul(fs.xhat[a], fs.xhat[bb], 3), 4);
            t *= v2;
            acc += t;
          }
        }
      }
    }
    fs.z3 = acc.antideriv();
  }

  // x3 integrand: h2 + sum_i hhat_i Hq_i(xhat,xhat)  (componentwise)
  {
    std::vector<int> e(nv, 0);
    fs.x3.assign(d2, HTrig());
    for (int r = 0; r < d2; ++r) {
      HTrig acc = fs.h2[r];
      for (int i = 0; i < d2; ++i)
        for (int a = 0; a < d2; ++a)
          for (int bb = a; bb < d2; ++bb) {
            std::fill(e.begin(), e.end(), 0);
            e[a] = 1;
            e[bb] += 1;
            double c = m.jets[i][r].coeff(e);
            if (c != 0.0) {
              HTrig t = mul(fs.hhat[i], mul(fs.xhat[a], fs.xhat[bb], 3), 4);
              t *= c;
              acc += t;
            }
          }
      fs.x3[r] = acc.antideriv();
    }
  }

  return fs;
}

}  // namespace subriem

#include "subriem/poly.hpp"

#include <cmath>
#include <sstream>

namespace subriem {

uint64_t Poly::encode(const std::vector<int>& expo) {
  uint64_t key = 0;
  for (size_t i = 0; i < expo.size(); ++i) {
    if (expo[i] < 0 || expo[i] > 63) throw std::invalid_argument("Poly: exponent out of range");
    key |= uint64_t(expo[i]) << (6 * i);
  }
  return key;
}

std::vector<int> Poly::decode(uint64_t key, int nv) {
  std::vector<int> expo(nv);
  for (int i = 0; i < nv; ++i) expo[i] = key_exponent(key, i);
  return expo;
}

int Poly::key_degree(uint64_t key) {
  int d = 0;
  while (key) {
    d += int(key & 0x3f);
    key >>= 6;
  }
  return d;
}

Poly Poly::monomial(int nv, const std::vector<int>& expo, double c) {
  Poly p(nv);
  if (int(expo.size()) != nv) throw std::invalid_argument("Poly: exponent list length mismatch");
  if (c != 0.0) p.terms_[encode(expo)] = c;
  return p;
}

bool Poly::is_zero(double tol) const {
  for (const auto& [k, c] : terms_)
    if (std::abs(c) > tol) return false;
  return true;
}

int Poly::degree() const {
  int d = -1;
  for (const auto& [k, c] : terms_)
    if (c != 0.0) d = std::max(d, key_degree(k));
  return d;
}

double Poly::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [k, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

double Poly::coeff(const std::vector<int>& expo) const {
  auto it = terms_.find(encode(expo));
  return it == terms_.end() ? 0.0 : it->second;
}

void Poly::set_coeff(const std::vector<int>& expo, double c) { set_term(encode(expo), c); }

double Poly::eval(const std::vector<double>& x) const {
  if (int(x.size()) != nv_) throw std::invalid_argument("Poly::eval: dimension mismatch");
  double s = 0.0;
  for (const auto& [k, c] : terms_) {
    double t = c;
    uint64_t key = k;
    for (int i = 0; i < nv_ && key; ++i, key >>= 6) {
      int e = int(key & 0x3f);
      for (int j = 0; j < e; ++j) t *= x[i];
    }
    s += t;
  }
  return s;
}

Poly& Poly::operator+=(const Poly& o) {
  if (nv_ == 0) nv_ = o.nv_;
  for (const auto& [k, c] : o.terms_) {
    double& v = terms_[k];
    v += c;
    if (v == 0.0) terms_.erase(k);
  }
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (nv_ == 0) nv_ = o.nv_;
  for (const auto& [k, c] : o.terms_) {
    double& v = terms_[k];
    v -= c;
    if (v == 0.0) terms_.erase(k);
  }
  return *this;
}

Poly& Poly::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, c] : terms_) c *= s;
  return *this;
}

Poly mul(const Poly& a, const Poly& b, int maxdeg) {
  Poly r(a.nv_ ? a.nv_ : b.nv_);
  for (const auto& [ka, ca] : a.terms_) {
    int da = Poly::key_degree(ka);
    for (const auto& [kb, cb] : b.terms_) {
      if (maxdeg >= 0 && da + Poly::key_degree(kb) > maxdeg) continue;
      uint64_t k = ka + kb;  // no overflow across 6-bit lanes for degrees <= 31
      double& v = r.terms_[k];
      v += ca * cb;
      if (v == 0.0) r.terms_.erase(k);
    }
  }
  return r;
}

Poly Poly::derivative(int i) const {
  Poly r(nv_);
  for (const auto& [k, c] : terms_) {
    int e = key_exponent(k, i);
    if (e == 0) continue;
    r.terms_[k - key_of_var(i)] += c * e;
  }
  return r;
}

Poly Poly::truncated(int maxdeg) const {
  Poly r(nv_);
  for (const auto& [k, c] : terms_)
    if (key_degree(k) <= maxdeg) r.terms_[k] = c;
  return r;
}

Poly Poly::restrict_to(const std::vector<int>& vars) const {
  uint64_t mask = 0;
  for (int v : vars) mask |= uint64_t(0x3f) << (6 * v);
  Poly r(nv_);
  for (const auto& [k, c] : terms_)
    if ((k & ~mask) == 0) r.terms_[k] = c;
  return r;
}

Poly Poly::divide_by_var(int i, int k) const {
  Poly r(nv_);
  for (const auto& [key, c] : terms_) {
    if (key_exponent(key, i) < k) throw std::domain_error("Poly: not divisible by variable power");
    r.terms_[key - uint64_t(k) * key_of_var(i)] = c;
  }
  return r;
}

Poly Poly::scale_var(int i, double s) const {
  Poly r(nv_);
  for (const auto& [key, c] : terms_) {
    double f = c;
    for (int e = 0; e < key_exponent(key, i); ++e) f *= s;
    if (f != 0.0) r.terms_[key] = f;
  }
  return r;
}

void Poly::drop_small(double tol) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) <= tol)
      it = terms_.erase(it);
    else
      ++it;
  }
}

std::string to_string(const Poly& p) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : p.terms()) {
    if (!first) os << " + ";
    first = false;
    os << c;
    for (int i = 0; i < p.nvars(); ++i) {
      int e = Poly::key_exponent(k, i);
      if (e > 0) {
        os << "*x" << i + 1;
        if (e > 1) os << "^" << e;
      }
    }
  }
  if (first) os << "0";
  return os.str();
}

}  // namespace subriem

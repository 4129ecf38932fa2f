#include "subriem/taylor.hpp"

#include <cmath>
#include <mutex>

namespace subriem {

namespace {
uint64_t pack(const std::vector<int>& e) {
  uint64_t k = 0;
  for (size_t i = 0; i < e.size(); ++i) k |= uint64_t(e[i]) << (6 * i);
  return k;
}

void enumerate(int nv, int ord, std::vector<int>& cur, int pos, int left,
               std::vector<std::vector<int>>& out) {
  if (pos == nv) {
    out.push_back(cur);
    return;
  }
  for (int e = 0; e <= left; ++e) {
    cur[pos] = e;
    enumerate(nv, ord, cur, pos + 1, left - e, out);
  }
  cur[pos] = 0;
}
}  // namespace

std::shared_ptr<const TaylorH::Layout> TaylorH::Layout::get(int nv, int ord) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const Layout>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(nv, ord);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto lay = std::make_shared<Layout>();
  lay->nv = nv;
  lay->ord = ord;
  std::vector<std::vector<int>> raw;
  std::vector<int> cur(nv, 0);
  enumerate(nv, ord, cur, 0, ord, raw);
  // sort by total degree then lexicographically for stable ranks
  std::sort(raw.begin(), raw.end(), [](const std::vector<int>& a, const std::vector<int>& b) {
    int da = 0, db = 0;
    for (int v : a) da += v;
    for (int v : b) db += v;
    if (da != db) return da < db;
    return a < b;
  });
  lay->expo = raw;
  for (size_t r = 0; r < raw.size(); ++r) {
    lay->rank[pack(raw[r])] = int(r);
    int d = 0;
    for (int v : raw[r]) d += v;
    lay->degree.push_back(d);
  }
  cache[key] = lay;
  return lay;
}

TaylorH TaylorH::variable(int nv, int ord, int i, double center) {
  TaylorH t(nv, ord);
  t.c_[0] = center;
  std::vector<int> e(nv, 0);
  e[i] = 1;
  t.c_[t.lay_->rank.at(pack(e))] = 1.0;
  return t;
}

TaylorH& TaylorH::operator+=(const TaylorH& o) {
  if (!lay_) {
    *this = o;
    return *this;
  }
  if (o.lay_ != lay_) throw std::invalid_argument("TaylorH: layout mismatch");
  for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

TaylorH& TaylorH::operator-=(const TaylorH& o) {
  if (!lay_) {
    *this = o;
    *this *= -1.0;
    return *this;
  }
  if (o.lay_ != lay_) throw std::invalid_argument("TaylorH: layout mismatch");
  for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

TaylorH& TaylorH::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

TaylorH TaylorH::operator*(const TaylorH& o) const {
  if (!lay_ || !o.lay_) return TaylorH();
  if (o.lay_ != lay_) throw std::invalid_argument("TaylorH: layout mismatch");
  TaylorH r(lay_->nv, lay_->ord);
  r.lay_ = lay_;
  const int nranks = int(c_.size());
  for (int i = 0; i < nranks; ++i) {
    if (c_[i] == 0.0) continue;
    int di = lay_->degree[i];
    for (int j = 0; j < nranks; ++j) {
      if (o.c_[j] == 0.0) continue;
      if (di + lay_->degree[j] > lay_->ord) continue;
      std::vector<int> e(lay_->nv);
      for (int v = 0; v < lay_->nv; ++v) e[v] = lay_->expo[i][v] + lay_->expo[j][v];
      r.c_[lay_->rank.at(pack(e))] += c_[i] * o.c_[j];
    }
  }
  return r;
}

TaylorH TaylorH::deriv(int var) const {
  if (!lay_) return TaylorH();
  TaylorH r(lay_->nv, lay_->ord);
  r.lay_ = lay_;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0.0) continue;
    int e = lay_->expo[i][var];
    if (e == 0) continue;
    std::vector<int> ex = lay_->expo[i];
    ex[var] -= 1;
    r.c_[lay_->rank.at(pack(ex))] += c_[i] * e;
  }
  return r;
}

TaylorH TaylorH::inverse() const {
  if (!lay_) throw std::domain_error("TaylorH: inverse of empty series");
  double c0 = value();
  if (c0 == 0.0) throw std::domain_error("TaylorH: inverse with zero constant term");
  TaylorH g = *this;
  g *= 1.0 / c0;
  g.c_[0] = 0.0;  // g = f/c0 - 1
  TaylorH acc = constant(lay_->nv, lay_->ord, 1.0);
  TaylorH pow = constant(lay_->nv, lay_->ord, 1.0);
  double sign = -1.0;
  for (int k = 1; k <= lay_->ord; ++k) {
    pow = pow * g;
    TaylorH term = pow;
    term *= sign;
    acc += term;
    sign = -sign;
  }
  acc *= 1.0 / c0;
  return acc;
}

bool TaylorH::is_zero(double tol) const {
  for (double v : c_)
    if (std::abs(v) > tol) return false;
  return true;
}

}  // namespace subriem

#include "subriem/sampler.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "subriem/invariants.hpp"

namespace subriem {

namespace {

// All monomial keys of the given total degree in nv variables.
void keys_of_degree(int nv, int deg, std::vector<int>& cur, int pos, int left,
                    std::vector<uint64_t>& out) {
  if (pos == nv) {
    if (left == 0) out.push_back(Poly::encode(cur));
    return;
  }
  for (int e = 0; e <= left; ++e) {
    cur[pos] = e;
    keys_of_degree(nv, deg, cur, pos + 1, left - e, out);
  }
  cur[pos] = 0;
}

std::vector<uint64_t> degree_keys(int nv, int deg) {
  std::vector<uint64_t> out;
  std::vector<int> cur(nv, 0);
  keys_of_degree(nv, deg, cur, 0, deg, out);
  return out;
}

// Solve min |u - y| subject to C u = d, then check feasibility.
Eigen::VectorXd project(const Eigen::VectorXd& y, const Eigen::MatrixXd& C,
                        const Eigen::VectorXd& d) {
  if (C.rows() == 0) return y;
  Eigen::MatrixXd G = C * C.transpose();
  Eigen::VectorXd rhs = C * y - d;
  Eigen::VectorXd lambda = G.completeOrthogonalDecomposition().solve(rhs);
  Eigen::VectorXd u = y - C.transpose() * lambda;
  double resid = (C * u - d).norm();
  if (resid > 1e-9 * std::max(1.0, d.norm() + y.norm()))
    throw std::runtime_error("sample_generic_model: constraint projection failed");
  return u;
}

// Second partial of a polynomial wrt (a, b) at 0 from the monomial coefficient.
double mono_mult(uint64_t key) {
  double f = 1.0;
  uint64_t k = key;
  while (k) {
    int e = int(k & 0x3f);
    for (int j = 2; j <= e; ++j) f *= j;
    k >>= 6;
  }
  return f;
}

bool resonance_ok(const std::vector<double>& b) {
  int n = int(b.size());
  std::vector<int> c(n, -6);
  while (true) {
    double s = 0.0;
    int nz = 0;
    for (int i = 0; i < n; ++i) {
      s += c[i] * b[i];
      nz += c[i] != 0;
    }
    if (nz > 0 && std::abs(s) > 0.0 && std::abs(s) < 1e-3) return false;
    int i = 0;
    for (; i < n; ++i) {
      if (c[i] < 6) {
        ++c[i];
        break;
      }
      c[i] = -6;
    }
    if (i == n) break;
  }
  return true;
}

}  // namespace

ContactModel sample_generic_model(int n, uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_generic_model: n must be >= 1");
  const int nv = 2 * n + 1, d2 = 2 * n, zv = nv - 1;

  for (int attempt = 0; attempt < 100; ++attempt) {
    std::mt19937_64 rng(seed * 1000003ULL + attempt);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);

    // invariants b, strictly decreasing with healthy gaps, product 1/n!
    std::vector<double> b(n);
    {
      bool ok = false;
      for (int tries = 0; tries < 200 && !ok; ++tries) {
        for (int i = 0; i < n; ++i) b[i] = 0.6 + 0.5 * (unif(rng) + 1.0);
        std::sort(b.rbegin(), b.rend());
        ok = true;
        for (int i = 0; i + 1 < n; ++i) ok = ok && (b[i] - b[i + 1] > 0.15);
        double prod = 1.0;
        for (double v : b) prod *= v;
        double scale = std::pow(1.0 / (factorial(n) * prod), 1.0 / n);
        for (double& v : b) v *= scale;
        ok = ok && resonance_ok(b);
      }
      if (!ok) continue;
    }

    ContactModel m = nilpotent_model(n, b);

    auto keys2 = degree_keys(nv, 2);
    auto keys3 = degree_keys(nv, 3);
    auto keys3x = degree_keys(nv, 3);
    auto keys4 = degree_keys(nv, 4);

    // --- Stage A: quadratic vertical jets -------------------------------
    {
      const int nm = int(keys2.size());
      const int cols = d2 * nm;
      Eigen::VectorXd y(cols);
      for (int i = 0; i < cols; ++i) y(i) = 0.4 * unif(rng);

      std::vector<Eigen::Triplet<double>> trip;
      std::map<uint64_t, int> row_of;
      auto row_for = [&](uint64_t key) {
        auto it = row_of.find(key);
        if (it != row_of.end()) return it->second;
        int r = int(row_of.size());
        row_of[key] = r;
        return r;
      };
      // (a) sum_l v_l x_l = 0 at degree 3
      std::vector<std::pair<int, std::pair<int, double>>> entries;  // (row, (col, val))
      for (int l = 0; l < d2; ++l)
        for (int mi = 0; mi < nm; ++mi) {
          uint64_t prod = keys2[mi] + Poly::key_of_var(l);
          entries.push_back({row_for(prod), {l * nm + mi, 1.0}});
        }
      int extra_base = int(row_of.size());
      int nrows = extra_base + d2 + 1;
      Eigen::MatrixXd C = Eigen::MatrixXd::Zero(nrows, cols);
      Eigen::VectorXd d = Eigen::VectorXd::Zero(nrows);
      for (auto& [r, cv] : entries) C(r, cv.first) += cv.second;

      // (b) Reeb second-order rows: for each direction mvar:
      // sum_j [d2 v_{2j+1}/dx_mvar dx_{2j} - d2 v_{2j}/dx_mvar dx_{2j+1}] prod_{i != j} b_i = 0
      for (int mvar = 0; mvar < d2; ++mvar) {
        int r = extra_base + mvar;
        for (int j = 0; j < n; ++j) {
          double pb = 1.0;
          for (int i = 0; i < n; ++i)
            if (i != j) pb *= b[i];
          // field 2j+1 (0-based) is X_{2j+2}; Ltilde_j = d v_{2j+1}/dx_{2j} - d v_{2j}/dx_{2j+1}
          std::vector<int> e1(nv, 0), e2(nv, 0);
          e1[mvar] += 1;
          e1[2 * j] += 1;
          e2[mvar] += 1;
          e2[2 * j + 1] += 1;
          uint64_t k1 = Poly::encode(e1), k2 = Poly::encode(e2);
          auto add = [&](int field, uint64_t key, double w) {
            for (int mi = 0; mi < nm; ++mi)
              if (keys2[mi] == key) C(r, field * nm + mi) += w * mono_mult(key);
          };
          add(2 * j + 1, k1, pb);
          add(2 * j, k2, -pb);
        }
      }
      // (c) product of alpha_i along z, order z: sum_j 2 coeff(v_{2j}, x_{2j+1} z) prod != j
      {
        int r = extra_base + d2;
        for (int j = 0; j < n; ++j) {
          double pb = 1.0;
          for (int i = 0; i < n; ++i)
            if (i != j) pb *= b[i];
          std::vector<int> e(nv, 0);
          e[2 * j + 1] = 1;
          e[zv] = 1;
          uint64_t key = Poly::encode(e);
          for (int mi = 0; mi < nm; ++mi)
            if (keys2[mi] == key) C(r, (2 * j) * nm + mi) += 2.0 * pb;
        }
      }

      Eigen::VectorXd u = project(y, C, d);
      for (int l = 0; l < d2; ++l)
        for (int mi = 0; mi < nm; ++mi)
          if (u(l * nm + mi) != 0.0)
            m.jets[l][zv].set_term(keys2[mi], m.jets[l][zv].coeff(Poly::decode(keys2[mi], nv)) +
                                                  u(l * nm + mi));
    }

    // --- Stage B: cubic vertical jets ------------------------------------
    {
      const int nm = int(keys3.size());
      const int cols = d2 * nm;
      Eigen::VectorXd y(cols);
      for (int i = 0; i < cols; ++i) y(i) = 0.4 * unif(rng);

      std::map<uint64_t, int> row_of;
      auto row_for = [&](uint64_t key) {
        auto it = row_of.find(key);
        if (it != row_of.end()) return it->second;
        int r = int(row_of.size());
        row_of[key] = r;
        return r;
      };
      std::vector<std::pair<int, std::pair<int, double>>> entries;
      for (int l = 0; l < d2; ++l)
        for (int mi = 0; mi < nm; ++mi) {
          uint64_t prod = keys3[mi] + Poly::key_of_var(l);
          entries.push_back({row_for(prod), {l * nm + mi, 1.0}});
        }
      int extra_base = int(row_of.size());
      int nrows = extra_base + 1;
      Eigen::MatrixXd C = Eigen::MatrixXd::Zero(nrows, cols);
      Eigen::VectorXd d = Eigen::VectorXd::Zero(nrows);
      for (auto& [r, cv] : entries) C(r, cv.first) += cv.second;

      // Pi alpha_i(0,0,z) constant at order z^2 given the stage-A linear parts.
      {
        int r = extra_base;
        std::vector<double> c1(n);
        for (int j = 0; j < n; ++j) {
          std::vector<int> e(nv, 0);
          e[2 * j + 1] = 1;
          e[zv] = 1;
          c1[j] = 2.0 * m.jets[2 * j][zv].coeff(e);
        }
        double rhs = 0.0;
        for (int j = 0; j < n; ++j)
          for (int k = j + 1; k < n; ++k) {
            double pb = 1.0;
            for (int i = 0; i < n; ++i)
              if (i != j && i != k) pb *= b[i];
            rhs -= c1[j] * c1[k] * pb;
          }
        for (int j = 0; j < n; ++j) {
          double pb = 1.0;
          for (int i = 0; i < n; ++i)
            if (i != j) pb *= b[i];
          std::vector<int> e(nv, 0);
          e[2 * j + 1] = 1;
          e[zv] = 2;
          uint64_t key = Poly::encode(e);
          for (int mi = 0; mi < nm; ++mi)
            if (keys3[mi] == key) C(r, (2 * j) * nm + mi) += 2.0 * pb;
        }
        d(r) = rhs;
      }

      Eigen::VectorXd u = project(y, C, d);
      for (int l = 0; l < d2; ++l)
        for (int mi = 0; mi < nm; ++mi)
          if (u(l * nm + mi) != 0.0)
            m.jets[l][zv].set_term(keys3[mi], m.jets[l][zv].coeff(Poly::decode(keys3[mi], nv)) +
                                                  u(l * nm + mi));
    }

    // --- Stage C: quadratic horizontal jets -------------------------------
    {
      std::vector<std::pair<int, int>> pairs;
      for (int i = 0; i < d2; ++i)
        for (int j = i; j < d2; ++j) pairs.push_back({i, j});
      const int np = int(pairs.size());
      const int nm = int(keys2.size());
      const int cols = np * nm;
      Eigen::VectorXd y(cols);
      for (int i = 0; i < cols; ++i) y(i) = 0.25 * unif(rng);

      std::map<std::pair<int, uint64_t>, int> row_of;
      auto row_for = [&](int comp, uint64_t key) {
        auto it = row_of.find({comp, key});
        if (it != row_of.end()) return it->second;
        int r = int(row_of.size());
        row_of[{comp, key}] = r;
        return r;
      };
      std::vector<std::pair<int, std::pair<int, double>>> entries;
      // Euler: sum_j P_{ji} x_j = 0 for every component i.
      for (int pi = 0; pi < np; ++pi) {
        auto [i, j] = pairs[pi];
        for (int mi = 0; mi < nm; ++mi) {
          entries.push_back({row_for(i, keys2[mi] + Poly::key_of_var(j)), {pi * nm + mi, 1.0}});
          if (i != j)
            entries.push_back({row_for(j, keys2[mi] + Poly::key_of_var(i)), {pi * nm + mi, 1.0}});
        }
      }
      int extra_base = int(row_of.size());
      // V-plane rows: P_{ij} for i, j in the same pair block must vanish on
      // monomials within that block's variables and z.
      std::vector<std::pair<int, double>> vrows;  // (col, 1.0), one row each
      std::vector<int> vrow_cols;
      for (int pi = 0; pi < np; ++pi) {
        auto [i, j] = pairs[pi];
        if (i / 2 != j / 2) continue;
        int blk = i / 2;
        for (int mi = 0; mi < nm; ++mi) {
          uint64_t key = keys2[mi];
          bool inside = true;
          for (int v = 0; v < d2; ++v)
            if (v / 2 != blk && Poly::key_exponent(key, v) > 0) inside = false;
          if (inside) vrow_cols.push_back(pi * nm + mi);
        }
      }
      int nrows = extra_base + int(vrow_cols.size());
      Eigen::MatrixXd C = Eigen::MatrixXd::Zero(nrows, cols);
      Eigen::VectorXd d = Eigen::VectorXd::Zero(nrows);
      for (auto& [r, cv] : entries) C(r, cv.first) += cv.second;
      for (size_t k = 0; k < vrow_cols.size(); ++k) C(extra_base + int(k), vrow_cols[k]) = 1.0;

      Eigen::VectorXd u = project(y, C, d);
      for (int pi = 0; pi < np; ++pi) {
        auto [i, j] = pairs[pi];
        for (int mi = 0; mi < nm; ++mi) {
          double c = u(pi * nm + mi);
          if (c == 0.0) continue;
          m.jets[i][j].set_term(keys2[mi],
                                m.jets[i][j].coeff(Poly::decode(keys2[mi], nv)) + c);
          if (i != j)
            m.jets[j][i].set_term(keys2[mi],
                                  m.jets[j][i].coeff(Poly::decode(keys2[mi], nv)) + c);
        }
      }
    }

    auto viol = validate_normal_form(m);
    if (!viol.empty()) continue;

    auto tab = invariants(m);
    auto strata = strata_tests(m, tab);
    if (strata.on_S1) continue;
    if (n == 2 && (strata.on_S2 || strata.s2_margin < 1e-3)) continue;
    // tangent-cone data must be visibly non-planar
    double defect = 0.0;
    for (int k = 2; k < d2; ++k) {
      defect = std::max(defect, std::abs(tab.kap(0, k, 0)));
      defect = std::max(defect, std::abs(tab.kap(1, k, 1)));
      defect = std::max(defect, std::abs(tab.kap(1, k, 0) + tab.kap(0, k, 1)));
    }
    if (n >= 2 && defect < 1e-3) continue;

    return m;
  }
  throw std::runtime_error("sample_generic_model: exhausted resampling budget (100 attempts)");
}

}  // namespace subriem

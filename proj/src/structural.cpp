#include "subriem/structural.hpp"

#include <cmath>

namespace subriem {

namespace {

// Component polynomials of the extended frame (X_1..X_{2n}, X_0).
std::vector<std::vector<Poly>> extended_frame(const ContactModel& m) {
  int nv = m.dim();
  std::vector<std::vector<Poly>> F(2 * m.n + 1, std::vector<Poly>(nv, Poly(nv)));
  for (int i = 0; i < 2 * m.n; ++i) F[i] = m.jets[i];
  F[2 * m.n][nv - 1] = Poly::constant(nv, 1.0);  // X_0 = d/dz
  return F;
}

std::vector<Poly> bracket(const std::vector<Poly>& a, const std::vector<Poly>& b, int nv,
                          int maxdeg) {
  std::vector<Poly> r(nv, Poly(nv));
  for (int comp = 0; comp < nv; ++comp) {
    Poly s(nv);
    for (int v = 0; v < nv; ++v) {
      s += mul(b[comp].derivative(v), a[v], maxdeg);
      s -= mul(a[comp].derivative(v), b[v], maxdeg);
    }
    r[comp] = s;
  }
  return r;
}

}  // namespace

std::vector<std::vector<std::vector<Poly>>> frame_brackets(const ContactModel& m) {
  auto F = extended_frame(m);
  int nf = 2 * m.n + 1, nv = m.dim();
  std::vector<std::vector<std::vector<Poly>>> br(
      nf, std::vector<std::vector<Poly>>(nf, std::vector<Poly>(nv, Poly(nv))));
  for (int i = 0; i < nf; ++i)
    for (int j = i + 1; j < nf; ++j) {
      br[i][j] = bracket(F[i], F[j], nv, -1);
      br[j][i] = br[i][j];
      for (int c = 0; c < nv; ++c) br[j][i][c] *= -1.0;
    }
  return br;
}

StructuralData structural_data(const ContactModel& m) {
  const int n = m.n, nv = m.dim(), nf = 2 * n + 1;
  const int maxdeg = 3;  // internal truncation; stored c are degree <= 2

  auto F = extended_frame(m);

  std::vector<double> zero(nv, 0.0);
  for (int k = 0; k < nf; ++k)
    for (int comp = 0; comp < nv; ++comp) {
      double v = F[k][comp].eval(zero);
      if (std::abs(v - (comp == k ? 1.0 : 0.0)) > 1e-12)
        throw std::domain_error("structural_data: frame is not the identity at the origin");
    }

  // Frame matrix M(q) = I + N(q); re-expression uses M^{-1} = I - N + N^2 - N^3.
  std::vector<std::vector<Poly>> N(nv, std::vector<Poly>(nv, Poly(nv)));
  for (int k = 0; k < nf; ++k)
    for (int comp = 0; comp < nv; ++comp) {
      Poly p = F[k][comp];
      if (comp == k) p -= Poly::constant(nv, 1.0);
      N[comp][k] = p.truncated(maxdeg);
    }
  auto matmul = [&](const std::vector<std::vector<Poly>>& A,
                    const std::vector<std::vector<Poly>>& B) {
    std::vector<std::vector<Poly>> R(nv, std::vector<Poly>(nv, Poly(nv)));
    for (int i = 0; i < nv; ++i)
      for (int j = 0; j < nv; ++j) {
        Poly s(nv);
        for (int k = 0; k < nv; ++k) s += mul(A[i][k], B[k][j], maxdeg);
        R[i][j] = s;
      }
    return R;
  };
  auto N2 = matmul(N, N);
  auto N3 = matmul(N2, N);
  std::vector<std::vector<Poly>> Minv(nv, std::vector<Poly>(nv, Poly(nv)));
  for (int i = 0; i < nv; ++i)
    for (int j = 0; j < nv; ++j) {
      Poly p(nv);
      if (i == j) p += Poly::constant(nv, 1.0);
      p -= N[i][j];
      p += N2[i][j];
      p -= N3[i][j];
      Minv[i][j] = p;
    }

  StructuralData sd;
  sd.n = n;
  sd.c.assign(nf * nf * nf, Poly(nv));

  for (int i = 0; i < nf; ++i)
    for (int j = i + 1; j < nf; ++j) {
      auto br = bracket(F[i], F[j], nv, maxdeg);
      for (int k = 0; k < nf; ++k) {
        Poly s(nv);
        for (int comp = 0; comp < nv; ++comp) s += mul(Minv[k][comp], br[comp], maxdeg);
        s = s.truncated(2);
        s.drop_small(1e-13 * std::max(1.0, s.max_abs_coeff()));
        sd.c[sd.idx(i, j, k)] = s;
        Poly neg = s;
        neg *= -1.0;
        sd.c[sd.idx(j, i, k)] = neg;
      }
    }

  const int d2 = 2 * n;
  sd.Jbar = Eigen::MatrixXd::Zero(d2, d2);
  for (int i = 0; i < n; ++i) {
    sd.Jbar(2 * i, 2 * i + 1) = m.b[i];
    sd.Jbar(2 * i + 1, 2 * i) = -m.b[i];
  }

  sd.J1.assign(d2, Eigen::MatrixXd::Zero(d2, d2));
  sd.J2.assign(d2, std::vector<Eigen::MatrixXd>(d2, Eigen::MatrixXd::Zero(d2, d2)));
  sd.Jz = Eigen::MatrixXd::Zero(d2, d2);
  sd.L1 = Eigen::MatrixXd::Zero(d2, d2);
  sd.Qx.assign(d2, std::vector<Eigen::MatrixXd>(d2, Eigen::MatrixXd::Zero(d2, d2)));

  std::vector<int> e(nv, 0);
  auto reset = [&]() { std::fill(e.begin(), e.end(), 0); };

  for (int a = 0; a < d2; ++a)
    for (int bcol = 0; bcol < d2; ++bcol) {
      const Poly& cp = sd.cpoly(bcol, a, 2 * n);  // J(q)_{a,b} = c_{ba}^0(q)
      for (int mv = 0; mv < d2; ++mv) {
        reset();
        e[mv] = 1;
        sd.J1[mv](a, bcol) = cp.coeff(e);
        for (int mw = mv; mw < d2; ++mw) {
          reset();
          e[mv] = 1;
          e[mw] += 1;  // x_mv * x_mw monomial (exponent 2 when equal)
          sd.J2[mv][mw](a, bcol) = cp.coeff(e);
        }
      }
      reset();
      e[nv - 1] = 1;
      sd.Jz(a, bcol) = cp.coeff(e);
    }

  for (int i = 0; i < d2; ++i) {
    const Poly& cp = sd.cpoly(i, 2 * n, 2 * n);  // L_i = c_{i0}^0
    for (int mv = 0; mv < d2; ++mv) {
      reset();
      e[mv] = 1;
      sd.L1(mv, i) = cp.coeff(e);
    }
  }

  for (int i = 0; i < d2; ++i)
    for (int j = 0; j < d2; ++j)
      for (int k = 0; k < d2; ++k) {
        const Poly& cp = sd.cpoly(j, i, k);
        for (int mv = 0; mv < d2; ++mv) {
          reset();
          e[mv] = 1;
          double cc = cp.coeff(e);
          if (cc != 0.0) sd.Qx[mv][i](j, k) = cc;
        }
      }

  return sd;
}

}  // namespace subriem

#include "subriem/flow.hpp"

#include <cmath>
#include <cstring>

#include "subriem/nilpotent.hpp"
#include "subriem/ode.hpp"
#include "subriem/quad.hpp"

namespace subriem {

namespace {
constexpr double kPi = 3.14159265358979323846;

// Flat polynomial representation for fast repeated evaluation.
struct FastPoly {
  struct Term {
    unsigned char e[10];
    double c;
  };
  std::vector<Term> terms;
  int nv = 0;

  static FastPoly from(const Poly& p) {
    FastPoly f;
    f.nv = p.nvars();
    for (const auto& [k, c] : p.terms()) {
      Term t{};
      for (int i = 0; i < f.nv; ++i) t.e[i] = (unsigned char)Poly::key_exponent(k, i);
      t.c = c;
      f.terms.push_back(t);
    }
    return f;
  }

  // pw[v][d] = q_v^d
  double eval(const double pw[][5]) const {
    double s = 0.0;
    for (const auto& t : terms) {
      double v = t.c;
      for (int i = 0; i < nv; ++i)
        if (t.e[i]) v *= pw[i][t.e[i]];
      s += v;
    }
    return s;
  }
};

}  // namespace

struct Flow::Impl {
  ContactModel m;
  StructuralData sd;
  double chart_radius;
  int n, nv, d2;

  // comp polys and their first/second derivatives for each field
  std::vector<std::vector<FastPoly>> X;                 // [2n][nv]
  std::vector<std::vector<std::vector<FastPoly>>> DX;   // [2n][nv][nv]
  std::vector<std::vector<std::vector<std::vector<FastPoly>>>> D2X;  // [2n][nv][nv][nv] (a<=b stored fully sym)

  std::vector<std::vector<std::vector<Poly>>> brackets;  // exact frame brackets

  // model jet tensors used by the series quadratures
  // vertical: V1[i](a) linear part, V2[i](a,b) quadratic part of (X_i)_z
  std::vector<Eigen::VectorXd> V1;
  std::vector<Eigen::MatrixXd> V2;
  // horizontal quadratic parts Hq[i][j](a,b)
  std::vector<std::vector<Eigen::MatrixXd>> Hq;

  explicit Impl(const ContactModel& model, double radius)
      : m(model), sd(structural_data(model)), chart_radius(radius) {
    n = m.n;
    nv = m.dim();
    d2 = 2 * n;
    X.assign(d2, std::vector<FastPoly>(nv));
    DX.assign(d2, std::vector<std::vector<FastPoly>>(nv, std::vector<FastPoly>(nv)));
    D2X.assign(d2, std::vector<std::vector<std::vector<FastPoly>>>(
                       nv, std::vector<std::vector<FastPoly>>(nv, std::vector<FastPoly>(nv))));
    for (int i = 0; i < d2; ++i)
      for (int c = 0; c < nv; ++c) {
        X[i][c] = FastPoly::from(m.jets[i][c]);
        for (int a = 0; a < nv; ++a) {
          Poly da = m.jets[i][c].derivative(a);
          DX[i][c][a] = FastPoly::from(da);
          for (int b = 0; b < nv; ++b) D2X[i][c][a][b] = FastPoly::from(da.derivative(b));
        }
      }
    brackets = frame_brackets(m);

    V1.assign(d2, Eigen::VectorXd::Zero(d2));
    V2.assign(d2, Eigen::MatrixXd::Zero(d2, d2));
    Hq.assign(d2, std::vector<Eigen::MatrixXd>(d2, Eigen::MatrixXd::Zero(d2, d2)));
    std::vector<int> e(nv, 0);
    for (int i = 0; i < d2; ++i) {
      for (int a = 0; a < d2; ++a) {
        std::fill(e.begin(), e.end(), 0);
        e[a] = 1;
        V1[i](a) = m.jets[i][nv - 1].coeff(e);
        for (int b = a; b < d2; ++b) {
          std::fill(e.begin(), e.end(), 0);
          e[a] = 1;
          e[b] += 1;
          double c = m.jets[i][nv - 1].coeff(e);
          double half = (a == b) ? c : c / 2;  // symmetric split of the monomial coefficient
          V2[i](a, b) = half;
          V2[i](b, a) = half;
          for (int j = 0; j < d2; ++j) {
            double cj = m.jets[i][j].coeff(e);
            double hj = (a == b) ? cj : cj / 2;
            Hq[i][j](a, b) = hj;
            Hq[i][j](b, a) = hj;
          }
        }
      }
    }
  }

  // Canonical RHS with forward sensitivities w.r.t. the initial covector.
  // State layout: q[0..nv), p[nv..2nv), then nv columns of (dq, dp).
  void rhs(double /*t*/, const double* y, double* dy) const {
    double pw[10][5];
    for (int v = 0; v < nv; ++v) {
      pw[v][0] = 1.0;
      for (int d = 1; d < 5; ++d) pw[v][d] = pw[v][d - 1] * y[v];
    }
    const double* p = y + nv;

    double Xi[8][9], W[8][9], hvals[8];
    double D1[8][9][9];
    for (int i = 0; i < d2; ++i) {
      double hi = 0.0;
      for (int c = 0; c < nv; ++c) {
        Xi[i][c] = X[i][c].eval(pw);
        hi += p[c] * Xi[i][c];
      }
      hvals[i] = hi;
      for (int a = 0; a < nv; ++a) {
        double wa = 0.0;
        for (int c = 0; c < nv; ++c) {
          D1[i][c][a] = DX[i][c][a].eval(pw);
          wa += p[c] * D1[i][c][a];
        }
        W[i][a] = wa;
      }
    }

    for (int c = 0; c < nv; ++c) {
      double s = 0.0;
      for (int i = 0; i < d2; ++i) s += hvals[i] * Xi[i][c];
      dy[c] = s;
    }
    for (int a = 0; a < nv; ++a) {
      double s = 0.0;
      for (int i = 0; i < d2; ++i) s += hvals[i] * W[i][a];
      dy[nv + a] = -s;
    }

    // Sensitivities. Second derivatives are evaluated lazily per (a,b).
    double D2[8][9][9][9];
    for (int i = 0; i < d2; ++i)
      for (int c = 0; c < nv; ++c)
        for (int a = 0; a < nv; ++a)
          for (int b = 0; b < nv; ++b) D2[i][c][a][b] = D2X[i][c][a][b].eval(pw);

    for (int col = 0; col < nv; ++col) {
      const double* dq = y + 2 * nv + col * 2 * nv;
      const double* dp = dq + nv;
      double* dq_dot = dy + 2 * nv + col * 2 * nv;
      double* dp_dot = dq_dot + nv;

      double dh[8], dW[8][9];
      for (int i = 0; i < d2; ++i) {
        double s = 0.0;
        for (int c = 0; c < nv; ++c) {
          s += dp[c] * Xi[i][c];
          for (int a = 0; a < nv; ++a) s += p[c] * D1[i][c][a] * dq[a];
        }
        dh[i] = s;
        for (int a = 0; a < nv; ++a) {
          double t = 0.0;
          for (int c = 0; c < nv; ++c) {
            t += dp[c] * D1[i][c][a];
            for (int b = 0; b < nv; ++b) t += p[c] * D2[i][c][a][b] * dq[b];
          }
          dW[i][a] = t;
        }
      }
      for (int c = 0; c < nv; ++c) {
        double s = 0.0;
        for (int i = 0; i < d2; ++i) {
          s += dh[i] * Xi[i][c];
          double t = 0.0;
          for (int a = 0; a < nv; ++a) t += D1[i][c][a] * dq[a];
          s += hvals[i] * t;
        }
        dq_dot[c] = s;
      }
      for (int a = 0; a < nv; ++a) {
        double s = 0.0;
        for (int i = 0; i < d2; ++i) s += dh[i] * W[i][a] + hvals[i] * dW[i][a];
        dp_dot[a] = -s;
      }
    }
  }

  int state_dim() const { return 2 * nv + nv * 2 * nv; }

  std::vector<double> initial_state(const Covector& p0) const {
    std::vector<double> y(state_dim(), 0.0);
    for (int i = 0; i < d2; ++i) y[nv + i] = p0.h[i];
    y[nv + nv - 1] = p0.h0;
    for (int col = 0; col < nv; ++col) y[2 * nv + col * 2 * nv + nv + col] = 1.0;
    return y;
  }

  GeodesicState unpack(const std::vector<double>& y, const Covector& p0, double t) const {
    GeodesicState g;
    g.x.assign(y.begin(), y.begin() + d2);
    g.z = y[d2];
    double pw[10][5];
    for (int v = 0; v < nv; ++v) {
      pw[v][0] = 1.0;
      for (int d = 1; d < 5; ++d) pw[v][d] = pw[v][d - 1] * y[v];
    }
    g.h.assign(d2, 0.0);
    for (int i = 0; i < d2; ++i)
      for (int c = 0; c < nv; ++c) g.h[i] += y[nv + c] * X[i][c].eval(pw);
    double h0t = y[nv + nv - 1];
    g.w = (h0t != 0.0) ? p0.h0 / h0t : 1.0;
    g.tau = t * p0.h0;
    g.jac = Eigen::MatrixXd::Zero(nv, nv);
    for (int col = 0; col < nv; ++col)
      for (int r = 0; r < nv; ++r) g.jac(r, col) = y[2 * nv + col * 2 * nv + r];
    return g;
  }

  Dopri5::Options ode_options(double tol) const {
    Dopri5::Options opt;
    opt.rtol = tol;
    opt.atol = tol * 1e-2;
    double radius2 = chart_radius * chart_radius;
    opt.guard = [this, radius2](double, const double* y) {
      double s = 0.0;
      for (int v = 0; v < nv; ++v) s += y[v] * y[v];
      return s <= radius2;
    };
    return opt;
  }
};

Flow::Flow(const ContactModel& m, double chart_radius)
    : impl_(std::make_unique<Impl>(m, chart_radius)) {}
Flow::~Flow() = default;
Flow::Flow(Flow&&) noexcept = default;

const ContactModel& Flow::model() const { return impl_->m; }
const StructuralData& Flow::structural() const { return impl_->sd; }

GeodesicState Flow::integrate_extremal(const Covector& p0, double t, double tol) const {
  if (t < 0) throw std::invalid_argument("integrate_extremal: t must be >= 0");
  if (tol < 1e-14 || tol > 1e-6)
    throw std::invalid_argument("integrate_extremal: tol outside [1e-14, 1e-6]");
  auto y = impl_->initial_state(p0);
  if (t > 0) {
    Dopri5 ode(impl_->state_dim(), [this](double tt, const double* yy, double* dd) {
      impl_->rhs(tt, yy, dd);
    });
    ode.integrate(0.0, t, y, impl_->ode_options(tol));
  }
  return impl_->unpack(y, p0, t);
}

std::vector<double> Flow::exp_map(const Covector& p0, double t, double tol) const {
  auto g = integrate_extremal(p0, t, tol);
  std::vector<double> q = g.x;
  q.push_back(g.z);
  return q;
}

Flow::Conjugate Flow::brute_conjugate_time(const Covector& p0, double tol) const {
  const int nv = impl_->nv;
  double H = 0.0;
  for (double v : p0.h) H += v * v;
  if (H <= 0) throw std::invalid_argument("brute_conjugate_time: H(p0) must be positive");
  if (p0.h0 <= 0) throw std::invalid_argument("brute_conjugate_time: h0 must be positive");
  double T0 = 2 * kPi / (impl_->m.b[0] * p0.h0);

  auto y = impl_->initial_state(p0);
  Dopri5 ode(impl_->state_dim(), [this](double tt, const double* yy, double* dd) {
    impl_->rhs(tt, yy, dd);
  });
  auto opt = impl_->ode_options(tol);
  opt.dense = true;
  ode.integrate(0.0, 1.5 * T0, y, opt);

  std::vector<double> buf;
  auto detat = [&](double t) {
    ode.eval(t, buf);
    Eigen::MatrixXd J(nv, nv);
    for (int col = 0; col < nv; ++col)
      for (int r = 0; r < nv; ++r) J(r, col) = buf[2 * nv + col * 2 * nv + r];
    return J.determinant();
  };

  const int N = 64;
  double lo = 0.5 * T0, hi = 1.5 * T0;
  std::vector<double> ts(N), ds(N);
  double scale = 0.0;
  for (int i = 0; i < N; ++i) {
    ts[i] = lo + (hi - lo) * i / (N - 1);
    ds[i] = detat(ts[i]);
    scale = std::max(scale, std::abs(ds[i]));
  }
  for (int i = 0; i + 1 < N; ++i) {
    if (ds[i] == 0.0) return {ts[i], false};
    if (ds[i] * ds[i + 1] < 0.0) {
      double a = ts[i], b = ts[i + 1], fa = ds[i];
      for (int it = 0; it < 100 && (b - a) > 1e-10 * b; ++it) {
        double mid = 0.5 * (a + b), fm = detat(mid);
        if (fm == 0.0) return {mid, false};
        if ((fa < 0) == (fm < 0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      return {0.5 * (a + b), false};
    }
  }
  // No crossing: look for a tangential zero (local minimum of |det| well below
  // the scan scale).
  int imin = 0;
  for (int i = 1; i < N; ++i)
    if (std::abs(ds[i]) < std::abs(ds[imin])) imin = i;
  if (std::abs(ds[imin]) < 1e-8 * scale) {
    double a = ts[std::max(0, imin - 1)], b = ts[std::min(N - 1, imin + 1)];
    for (int it = 0; it < 80; ++it) {
      double m1 = a + (b - a) * 0.382, m2 = a + (b - a) * 0.618;
      if (std::abs(detat(m1)) < std::abs(detat(m2)))
        b = m2;
      else
        a = m1;
    }
    return {0.5 * (a + b), true};
  }
  throw std::runtime_error("brute_conjugate_time: no determinant zero in the scan window");
}

double Flow::phi_determinant(double tau, const std::vector<double>& h, double eta,
                             double tol) const {
  if (eta <= 0) throw std::invalid_argument("phi_determinant: eta must be positive");
  const int nv = impl_->nv;
  Covector p0{h, 1.0 / eta};
  auto g = integrate_extremal(p0, eta * tau, tol);
  Eigen::MatrixXd M(nv, nv);
  for (int c = 0; c < nv - 1; ++c) M.col(c) = g.jac.col(c);
  M.col(nv - 1) = -(1.0 / eta) * g.jac.col(nv - 1);
  return M.determinant();
}

SeriesCoefficients Flow::series_coefficients(const std::vector<double>& h, DomainTag tag,
                                             double abstol) const {
  const auto& m = impl_->m;
  const auto& sd = impl_->sd;
  const int d2 = impl_->d2, n = impl_->n;
  const double b1 = m.b[0], tau1 = 2 * kPi / b1;

  auto xhat = [&](double s, Eigen::VectorXd& out) {
    auto st = nilpotent_exp(m, s, h);
    for (int i = 0; i < d2; ++i) out(i) = st.xhat[i];
  };
  auto hhat = [&](double s, Eigen::VectorXd& out) {
    auto st = nilpotent_exp(m, s, h);
    for (int i = 0; i < d2; ++i) out(i) = st.hhat[i];
  };
  auto rot = [&](double dt, const Eigen::VectorXd& v) {  // e^{dt Jbar} v
    Eigen::VectorXd r(d2);
    for (int i = 0; i < n; ++i) {
      double c = std::cos(m.b[i] * dt), s = std::sin(m.b[i] * dt);
      r(2 * i) = c * v(2 * i) + s * v(2 * i + 1);
      r(2 * i + 1) = -s * v(2 * i) + c * v(2 * i + 1);
    }
    return r;
  };
  auto J1of = [&](const Eigen::VectorXd& y) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(d2, d2);
    for (int mm = 0; mm < d2; ++mm) J += sd.J1[mm] * y(mm);
    return J;
  };

  // h1(s) = e^{s Jbar} int_0^s e^{-sigma Jbar} J1(xhat) hhat dsigma
  auto h1_at = [&](double s, double tol2) {
    Eigen::VectorXd acc(d2);
    auto integrand = [&](double sig, std::vector<double>& out) {
      Eigen::VectorXd xs(d2), hs(d2);
      xhat(sig, xs);
      hhat(sig, hs);
      Eigen::VectorXd v = rot(-sig, Eigen::VectorXd(J1of(xs) * hs));
      for (int i = 0; i < d2; ++i) out[i] = v(i);
    };
    auto r = GaussKronrod::integrate(integrand, d2, 0.0, s, tol2);
    for (int i = 0; i < d2; ++i) acc(i) = r[i];
    return rot(s, acc).eval();
  };

  SeriesCoefficients sc;
  sc.h1 = h1_at(tau1, abstol * 0.1);

  {
    auto integrand = [&](double s, std::vector<double>& out) {
      Eigen::VectorXd v = h1_at(s, abstol * 0.01);
      for (int i = 0; i < d2; ++i) out[i] = v(i);
    };
    auto r = GaussKronrod::integrate(integrand, d2, 0.0, tau1, abstol);
    sc.x2 = Eigen::Map<Eigen::VectorXd>(r.data(), d2);
  }

  sc.z2 = nilpotent_exp(m, tau1, h).zhat;
  sc.h2 = Eigen::VectorXd::Zero(d2);

  if (tag == DomainTag::generic) return sc;

  // w2(s) = -int_0^s sum_j (L1 row contraction with xhat) hhat_j
  auto w2_at = [&](double s, double tol2) {
    auto integrand = [&](double sig, std::vector<double>& out) {
      Eigen::VectorXd xs(d2), hs(d2);
      xhat(sig, xs);
      hhat(sig, hs);
      double acc = 0.0;
      for (int j = 0; j < d2; ++j) {
        double lj = 0.0;
        for (int mm = 0; mm < d2; ++mm) lj += sd.L1(mm, j) * xs(mm);
        acc += lj * hs(j);
      }
      out[0] = -acc;
    };
    return GaussKronrod::integrate(integrand, 1, 0.0, s, tol2)[0];
  };
  sc.w2 = w2_at(tau1, abstol);

  auto x2_at = [&](double s, double tol2) {
    auto integrand = [&](double sig, std::vector<double>& out) {
      Eigen::VectorXd v = h1_at(sig, tol2 * 0.1);
      for (int i = 0; i < d2; ++i) out[i] = v(i);
    };
    auto r = GaussKronrod::integrate(integrand, d2, 0.0, s, tol2);
    return Eigen::Map<Eigen::VectorXd>(r.data(), d2).eval();
  };

  // h2 integrand: J1(x2) hhat + J1(xhat) h1 + J2(xhat) hhat + Jz(zhat) hhat
  //               + Q1(xhat, hhat) - w2 Jbar hhat
  auto h2_integrand = [&](double sig, std::vector<double>& out, double tol2) {
    Eigen::VectorXd xs(d2), hs(d2);
    xhat(sig, xs);
    hhat(sig, hs);
    double zs = nilpotent_exp(m, sig, h).zhat;
    Eigen::VectorXd x2s = x2_at(sig, tol2);
    Eigen::VectorXd h1s = h1_at(sig, tol2);
    double w2s = w2_at(sig, tol2);
    Eigen::MatrixXd J2m = Eigen::MatrixXd::Zero(d2, d2);
    for (int a = 0; a < d2; ++a)
      for (int bb = a; bb < d2; ++bb) J2m += sd.J2[a][bb] * (xs(a) * xs(bb));
    Eigen::VectorXd v = J1of(x2s) * hs + J1of(xs) * h1s + J2m * hs + sd.Jz * hs * zs -
                        w2s * (sd.Jbar * hs);
    for (int i = 0; i < d2; ++i) {
      double q1 = 0.0;
      for (int mm = 0; mm < d2; ++mm) {
        double t = hs.transpose() * sd.Qx[mm][i] * hs;
        q1 += xs(mm) * t;
      }
      v(i) += q1;
    }
    Eigen::VectorXd w = rot(-sig, v);
    for (int i = 0; i < d2; ++i) out[i] = w(i);
  };

  auto h2_at = [&](double s, double tol2) {
    auto integrand = [&](double sig, std::vector<double>& out) {
      h2_integrand(sig, out, tol2 * 0.1);
    };
    auto r = GaussKronrod::integrate(integrand, d2, 0.0, s, tol2);
    Eigen::VectorXd acc = Eigen::Map<Eigen::VectorXd>(r.data(), d2);
    return rot(s, acc).eval();
  };
  sc.h2 = h2_at(tau1, abstol * 10);

  {
    // z3 integrand: sum_i h1_i V1_i(xhat) + hhat_i (V1_i(x2) + V2_i(xhat, xhat))
    auto integrand = [&](double sig, std::vector<double>& out) {
      Eigen::VectorXd xs(d2), hs(d2);
      xhat(sig, xs);
      hhat(sig, hs);
      Eigen::VectorXd x2s = x2_at(sig, abstol * 0.1);
      Eigen::VectorXd h1s = h1_at(sig, abstol * 0.1);
      double acc = 0.0;
      for (int i = 0; i < d2; ++i) {
        acc += h1s(i) * impl_->V1[i].dot(xs);
        acc += hs(i) * (impl_->V1[i].dot(x2s) + xs.transpose() * impl_->V2[i] * xs);
      }
      out[0] = acc;
    };
    sc.z3 = GaussKronrod::integrate(integrand, 1, 0.0, tau1, abstol * 10)[0];
  }

  {
    // x3 (first two coordinates): int h2 + sum_i hhat_i Hq_i(xhat, xhat)
    auto integrand = [&](double s, std::vector<double>& out) {
      Eigen::VectorXd h2s = h2_at(s, abstol);
      Eigen::VectorXd xs(d2), hs(d2);
      xhat(s, xs);
      hhat(s, hs);
      for (int j = 0; j < 2; ++j) {
        double acc = h2s(j);
        for (int i = 0; i < d2; ++i) acc += hs(i) * (xs.transpose() * impl_->Hq[i][j] * xs);
        out[j] = acc;
      }
    };
    auto r = GaussKronrod::integrate(integrand, 2, 0.0, tau1, abstol * 100);
    sc.x3 = Eigen::Vector2d(r[0], r[1]);
  }

  return sc;
}

std::vector<double> Flow::integrate_rescaled(const std::vector<double>& h0, double eta,
                                             double tau, double tol) const {
  const int d2 = impl_->d2, nv = impl_->nv, nf = 2 * impl_->n + 1;
  // State: x[0..2n), z, h[0..2n), w.
  std::vector<double> y(d2 + 1 + d2 + 1, 0.0);
  for (int i = 0; i < d2; ++i) y[d2 + 1 + i] = h0[i];
  y[2 * d2 + 1] = 1.0;

  Eigen::MatrixXd Mq(nv, nv);
  Eigen::VectorXd br(nv);
  auto rhs = [&](double, const double* s, double* ds) {
    std::vector<double> q(nv);
    for (int v = 0; v < nv; ++v) q[v] = s[v];
    const double* h = s + nv;
    double w = s[nv + d2];

    // Frame matrix and exact structural constants at q.
    for (int k = 0; k < d2; ++k)
      for (int c = 0; c < nv; ++c) Mq(c, k) = impl_->m.jets[k][c].eval(q);
    for (int c = 0; c < nv; ++c) Mq(c, nv - 1) = (c == nv - 1) ? 1.0 : 0.0;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(Mq);

    // dh_a/dtau = (1/w) sum_j c_{ja}^0 h_j + eta sum_{j,k>=1} c_{ja}^k h_j h_k,
    // dw/dtau = -eta w sum_j c_{j0}^0 h_j - eta^2 w^2 sum_{j,k>=1} c_{j0}^k h_j h_k,
    // assembled pair by pair from the brackets (index nf-1 is the vertical field).
    Eigen::VectorXd Jh = Eigen::VectorXd::Zero(d2), Qh = Eigen::VectorXd::Zero(d2);
    double Lh = 0.0, Q0h = 0.0;
    for (int i = 0; i < nf; ++i)
      for (int j = i + 1; j < nf; ++j) {
        for (int c = 0; c < nv; ++c) br(c) = impl_->brackets[i][j][c].eval(q);
        Eigen::VectorXd cij = lu.solve(br);
        double c0 = cij(nv - 1);
        double chor = 0.0;
        for (int k = 0; k < d2; ++k) chor += cij(k) * h[k];
        if (j < d2) {
          Jh(j) += c0 * h[i];
          Jh(i) -= c0 * h[j];
          Qh(j) += h[i] * chor;
          Qh(i) -= h[j] * chor;
        } else {
          // pair (X_i, X_0): feeds the w equation only
          Lh += c0 * h[i];
          Q0h += h[i] * chor;
        }
      }

    for (int v = 0; v < nv; ++v) {
      double acc = 0.0;
      for (int i = 0; i < d2; ++i) acc += h[i] * Mq(v, i);
      ds[v] = eta * acc;
    }
    for (int a = 0; a < d2; ++a) ds[nv + a] = Jh(a) / w + eta * Qh(a);
    ds[nv + d2] = -eta * w * Lh - eta * eta * w * w * Q0h;
  };

  Dopri5 ode(int(y.size()), rhs);
  Dopri5::Options opt;
  opt.rtol = tol;
  opt.atol = tol * 1e-2;
  ode.integrate(0.0, tau, y, opt);
  return y;
}

}  // namespace subriem

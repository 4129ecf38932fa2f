#include "subriem/invariants.hpp"

#include <cmath>
#include <sstream>

#include "subriem/quad.hpp"

namespace subriem {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

InvariantTable kappa_closed_form(const ContactModel& m, const StructuralData& sd,
                                 const FlowSeries& fs) {
  InvariantTable t;
  t.n = m.n;
  const int d2 = 2 * m.n;
  const double tau1 = 2 * kPi / m.b[0];
  t.kappa.assign(d2, Eigen::MatrixXd::Zero(d2, d2));
  (void)sd;
  for (int k = 0; k < d2; ++k) {
    auto vals = fs.x2[k].at_tau(tau1);
    for (const auto& [key, v] : vals) {
      int idx[2], cnt = 0;
      for (int var = 0; var < d2 && cnt < 2; ++var) {
        int e = Poly::key_exponent(key, var);
        for (int r = 0; r < e && cnt < 2; ++r) idx[cnt++] = var;
      }
      if (cnt == 2) {
        t.kappa[k](idx[0], idx[1]) = v;
        t.kappa[k](idx[1], idx[0]) = v;
      }
    }
  }

  // Scalar invariants by direct jet reads.
  const int nv = m.dim();
  const double b1 = m.b[0];
  auto cjet = [&](int field, std::vector<int> expo) { return m.jets[field][nv - 1].coeff(expo); };
  auto E = [&](std::initializer_list<std::pair<int, int>> l) {
    std::vector<int> ex(nv, 0);
    for (auto [v, p] : l) ex[v] += p;
    return ex;
  };
  // alpha = (pi/b1^3)(d^2 (X_2)_z/dx1 dx2 - d^2 (X_1)_z/dx2^2)
  t.alpha = (kPi / (b1 * b1 * b1)) * (cjet(1, E({{0, 1}, {1, 1}})) - 2.0 * cjet(0, E({{1, 2}})));
  // beta = -(pi/b1^3)(d^2 (X_2)_z/dx1^2 - d^2 (X_1)_z/dx1 dx2)
  t.beta = -(kPi / (b1 * b1 * b1)) * (2.0 * cjet(1, E({{0, 2}})) - cjet(0, E({{0, 1}, {1, 1}})));
  double b14 = b1 * b1 * b1 * b1;
  t.chi11 = -(b14 / kPi) * 2.0 * cjet(0, E({{0, 2}, {1, 1}}));
  t.chi12 = (2.0 * b14 / kPi) * 2.0 * cjet(0, E({{0, 1}, {1, 2}}));
  t.chi22 = -(b14 / kPi) * 6.0 * cjet(0, E({{1, 3}}));
  t.xi = (kPi / (b1 * b1 * b1)) * cjet(0, E({{1, 1}, {nv - 1, 1}}));
  return t;
}

std::vector<Eigen::MatrixXd> kappa_quadrature(const ContactModel& m, double abstol) {
  const int n = m.n, d2 = 2 * n, nv = m.dim();
  const double tau1 = 2 * kPi / m.b[0];

  // Vertical Hessian matrices (J_l)_{km} = d2 (X_l)_z / dx_k dx_m - d2 (X_k)_z / dx_l dx_m.
  std::vector<Eigen::MatrixXd> H(d2, Eigen::MatrixXd::Zero(d2, d2));
  std::vector<int> e(nv, 0);
  for (int l = 0; l < d2; ++l)
    for (int k = 0; k < d2; ++k)
      for (int mm = 0; mm < d2; ++mm) {
        std::fill(e.begin(), e.end(), 0);
        e[k] += 1;
        e[mm] += 1;
        double c = m.jets[l][nv - 1].coeff(e);
        double mult = (k == mm) ? 2.0 : 1.0;
        H[l](k, mm) = c * mult;  // true second partial derivative
      }
  std::vector<Eigen::MatrixXd> Jl(d2, Eigen::MatrixXd::Zero(d2, d2));
  for (int l = 0; l < d2; ++l)
    for (int k = 0; k < d2; ++k)
      for (int mm = 0; mm < d2; ++mm) Jl[l](k, mm) = H[l](k, mm) - H[k](l, mm);

  auto expJ = [&](double s) {
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(d2, d2);
    for (int i = 0; i < n; ++i) {
      double c = std::cos(m.b[i] * s), sn = std::sin(m.b[i] * s);
      R(2 * i, 2 * i) = c;
      R(2 * i, 2 * i + 1) = sn;
      R(2 * i + 1, 2 * i) = -sn;
      R(2 * i + 1, 2 * i + 1) = c;
    }
    return R;
  };
  Eigen::MatrixXd Jbar = Eigen::MatrixXd::Zero(d2, d2);
  for (int i = 0; i < n; ++i) {
    Jbar(2 * i, 2 * i + 1) = m.b[i];
    Jbar(2 * i + 1, 2 * i) = -m.b[i];
  }
  Eigen::MatrixXd Jbi = Jbar.inverse();

  std::vector<Eigen::MatrixXd> kappa(d2, Eigen::MatrixXd::Zero(d2, d2));
  Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d2, d2);

  for (int i = 0; i < d2; ++i)
    for (int j = i; j < d2; ++j) {
      auto inner = [&](double tau, std::vector<double>& out) {
        auto fn = [&](double sig, std::vector<double>& o2) {
          Eigen::MatrixXd base = (I - expJ(-sig)) * Jbi;
          Eigen::VectorXd V(d2);
          for (int l = 0; l < d2; ++l) {
            Eigen::MatrixXd P = base * Jl[l].transpose() * expJ(sig);
            V(l) = P(i, j) + P(j, i);
          }
          Eigen::VectorXd r = expJ(tau - sig) * V;
          for (int q = 0; q < d2; ++q) o2[q] = r(q);
        };
        auto r = GaussKronrod::integrate(fn, d2, 0.0, tau, abstol * 0.1);
        out = r;
      };
      auto res = GaussKronrod::integrate(inner, d2, 0.0, tau1, abstol);
      double eps = (i == j) ? 0.5 : 1.0;
      for (int k = 0; k < d2; ++k) {
        kappa[k](i, j) = eps * res[k];
        kappa[k](j, i) = eps * res[k];
      }
    }
  return kappa;
}

InvariantTable invariants(const ContactModel& m) {
  auto sd = structural_data(m);
  auto fs = build_flow_series(m, sd);
  return kappa_closed_form(m, sd, fs);
}

double tc2_generic(const InvariantTable& t, const std::vector<double>& h) {
  double r2 = h[0] * h[0] + h[1] * h[1];
  if (r2 <= 0.0) throw std::domain_error("tc2_generic: needs (h1, h2) != 0");
  double g11 = t.gamma(0, 0, h), g12 = t.gamma(0, 1, h), g21 = t.gamma(1, 0, h),
         g22 = t.gamma(1, 1, h);
  double num = -2.0 * (t.alpha * h[0] + t.beta * h[1]) * r2 + (g12 + g21) * h[0] * h[1] -
               g22 * h[0] * h[0] - g11 * h[1] * h[1];
  return num / r2;
}

double rho_equation_residual(double rho) {
  double r2 = rho * rho, r3 = r2 * rho, r4 = r3 * rho, r5 = r4 * rho;
  double p2 = kPi * kPi;
  double s2 = std::sin(2 * kPi * rho), s4 = std::sin(4 * kPi * rho);
  double c2 = std::cos(2 * kPi * rho), c4 = std::cos(4 * kPi * rho);
  return 2 * p2 * r5 + 2 * p2 * r4 - 2 * p2 * r3 - 2 * p2 * r2 - 2 * rho + 1 +
         (-4 * kPi * r3 + 10 * kPi * r2 + 2 * kPi * rho) * s2 +
         (2 * kPi * r3 - 6 * kPi * r2 + 4 * kPi * rho) * s4 +
         (-4 * p2 * r5 + 8 * p2 * r4 + 4 * p2 * r3 - 8 * p2 * r2 + 3 * rho - 3) * c2 +
         (2 - rho) * c4;
}

StrataReport strata_tests(const ContactModel& m, const InvariantTable& t) {
  StrataReport r;
  double gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i + 1 < m.n; ++i) gap = std::min(gap, m.b[i] - m.b[i + 1]);
  if (m.n == 1) gap = m.b[0];
  r.b_gap = gap / m.b[0];
  r.on_S1 = r.b_gap < 1e-6;

  if (m.n > 2) {
    r.on_S2 = true;
  } else if (m.n == 2) {
    // Vectors (k^{13}_1 - k^{23}_2, k^{14}_1 - k^{24}_2), (k^{23}_1, k^{24}_1),
    // (k^{13}_2, k^{14}_2); colinearity = all 2x2 minors vanish.
    Eigen::Vector2d v1(t.kap(0, 2, 0) - t.kap(1, 2, 1), t.kap(0, 3, 0) - t.kap(1, 3, 1));
    Eigen::Vector2d v2(t.kap(1, 2, 0), t.kap(1, 3, 0));
    Eigen::Vector2d v3(t.kap(0, 2, 1), t.kap(0, 3, 1));
    double scale = std::max({v1.norm(), v2.norm(), v3.norm(), 1e-300});
    auto minor = [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
      return a(0) * b(1) - a(1) * b(0);
    };
    double mmin = std::max({std::abs(minor(v1, v2)), std::abs(minor(v1, v3)),
                            std::abs(minor(v2, v3))}) /
                  (scale * scale);
    r.s2_margin = mmin;
    r.on_S2 = mmin < 1e-3;
  }
  if (m.n >= 2) r.rho_residual = rho_equation_residual(m.b[1] / m.b[0]);
  return r;
}

std::string invariants_to_text(const InvariantTable& t) {
  std::ostringstream os;
  os.precision(17);
  int d2 = 2 * t.n;
  for (int i = 0; i < d2; ++i)
    for (int j = i; j < d2; ++j)
      for (int k = 0; k < d2; ++k)
        if (t.kappa[k](i, j) != 0.0)
          os << "kappa " << i + 1 << " " << j + 1 << " " << k + 1 << " " << t.kappa[k](i, j)
             << "\n";
  os << "alpha " << t.alpha << "\n";
  os << "beta " << t.beta << "\n";
  os << "chi11 " << t.chi11 << "\n";
  os << "chi12 " << t.chi12 << "\n";
  os << "chi22 " << t.chi22 << "\n";
  os << "xi " << t.xi << "\n";
  return os.str();
}

}  // namespace subriem

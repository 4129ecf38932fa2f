#include "subriem/asymptotics.hpp"

#include <cmath>

#include "subriem/nilpotent.hpp"

namespace subriem {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

DomainTag route_domain(const std::vector<double>& h) {
  double H = 0.0;
  for (double v : h) H += v * v;
  H *= 0.5;
  if (H <= 0) throw std::domain_error("route_domain: H must be positive");
  double r1 = h[0] * h[0] + h[1] * h[1];
  double rtail = 0.0;
  for (size_t i = 2; i < h.size(); ++i) rtail += h[i] * h[i];
  if (r1 < 0.05 * H) return DomainTag::nearS1;
  if (rtail < 0.0025 * H) return DomainTag::nearS2;
  return DomainTag::generic;
}

ConjugatePrediction predict_near_s1(const InvariantTable& t, const ContactModel& m,
                                    const std::vector<double>& hbar) {
  ConjugatePrediction p;
  p.domain = DomainTag::nearS1;
  p.tc_leading = 2 * kPi / m.b[0];
  auto K = constants_K(m, hbar);
  if (K.K <= 0)
    throw std::domain_error("predict_near_s1: K must be positive ((h3..h_2n) != 0)");
  double g11 = t.gamma(0, 0, hbar), g12 = t.gamma(0, 1, hbar), g21 = t.gamma(1, 0, hbar),
         g22 = t.gamma(1, 1, hbar);
  double r2 = hbar[0] * hbar[0] + hbar[1] * hbar[1];
  double A = K.K;
  double B = -(2 * kPi / m.b[0] * r2 - K.K * (g11 + g22));
  double C = (2 * kPi / m.b[0]) * ((g12 + g21) * hbar[0] * hbar[1] - g22 * hbar[0] * hbar[0] -
                                   g11 * hbar[1] * hbar[1]) +
             K.K * (g11 * g22 - g12 * g21);
  p.discriminant = B * B - 4 * A * C;
  if (p.discriminant < 0) {
    p.exists = false;
    return p;
  }
  p.tc2 = (-B - std::sqrt(p.discriminant)) / (2 * A);
  return p;
}

ConjugatePrediction predict_near_s2(const Geometry& g, const std::vector<double>& hbar) {
  const auto& t = g.table;
  const auto& m = g.model();
  if (m.n != 2)
    return predict_near_s2_series(g, hbar);  // general n: series path

  ConjugatePrediction p;
  p.domain = DomainTag::nearS2;
  p.tc_leading = 2 * kPi / m.b[0];
  double h1 = hbar[0], h2 = hbar[1];
  double r2 = h1 * h1 + h2 * h2;
  if (r2 <= 0) throw std::domain_error("predict_near_s2: (h1, h2) must be nonzero");
  double a = t.alpha, b = t.beta, b1 = m.b[0];
  p.tau_c1 = -2.0 * (a * h1 + b * h2);

  // Third-order pair block of the exponential at the first-order-corrected
  // time, from the exact series.
  std::vector<double> u0 = {0, 0, p.tau_c1};
  DomainData dd = build_domain_data(m, g.fs, DomainTag::nearS2, hbar, 0, u0);
  double A13[2][2];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) A13[i][j] = dd.block(i, j, 6).value();

  double SG = h1 * h1 * A13[1][1] + h2 * h2 * A13[0][0] - h1 * h2 * (A13[0][1] + A13[1][0]);
  double pref = 4 * kPi * kPi / (b1 * b1);
  double d2 = -(2 * kPi / b1) * r2 * (b * h1 - a * h2) * (b * h1 - a * h2);
  double dsum = 0.0;
  for (int i = 1; i < m.n; ++i) {  // pair blocks 2..n (0-based i)
    double bi = m.b[i];
    double cot = std::cos(kPi * bi / b1) / std::sin(kPi * bi / b1);
    int u = 2 * i, w = 2 * i + 1;  // 0-based field/coordinate indices of the pair
    double e_odd = t.kap(0, 1, u) * (h2 * h2 - h1 * h1) +
                   2 * h1 * h2 * (t.kap(0, 0, u) - t.kap(1, 1, u));
    double e_even = t.kap(0, 1, w) * (h2 * h2 - h1 * h1) +
                    2 * h1 * h2 * (t.kap(0, 0, w) - t.kap(1, 1, w));
    double f_odd = h1 * (h1 * t.kap(0, u, 1) + h2 * t.kap(1, u, 1)) -
                   h2 * (h1 * t.kap(0, u, 0) + h2 * t.kap(1, u, 0));
    double f_even = h1 * (h1 * t.kap(0, w, 1) + h2 * t.kap(1, w, 1)) -
                    h2 * (h1 * t.kap(0, w, 0) + h2 * t.kap(1, w, 0));
    double pref_i = 2 * kPi * kPi * bi / (b1 * b1);
    dsum += pref_i * f_odd * (cot * e_odd - e_even);
    dsum += pref_i * f_even * (cot * e_even + e_odd);
  }
  // d1 + d2 + sum d_k = 0 solved for the second-order correction.
  p.tau_c2 = -(pref * (r2 * 4 * b1 * (b * h1 - a * h2) * (a * h1 + b * h2) + SG) + d2 + dsum) /
             (pref * r2);
  return p;
}

ConjugatePrediction predict_near_s2_series(const Geometry& g, const std::vector<double>& hbar) {
  ConjugatePrediction p;
  p.domain = DomainTag::nearS2;
  p.tc_leading = 2 * kPi / g.model().b[0];
  auto [t1, t2] = near_s2_tau_corrections(g.model(), g.fs, hbar);
  p.tau_c1 = t1;
  p.tau_c2 = t2;
  return p;
}

std::vector<double> caustic_point_generic(const Geometry& g, const std::vector<double>& h,
                                          double eta) {
  const auto& t = g.table;
  const auto& m = g.model();
  const int d2 = 2 * m.n;
  double h1 = h[0], h2 = h[1];
  double r2 = h1 * h1 + h2 * h2;
  if (r2 <= 0) throw std::domain_error("caustic_point_generic: (h1, h2) must be nonzero");
  if (eta <= 0) throw std::domain_error("caustic_point_generic: eta must be positive");
  double g11 = t.gamma(0, 0, h), g12 = t.gamma(0, 1, h), g21 = t.gamma(1, 0, h),
         g22 = t.gamma(1, 1, h);
  double q1 = 0.0, q2 = 0.0;
  for (int i = 2; i < d2; ++i)
    for (int j = i; j < d2; ++j) {
      q1 += t.kap(i, j, 0) * h[i] * h[j];
      q2 += t.kap(i, j, 1) * h[i] * h[j];
    }
  double d1 = t.alpha * r2 * r2 + q1;
  double d2v = t.beta * r2 * r2 + q2;

  std::vector<double> out(d2 + 1, 0.0);
  out[0] = eta * eta / r2 *
           ((g11 - g22) * h1 * h1 * h1 + g12 * h2 * h2 * h2 + (2 * g12 + g21) * h1 * h1 * h2 + d1);
  out[1] = eta * eta / r2 *
           (g21 * h1 * h1 * h1 + (g22 - g11) * h2 * h2 * h2 + (g12 + 2 * g21) * h1 * h2 * h2 + d2v);
  double tau_c1 = tc2_generic(t, h);
  auto st = nilpotent_exp(m, 2 * kPi / m.b[0] + eta * tau_c1, h);
  for (int k = 2; k < d2; ++k) {
    double x2k = 0.0;
    for (int i = 0; i < d2; ++i)
      for (int j = i; j < d2; ++j) x2k += t.kap(i, j, k) * h[i] * h[j];
    out[k] = eta * st.xhat[k] + eta * eta * x2k;
  }
  out[d2] = eta * eta * nilpotent_exp(m, 2 * kPi / m.b[0], h).zhat;
  return out;
}

PlanarityReport tangent_cone_planarity(const InvariantTable& t) {
  PlanarityReport r;
  double defect = 0.0;
  for (int k = 2; k < 2 * t.n; ++k) {
    defect = std::max(defect, std::abs(t.kap(0, k, 0)));
    defect = std::max(defect, std::abs(t.kap(1, k, 1)));
    defect = std::max(defect, std::abs(t.kap(1, k, 0) + t.kap(0, k, 1)));
  }
  r.defect = defect;
  r.planar = defect <= 1e-9;
  return r;
}

std::array<std::array<double, 4>, 2> x3_pair_cubics(const InvariantTable& t, double b1) {
  double a = t.alpha, b = t.beta;
  double b2 = b1 * b1;
  std::array<std::array<double, 4>, 2> out;
  out[0] = {1.5 / b2 * (5 * a * a + b * b) + t.chi11 + 5 * t.chi22,
            a / b2 * (2 * kPi * a - 9 * b) + 3 * t.chi12,
            -0.5 / b2 * (9 * a * a - 8 * kPi * a * b + 9 * b * b) + 3 * (t.chi11 + t.chi22),
            -b / b2 * (2 * kPi * b - 3 * a) + t.chi12};
  out[1] = {-a / b2 * (2 * kPi * a + 3 * b) + t.chi12,
            -0.5 / b2 * (9 * a * a + 8 * kPi * a * b + 9 * b * b) + 3 * (t.chi11 + t.chi22),
            -b / b2 * (2 * kPi * b + 9 * a) + 3 * t.chi12,
            -1.5 / b2 * (a * a + 5 * b * b) + 5 * t.chi11 + t.chi22};
  return out;
}

std::vector<CausticSample> sample_caustic_section(const Geometry& g, const SectionSpec& spec,
                                                  bool brute_mode) {
  const auto& m = g.model();
  if (m.n != 2) throw std::invalid_argument("sample_caustic_section: n = 2 only");
  double b1 = m.b[0], b2 = m.b[1];
  double th2 = 2 * kPi * b2 / b1;
  double a2 = 2.0 * std::abs(std::sin(kPi * b2 / b1)) / b2;  // |A_2 v| / |v|
  double zeta1 = kPi / b1;
  double zeta2 = (b2 * 2 * kPi / b1 - std::sin(th2)) / (2 * b2);
  // A_2^{-1}
  double s = std::sin(th2), c = std::cos(th2);
  double det = (s * s + (1 - c) * (1 - c)) / (b2 * b2);
  double inv11 = s / b2 / det, inv12 = -(1 - c) / b2 / det;
  double inv21 = (1 - c) / b2 / det, inv22 = s / b2 / det;

  const double golden = 0.61803398874989484820;
  std::vector<CausticSample> out;
  for (int i = 0; i < spec.count; ++i) {
    double omega, z0;
    if (spec.sweep_omega) {
      omega = 2 * kPi * i / std::max(1, spec.count);
      z0 = spec.z0;
    } else {
      omega = spec.omega;
      z0 = spec.z0 * (i + 1) / std::max(1, spec.count);
    }
    double theta = 2 * kPi * std::fmod(0.137 + golden * i, 1.0);

    double eta2 = (z0 - (spec.R2 / a2) * (spec.R2 / a2) * (zeta2 - zeta1)) / zeta1;
    if (!(eta2 > 0)) throw std::domain_error("sample_caustic_section: section infeasible (z0)");
    double eta = std::sqrt(eta2);

    std::vector<double> h(4, 0.0);
    auto fill_h = [&](double et) {
      double wx = spec.R2 * std::cos(omega) / et, wy = spec.R2 * std::sin(omega) / et;
      h[2] = inv11 * wx + inv12 * wy;
      h[3] = inv21 * wx + inv22 * wy;
      double r22 = h[2] * h[2] + h[3] * h[3];
      if (r22 >= 1.0)
        throw std::domain_error("sample_caustic_section: section infeasible (R2 too large)");
      double r1 = std::sqrt(1.0 - r22);
      h[0] = r1 * std::cos(theta);
      h[1] = r1 * std::sin(theta);
    };
    // One Newton pass on the predicted z coordinate.
    for (int it = 0; it < 3; ++it) {
      fill_h(eta);
      double tau_c1 = tc2_generic(g.table, h);
      auto zfun = [&](double et) {
        return et * et * nilpotent_exp(m, 2 * kPi / b1 + et * tau_c1, h).zhat;
      };
      double f = zfun(eta) - z0;
      double de = 1e-6 * eta;
      double df = (zfun(eta + de) - zfun(eta - de)) / (2 * de);
      if (df != 0.0) eta -= f / df;
    }
    if (!(eta > kEtaTrustMin && eta <= kEtaTrustMax))
      throw std::domain_error("sample_caustic_section: eta outside the trust window");
    fill_h(eta);

    CausticSample smp;
    smp.param = spec.sweep_omega ? omega : z0;
    smp.h = h;
    smp.h0 = 1.0 / eta;
    smp.brute = brute_mode;
    smp.domain = route_domain(h);
    if (brute_mode) {
      Covector p0{h, 1.0 / eta};
      auto tc = g.flow.brute_conjugate_time(p0);
      smp.point = g.flow.exp_map(p0, tc.t);
    } else {
      smp.point = caustic_point_generic(g, h, eta);
    }
    out.push_back(std::move(smp));
  }
  return out;
}

}  // namespace subriem

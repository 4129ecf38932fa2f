#include "subriem/nilpotent.hpp"

#include <cmath>
#include <stdexcept>

namespace subriem {

namespace {
constexpr double kPi = 3.14159265358979323846;

// Per-block psi_i(tau) = 3 tau - b tau^2 cot(b tau / 2) - sin(b tau)/b.
double psi_block(double b, double tau) {
  return 3.0 * tau - b * tau * tau * std::cos(b * tau / 2) / std::sin(b * tau / 2) -
         std::sin(b * tau) / b;
}
}  // namespace

NilpotentState nilpotent_exp(const ContactModel& m, double tau, const std::vector<double>& h) {
  const int n = m.n;
  if (int(h.size()) != 2 * n) throw std::invalid_argument("nilpotent_exp: h size mismatch");
  NilpotentState s;
  s.xhat.assign(2 * n, 0.0);
  s.hhat.assign(2 * n, 0.0);
  s.zhat = 0.0;
  for (int i = 0; i < n; ++i) {
    double b = m.b[i];
    double c = std::cos(b * tau), sn = std::sin(b * tau);
    double h1 = h[2 * i], h2 = h[2 * i + 1];
    // e^{tau Jbar_i} = [[cos, sin], [-sin, cos]]
    s.hhat[2 * i] = c * h1 + sn * h2;
    s.hhat[2 * i + 1] = -sn * h1 + c * h2;
    // Jbar_i^{-1}(e^{tau Jbar_i} - I) = (1/b)[[sin, 1-cos], [cos-1, sin]]
    s.xhat[2 * i] = (sn * h1 + (1 - c) * h2) / b;
    s.xhat[2 * i + 1] = ((c - 1) * h1 + sn * h2) / b;
    double r2 = h1 * h1 + h2 * h2;
    s.zhat += r2 * (b * tau - sn) / (2 * b);
  }
  return s;
}

double psi(const ContactModel& m, double tau, const std::vector<double>& r) {
  if (int(r.size()) != m.n) throw std::invalid_argument("psi: r size mismatch");
  for (int i = 0; i < m.n; ++i) {
    double period = 2 * kPi / m.b[i];
    double k = std::round(tau / period);
    if (k >= 1 && std::abs(tau - k * period) < kPsiPoleTol)
      throw std::domain_error("psi: tau at a pole 2k pi/b_i");
  }
  double s = 0.0;
  for (int i = 0; i < m.n; ++i)
    if (r[i] != 0.0) s += 0.5 * r[i] * r[i] * psi_block(m.b[i], tau);
  return s;
}

double first_psi_zero(const ContactModel& m, const std::vector<double>& r) {
  const int n = m.n;
  if (int(r.size()) != n) throw std::invalid_argument("first_psi_zero: r size mismatch");
  bool any = false;
  for (double v : r) any = any || v != 0.0;
  if (!any) throw std::domain_error("first_psi_zero: r must be nonzero");
  if (r[0] == 0.0)
    throw std::domain_error("first_psi_zero: double root at 2 pi/b_1 when r_1 = 0");

  // Right end of the bracket: nearest pole to the right that appears with a
  // positive weight (psi -> +inf there); always at most 4 pi/b_1.
  double left = 2 * kPi / m.b[0];
  double right = 4 * kPi / m.b[0];
  for (int i = 1; i < n; ++i)
    if (r[i] != 0.0) right = std::min(right, 2 * kPi / m.b[i]);

  const double delta = 1e-7;
  double a = left + delta, bb = right - delta;
  double fa = psi(m, a, r), fb = psi(m, bb, r);
  if (!(fa < 0.0))
    throw std::runtime_error("first_psi_zero: psi not negative at the left bracket end");
  if (!(fb > 0.0))
    throw std::runtime_error("first_psi_zero: psi not positive at the right bracket end");
  // Bisection; the sign structure guarantees a single crossing in the bracket.
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (a + bb);
    if ((bb - a) <= 1e-12 * mid) break;
    double fm = psi(m, mid, r);
    if (fm == 0.0) return mid;
    if (fm < 0)
      a = mid;
    else
      bb = mid;
  }
  return 0.5 * (a + bb);
}

double tau1_quadratic_coefficient(const ContactModel& m, const std::vector<double>& r) {
  double tau = 2 * kPi / m.b[0];
  double s = 0.0;
  for (int i = 1; i < m.n; ++i)
    if (r[i] != 0.0) s += r[i] * r[i] * psi_block(m.b[i], tau);
  if (s <= 0.0) throw std::domain_error("tau1_quadratic_coefficient: needs positive tail weight");
  return 8 * kPi * kPi / (m.b[0] * m.b[0] * s);
}

KConstants constants_K(const ContactModel& m, const std::vector<double>& h) {
  KConstants k;
  double b1 = m.b[0];
  for (int i = 1; i < m.n; ++i) {
    double bi = m.b[i];
    double r2 = h[2 * i] * h[2 * i] + h[2 * i + 1] * h[2 * i + 1];
    k.K += r2 * (1.0 - (bi / b1) * kPi * std::cos(bi * kPi / b1) / std::sin(bi * kPi / b1));
  }
  for (int i = 1; i < m.n; ++i) {
    double s = std::sin(kPi * m.b[i] / b1);
    k.Kprime *= 4.0 * s * s / (m.b[i] * m.b[i]);
  }
  return k;
}

}  // namespace subriem

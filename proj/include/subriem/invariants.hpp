#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "subriem/hseries.hpp"
#include "subriem/model.hpp"
#include "subriem/structural.hpp"

namespace subriem {

// Second- and third-order invariants at the base point. kappa[k](i, j) with
// i <= j (0-based) is the coefficient of h_{i+1} h_{j+1} in the quadratic form
// x2_k(2 pi/b_1, .); the lower triangle mirrors it.
struct InvariantTable {
  int n = 0;
  std::vector<Eigen::MatrixXd> kappa;
  double alpha = 0.0, beta = 0.0;
  double chi11 = 0.0, chi12 = 0.0, chi22 = 0.0, xi = 0.0;

  double kap(int i, int j, int k) const { return kappa[k](std::min(i, j), std::max(i, j)); }

  // gamma_{ij}(h) = sum_{k>=3} kappa^{jk}_i h_k, 1-based paper indices;
  // here i, j in {0, 1} and the sum runs over k = 2..2n-1.
  double gamma(int i, int j, const std::vector<double>& h) const {
    double s = 0.0;
    for (int k = 2; k < 2 * n; ++k) s += kap(j, k, i) * h[k];
    return s;
  }
};

// Production path: exact trigonometric antiderivatives of the x2 series.
InvariantTable kappa_closed_form(const ContactModel& m, const StructuralData& sd,
                                 const FlowSeries& fs);

// Oracle path: adaptive double quadrature of e^{(tau-sigma)Jbar} V_{ij}(sigma)
// with V built from the vertical Hessian matrices J_l.
std::vector<Eigen::MatrixXd> kappa_quadrature(const ContactModel& m, double abstol = 1e-11);

// Convenience: closed-form table for a model (builds structural data and the
// flow series internally).
InvariantTable invariants(const ContactModel& m);

// t_c^{(2)} away from S1:
// [-2(alpha h1 + beta h2)(h1^2+h2^2) + (g12+g21) h1 h2 - g22 h1^2 - g11 h2^2] / (h1^2+h2^2)
double tc2_generic(const InvariantTable& t, const std::vector<double>& h);

struct StrataReport {
  bool on_S1 = false;
  bool on_S2 = false;
  double b_gap = 0.0;        // min_i (b_i - b_{i+1}) / b_1
  double s2_margin = 0.0;    // smallest normalized 2x2 minor of the three S2 vectors
  double rho_residual = 0.0; // transcendental stratum equation at rho = b_2/b_1
};
StrataReport strata_tests(const ContactModel& m, const InvariantTable& t);
double rho_equation_residual(double rho);

std::string invariants_to_text(const InvariantTable& t);

}  // namespace subriem

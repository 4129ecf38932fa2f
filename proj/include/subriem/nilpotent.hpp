#pragma once

#include <vector>

#include "subriem/model.hpp"

namespace subriem {

// Closed-form geometry of the nilpotent approximation.
struct NilpotentState {
  std::vector<double> xhat;  // 2n
  double zhat = 0.0;
  std::vector<double> hhat;  // 2n
};

// Evaluates xhat, zhat, hhat at rescaled time tau for seed h, block by block.
NilpotentState nilpotent_exp(const ContactModel& m, double tau, const std::vector<double>& h);

// psi(tau, r) = sum_i (r_i^2/2)(3 tau - b_i tau^2 cot(b_i tau/2) - sin(b_i tau)/b_i).
// Throws if tau is within kPsiPoleTol of a pole 2k pi / b_i.
double psi(const ContactModel& m, double tau, const std::vector<double>& r);

inline constexpr double kPsiPoleTol = 1e-9;

// First zero of psi(., r) after 2 pi / b_1; requires r_1 > 0. Bisection on
// (2 pi/b_1 + delta, T - delta) where T is the first pole with positive weight.
double first_psi_zero(const ContactModel& m, const std::vector<double>& r);

// Leading quadratic coefficient of tau_1(r) - 2 pi/b_1 as r_1 -> 0:
// 8 pi^2 / (b_1^2 sum_{i>=2} r_i^2 psi_i(2 pi/b_1)).
double tau1_quadratic_coefficient(const ContactModel& m, const std::vector<double>& r);

// K(h) = sum_{i>=2} (h_{2i-1}^2 + h_{2i}^2)(1 - (b_i/b_1) pi cot(b_i pi/b_1)),
// Kprime = 2^{2n-2} prod_{i>=2} sin^2(pi b_i/b_1)/b_i^2.
struct KConstants {
  double K = 0.0;
  double Kprime = 1.0;
};
KConstants constants_K(const ContactModel& m, const std::vector<double>& h);

}  // namespace subriem

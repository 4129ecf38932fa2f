#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "subriem/model.hpp"
#include "subriem/structural.hpp"

namespace subriem {

struct Covector {
  std::vector<double> h;  // 2n horizontal dual coordinates
  double h0 = 0.0;
};

struct GeodesicState {
  std::vector<double> x;  // 2n
  double z = 0.0;
  std::vector<double> h;  // frame dual coordinates at time t
  double w = 1.0;         // h0(0)/h0(t)
  double tau = 0.0;       // t * h0(0)
  Eigen::MatrixXd jac;    // (2n+1) x (2n+1): d(x,z)(t) / d(h(0), h0(0))
};

enum class DomainTag { generic, nearS1, nearS2 };

struct SeriesCoefficients {
  Eigen::VectorXd x2;  // 2n
  Eigen::VectorXd h1;  // 2n
  double z2 = 0.0;
  Eigen::Vector2d x3 = Eigen::Vector2d::Zero();  // first two coordinates only
  double z3 = 0.0;
  Eigen::VectorXd h2;  // 2n
  double w2 = 0.0;
};

// Geodesic-flow engine bound to one model: compiled polynomial evaluation of
// the canonical Hamiltonian system with forward-sensitivity propagation.
class Flow {
public:
  explicit Flow(const ContactModel& m, double chart_radius = 1.0);
  ~Flow();
  Flow(Flow&&) noexcept;

  const ContactModel& model() const;
  const StructuralData& structural() const;

  GeodesicState integrate_extremal(const Covector& p0, double t, double tol = 1e-11) const;
  std::vector<double> exp_map(const Covector& p0, double t, double tol = 1e-11) const;

  struct Conjugate {
    double t = 0.0;
    bool tangential = false;
  };
  // Smallest t with det d(exp)/dp = 0, scanned on (0.5, 1.5) * 2 pi/(b1 h0)
  // with 64 samples and bisection of the first sign change.
  Conjugate brute_conjugate_time(const Covector& p0, double tol = 1e-11) const;

  // Phi(tau, h, eta) = det(dF/dh_1, ..., dF/dh_2n, eta dF/deta - tau dF/dtau)
  // where F(tau, h, eta) = exp((h, 1/eta), eta tau).
  double phi_determinant(double tau, const std::vector<double>& h, double eta,
                         double tol = 1e-11) const;

  SeriesCoefficients series_coefficients(const std::vector<double>& h, DomainTag tag,
                                         double abstol = 1e-11) const;

  // Integrates the time-rescaled frame-coordinate system (x, z, h, w) with
  // parameter eta up to rescaled time tau; exact structural constants are
  // re-solved pointwise. Returns (x, z, h, w).
  std::vector<double> integrate_rescaled(const std::vector<double>& h0, double eta, double tau,
                                         double tol = 1e-11) const;

  struct Impl;

private:
  std::unique_ptr<Impl> impl_;
};

}  // namespace subriem

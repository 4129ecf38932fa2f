#pragma once

#include <array>
#include <memory>

#include "subriem/domain_series.hpp"
#include "subriem/flow.hpp"
#include "subriem/invariants.hpp"

namespace subriem {

// Shared bundle of everything derived from one model.
struct Geometry {
  explicit Geometry(const ContactModel& m)
      : flow(m), fs(build_flow_series(m, flow.structural())),
        table(kappa_closed_form(m, flow.structural(), fs)) {}
  Flow flow;
  FlowSeries fs;
  InvariantTable table;
  const ContactModel& model() const { return flow.model(); }
  const StructuralData& sd() const { return flow.structural(); }
};

struct ConjugatePrediction {
  DomainTag domain = DomainTag::generic;
  double tc_leading = 0.0;   // coefficient of 1/h0: 2 pi / b_1
  double tc2 = 0.0;          // coefficient of 1/h0^2 (generic, near-S1)
  double tau_c1 = 0.0;       // near-S2 rescaled corrections
  double tau_c2 = 0.0;
  bool exists = true;        // near-S1: quadratic has real roots
  double discriminant = 0.0;
};

// Covector routing by the fixed thresholds: near-S1 when h1^2+h2^2 < 0.05 H,
// near-S2 when h3^2+...+h_{2n}^2 < 0.0025 H, generic otherwise (H = |h|^2/2).
DomainTag route_domain(const std::vector<double>& h);

ConjugatePrediction predict_near_s1(const InvariantTable& t, const ContactModel& m,
                                    const std::vector<double>& hbar);

// Near-S2 second-order correction: closed form assembled from the d_i pieces
// (n = 2) with the third-order block taken from the exact series engine.
ConjugatePrediction predict_near_s2(const Geometry& g, const std::vector<double>& hbar);
// Determinant-based oracle for the same quantity.
ConjugatePrediction predict_near_s2_series(const Geometry& g, const std::vector<double>& hbar);

// Order-eta^2 caustic point away from S1 (all 2n+1 coordinates).
std::vector<double> caustic_point_generic(const Geometry& g, const std::vector<double>& h,
                                          double eta);

struct PlanarityReport {
  bool planar = false;
  double defect = 0.0;
};
PlanarityReport tangent_cone_planarity(const InvariantTable& t);

// Cubic coefficients of the first two coordinates of x3(2 pi/b1, .) on the
// pair block: out[c] = {h1^3, h1^2 h2, h1 h2^2, h2^3} coefficients.
std::array<std::array<double, 4>, 2> x3_pair_cubics(const InvariantTable& t, double b1);

struct SectionSpec {
  double z0 = 0.01;
  double R2 = 0.05;
  bool sweep_omega = true;  // sweep omega at fixed z0, else sweep z0 in (0, z0]
  double omega = 0.0;       // fixed omega for the z-sweep
  int count = 64;
};

struct CausticSample {
  double param = 0.0;  // omega or z0
  std::vector<double> h;
  double h0 = 0.0;
  std::vector<double> point;
  DomainTag domain = DomainTag::generic;
  bool brute = false;
};

inline constexpr double kEtaTrustMax = 0.2;
inline constexpr double kEtaTrustMin = 1e-4;

std::vector<CausticSample> sample_caustic_section(const Geometry& g, const SectionSpec& spec,
                                                  bool brute_mode);

}  // namespace subriem

#pragma once

#include <mutex>
#include <optional>

#include "subriem/asymptotics.hpp"

namespace subriem {

enum class SingType { A2, A3, A4, A5, D4plus, degenerate };
const char* to_cstring(SingType t);

struct SingularityReport {
  DomainTag domain = DomainTag::generic;
  std::vector<double> hbar;
  int kernel_dim = 1;
  std::vector<std::vector<double>> kernel_vectors;  // leading-order 5-vectors
  SingType type = SingType::degenerate;
  std::vector<double> ladder;  // test values, rung 2 upward
  double tolerance = 0.0;
  bool exists = true;  // near-S1 quadratic admits real roots
};

// Lagrangian singularity classification of the exponential at its first
// conjugate point for n = 2, on the three covector domains.
class Classifier {
public:
  explicit Classifier(const Geometry& g);

  SingularityReport classify(DomainTag tag, const std::vector<double>& hbar) const;

  // Closed-form cubics of the generic-domain ladder.
  static double psi_printed(int rung, const InvariantTable& t, const std::vector<double>& h);

  // Series-engine ladder values, rungs 2..kmax. For the near-S2 domain,
  // psi_prime (when given) receives the first-order reduced values, which
  // must vanish.
  std::vector<double> ladder(DomainTag tag, const std::vector<double>& hbar, int kmax,
                             std::vector<double>* psi_prime = nullptr) const;

  struct KernelInfo {
    int dim = 1;
    std::vector<std::vector<double>> vecs;
    double two_dim_residual = 1.0;  // near-S1: distance to the S+ conditions
  };
  KernelInfo kernel_analysis(DomainTag tag, const std::vector<double>& hbar) const;

  static Covector blowup_covector(DomainTag tag, const std::vector<double>& hbar, double eta);

  // Deterministic covector direction sampler per domain (used by batches and
  // by the tolerance calibration).
  std::vector<double> sample_direction(DomainTag tag, uint64_t seed) const;

  struct Audit {
    SingType type = SingType::degenerate;
    bool inconclusive = false;
    bool agrees = false;
    double margin = 0.0;  // deciding value over its noise floor
  };
  Audit verify_against_normal_form(DomainTag tag, const std::vector<double>& hbar, double eta,
                                   const SingularityReport& rep) const;

  // Constructs a near-S1 direction satisfying the two-dimensional-kernel
  // conditions (type D4+).
  std::vector<double> construct_s_plus() const;

  double scale_of(DomainTag tag, int rung) const;
  const Geometry& geometry() const { return g_; }

private:
  const Geometry& g_;
  mutable std::mutex mu_;
  mutable std::map<int, std::vector<double>> scales_;  // per domain: rung scales
  void calibrate(DomainTag tag) const;
};

}  // namespace subriem

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "subriem/poly.hpp"

namespace subriem {

// Contact sub-Riemannian model around a base point, given as polynomial jets
// of an orthonormal frame in Agrachev-Gauthier normal form. Coordinates are
// (x_1,...,x_{2n}, z); field index 0..2n-1 holds X_1..X_{2n}, component index
// 0..2n holds the coefficient of (d/dx_1,...,d/dx_{2n}, d/dz).
struct ContactModel {
  int n = 0;
  std::vector<double> b;                    // b_1 > b_2 > ... > b_n > 0, prod = 1/n!
  std::vector<std::vector<Poly>> jets;      // [2n][2n+1], total degree <= 4

  int dim() const { return 2 * n + 1; }
  int nfields() const { return 2 * n; }
  const Poly& jet(int field, int comp) const { return jets[field][comp]; }
};

struct Violation {
  std::string condition;  // which normal-form condition failed
  std::string detail;
  double magnitude = 0.0;
};

// Jet validation tolerance: polynomial identities are exact in the inputs, so
// the tolerance only absorbs file-format rounding.
inline constexpr double kValidateTol = 1e-9;
inline constexpr double kNormalizationTol = 1e-12;

ContactModel nilpotent_model(int n, const std::vector<double>& b);

std::vector<Violation> validate_normal_form(const ContactModel& m);

struct LoadResult {
  ContactModel model;
  bool rescaled = false;   // b was renormalized to prod b_i = 1/n! on load
  double rescale_factor = 1.0;
};

// Parse / write the model file format: [meta] section with n and b, then one
// [jet.i.j] section per stored component (i in 1..2n, j in 1..2n+1, last slot
// z) with lines "e_1 ... e_{2n+1} -> coefficient".
LoadResult load_model(const std::string& path);
LoadResult parse_model(const std::string& text);
void save_model(const ContactModel& m, const std::string& path);
std::string model_to_text(const ContactModel& m);

double factorial(int n);

}  // namespace subriem

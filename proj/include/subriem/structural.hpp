#pragma once

#include <Eigen/Dense>
#include <vector>

#include "subriem/model.hpp"

namespace subriem {

// Structural constants c_{ij}^k of the frame (X_1..X_{2n}, X_0 = d/dz) as
// polynomials of total degree <= 2 in (x, z), plus the pieces of the matrix
// map J(q)_{ab} = c_{ba}^0(q) used by the perturbative machinery:
//   J(q) = Jbar + sum_m J1[m] x_m + sum_{a<=b} J2[{a,b}] x_a x_b + Jz z + ...
// Index convention: 0..2n-1 = X_1..X_{2n}, index 2n = X_0.
struct StructuralData {
  int n = 0;

  // c[idx(i,j,k)], i,j,k in 0..2n (frame index, 2n = vertical field).
  std::vector<Poly> c;

  Eigen::MatrixXd Jbar;                  // 2n x 2n block diagonal [[0,b],[-b,0]]
  std::vector<Eigen::MatrixXd> J1;       // d J / d x_m at 0, m = 0..2n-1
  std::vector<std::vector<Eigen::MatrixXd>> J2;  // coefficient of x_a x_b (a <= b)
  Eigen::MatrixXd Jz;                    // d J / d z at 0

  // L_i(q) = c_{i0}^0(q); gradient rows at the origin: L1(m, i) = d L_i / d x_m.
  Eigen::MatrixXd L1;

  // Q_i(h) = sum_{j,k >= 1} c_{ji}^k(q) h_j h_k; first-order position
  // dependence: Qx[m](i; j,k) = d c_{ji}^k / d x_m at 0.
  std::vector<std::vector<Eigen::MatrixXd>> Qx;  // [m][i](j, k)

  int idx(int i, int j, int k) const {
    int d = 2 * n + 1;
    return (i * d + j) * d + k;
  }
  const Poly& cpoly(int i, int j, int k) const { return c[idx(i, j, k)]; }
};

// Computes brackets of the exact polynomial frame, re-expressed in the frame
// basis and truncated at degree 2. Throws if the frame is not the identity at
// the origin (corrupt input).
StructuralData structural_data(const ContactModel& m);

// Exact bracket polynomials [X_i, X_j] (component-wise, untruncated), used by
// the exact rescaled-frame integration path.
std::vector<std::vector<std::vector<Poly>>> frame_brackets(const ContactModel& m);

}  // namespace subriem

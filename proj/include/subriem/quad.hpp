#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace subriem {

// Adaptive Gauss-Kronrod 7-15 on vector-valued integrands. Error control is
// absolute in the max norm; panels split until the tolerance is met.
class GaussKronrod {
public:
  using Fn = std::function<void(double x, std::vector<double>& out)>;

  static std::vector<double> integrate(const Fn& f, int dim, double a, double b, double abstol,
                                       int max_depth = 28) {
    std::vector<double> out(dim, 0.0), panel(dim), scratch(dim);
    double worst = 0;
    rec(f, dim, a, b, abstol, max_depth, out, panel, scratch, worst);
    return out;
  }

private:
  static void kernel(const Fn& f, int dim, double a, double b, std::vector<double>& kron,
                     double& err, std::vector<double>& scratch) {
    // Kronrod 15 nodes/weights and embedded Gauss 7 weights on [-1, 1].
    static const double xk[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                                 0.741531185599394, 0.586087235467691, 0.405845151377397,
                                 0.207784955007898, 0.0};
    static const double wk[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                                 0.140653259715525, 0.169004726639267, 0.190350578064785,
                                 0.204432940075298, 0.209482141084728};
    static const double wg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                                 0.417959183673469};
    double c = 0.5 * (a + b), hl = 0.5 * (b - a);
    std::vector<double> gauss(dim, 0.0);
    kron.assign(dim, 0.0);
    for (int i = 0; i < 8; ++i) {
      for (int sgn = (i == 7 ? 1 : 0); sgn < 2; ++sgn) {
        double x = c + (sgn ? 1.0 : -1.0) * hl * xk[i];
        f(x, scratch);
        for (int d = 0; d < dim; ++d) kron[d] += wk[i] * scratch[d];
        if (i % 2 == 1) {
          int gi = (i - 1) / 2;
          for (int d = 0; d < dim; ++d) gauss[d] += wg[gi] * scratch[d];
        }
      }
    }
    err = 0;
    for (int d = 0; d < dim; ++d) {
      kron[d] *= hl;
      gauss[d] *= hl;
      err = std::max(err, std::abs(kron[d] - gauss[d]));
    }
  }

  static void rec(const Fn& f, int dim, double a, double b, double tol, int depth,
                  std::vector<double>& acc, std::vector<double>& panel,
                  std::vector<double>& scratch, double& worst) {
    double err;
    kernel(f, dim, a, b, panel, err, scratch);
    if (err <= tol || depth == 0) {
      if (depth == 0 && err > tol)
        throw std::runtime_error("quadrature did not converge on panel [" + std::to_string(a) +
                                 ", " + std::to_string(b) + "], err " + std::to_string(err));
      for (int d = 0; d < dim; ++d) acc[d] += panel[d];
      worst = std::max(worst, err);
      return;
    }
    double m = 0.5 * (a + b);
    rec(f, dim, a, m, tol / 2, depth - 1, acc, panel, scratch, worst);
    rec(f, dim, m, b, tol / 2, depth - 1, acc, panel, scratch, worst);
  }
};

}  // namespace subriem

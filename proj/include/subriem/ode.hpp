#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace subriem {

// Adaptive Dormand-Prince 5(4) with the classical order-4 continuous output.
// The right-hand side writes dy into its third argument.
class Dopri5 {
public:
  using Rhs = std::function<void(double t, const double* y, double* dy)>;

  struct Options {
    double rtol = 1e-11;
    double atol = 1e-13;
    double h_init = 0.0;   // 0: pick automatically
    long max_steps = 2000000;
    bool dense = false;
    std::function<bool(double t, const double* y)> guard;  // returns false to abort
  };

  struct Segment {
    double t0, h;
    std::vector<double> r1, r2, r3, r4, r5;
  };

  Dopri5(int dim, Rhs rhs) : dim_(dim), rhs_(std::move(rhs)) {}

  // Integrates from (t0, y0) to t1 (t1 >= t0). On return y0 holds y(t1).
  void integrate(double t0, double t1, std::vector<double>& y, const Options& opt);

  const std::vector<Segment>& segments() const { return segs_; }

  // Dense evaluation on a stored trajectory (requires dense = true).
  void eval(double t, std::vector<double>& out) const;

  long steps_taken() const { return nsteps_; }

private:
  void one_step(double t, const std::vector<double>& y, double h, std::vector<double>& ynew,
                std::vector<double>& err, std::vector<std::vector<double>>& k) const;

  int dim_;
  Rhs rhs_;
  std::vector<Segment> segs_;
  long nsteps_ = 0;
};

inline void Dopri5::one_step(double t, const std::vector<double>& y, double h,
                             std::vector<double>& ynew, std::vector<double>& err,
                             std::vector<std::vector<double>>& k) const {
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                      a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                      a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                      b6 = 11.0 / 84;
  static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                      e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  std::vector<double> tmp(dim_);
  for (int i = 0; i < dim_; ++i) tmp[i] = y[i] + h * a21 * k[0][i];
  rhs_(t + c2 * h, tmp.data(), k[1].data());
  for (int i = 0; i < dim_; ++i) tmp[i] = y[i] + h * (a31 * k[0][i] + a32 * k[1][i]);
  rhs_(t + c3 * h, tmp.data(), k[2].data());
  for (int i = 0; i < dim_; ++i)
    tmp[i] = y[i] + h * (a41 * k[0][i] + a42 * k[1][i] + a43 * k[2][i]);
  rhs_(t + c4 * h, tmp.data(), k[3].data());
  for (int i = 0; i < dim_; ++i)
    tmp[i] = y[i] + h * (a51 * k[0][i] + a52 * k[1][i] + a53 * k[2][i] + a54 * k[3][i]);
  rhs_(t + c5 * h, tmp.data(), k[4].data());
  for (int i = 0; i < dim_; ++i)
    tmp[i] = y[i] + h * (a61 * k[0][i] + a62 * k[1][i] + a63 * k[2][i] + a64 * k[3][i] +
                         a65 * k[4][i]);
  rhs_(t + h, tmp.data(), k[5].data());
  for (int i = 0; i < dim_; ++i)
    ynew[i] = y[i] + h * (b1 * k[0][i] + b3 * k[2][i] + b4 * k[3][i] + b5 * k[4][i] + b6 * k[5][i]);
  rhs_(t + h, ynew.data(), k[6].data());
  for (int i = 0; i < dim_; ++i)
    err[i] = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] + e6 * k[5][i] +
                  e7 * k[6][i]);
}

inline void Dopri5::integrate(double t0, double t1, std::vector<double>& y, const Options& opt) {
  static const double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                      d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                      d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
  segs_.clear();
  nsteps_ = 0;
  if (t1 <= t0) {
    if (t1 == t0) return;
    throw std::invalid_argument("Dopri5: backward integration not supported");
  }
  double t = t0;
  std::vector<std::vector<double>> k(7, std::vector<double>(dim_));
  std::vector<double> ynew(dim_), err(dim_);
  rhs_(t, y.data(), k[0].data());

  double h = opt.h_init;
  if (h <= 0.0) {
    double ynorm = 0, fnorm = 0;
    for (int i = 0; i < dim_; ++i) {
      ynorm = std::max(ynorm, std::abs(y[i]));
      fnorm = std::max(fnorm, std::abs(k[0][i]));
    }
    h = (fnorm > 0) ? 0.01 * std::max(1e-6, ynorm) / fnorm : (t1 - t0) / 100;
    h = std::min(h, (t1 - t0) / 10);
    if (h <= 0) h = (t1 - t0) / 100;
  }

  while (t < t1) {
    if (++nsteps_ > opt.max_steps) throw std::runtime_error("Dopri5: max step count exceeded");
    if (h < 1e-14 * std::max(1.0, std::abs(t)))
      throw std::runtime_error("Dopri5: step size underflow");
    bool last = false;
    if (t + h >= t1) {
      h = t1 - t;
      last = true;
    }
    one_step(t, y, h, ynew, err, k);
    double en = 0.0;
    for (int i = 0; i < dim_; ++i) {
      double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      double r = err[i] / sc;
      en += r * r;
    }
    en = std::sqrt(en / dim_);
    if (en <= 1.0) {
      if (opt.dense) {
        Segment s;
        s.t0 = t;
        s.h = h;
        s.r1 = y;
        s.r2.resize(dim_);
        s.r3.resize(dim_);
        s.r4.resize(dim_);
        s.r5.resize(dim_);
        for (int i = 0; i < dim_; ++i) {
          double dy = ynew[i] - y[i];
          s.r2[i] = dy;
          s.r3[i] = h * k[0][i] - dy;
          s.r4[i] = dy - h * k[6][i] - s.r3[i];
          s.r5[i] = h * (d1 * k[0][i] + d3 * k[2][i] + d4 * k[3][i] + d5 * k[4][i] +
                         d6 * k[5][i] + d7 * k[6][i]);
        }
        segs_.push_back(std::move(s));
      }
      t += h;
      y = ynew;
      k[0] = k[6];  // FSAL
      if (opt.guard && !opt.guard(t, y.data()))
        throw std::domain_error("Dopri5: guard triggered (left the trusted chart)");
      double fac = 0.9 * std::pow(std::max(en, 1e-10), -0.2);
      h *= std::min(5.0, std::max(0.2, fac));
      if (last && t >= t1) break;
    } else {
      double fac = 0.9 * std::pow(en, -0.2);
      h *= std::min(1.0, std::max(0.1, fac));
    }
  }
}

inline void Dopri5::eval(double t, std::vector<double>& out) const {
  if (segs_.empty()) throw std::runtime_error("Dopri5::eval: no dense output stored");
  size_t lo = 0, hi = segs_.size();
  while (lo + 1 < hi) {
    size_t mid = (lo + hi) / 2;
    if (segs_[mid].t0 <= t)
      lo = mid;
    else
      hi = mid;
  }
  const Segment& s = segs_[lo];
  double th = (t - s.t0) / s.h;
  th = std::min(1.0, std::max(0.0, th));
  out.resize(dim_);
  for (int i = 0; i < dim_; ++i) {
    out[i] = s.r1[i] +
             th * (s.r2[i] + (1 - th) * (s.r3[i] + th * (s.r4[i] + (1 - th) * s.r5[i])));
  }
}

}  // namespace subriem

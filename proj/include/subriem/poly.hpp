#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace subriem {

// Sparse multivariate polynomial over double. Exponents are packed six bits
// per variable into a 64-bit key, so at most 10 variables with individual
// degree <= 63. Variables are indexed 0..nv-1; by convention the last one is
// the vertical coordinate z of the normal-form chart.
class Poly {
public:
  Poly() = default;
  explicit Poly(int nv) : nv_(nv) { check_nv(nv); }

  static Poly constant(int nv, double c) {
    Poly p(nv);
    if (c != 0.0) p.terms_[0] = c;
    return p;
  }
  static Poly var(int nv, int i) {
    Poly p(nv);
    p.terms_[key_of_var(i)] = 1.0;
    return p;
  }
  static Poly monomial(int nv, const std::vector<int>& expo, double c);

  int nvars() const { return nv_; }
  bool is_zero(double tol = 0.0) const;
  int degree() const;
  double max_abs_coeff() const;

  double coeff(const std::vector<int>& expo) const;
  void set_coeff(const std::vector<int>& expo, double c);

  double eval(const std::vector<double>& x) const;

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(double s);
  friend Poly operator+(Poly a, const Poly& b) { a += b; return a; }
  friend Poly operator-(Poly a, const Poly& b) { a -= b; return a; }
  friend Poly operator*(Poly a, double s) { a *= s; return a; }
  friend Poly operator*(double s, Poly a) { a *= s; return a; }

  // Product truncated to total degree <= maxdeg (maxdeg < 0: no truncation).
  friend Poly mul(const Poly& a, const Poly& b, int maxdeg);

  Poly derivative(int i) const;
  Poly truncated(int maxdeg) const;

  // Keep only terms whose exponents vanish outside the given variable set.
  Poly restrict_to(const std::vector<int>& vars) const;

  // Exact division by the monomial x_i^k; throws if any term is not divisible.
  Poly divide_by_var(int i, int k = 1) const;

  // Substitute x_i -> s * x_i.
  Poly scale_var(int i, double s) const;

  void drop_small(double tol);

  const std::map<uint64_t, double>& terms() const { return terms_; }
  void set_term(uint64_t key, double c) {
    if (c == 0.0) terms_.erase(key); else terms_[key] = c;
  }

  static int key_degree(uint64_t key);
  static int key_exponent(uint64_t key, int i) { return int((key >> (6 * i)) & 0x3f); }
  static uint64_t key_of_var(int i) { return uint64_t(1) << (6 * i); }
  static uint64_t encode(const std::vector<int>& expo);
  static std::vector<int> decode(uint64_t key, int nv);

private:
  static void check_nv(int nv) {
    if (nv < 1 || nv > 10) throw std::invalid_argument("Poly: 1..10 variables supported");
  }
  int nv_ = 0;
  std::map<uint64_t, double> terms_;
};

std::string to_string(const Poly& p);

}  // namespace subriem

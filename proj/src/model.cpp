#include "subriem/model.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace subriem {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

ContactModel nilpotent_model(int n, const std::vector<double>& b) {
  if (int(b.size()) != n) throw std::invalid_argument("nilpotent_model: b size mismatch");
  ContactModel m;
  m.n = n;
  m.b = b;
  int nv = 2 * n + 1;
  m.jets.assign(2 * n, std::vector<Poly>(nv, Poly(nv)));
  for (int i = 0; i < 2 * n; ++i) m.jets[i][i] = Poly::constant(nv, 1.0);
  for (int i = 0; i < n; ++i) {
    // X_{2i+1} has vertical part  b_i x_{2i+2}/2, X_{2i+2} has -b_i x_{2i+1}/2.
    m.jets[2 * i][nv - 1] = Poly::var(nv, 2 * i + 1) * (b[i] / 2.0);
    m.jets[2 * i + 1][nv - 1] = Poly::var(nv, 2 * i) * (-b[i] / 2.0);
  }
  return m;
}

namespace {

void add_violation(std::vector<Violation>& out, const std::string& cond, const std::string& detail,
                   double mag) {
  out.push_back({cond, detail, mag});
}

void check_zero(std::vector<Violation>& out, const Poly& p, const std::string& cond,
                const std::string& detail) {
  double m = 0.0;
  for (const auto& [k, c] : p.terms()) m = std::max(m, std::abs(c));
  if (m > kValidateTol) add_violation(out, cond, detail, m);
}

}  // namespace

std::vector<Violation> validate_normal_form(const ContactModel& m) {
  std::vector<Violation> out;
  const int n = m.n;
  const int nv = 2 * n + 1;
  const int zv = nv - 1;

  if (n < 1) {
    add_violation(out, "meta", "n must be >= 1", 0);
    return out;
  }
  if (int(m.b.size()) != n || int(m.jets.size()) != 2 * n) {
    add_violation(out, "meta", "b or jets have wrong shape", 0);
    return out;
  }
  for (int i = 0; i < n; ++i) {
    if (!(m.b[i] > 0)) add_violation(out, "invariants-positive", "b must be positive", m.b[i]);
    if (i + 1 < n && !(m.b[i] > m.b[i + 1]))
      add_violation(out, "invariants-ordered", "b must be strictly decreasing", m.b[i + 1] - m.b[i]);
  }
  double prod = 1.0;
  for (double v : m.b) prod *= v;
  if (std::abs(prod - 1.0 / factorial(n)) > 1e-9)
    add_violation(out, "invariants-normalized", "prod(b) must equal 1/n!",
                  std::abs(prod - 1.0 / factorial(n)));

  // Frame equals the identity along the z-axis, with no linear horizontal terms.
  for (int i = 0; i < 2 * n; ++i) {
    for (int j = 0; j < 2 * n; ++j) {
      Poly axis = m.jets[i][j].restrict_to({zv});
      axis -= Poly::constant(nv, i == j ? 1.0 : 0.0);
      check_zero(out, axis, "frame-identity-on-axis",
                 "(X_" + std::to_string(i + 1) + ")_" + std::to_string(j + 1) + " along z");
      Poly lin(nv);
      for (const auto& [k, c] : m.jets[i][j].terms()) {
        int dx = 0;
        for (int v = 0; v < 2 * n; ++v) dx += Poly::key_exponent(k, v);
        if (dx == 1) lin.set_term(k, c);
      }
      check_zero(out, lin, "no-linear-horizontal",
                 "(X_" + std::to_string(i + 1) + ")_" + std::to_string(j + 1) + " has degree-1 x terms");
    }
  }

  // Horizontal symmetry (X_i)_j = (X_j)_i.
  for (int i = 0; i < 2 * n; ++i)
    for (int j = i + 1; j < 2 * n; ++j)
      check_zero(out, m.jets[i][j] - m.jets[j][i], "horizontal-symmetry",
                 "(X_" + std::to_string(i + 1) + ")_" + std::to_string(j + 1) + " vs transpose");

  // Euler identities: sum_j (X_j)_i x_j = x_i and sum_j (X_j)_z x_j = 0.
  for (int i = 0; i <= 2 * n; ++i) {
    Poly s(nv);
    for (int j = 0; j < 2 * n; ++j) s += mul(m.jets[j][i], Poly::var(nv, j), -1);
    if (i < 2 * n) s -= Poly::var(nv, i);
    check_zero(out, s, i < 2 * n ? "horizontal-euler" : "vertical-euler",
               "component " + std::to_string(i + 1));
  }

  // Per-pair structure on V_i = {x_k = 0, k outside pair i}.
  for (int i = 0; i < n; ++i) {
    int u = 2 * i, w = 2 * i + 1;
    std::vector<int> vars = {u, w, zv};
    Poly huu = m.jets[u][u].restrict_to(vars) - Poly::constant(nv, 1.0);
    Poly huw = m.jets[u][w].restrict_to(vars);
    Poly hwu = m.jets[w][u].restrict_to(vars);
    Poly hww = m.jets[w][w].restrict_to(vars) - Poly::constant(nv, 1.0);
    bool ok_div = true;
    for (const auto& [k, c] : huu.terms())
      if (Poly::key_exponent(k, w) < 2 && std::abs(c) > kValidateTol) ok_div = false;
    if (!ok_div) {
      add_violation(out, "pair-horizontal-structure",
                    "(X_" + std::to_string(u + 1) + ")_" + std::to_string(u + 1) +
                        " restricted to the pair plane is not 1 + x_even^2 * beta",
                    1.0);
    } else {
      Poly beta = huu.divide_by_var(w, 2);
      check_zero(out, beta.restrict_to({zv}), "pair-horizontal-structure",
                 "beta_" + std::to_string(i + 1) + "(0,0,z) must vanish");
      Poly uug = mul(mul(Poly::var(nv, u), Poly::var(nv, w), -1), beta, -1);
      check_zero(out, huw + uug, "pair-horizontal-structure",
                 "(X_" + std::to_string(u + 1) + ")_" + std::to_string(w + 1) + " pair plane shape");
      check_zero(out, hwu + uug, "pair-horizontal-structure",
                 "(X_" + std::to_string(w + 1) + ")_" + std::to_string(u + 1) + " pair plane shape");
      check_zero(out, hww - mul(mul(Poly::var(nv, u), Poly::var(nv, u), -1), beta, -1),
                 "pair-horizontal-structure",
                 "(X_" + std::to_string(w + 1) + ")_" + std::to_string(w + 1) + " pair plane shape");
    }

    Poly vu = m.jets[u][zv].restrict_to(vars);
    Poly vw = m.jets[w][zv].restrict_to(vars);
    bool vert_ok = true;
    for (const auto& [k, c] : vu.terms())
      if (Poly::key_exponent(k, w) < 1 && std::abs(c) > kValidateTol) vert_ok = false;
    for (const auto& [k, c] : vw.terms())
      if (Poly::key_exponent(k, u) < 1 && std::abs(c) > kValidateTol) vert_ok = false;
    if (!vert_ok) {
      add_violation(out, "pair-vertical-structure",
                    "vertical parts on pair plane " + std::to_string(i + 1) +
                        " must be x_even*alpha/2 and -x_odd*alpha/2",
                    1.0);
    } else {
      Poly alpha_u = vu.divide_by_var(w) * 2.0;
      Poly alpha_w = vw.divide_by_var(u) * (-2.0);
      check_zero(out, alpha_u - alpha_w, "pair-vertical-structure",
                 "alpha_" + std::to_string(i + 1) + " mismatch between the two vertical parts");
      double a0 = alpha_u.eval(std::vector<double>(nv, 0.0));
      if (std::abs(a0 - m.b[i]) > 1e-9)
        add_violation(out, "pair-vertical-structure",
                      "alpha_" + std::to_string(i + 1) + "(0) must equal b_" + std::to_string(i + 1),
                      std::abs(a0 - m.b[i]));
    }
  }

  // Bracket pattern at the origin: first-order vertical derivatives carry only
  // the in-pair +-b_i/2 entries.
  for (int l = 0; l < 2 * n; ++l) {
    for (int v = 0; v < 2 * n; ++v) {
      std::vector<int> e(nv, 0);
      e[v] = 1;
      double c = m.jets[l][zv].coeff(e);
      double want = 0.0;
      if (l / 2 == v / 2) want = (l % 2 == 0 && v == l + 1) ? m.b[l / 2] / 2 : ((l % 2 == 1 && v == l - 1) ? -m.b[l / 2] / 2 : 0.0);
      if (std::abs(c - want) > 1e-9)
        add_violation(out, "origin-bracket-pattern",
                      "d(X_" + std::to_string(l + 1) + ")_z/dx_" + std::to_string(v + 1),
                      std::abs(c - want));
    }
  }

  // Reeb compatibility of the second-order vertical jets at z = 0:
  // sum_j d_{x_m} Ltilde_j(0) prod_{i != j} b_i = 0, with
  // Ltilde_j = d(X_{2j})_z/dx_{2j-1} - d(X_{2j-1})_z/dx_{2j}.
  for (int v = 0; v < 2 * n; ++v) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      Poly lt = m.jets[2 * j + 1][zv].derivative(2 * j) - m.jets[2 * j][zv].derivative(2 * j + 1);
      std::vector<int> e(nv, 0);
      e[v] = 1;
      double d = lt.coeff(e);
      double prod_rest = 1.0;
      for (int i = 0; i < n; ++i)
        if (i != j) prod_rest *= m.b[i];
      s += d * prod_rest;
    }
    if (std::abs(s) > 1e-9)
      add_violation(out, "reeb-second-order", "x_" + std::to_string(v + 1) + " direction", std::abs(s));
  }

  for (int i = 0; i < 2 * n; ++i)
    for (int j = 0; j <= 2 * n; ++j)
      if (m.jets[i][j].degree() > 4)
        add_violation(out, "jet-degree", "jets must have total degree <= 4", m.jets[i][j].degree());

  return out;
}

namespace {

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

LoadResult parse_model(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  int n = -1;
  std::vector<double> b;
  ContactModel m;
  int cur_i = -1, cur_j = -1;
  bool meta = false;
  bool meta_seen = false;

  auto fail = [&](const std::string& msg) {
    throw ParseError("model parse error at line " + std::to_string(lineno) + ": " + msg);
  };

  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail("unterminated section header");
      std::string name = s.substr(1, s.size() - 2);
      if (name == "meta") {
        meta = true;
        meta_seen = true;
        cur_i = cur_j = -1;
        continue;
      }
      if (name.rfind("jet.", 0) == 0) {
        if (!meta_seen || n <= 0) fail("[meta] with n must precede jet sections");
        meta = false;
        size_t dot = name.find('.', 4);
        if (dot == std::string::npos) fail("jet section must be [jet.i.j]");
        try {
          cur_i = std::stoi(name.substr(4, dot - 4));
          cur_j = std::stoi(name.substr(dot + 1));
        } catch (...) {
          fail("jet section indices must be integers");
        }
        if (cur_i < 1 || cur_i > 2 * n || cur_j < 1 || cur_j > 2 * n + 1)
          fail("jet indices out of range");
        continue;
      }
      fail("unknown section [" + name + "]");
    }
    if (meta) {
      size_t eq = s.find('=');
      if (eq == std::string::npos) fail("meta line must be key = value");
      std::string key = trim(s.substr(0, eq));
      std::string val = trim(s.substr(eq + 1));
      if (key == "n") {
        try {
          n = std::stoi(val);
        } catch (...) {
          fail("n must be an integer");
        }
        if (n < 1 || n > 4) fail("n must be in 1..4");
        m.n = n;
        m.jets.assign(2 * n, std::vector<Poly>(2 * n + 1, Poly(2 * n + 1)));
      } else if (key == "b") {
        std::istringstream vs(val);
        double x;
        while (vs >> x) b.push_back(x);
        if (!vs.eof()) fail("b must be a list of reals");
      } else {
        fail("unknown meta key '" + key + "'");
      }
      continue;
    }
    if (cur_i < 0) fail("jet data outside a [jet.i.j] section");
    size_t arrow = s.find("->");
    if (arrow == std::string::npos) fail("jet line must be 'exponents -> coefficient'");
    std::istringstream es(s.substr(0, arrow));
    std::vector<int> expo;
    int e;
    while (es >> e) expo.push_back(e);
    std::string tail;
    if (es.clear(), es >> tail, !tail.empty()) fail("exponents must be nonnegative integers");
    if (int(expo.size()) != 2 * n + 1) fail("expected " + std::to_string(2 * n + 1) + " exponents");
    for (int v : expo)
      if (v < 0) fail("exponents must be nonnegative");
    double coeff;
    std::istringstream cs(trim(s.substr(arrow + 2)));
    if (!(cs >> coeff)) fail("bad coefficient");
    std::string rest;
    if (cs >> rest) fail("trailing data after coefficient");
    std::vector<int> key = expo;
    if (Poly::key_degree(Poly::encode(key)) > 4) fail("jet degree exceeds 4");
    double prev = m.jets[cur_i - 1][cur_j - 1].coeff(key);
    m.jets[cur_i - 1][cur_j - 1].set_coeff(key, prev + coeff);
  }
  if (n <= 0) throw ParseError("model parse error: missing [meta] n");
  if (int(b.size()) != n) throw ParseError("model parse error: b must list n values");
  m.b = b;

  LoadResult res;
  res.model = m;

  double prod = 1.0;
  for (double v : b) prod *= v;
  double target = 1.0 / factorial(n);
  if (std::abs(prod - target) > kNormalizationTol) {
    if (!(prod > 0)) throw ParseError("model parse error: prod(b) must be positive");
    // Renormalize by dilating z: b -> s*b, vertical parts scale by s, the
    // z-dependence of every jet rescales accordingly.
    double s = std::pow(target / prod, 1.0 / n);
    ContactModel& mm = res.model;
    int nv = 2 * n + 1;
    for (int i = 0; i < n; ++i) mm.b[i] *= s;
    for (int i = 0; i < 2 * n; ++i) {
      for (int j = 0; j <= 2 * n; ++j) {
        Poly p = mm.jets[i][j].scale_var(nv - 1, 1.0 / s);
        if (j == 2 * n) p *= s;
        mm.jets[i][j] = p;
      }
    }
    res.rescaled = true;
    res.rescale_factor = s;
  }

  auto viol = validate_normal_form(res.model);
  if (!viol.empty()) {
    std::string msg = "model violates normal form: " + viol.front().condition + " (" +
                      viol.front().detail + ")";
    throw ParseError(msg);
  }
  return res;
}

LoadResult load_model(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open model file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_model(ss.str());
}

std::string model_to_text(const ContactModel& m) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "[meta]\n";
  os << "n = " << m.n << "\n";
  os << "b =";
  for (double v : m.b) os << " " << v;
  os << "\n";
  for (int i = 0; i < 2 * m.n; ++i) {
    for (int j = 0; j <= 2 * m.n; ++j) {
      if (m.jets[i][j].terms().empty()) continue;
      os << "[jet." << i + 1 << "." << j + 1 << "]\n";
      for (const auto& [k, c] : m.jets[i][j].terms()) {
        for (int v = 0; v < m.dim(); ++v) os << Poly::key_exponent(k, v) << (v + 1 < m.dim() ? " " : "");
        os << " -> " << c << "\n";
      }
    }
  }
  return os.str();
}

void save_model(const ContactModel& m, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write model file: " + path);
  f << model_to_text(m);
}

}  // namespace subriem

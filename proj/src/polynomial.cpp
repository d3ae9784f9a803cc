#include "orbitspace/polynomial.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "orbitspace/errors.hpp"

namespace orbitspace {

int total_degree(const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0); }

bool grlex_greater(const Exponents& a, const Exponents& b) {
  const int da = total_degree(a), db = total_degree(b);
  if (da != db) return da > db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

long WeightSystem::weight_of(const Exponents& e) const {
  long w = 0;
  for (size_t i = 0; i < e.size(); ++i) w += static_cast<long>(e[i]) * degrees[i];
  return w;
}

void WeightSystem::validate() const {
  if (degrees.empty()) throw ConfigError("WeightSystem: empty degree list");
  for (int d : degrees) {
    if (d < 1) throw ConfigError("WeightSystem: degrees must be positive");
  }
  for (size_t i = 0; i + 1 < degrees.size(); ++i) {
    if (degrees[i] < degrees[i + 1]) {
      throw ConfigError("WeightSystem: degrees must be non-increasing");
    }
  }
  if (degrees.back() != 2) throw ConfigError("WeightSystem: last degree must be 2 (|x|^2)");
}

std::vector<Exponents> w_monomials(long weight, const WeightSystem& ws) {
  std::vector<Exponents> out;
  if (weight < 0) return out;
  Exponents current(ws.degrees.size(), 0);
  // Depth-first over exponents of p1, p2, ... with the remaining weight.
  auto rec = [&](auto&& self, size_t idx, long remaining) -> void {
    if (idx == ws.degrees.size()) {
      if (remaining == 0) out.push_back(current);
      return;
    }
    const long d = ws.degrees[idx];
    for (long e = remaining / d; e >= 0; --e) {
      current[idx] = static_cast<int>(e);
      self(self, idx + 1, remaining - e * d);
    }
    current[idx] = 0;
  };
  rec(rec, 0, weight);
  std::sort(out.begin(), out.end(), GrlexGreater{});
  return out;
}

bool weighted_greater(const Exponents& a, const Exponents& b, const WeightSystem& ws) {
  const long wa = ws.weight_of(a), wb = ws.weight_of(b);
  if (wa != wb) return wa > wb;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

Polynomial Polynomial::constant(std::vector<std::string> vars, const Rational& c) {
  Polynomial p(std::move(vars));
  if (!c.is_zero()) p.terms_.emplace(Exponents(p.vars_.size(), 0), c);
  return p;
}

Polynomial Polynomial::variable(std::vector<std::string> vars, int index) {
  if (index < 0 || index >= static_cast<int>(vars.size())) {
    throw std::invalid_argument("Polynomial::variable: index out of range");
  }
  Polynomial p(std::move(vars));
  Exponents e(p.vars_.size(), 0);
  e[index] = 1;
  p.terms_.emplace(std::move(e), Rational(1));
  return p;
}

Polynomial Polynomial::monomial(std::vector<std::string> vars, const Exponents& e,
                                const Rational& c) {
  if (e.size() != vars.size()) {
    throw std::invalid_argument("Polynomial::monomial: exponent length mismatch");
  }
  for (int k : e) {
    if (k < 0) throw std::invalid_argument("Polynomial::monomial: negative exponent");
  }
  Polynomial p(std::move(vars));
  if (!c.is_zero()) p.terms_.emplace(e, c);
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
}

Rational Polynomial::constant_term() const {
  const Exponents zero(vars_.size(), 0);
  auto it = terms_.find(zero);
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational Polynomial::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

int Polynomial::degree() const {
  if (terms_.empty()) return -1;
  return total_degree(terms_.begin()->first);
}

bool Polynomial::is_homogeneous() const {
  if (terms_.empty()) return true;
  const int d = total_degree(terms_.begin()->first);
  for (const auto& [e, c] : terms_) {
    if (total_degree(e) != d) return false;
  }
  return true;
}

std::optional<long> Polynomial::weight(const WeightSystem& ws) const {
  if (terms_.empty()) return 0;
  const long w = ws.weight_of(terms_.begin()->first);
  for (const auto& [e, c] : terms_) {
    if (ws.weight_of(e) != w) return std::nullopt;
  }
  return w;
}

Polynomial Polynomial::derivative(int var) const {
  if (var < 0 || var >= variable_count()) {
    throw std::invalid_argument("Polynomial::derivative: variable index out of range");
  }
  Polynomial out(vars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents d = e;
    d[var] -= 1;
    out.add_term(d, c * Rational(e[var]));
  }
  return out;
}

std::vector<Polynomial> Polynomial::gradient() const {
  std::vector<Polynomial> out;
  out.reserve(vars_.size());
  for (int i = 0; i < variable_count(); ++i) out.push_back(derivative(i));
  return out;
}

void Polynomial::add_term(const Exponents& e, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void Polynomial::require_same_vars(const Polynomial& a, const Polynomial& b) {
  if (a.vars_ != b.vars_) {
    throw std::invalid_argument("Polynomial: variable-list mismatch");
  }
}

Polynomial Polynomial::operator-() const {
  Polynomial out(vars_);
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
  return out;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  Polynomial::require_same_vars(a, b);
  Polynomial out = a;
  for (const auto& [e, c] : b.terms_) out.add_term(e, c);
  return out;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  Polynomial::require_same_vars(a, b);
  Polynomial out = a;
  for (const auto& [e, c] : b.terms_) out.add_term(e, -c);
  return out;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial::require_same_vars(a, b);
  Polynomial out(a.vars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      Exponents e(ea.size());
      for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

Polynomial operator*(const Rational& c, const Polynomial& f) {
  Polynomial out(f.variables());
  if (c.is_zero()) return out;
  for (const auto& [e, k] : f.terms()) out.add_term(e, c * k);
  return out;
}

Polynomial Polynomial::pow(int e) const {
  if (e < 0) throw std::invalid_argument("Polynomial::pow: negative exponent");
  Polynomial out = Polynomial::constant(vars_, Rational(1));
  Polynomial base = *this;
  int k = e;
  while (k > 0) {
    if (k & 1) out = out * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return out;
}

std::optional<Polynomial> exact_divide(const Polynomial& f, const Polynomial& g) {
  Polynomial::require_same_vars(f, g);
  if (g.is_zero()) throw std::domain_error("exact_divide: division by zero polynomial");
  Polynomial q(f.variables());
  Polynomial r = f;
  const auto& [lt_g, lc_g] = *g.terms().begin();
  while (!r.is_zero()) {
    const auto& [lt_r, lc_r] = *r.terms().begin();
    // If f = g*q then the leading term of every partial remainder stays
    // divisible by the leading term of g; a failure here is a proof of
    // non-divisibility.
    Exponents e(lt_r.size());
    for (size_t i = 0; i < e.size(); ++i) {
      e[i] = lt_r[i] - lt_g[i];
      if (e[i] < 0) return std::nullopt;
    }
    const Rational c = lc_r / lc_g;
    Polynomial mono = Polynomial::monomial(f.variables(), e, c);
    q = q + mono;
    r = r - mono * g;
  }
  return q;
}

Polynomial substitute(const Polynomial& f, const std::vector<Polynomial>& images) {
  if (static_cast<int>(images.size()) != f.variable_count()) {
    throw std::invalid_argument("substitute: image count mismatch");
  }
  for (size_t i = 1; i < images.size(); ++i) Polynomial::require_same_vars(images[0], images[i]);
  const std::vector<std::string>& target_vars =
      images.empty() ? f.variables() : images[0].variables();

  // Cache image powers; repeated exponents dominate the work otherwise.
  std::vector<std::vector<Polynomial>> powers(images.size());
  auto power = [&](size_t a, int e) -> const Polynomial& {
    auto& table = powers[a];
    if (table.empty()) table.push_back(Polynomial::constant(target_vars, Rational(1)));
    while (static_cast<int>(table.size()) <= e) table.push_back(table.back() * images[a]);
    return table[e];
  };

  Polynomial out(target_vars);
  for (const auto& [e, c] : f.terms()) {
    Polynomial term = Polynomial::constant(target_vars, c);
    for (size_t a = 0; a < images.size(); ++a) {
      if (e[a] != 0) term = term * power(a, e[a]);
    }
    out = out + term;
  }
  return out;
}

namespace {

void skip_space(const std::string& s, size_t& i) {
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
}

// One factor: rational literal, or variable with optional ^exponent.
struct Factor {
  bool is_coeff = false;
  Rational coeff;
  int var_index = -1;
  int exponent = 1;
};

Factor parse_factor(const std::string& s, size_t& i, const std::vector<std::string>& vars) {
  skip_space(s, i);
  Factor out;
  if (i >= s.size()) throw std::invalid_argument("parse_polynomial: unexpected end of input");
  if (std::isdigit(static_cast<unsigned char>(s[i]))) {
    size_t j = i;
    while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '/')) ++j;
    auto r = Rational::parse(s.substr(i, j - i));
    if (!r) throw std::invalid_argument("parse_polynomial: bad coefficient near '" +
                                        s.substr(i, j - i) + "'");
    out.is_coeff = true;
    out.coeff = *r;
    i = j;
    return out;
  }
  // variable name: longest match against the declared list
  int best = -1;
  size_t best_len = 0;
  for (size_t v = 0; v < vars.size(); ++v) {
    const std::string& name = vars[v];
    if (name.size() > best_len && s.compare(i, name.size(), name) == 0) {
      best = static_cast<int>(v);
      best_len = name.size();
    }
  }
  if (best < 0) {
    throw std::invalid_argument("parse_polynomial: unknown symbol near '" + s.substr(i, 8) + "'");
  }
  i += best_len;
  out.var_index = best;
  skip_space(s, i);
  if (i < s.size() && s[i] == '^') {
    ++i;
    skip_space(s, i);
    size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    if (j == i) throw std::invalid_argument("parse_polynomial: missing exponent after '^'");
    out.exponent = std::stoi(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

Polynomial parse_polynomial(const std::string& text, const std::vector<std::string>& vars) {
  Polynomial out(vars);
  size_t i = 0;
  skip_space(text, i);
  if (i >= text.size()) throw std::invalid_argument("parse_polynomial: empty input");
  bool first = true;
  while (i < text.size()) {
    int sign = 1;
    skip_space(text, i);
    if (text[i] == '+' || text[i] == '-') {
      sign = (text[i] == '-') ? -1 : 1;
      ++i;
    } else if (!first) {
      throw std::invalid_argument("parse_polynomial: expected '+' or '-' between terms");
    }
    first = false;

    Rational coeff(sign);
    Exponents e(vars.size(), 0);
    bool any_factor = false;
    while (true) {
      Factor f = parse_factor(text, i, vars);
      any_factor = true;
      if (f.is_coeff) {
        coeff *= f.coeff;
      } else {
        e[f.var_index] += f.exponent;
      }
      skip_space(text, i);
      if (i < text.size() && text[i] == '*') {
        ++i;
        continue;
      }
      break;
    }
    if (!any_factor) throw std::invalid_argument("parse_polynomial: empty term");
    out.add_term(e, coeff);
    skip_space(text, i);
  }
  return out;
}

namespace {

std::string format_terms(const std::vector<std::pair<Exponents, Rational>>& terms,
                         const std::vector<std::string>& vars) {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms) {
    const Rational a = c.abs();
    if (first) {
      if (c.sign() < 0) os << "-";
      first = false;
    } else {
      os << (c.sign() < 0 ? " - " : " + ");
    }
    const bool has_vars = total_degree(e) > 0;
    const bool unit = (a == Rational(1));
    if (!unit || !has_vars) os << a.str();
    bool star = !unit || !has_vars;
    for (size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (star) os << "*";
      os << vars[i];
      if (e[i] > 1) os << "^" << e[i];
      star = true;
    }
  }
  return os.str();
}

}  // namespace

std::string Polynomial::str() const {
  std::vector<std::pair<Exponents, Rational>> terms(terms_.begin(), terms_.end());
  return format_terms(terms, vars_);
}

std::string weighted_str(const Polynomial& f, const WeightSystem& ws) {
  std::vector<std::pair<Exponents, Rational>> terms(f.terms().begin(), f.terms().end());
  std::sort(terms.begin(), terms.end(), [&](const auto& a, const auto& b) {
    return weighted_greater(a.first, b.first, ws);
  });
  return format_terms(terms, f.variables());
}

Polynomial reduce_weighted(const Polynomial& f, const std::vector<Polynomial>& gens,
                           const WeightSystem& ws) {
  for (const auto& g : gens) {
    Polynomial::require_same_vars(f, g);
    if (g.is_zero()) throw std::domain_error("reduce_weighted: zero generator");
  }
  auto leading = [&](const Polynomial& p) {
    auto best = p.terms().begin();
    for (auto it = p.terms().begin(); it != p.terms().end(); ++it) {
      if (weighted_greater(it->first, best->first, ws)) best = it;
    }
    return best;
  };

  Polynomial r = f;
  Polynomial remainder(f.variables());
  while (!r.is_zero()) {
    auto lt = leading(r);
    bool reduced = false;
    for (const auto& g : gens) {
      auto ltg = leading(g);
      Exponents q(lt->first.size());
      bool divisible = true;
      for (size_t i = 0; i < q.size(); ++i) {
        q[i] = lt->first[i] - ltg->first[i];
        if (q[i] < 0) {
          divisible = false;
          break;
        }
      }
      if (!divisible) continue;
      const Rational c = lt->second / ltg->second;
      r = r - Polynomial::monomial(f.variables(), q, c) * g;
      reduced = true;
      break;
    }
    if (!reduced) {
      remainder.add_term(lt->first, lt->second);
      Polynomial lt_poly = Polynomial::monomial(f.variables(), lt->first, lt->second);
      r = r - lt_poly;
    }
  }
  return remainder;
}

Polynomial canonical_signed(const Polynomial& f, const WeightSystem& ws) {
  if (f.is_zero()) return f;
  // lcm of denominators, gcd of numerators -> primitive integer content
  mpz_class den_lcm = 1, num_gcd = 0;
  for (const auto& [e, c] : f.terms()) {
    mpz_class den = c.denominator();
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), den.get_mpz_t());
  }
  for (const auto& [e, c] : f.terms()) {
    mpz_class num = c.numerator() * (den_lcm / c.denominator());
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), num.get_mpz_t());
  }
  Rational scale{mpq_class(den_lcm) / mpq_class(num_gcd)};

  auto leading = f.terms().begin();
  for (auto it = f.terms().begin(); it != f.terms().end(); ++it) {
    if (weighted_greater(it->first, leading->first, ws)) leading = it;
  }
  if ((leading->second * scale).sign() < 0) scale = -scale;
  return scale * f;
}

}  // namespace orbitspace

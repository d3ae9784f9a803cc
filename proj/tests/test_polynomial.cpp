#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "helpers.hpp"
#include "orbitspace/polynomial.hpp"

using namespace orbitspace;
using namespace testutil;

namespace {

Polynomial P(const std::string& text) { return parse_polynomial(text, p_vars()); }
Polynomial X(const std::string& text) { return parse_polynomial(text, x_vars()); }

const WeightSystem kWeights{{6, 4, 2}};

}  // namespace

TEST_CASE("rational arithmetic and parsing") {
  CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-3).abs() == Rational(3));
  CHECK(Rational(2, 3).pow(3) == Rational(8, 27));
  CHECK(*Rational::parse("-12/8") == Rational(-3, 2));
  CHECK(!Rational::parse("1/0").has_value());
  CHECK(!Rational::parse("abc").has_value());
  CHECK(Rational(1, 3).to_double() == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("rationalize by continued fractions") {
  CHECK(*rationalize(0.5, 1000000, 1e-9) == Rational(1, 2));
  CHECK(*rationalize(-2.0, 1000000, 1e-9) == Rational(-2));
  CHECK(*rationalize(1.0 / 3.0, 1000000, 1e-9) == Rational(1, 3));
  // no small-denominator fit for an irrational within a tight bound
  CHECK(!rationalize(std::sqrt(2.0), 10, 1e-12).has_value());
}

TEST_CASE("add: inverse, disjoint supports, cancellation") {
  CHECK((P("p2") + P("-1*p2")).is_zero());
  CHECK(P("p1^2") + P("4*p2^3") == P("p1^2 + 4*p2^3"));
  CHECK(P("p2 - p3^2") + P("p3^2") == P("p2"));
}

TEST_CASE("mul: identity, difference of squares, determinant expansion") {
  CHECK(P("p2 - p3^2") * P("1") == P("p2 - p3^2"));
  const auto xy = std::vector<std::string>{"x1", "y1"};
  CHECK(parse_polynomial("x1 + y1", xy) * parse_polynomial("x1 - y1", xy) ==
        parse_polynomial("x1^2 - y1^2", xy));
  // 2304*p3*(p1^2 - 4*p2^3)*(p2 - p3^2), the example determinant
  const Polynomial det = P("2304*p3") * P("p1^2 - 4*p2^3") * P("p2 - p3^2");
  CHECK(det == P("2304*p1^2*p2*p3 - 2304*p1^2*p3^3 - 9216*p2^4*p3 + 9216*p2^3*p3^3"));
}

TEST_CASE("gradient: quadratic form, constants, finite-difference oracle") {
  const Polynomial norm2 = X("x1^2 + y1^2 + x2^2 + y2^2");
  const auto grad = norm2.gradient();
  CHECK(grad[0] == X("2*x1"));
  CHECK(grad[1] == X("2*y1"));
  CHECK(grad[2] == X("2*x2"));
  CHECK(grad[3] == X("2*y2"));

  for (const auto& g : X("7").gradient()) CHECK(g.is_zero());

  // grad p2 at (0,1,0,1) -> (0,8,0,8); checked against central differences.
  const Polynomial p2 = example_mib().polys[1];
  const auto gp2 = p2.gradient();
  const std::vector<double> at{0.0, 1.0, 0.0, 1.0};
  const std::vector<double> expected{0.0, 8.0, 0.0, 8.0};
  const double h = 1e-6;
  for (int i = 0; i < 4; ++i) {
    std::vector<double> plus = at, minus = at;
    plus[i] += h;
    minus[i] -= h;
    const double fd = (p2.evaluate<double>(plus) - p2.evaluate<double>(minus)) / (2 * h);
    CHECK(gp2[i].evaluate<double>(at) == doctest::Approx(expected[i]).epsilon(1e-9));
    CHECK(fd == doctest::Approx(expected[i]).epsilon(1e-6));
  }
}

TEST_CASE("evaluate: direct substitution values") {
  const MIBSpec mib = example_mib();
  const std::vector<Rational> pt{Rational(-1), Rational(2), Rational(1), Rational(1)};
  CHECK(mib.polys[2].evaluate<Rational>(pt) == Rational(7));
  const std::vector<Rational> pt2{Rational(0), Rational(1), Rational(0), Rational(1)};
  CHECK(mib.polys[0].evaluate<Rational>(pt2) == Rational(16));
  // any f at 0 -> constant term
  const Polynomial f = X("3*x1^2 - 5");
  CHECK(f.evaluate<Rational>({Rational(0), Rational(0), Rational(0), Rational(0)}) ==
        Rational(-5));
  CHECK(f.constant_term() == Rational(-5));
  CHECK_THROWS_AS(f.evaluate<Rational>({Rational(0)}), std::invalid_argument);
}

TEST_CASE("exact_divide: determinant factor, independents, unit") {
  const Polynomial det = P("2304*p3") * P("p1^2 - 4*p2^3") * P("p2 - p3^2");
  const auto quot = exact_divide(det, P("p2 - p3^2"));
  REQUIRE(quot.has_value());
  CHECK(*quot == P("2304*p3") * P("p1^2 - 4*p2^3"));
  CHECK(!exact_divide(P("p1"), P("p3")).has_value());
  const Polynomial f = P("p1^2*p2 - 7*p3");
  CHECK(*exact_divide(f, P("1")) == f);
  CHECK_THROWS_AS(exact_divide(f, Polynomial(p_vars())), std::domain_error);
}

namespace {
// Independent enumeration oracle: filter the full exponent box.
std::set<Exponents> w_monomials_oracle(long weight, const WeightSystem& ws) {
  std::set<Exponents> out;
  std::vector<int> caps;
  for (int d : ws.degrees) caps.push_back(static_cast<int>(weight / d));
  Exponents e(ws.degrees.size(), 0);
  while (true) {
    long w = 0;
    for (size_t i = 0; i < e.size(); ++i) w += static_cast<long>(e[i]) * ws.degrees[i];
    if (w == weight) out.insert(e);
    size_t i = 0;
    while (i < e.size() && e[i] == caps[i]) {
      e[i] = 0;
      ++i;
    }
    if (i == e.size()) break;
    ++e[i];
  }
  return out;
}
}  // namespace

TEST_CASE("w_monomials: enumeration against the box oracle") {
  const auto w4 = w_monomials(4, kWeights);
  CHECK(w4.size() == 2);  // p2 and p3^2
  CHECK(std::set<Exponents>(w4.begin(), w4.end()) ==
        std::set<Exponents>{{0, 1, 0}, {0, 0, 2}});

  const auto w0 = w_monomials(0, kWeights);
  REQUIRE(w0.size() == 1);
  CHECK(total_degree(w0[0]) == 0);

  for (long w : {2L, 4L, 6L, 8L, 10L, 12L, 18L}) {
    const auto got = w_monomials(w, kWeights);
    const auto expect = w_monomials_oracle(w, kWeights);
    CHECK(got.size() == expect.size());
    CHECK(std::set<Exponents>(got.begin(), got.end()) == expect);
  }
  CHECK(w_monomials(12, kWeights).size() == 7);
  CHECK(w_monomials(1, kWeights).empty());
}

TEST_CASE("ring axioms on random polynomials") {
  Rng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const auto f = random_polynomial(p_vars(), 4, 4, rng);
    const auto g = random_polynomial(p_vars(), 4, 4, rng);
    const auto h = random_polynomial(p_vars(), 3, 3, rng);
    CHECK(f + g == g + f);
    CHECK(f * g == g * f);
    CHECK((f + g) + h == f + (g + h));
    CHECK((f * g) * h == f * (g * h));
    CHECK(f * (g + h) == f * g + f * h);
  }
}

TEST_CASE("exact_divide undoes mul") {
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const auto f = random_polynomial(p_vars(), 4, 4, rng);
    auto g = random_polynomial(p_vars(), 3, 3, rng);
    if (g.is_zero()) g = P("p3 + 1");
    const auto q = exact_divide(f * g, g);
    REQUIRE(q.has_value());
    CHECK(*q == f);
  }
}

TEST_CASE("gradient is linear") {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_polynomial(x_vars(), 5, 4, rng);
    const auto g = random_polynomial(x_vars(), 5, 4, rng);
    const Rational a(rng.uniform_int(-5, 5), rng.uniform_int(1, 3));
    const Rational b(rng.uniform_int(-5, 5), rng.uniform_int(1, 3));
    const auto lhs = (a * f + b * g).gradient();
    const auto fg = f.gradient();
    const auto gg = g.gradient();
    for (size_t i = 0; i < lhs.size(); ++i) CHECK(lhs[i] == a * fg[i] + b * gg[i]);
  }
}

TEST_CASE("evaluate is multiplicative at rational points") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_polynomial(x_vars(), 4, 4, rng);
    const auto g = random_polynomial(x_vars(), 4, 4, rng);
    const auto v = random_rational_point(4, rng);
    CHECK((f * g).evaluate<Rational>(v) == f.evaluate<Rational>(v) * g.evaluate<Rational>(v));
  }
}

TEST_CASE("w_monomials members have the exact weight and no duplicates") {
  Rng rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    WeightSystem ws;
    const int q = rng.uniform_int(2, 4);
    int d = rng.uniform_int(2, 6);
    for (int i = 0; i < q - 1; ++i) {
      ws.degrees.push_back(d);
      d = std::max(2, d - rng.uniform_int(0, 2));
    }
    ws.degrees.push_back(2);
    std::sort(ws.degrees.rbegin(), ws.degrees.rend());
    const long w = 2L * rng.uniform_int(1, 8);
    const auto monos = w_monomials(w, ws);
    std::set<Exponents> seen;
    for (const auto& e : monos) {
      CHECK(ws.weight_of(e) == w);
      CHECK(seen.insert(e).second);
    }
  }
}

TEST_CASE("text format round-trips") {
  Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const auto f = random_polynomial(p_vars(), 5, 5, rng);
    CHECK(parse_polynomial(f.str(), p_vars()) == f);
  }
  CHECK(Polynomial(p_vars()).str() == "0");
  CHECK(P("p1 - p2").str() == "p1 - p2");
  CHECK(P("-3/2*p1*p3^2").str() == "-3/2*p1*p3^2");
  CHECK_THROWS_AS(parse_polynomial("p1 + qq", p_vars()), std::invalid_argument);
  CHECK_THROWS_AS(X("p1"), std::invalid_argument);
}

TEST_CASE("homogeneity and weights") {
  CHECK(P("p1^2 - 4*p2^3").weight(kWeights) == 12);
  CHECK(P("p2 - p3^2").weight(kWeights) == 4);
  CHECK(!P("p1 + p2").weight(kWeights).has_value());
  CHECK(X("x1^2 + y1^2").is_homogeneous());
  CHECK(!X("x1^2 + y1").is_homogeneous());
}

TEST_CASE("weighted reduction certifies ideal membership") {
  const std::vector<Polynomial> gens{P("p2 - p3^2"), P("p1 - 2*p3^3")};
  CHECK(reduce_weighted(P("p1^2 - 4*p2^3"), gens, kWeights).is_zero());
  CHECK(!reduce_weighted(P("p1"), gens, kWeights).is_zero());
  CHECK(reduce_weighted(P("p2*p3 - p3^3"), {P("p2 - p3^2")}, kWeights).is_zero());
}

TEST_CASE("canonical sign normalization") {
  CHECK(canonical_signed(P("-2*p2 + 2*p3^2"), kWeights) == P("p2 - p3^2"));
  CHECK(canonical_signed(P("-1/2*p1^2 + 2*p2^3"), kWeights) == P("p1^2 - 4*p2^3"));
  CHECK(canonical_signed(P("4*p3"), kWeights) == P("p3"));
}

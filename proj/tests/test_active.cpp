#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/SVD>

#include "helpers.hpp"
#include "orbitspace/active.hpp"
#include "orbitspace/errors.hpp"

using namespace orbitspace;
using namespace testutil;

namespace {

Polynomial P(const std::string& text) { return parse_polynomial(text, p_vars()); }

// Independent oracle: numeric P-hat from the published matrix entries.
Eigen::Matrix3d paper_phat(double p1, double p2, double p3) {
  Eigen::Matrix3d m;
  m << 144 * p2 * p2 * p3, 24 * p1 * p3, 12 * p1,
       24 * p1 * p3, 16 * p2 * p3, 8 * p2,
       12 * p1, 8 * p2, 4 * p3;
  return m;
}

int svd_rank(const Eigen::Matrix3d& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  int r = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > 1e-7 * std::max(sv(0), 1e-300)) ++r;
  }
  return r;
}

struct Setup {
  MIBSpec mib = example_mib();
  PHatMatrix ph = compute_phat(mib);
  GroupPresentation gp = example_group();
  std::vector<GroupElement> closure = finite_closure(gp, 256);
  std::vector<FixedSubspace> subs = fixed_subspaces(gp, closure);
};

}  // namespace

TEST_CASE("boundary sample ranks match the published matrix oracle") {
  // p(0,1,0,2) = (128, 16, 5): rank 2 (the 2x2 minor [[1280,128],[128,20]]
  // has determinant 9216 while the full determinant vanishes)
  CHECK(svd_rank(paper_phat(128, 16, 5)) == 2);
  CHECK(1280.0 * 20 - 128.0 * 128 == 9216.0);
  // p(0,1,0,0) = (0,0,1): rank 1
  CHECK(svd_rank(paper_phat(0, 0, 1)) == 1);
  // origin: rank 0
  CHECK(svd_rank(paper_phat(0, 0, 0)) == 0);

  Setup s;
  CHECK(s.ph.rank(vec3(128, 16, 5)) == 2);
  CHECK(s.ph.rank(vec3(0, 0, 1)) == 1);
  CHECK(s.ph.rank(vec3(0, 0, 0)) == 0);
  // generic point: full rank (principal stratum)
  CHECK(s.ph.rank(vec3(-416, 40, 7)) == 3);
}

TEST_CASE("boundary_samples covers the expected ranks") {
  Setup s;
  Rng rng(2);
  BoundarySampleOptions opts;
  opts.per_subspace = 40;
  const auto samples = boundary_samples(s.mib, s.ph, s.subs, opts, rng);
  std::set<int> ranks;
  for (const auto& b : samples) ranks.insert(b.rank);
  CHECK(ranks.count(0) == 1);  // origin
  CHECK(ranks.count(1) == 1);
  CHECK(ranks.count(2) == 1);
  CHECK(ranks.count(3) == 1);
}

TEST_CASE("interpolate_vanishing finds the sheet polynomials") {
  Setup s;
  OrbitMapEvaluator orbit(s.mib);
  Rng rng(3);

  SUBCASE("p2 = p3^2 sheet at weight 4") {
    // samples from the subspace fixed by U1(pi) R: x = (a, b, -a, b)
    std::vector<Eigen::VectorXd> pts;
    for (int i = 0; i < 24; ++i) {
      const double a = rng.uniform(-1, 1), b = rng.uniform(-1, 1);
      pts.push_back(orbit.p(vec4(a, b, -a, b).normalized()));
    }
    const auto res = interpolate_vanishing(pts, 4, s.mib.weights, p_vars());
    REQUIRE(res.candidates.size() == 1);
    CHECK(res.candidates[0] == P("p2 - p3^2"));
  }
  SUBCASE("p1^2 = 4 p2^3 sheet at weight 12") {
    std::vector<Eigen::VectorXd> pts;
    for (int i = 0; i < 30; ++i) {
      const double a = rng.uniform(-1, 1), b = rng.uniform(-1, 1);
      pts.push_back(orbit.p(vec4(0, a, 0, b).normalized()));
    }
    const auto res = interpolate_vanishing(pts, 12, s.mib.weights, p_vars());
    REQUIRE(!res.candidates.empty());
    bool found = false;
    for (const auto& c : res.candidates) found = found || c == P("p1^2 - 4*p2^3");
    CHECK(found);
  }
  SUBCASE("principal-stratum samples have an empty kernel") {
    std::vector<Eigen::VectorXd> pts;
    for (int i = 0; i < 30; ++i) pts.push_back(orbit.p(rng.unit_vector(4)));
    for (long w : {4L, 6L, 8L}) {
      CHECK(interpolate_vanishing(pts, w, s.mib.weights, p_vars()).candidates.empty());
    }
  }
}

TEST_CASE("verify_master: the two sheet polynomials are active, p3 is not") {
  Setup s;
  SUBCASE("p2 - p3^2: lambda = (0, 0, 8)") {
    const auto a = verify_master(P("p2 - p3^2"), s.ph);
    REQUIRE(a.has_value());
    CHECK(a->weight == 4);
    CHECK(a->multipliers[0].is_zero());
    CHECK(a->multipliers[1].is_zero());
    CHECK(a->multipliers[2] == P("8"));
  }
  SUBCASE("p1^2 - 4 p2^3: lambda = (0, 48 p3, 24)") {
    const auto a = verify_master(P("p1^2 - 4*p2^3"), s.ph);
    REQUIRE(a.has_value());
    CHECK(a->weight == 12);
    CHECK(a->multipliers[0].is_zero());
    CHECK(a->multipliers[1] == P("48*p3"));
    CHECK(a->multipliers[2] == P("24"));
  }
  SUBCASE("p3 fails: row 1 produces 12 p1, not a multiple of p3") {
    CHECK(!verify_master(P("p3"), s.ph).has_value());
  }
  SUBCASE("scalar multiples stay active with the same multipliers") {
    const auto a = verify_master(P("5*p2 - 5*p3^2"), s.ph);
    REQUIRE(a.has_value());
    CHECK(a->multipliers[2] == P("8"));
  }
}

TEST_CASE("find_active returns exactly the two actives and their product") {
  Setup s;
  Rng rng(5);
  FindActiveOptions opts;
  const auto res = find_active(s.ph, s.mib, s.subs, opts, rng);
  REQUIRE(res.actives.size() == 2);
  CHECK(res.actives[0].poly == P("p2 - p3^2"));
  CHECK(res.actives[1].poly == P("p1^2 - 4*p2^3"));
  CHECK(res.product == P("p2 - p3^2") * P("p1^2 - 4*p2^3"));
  CHECK(res.uncovered.empty());
  for (const auto& a : res.actives) CHECK(!a.composite_flag);

  // A(p) divides det P-hat exactly
  const Polynomial det = det_phat(s.ph);
  const auto quot = exact_divide(det, res.product);
  REQUIRE(quot.has_value());
  CHECK(*quot == P("2304*p3"));

  // Euler multiplier: lambda_q = 2w, exactly
  for (const auto& a : res.actives) {
    CHECK(a.multipliers.back() ==
          Polynomial::constant(p_vars(), Rational(2 * a.weight)));
  }
}

TEST_CASE("actives vanish on their sheets and not on the principal stratum") {
  Setup s;
  Rng rng(7);
  FindActiveOptions opts;
  const auto res = find_active(s.ph, s.mib, s.subs, opts, rng);
  OrbitMapEvaluator orbit(s.mib);
  // nonzero at random principal samples
  for (int t = 0; t < 100; ++t) {
    const Eigen::VectorXd p = orbit.p(rng.unit_vector(4));
    double prod = 1;
    std::vector<double> pv(p.data(), p.data() + p.size());
    for (const auto& a : res.actives) prod *= a.poly.evaluate<double>(pv);
    CHECK(std::abs(prod) > 1e-12);
  }
}

TEST_CASE("trivial O(n) case: no active polynomials") {
  MIBSpec mib;
  mib.x_vars = {"x1", "x2", "x3"};
  mib.weights.degrees = {2};
  mib.polys = {parse_polynomial("x1^2 + x2^2 + x3^2", mib.x_vars)};
  const PHatMatrix ph = compute_phat(mib);
  GroupPresentation gp;  // sampling device: the trivial presentation gives
  gp.dimension = 3;      // the full space as the only fixed subspace
  const auto closure = finite_closure(gp, 8);
  const auto subs = fixed_subspaces(gp, closure);
  Rng rng(9);
  FindActiveOptions opts;
  const auto res = find_active(ph, mib, subs, opts, rng);
  CHECK(res.actives.empty());
  CHECK(res.product == Polynomial::constant(std::vector<std::string>{"p1"}, Rational(1)));
}

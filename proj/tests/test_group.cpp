#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <set>

#include "helpers.hpp"
#include "orbitspace/errors.hpp"
#include "orbitspace/group.hpp"

using namespace orbitspace;
using namespace testutil;

namespace {

constexpr double kPi = std::numbers::pi;

// Brute-force oracle: enumerate all words in the generators up to a length
// and count distinct cosets modulo the rotation family.
int closure_count_oracle(const GroupPresentation& gp, int max_len) {
  std::vector<Eigen::MatrixXd> reps{Eigen::MatrixXd::Identity(gp.dimension, gp.dimension)};
  auto known = [&](const Eigen::MatrixXd& m) {
    for (const auto& r : reps) {
      if (gp.family) {
        if (gp.family->coset_angle(m, r, 1e-8)) return true;
      } else if ((m - r).cwiseAbs().maxCoeff() <= 1e-8) {
        return true;
      }
    }
    return false;
  };
  std::vector<Eigen::MatrixXd> layer = reps;
  for (int len = 1; len <= max_len; ++len) {
    std::vector<Eigen::MatrixXd> next;
    for (const auto& w : layer) {
      for (const auto& g : gp.generators) {
        Eigen::MatrixXd m = w * g.matrix;
        if (!known(m)) {
          reps.push_back(m);
          next.push_back(m);
        }
      }
    }
    layer = std::move(next);
    if (layer.empty()) break;
  }
  return static_cast<int>(reps.size());
}

Eigen::MatrixXd u_alpha(double alpha) {
  return example_group().family->matrix(alpha, 4);
}

const Eigen::MatrixXd kSigmaV = example_group().generators[1].matrix;
const Eigen::MatrixXd kR = example_group().generators[2].matrix;
const Eigen::MatrixXd kC3 = example_group().generators[0].matrix;

}  // namespace

TEST_CASE("presentation validates; a non-orthogonal generator is rejected") {
  GroupPresentation gp = example_group();
  CHECK_NOTHROW(gp.validate());
  gp.generators[0].matrix(0, 0) = 0.7;
  CHECK_THROWS_AS(gp.validate(), ConfigError);
}

TEST_CASE("finite_closure: example group has 12 cosets") {
  const GroupPresentation gp = example_group();
  const auto closure = finite_closure(gp, 256);
  CHECK(closure.size() == 12);
  CHECK(closure.front().word == "E");
  CHECK(closure_count_oracle(gp, 8) == 12);

  // closed under multiplication modulo the family
  for (const auto& a : closure) {
    for (const auto& b : closure) {
      const Eigen::MatrixXd prod = a.matrix * b.matrix;
      bool matched = false;
      for (const auto& rep : closure) {
        if (gp.family->coset_angle(prod, rep.matrix, 1e-8)) {
          matched = true;
          break;
        }
      }
      CHECK(matched);
    }
  }
}

TEST_CASE("finite_closure: trivial and involution cases") {
  GroupPresentation trivial;
  trivial.dimension = 3;
  CHECK(finite_closure(trivial, 8).size() == 1);

  GroupPresentation invol;
  invol.dimension = 4;
  invol.generators.push_back({kSigmaV, "sigma_v"});
  CHECK(finite_closure(invol, 8).size() == 2);
}

TEST_CASE("finite_closure: exceeding the bound throws") {
  GroupPresentation gp;
  gp.dimension = 2;
  const double t = 2 * kPi / 7;
  Eigen::MatrixXd rot(2, 2);
  rot << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  gp.generators.push_back({rot, "c7"});
  CHECK_THROWS_AS(finite_closure(gp, 3), ClosureExceeded);
}

TEST_CASE("verify_invariance: MIB passes, coordinates fail, norm passes") {
  const GroupPresentation gp = example_group();
  const MIBSpec mib = example_mib();
  Rng rng(3);
  for (const auto& p : mib.polys) {
    const auto report = verify_invariance(p, gp, 16, 1e-9, rng);
    CHECK(report.pass);
  }
  const auto bad =
      verify_invariance(Polynomial::variable(x_vars(), 0), gp, 16, 1e-9, rng);
  CHECK(!bad.pass);
  CHECK(!bad.violations.empty());
  const auto norm = verify_invariance(parse_polynomial("x1^2+y1^2+x2^2+y2^2", x_vars()), gp,
                                      16, 1e-9, rng);
  CHECK(norm.pass);
}

TEST_CASE("fixed_subspaces: identity gives the full space") {
  const GroupPresentation gp = example_group();
  const auto closure = finite_closure(gp, 256);
  const auto subs = fixed_subspaces(gp, closure);
  bool full = false;
  for (const auto& s : subs) {
    if (s.basis.cols() == 4) full = true;
  }
  CHECK(full);
}

TEST_CASE("fixed_subspaces: U1(pi) sigma_v R fixes the (0,1,0,-2) direction") {
  const GroupPresentation gp = example_group();
  const auto closure = finite_closure(gp, 256);
  const Eigen::MatrixXd m = u_alpha(kPi) * kSigmaV * kR;
  const Eigen::VectorXd x = vec4(0, 1, 0, -2);
  CHECK((m * x - x).norm() <= 1e-9 * x.norm());  // matrix-multiplication oracle

  const auto subs = fixed_subspaces(gp, closure);
  bool contains_direction = false;
  for (const auto& s : subs) {
    const Eigen::VectorXd proj = s.basis * (s.basis.transpose() * x);
    if ((proj - x).norm() <= 1e-7 * x.norm()) contains_direction = true;
  }
  CHECK(contains_direction);
}

TEST_CASE("fixed_subspaces: generic rotations have no fixed directions") {
  GroupPresentation gp;
  gp.dimension = 4;
  RotationFamily fam;
  fam.pairs = {{0, 1}, {2, 3}};
  fam.multipliers = {1, 1};
  gp.family = fam;
  const auto closure = finite_closure(gp, 16);
  const auto subs = fixed_subspaces(gp, closure);
  // only alpha = 0 contributes: the full space
  REQUIRE(subs.size() == 1);
  CHECK(subs[0].basis.cols() == 4);
}

TEST_CASE("isotropy_subgroup at the Table-2 typical points") {
  const GroupPresentation gp = example_group();
  const auto closure = finite_closure(gp, 256);

  SUBCASE("origin: the whole group, continuous") {
    const auto iso = isotropy_subgroup(vec4(0, 0, 0, 0), gp, closure);
    CHECK(iso.continuous_dimension == 1);
    CHECK(iso.elements.size() == closure.size());
    for (const auto& e : iso.elements) CHECK(e.full_circle);
  }
  SUBCASE("(0,1,0,1): sigma_v and U1(pi) R among the elements") {
    const auto iso = isotropy_subgroup(vec4(0, 1, 0, 1), gp, closure);
    CHECK(iso.continuous_dimension == 0);
    const Eigen::VectorXd x = vec4(0, 1, 0, 1);
    bool has_sigma_v = false, has_upi_r = false;
    for (const auto& e : iso.elements) {
      CHECK((e.matrix * x - x).norm() <= 1e-9 * x.norm());
      if ((e.matrix - kSigmaV).cwiseAbs().maxCoeff() < 1e-9) has_sigma_v = true;
      if ((e.matrix - u_alpha(kPi) * kR).cwiseAbs().maxCoeff() < 1e-9) has_upi_r = true;
    }
    CHECK(has_sigma_v);
    CHECK(has_upi_r);
    CHECK(iso.elements.size() == 4);  // {E, sigma_v, U1(pi)R, U1(pi)sigma_v R}
  }
  SUBCASE("(-1,2,1,1): only the identity") {
    const auto iso = isotropy_subgroup(vec4(-1, 2, 1, 1), gp, closure);
    CHECK(iso.continuous_dimension == 0);
    REQUIRE(iso.elements.size() == 1);
    CHECK(iso.elements[0].word == "E");
  }
}

TEST_CASE("isotropy elements always include the identity and fix the point") {
  const GroupPresentation gp = example_group();
  const auto closure = finite_closure(gp, 256);
  Rng rng(7);
  for (int t = 0; t < 25; ++t) {
    const Eigen::VectorXd x = 2.0 * rng.ball_vector(4);
    const auto iso = isotropy_subgroup(x, gp, closure);
    REQUIRE(!iso.elements.empty());
    CHECK(iso.elements.front().word == "E");
    for (const auto& e : iso.elements) {
      CHECK((e.matrix * x - x).norm() <= 1e-9 * std::max(1.0, x.norm()));
    }
  }
}

TEST_CASE("isotropy_signature") {
  const GroupPresentation gp = example_group();
  const auto closure = finite_closure(gp, 256);

  SUBCASE("principal point has the identity-only signature") {
    const auto sig =
        isotropy_signature(isotropy_subgroup(vec4(-1, 2, 1, 1), gp, closure));
    CHECK(sig.continuous_dim == 0);
    CHECK(sig.element_count == 1);
    CHECK(sig.orders == std::vector<int>{1});
  }
  SUBCASE("the two sigma_2 points from the table have equal signatures") {
    const auto a = isotropy_signature(isotropy_subgroup(vec4(-1, 1, 1, 1), gp, closure));
    const auto b = isotropy_signature(isotropy_subgroup(vec4(1, 1, 1, -1), gp, closure));
    CHECK(a == b);
    CHECK(a.element_count == 2);
  }
  SUBCASE("origin signature dominates every other") {
    const auto origin = isotropy_signature(isotropy_subgroup(vec4(0, 0, 0, 0), gp, closure));
    for (const auto& x : {vec4(0, 1, 0, 0), vec4(0, 1, 0, 1), vec4(-1, 0, 1, 0),
                          vec4(-1, 1, 1, 1), vec4(0, 1, 0, 2), vec4(-1, 2, 1, 1)}) {
      const auto sig = isotropy_signature(isotropy_subgroup(x, gp, closure));
      CHECK(origin > sig);
    }
  }
}

TEST_CASE("signature is conjugation invariant") {
  const GroupPresentation gp = example_group();
  const auto closure = finite_closure(gp, 256);
  Rng rng(11);
  const std::vector<Eigen::VectorXd> points{vec4(0, 1, 0, 0), vec4(0, 1, 0, 1),
                                            vec4(0, 1, 0, -2), vec4(-1, 2, 1, 1)};
  for (const auto& x : points) {
    const auto base = isotropy_signature(isotropy_subgroup(x, gp, closure));
    for (int t = 0; t < 8; ++t) {
      const int ci = rng.uniform_int(0, static_cast<int>(closure.size()) - 1);
      const double alpha = rng.uniform(0.0, 2 * kPi);
      const Eigen::MatrixXd g = u_alpha(alpha) * closure[ci].matrix;
      const auto moved = isotropy_signature(isotropy_subgroup(g * x, gp, closure));
      CHECK(moved == base);
    }
  }
}

TEST_CASE("points inside a fixed subspace are fixed by its element") {
  const GroupPresentation gp = example_group();
  const auto closure = finite_closure(gp, 256);
  const auto subs = fixed_subspaces(gp, closure);
  Rng rng(13);
  for (const auto& s : subs) {
    const Eigen::MatrixXd m = gp.family->matrix(s.alpha, 4) * closure[s.coset].matrix;
    for (int t = 0; t < 5; ++t) {
      const Eigen::VectorXd x = s.basis * rng.unit_vector(static_cast<int>(s.basis.cols()));
      CHECK((m * x - x).norm() <= 1e-7);
      // ... and the element shows up in the isotropy subgroup of x
      const auto iso = isotropy_subgroup(x, gp, closure, 1e-7);
      bool found = false;
      for (const auto& e : iso.elements) {
        if ((e.matrix - m).cwiseAbs().maxCoeff() <= 1e-6) found = true;
      }
      CHECK(found);
    }
  }
}

TEST_CASE("element orders") {
  CHECK(element_order(Eigen::MatrixXd::Identity(4, 4)) == 1);
  CHECK(element_order(kSigmaV) == 2);
  CHECK(element_order(kC3) == 3);
  CHECK(element_order(u_alpha(2 * kPi / 5)) == 5);
}

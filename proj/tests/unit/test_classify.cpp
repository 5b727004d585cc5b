#include <doctest.h>

#include "chiraltop/classify.hpp"
#include "checks.hpp"
#include "tables.hpp"
#include "tuples.hpp"

using namespace chiraltop;
using chiraltop::testing::bundle_model;
using chiraltop::testing::error_kind;
using chiraltop::testing::group;

TEST_CASE("pi_unitary reproduces the reference table") {
  for (const auto& [key, expected] : testing::unitary_homotopy_table()) {
    CAPTURE(key.first);
    CAPTURE(key.second);
    CHECK(pi_unitary(key.first, key.second) == expected);
  }
}

TEST_CASE("pi_unitary stable and diagonal rules") {
  for (int k = 0; k <= 20; ++k) CHECK(pi_unitary(std::nullopt, k) == group(k % 2));
  CHECK(pi_unitary(2, 4) == group(0, {2}));
  CHECK(pi_unitary(3, 6) == group(0, {6}));
  CHECK(pi_unitary(7, 14) == group(0, {5040}));
  CHECK(pi_unitary(9, 17) == group(1));
  CHECK(pi_unitary(9, 16) == group(0));
}

TEST_CASE("pi_unitary refuses untabulated pairs") {
  CHECK(error_kind([] { pi_unitary(2, 11); }) == ErrorKind::OutsideTabulatedRange);
  CHECK(error_kind([] { pi_unitary(7, 15); }) == ErrorKind::OutsideTabulatedRange);
  CHECK(error_kind([] { pi_unitary(2, -1); }) == ErrorKind::OutsideTabulatedRange);
  CHECK(error_kind([] { pi_unitary(0, 3); }) == ErrorKind::BadParams);
}

TEST_CASE("pi_classifying is the direct sum of adjacent unitary groups") {
  for (const auto& [key, g] : testing::unitary_homotopy_table()) {
    const auto [m, k] = key;
    const AbelianGroup lower = k == 1 ? group(0) : testing::unitary_homotopy_table().at({m, k - 1});
    CHECK(pi_classifying(m, k) == direct_sum(g, lower));
  }
  CHECK(pi_classifying(2, 5) == group(0, {2, 2}));
  CHECK(pi_classifying(std::nullopt, 4) == group(1));
}

TEST_CASE("group arithmetic") {
  CHECK(invariant_factors({2, 3}) == std::vector<long>{6});
  CHECK(invariant_factors({2, 4}) == std::vector<long>{2, 4});
  CHECK(invariant_factors({12, 30}) == std::vector<long>{6, 60});
  CHECK(group(0, {6}) == group(0, {2, 3}));
  CHECK_FALSE(group(0, {4}) == group(0, {2, 2}));
  CHECK(group(0).to_string() == "0");
  CHECK(group(2, {2}).to_string() == "Z² ⊕ Z/2");
}

TEST_CASE("classify_space reproduces the sphere table") {
  for (int d = 1; d <= 4; ++d)
    for (int m : {1, 2, 3, 5}) {
      CAPTURE(d);
      CAPTURE(m);
      CHECK(classify_space(SpaceKind::sphere, d, m) == testing::sphere_class(d, m));
    }
}

TEST_CASE("classify_space reproduces the torus table") {
  for (int d = 1; d <= 4; ++d)
    for (int m : {1, 2, 3, 5}) {
      CAPTURE(d);
      CAPTURE(m);
      CHECK(classify_space(SpaceKind::torus, d, m) == testing::torus_class(d, m));
    }
  CHECK(classify_space(SpaceKind::torus, 4, 2) == group(15, {2}));
}

TEST_CASE("classification labels") {
  CHECK(classify_space(SpaceKind::torus, 2, 5).to_string() == "Z² ⊕ Z [w1×2, c1]");
  CHECK(classify_space(SpaceKind::torus, 3, 2).to_string() == "Z³ ⊕ Z³ ⊕ Z [w1×3, c1×3, w2]");
  CHECK(classify_space(SpaceKind::sphere, 3, 2).to_string() == "Z [w2]");
  CHECK(classify_space(SpaceKind::sphere, 4, 2).to_string() == "Z ⊕ Z/2 [c2, z2]");
  CHECK(classify_space(SpaceKind::sphere, 1, 1).to_string() == "Z [w1]");
  CHECK(classify_space(SpaceKind::sphere, 2, 4).to_string() == "Z [c1]");
  CHECK(classify_space(SpaceKind::sphere, 3, 1).to_string() == "0");
}

TEST_CASE("classify_space refuses unsupported requests") {
  CHECK(error_kind([] { classify_space(SpaceKind::torus, 5, 2); }) == ErrorKind::OutsideProvedRange);
  CHECK(error_kind([] { classify_space(SpaceKind::ball5, 3, 2); }) == ErrorKind::OutsideProvedRange);
  CHECK(error_kind([] { classify_space(SpaceKind::sphere, 2, 0); }) == ErrorKind::BadParams);
}

TEST_CASE("match_report labels computed tuples") {
  const auto b = bundle_model("chern_line", {{"M", -1.0}, {"a", 2}, {"b", 0}}, "torus:24x24");
  const auto label = match_report(compute_report(b), SpaceKind::torus, 2, 1);
  CHECK(label.values == std::vector<long>{2, 0, -1});
  CHECK(label.text == "(2,0; -1)");
  CHECK(error_kind([&] { match_report(compute_report(b, {"w1"}), SpaceKind::torus, 2, 1); }) ==
        ErrorKind::IncompleteReport);
  CHECK(error_kind([&] { match_report(compute_report(b), SpaceKind::torus, 3, 1); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("match_report needs the z2 value where the group has torsion") {
  const auto b = bundle_model("trivial_m", {{"m", 2}}, "sphere:6x6x6x6");
  CHECK(error_kind([&] { match_report(compute_report(b), SpaceKind::sphere, 4, 2); }) == ErrorKind::IncompleteReport);
  auto r = compute_report(b);
  r.z2 = 1;
  const auto label = match_report(r, SpaceKind::sphere, 4, 2);
  CHECK(label.text == "(0) z2=+1");
}

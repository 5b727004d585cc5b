#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chiraltop/basespace.hpp"
#include "chiraltop/invariants.hpp"

namespace chiraltop {

// Finitely generated abelian group Z^free_rank + sum Z/t. Labels name the free
// generators first, then the torsion summands, in the stored order.
struct AbelianGroup {
  int free_rank = 0;
  std::vector<long> torsion;  // ascending
  std::vector<std::string> labels;

  // Isomorphism test: equal free rank and equal invariant factors. Labels are ignored.
  bool operator==(const AbelianGroup& other) const;
  // e.g. "Z ⊕ Z/2 [c2, z2]", "Z² ⊕ Z [w1×2, c1]", "0".
  std::string to_string() const;
};

// Invariant factors d1 | d2 | ... of a torsion list (entries > 1 only).
std::vector<long> invariant_factors(const std::vector<long>& torsion);
AbelianGroup direct_sum(const AbelianGroup& a, const AbelianGroup& b);

// rank == std::nullopt stands for the stable group U(infinity).
AbelianGroup pi_unitary(std::optional<int> rank, int k);
AbelianGroup pi_classifying(std::optional<int> rank, int k);
AbelianGroup classify_space(SpaceKind kind, int d, int rank);

struct ClassLabel {
  std::vector<long> values;  // one per free generator, in label order
  std::optional<int> z2;
  std::string text;
};

ClassLabel match_report(const InvariantReport& report, SpaceKind kind, int d, int rank);

}  // namespace chiraltop

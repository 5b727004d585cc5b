#pragma once

#include <cstddef>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "chiraltop/basespace.hpp"
#include "chiraltop/numkernel.hpp"

namespace chiraltop {

// Sampled classifying map: at every node an orthonormal frame V (N x m) of the subspace
// and the automorphism phi (m x m unitary) written in that frame.
struct ChiralBundleData {
  BaseGrid grid;
  int ambient_dim = 0;
  int rank = 0;
  std::vector<CMatrix> frame;
  std::vector<CMatrix> phi;
  std::map<std::string, std::string> metadata;

  // V phi V^dagger + (1 - V V^dagger).
  CMatrix ambient_automorphism(std::size_t point) const;
};

struct GaugeField {
  BaseGrid grid;
  std::vector<CMatrix> g;
};

struct ValidationReport {
  bool passed = true;
  double frame_residual = 0.0;
  double phi_residual = 0.0;
  double min_overlap = 1.0;
  std::size_t worst_link_point = 0;
  int worst_link_axis = -1;
  double collapse_residual = 0.0;
  std::vector<std::string> failures;
};

ValidationReport validate(const ChiralBundleData& b, const NumericPolicy& policy = {});
// Throws Error(InvalidBundle) with the first failure when validation does not pass.
void require_valid(const ChiralBundleData& b, const NumericPolicy& policy = {});

ChiralBundleData trivial_bundle(const BaseGrid& grid, int ambient_dim, int rank);

ChiralBundleData apply_gauge(const ChiralBundleData& b, const GaugeField& g);

// map[y] is the node of b.grid that node y of `target` is sent to.
ChiralBundleData pullback(const ChiralBundleData& b, const BaseGrid& target, std::span<const std::size_t> map);

ChiralBundleData tensor(const ChiralBundleData& b1, const ChiralBundleData& b2, const NumericPolicy& policy = {});

ChiralBundleData compose_automorphisms(const ChiralBundleData& b1, const ChiralBundleData& b2,
                                       const NumericPolicy& policy = {});

// Doubled bundle E + E inside C^(2N) with Clifford generator rho and gradation gamma,
// both 2m x 2m in the doubled frame.
struct GradedCliffordData {
  BaseGrid grid;
  int ambient_dim = 0;
  int rank = 0;
  std::vector<CMatrix> frame;
  std::vector<CMatrix> rho;
  std::vector<CMatrix> gamma;
};

GradedCliffordData clifford_double(const ChiralBundleData& b, const NumericPolicy& policy = {});

// Per-node reference isomorphism E_- -> E_+, m x m in the frames extracted from the gradation.
// An empty field means the identity in those frames.
ChiralBundleData clifford_reconstruct(const GradedCliffordData& c, const std::vector<CMatrix>& h_ref = {},
                                      const NumericPolicy& policy = {});
// The intertwiner Theta = Pi_+ rho Pi_- per node, in the extracted frames.
std::vector<CMatrix> clifford_theta(const GradedCliffordData& c, const NumericPolicy& policy = {});

// Haar-random unitary.
CMatrix random_unitary(int m, std::mt19937_64& rng);
// Random gauge field; on sphere grids it is constant on the collapsed boundary.
GaugeField random_gauge(const BaseGrid& grid, int m, std::mt19937_64& rng);

}  // namespace chiraltop

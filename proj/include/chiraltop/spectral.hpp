#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "chiraltop/basespace.hpp"
#include "chiraltop/chiralbundle.hpp"
#include "chiraltop/numkernel.hpp"

namespace chiraltop {

// Sampled Hamiltonian family. `chi` is absent for systems used only through the
// lower-band bundle path.
struct QuantumSystemField {
  BaseGrid grid;
  int dim_h = 0;
  std::vector<CMatrix> hamiltonian;
  std::optional<std::vector<CMatrix>> chi;
  int band_count = 0;
};

struct SystemValidation {
  bool passed = true;
  double hermitian_residual = 0.0;
  double chiral_residual = 0.0;
  std::size_t chiral_worst_point = 0;
  double involution_residual = 0.0;
  double min_abs_eigenvalue = 0.0;
  std::size_t gap_worst_point = 0;
  double isolation_gap = 0.0;
  double spectrum_asymmetry = 0.0;
  double collapse_residual = 0.0;
  int negative_count = 0;
  std::vector<std::string> failures;
};

SystemValidation validate_system(const QuantumSystemField& sys, const NumericPolicy& policy = {});
// Throws ChiralityViolation or GapViolation (naming the worst point) when validation fails.
void require_valid_system(const QuantumSystemField& sys, const NumericPolicy& policy = {});

// Circle |z - center| = radius. Quadrature nodes are center + radius (w + alpha) / (1 + alpha w)
// for equispaced w on the unit circle: alpha = 0 is the plain trapezoid rule, and |alpha| < 1
// clusters the nodes towards the enclosed bands by a disk automorphism.
struct Contour {
  std::complex<double> center;
  double radius = 1.0;
  double alpha = 0.0;
};

using ProjectorField = std::vector<CMatrix>;

ProjectorField fermi_projection_riesz(const QuantumSystemField& sys, const Contour& contour, int nodes,
                                      const NumericPolicy& policy = {});
// Projector onto the m negative bands closest to zero.
ProjectorField fermi_projection_eig(const QuantumSystemField& sys, const NumericPolicy& policy = {});
// Projector onto the symmetric family: the m negative and m positive bands closest to zero.
ProjectorField family_projection_eig(const QuantumSystemField& sys, const NumericPolicy& policy = {});

// Circles isolating the negative sector or the symmetric family. Centre, radius and node
// clustering come from the real Mobius map sending the enclosed interval to [-s, s] and the
// outside spectrum beyond 1/s, so the quadrature error decays like s^nodes with s minimal.
Contour negative_sector_contour(const QuantumSystemField& sys, const NumericPolicy& policy = {});
Contour family_contour(const QuantumSystemField& sys, const NumericPolicy& policy = {});

enum class FrameMethod { gradation_eigen, energy_basis };

struct ChiralSplitting {
  BaseGrid grid;
  int dim_h = 0;
  int rank = 0;
  std::vector<CMatrix> projector;
  std::vector<CMatrix> pi_plus;
  std::vector<CMatrix> pi_minus;
  std::vector<CMatrix> gradation;
  std::vector<CMatrix> flattened;
  std::vector<CMatrix> frame_plus;
  std::vector<CMatrix> frame_minus;
  std::vector<CMatrix> theta;
};

ChiralSplitting chiral_split(const QuantumSystemField& sys, const ProjectorField& family,
                             FrameMethod method = FrameMethod::gradation_eigen, const NumericPolicy& policy = {});

struct HRef {
  enum class Mode { identity_in_frames, self, supplied };
  Mode mode = Mode::identity_in_frames;
  std::vector<CMatrix> field;  // m x m per node, used when mode == supplied
  std::string provenance;
};

ChiralBundleData assemble_chiral_bundle(const ChiralSplitting& split, const HRef& h_ref = {},
                                        const NumericPolicy& policy = {});

// Bundle of the m negative bands with phi = identity, for systems without chirality.
ChiralBundleData lower_band_bundle(const QuantumSystemField& sys, const NumericPolicy& policy = {});

struct TwinBandReport {
  bool passed = true;
  std::vector<std::string> cycles;
  // c1 per cycle for E_{Omega,-}, E_{Omega,+}, E_{chi,+}, E_{chi,-}.
  std::vector<std::vector<long>> c1;
  std::vector<std::string> failures;
};

TwinBandReport twin_band_check(const ChiralSplitting& split, const NumericPolicy& policy = {});

// Aligns a per-node orthonormal frame field along sweep_tree(grid): each frame is rotated
// within its span to the polar-closest frame to its parent's.
void align_frames(const BaseGrid& grid, std::vector<CMatrix>& frames, const NumericPolicy& policy = {});

// Orthonormal frame of the range of a projector (eigenvalue > 1/2), canonical gauge.
CMatrix projector_frame(const CMatrix& p, const NumericPolicy& policy = {});

}  // namespace chiraltop

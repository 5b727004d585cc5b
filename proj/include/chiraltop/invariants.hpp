#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chiraltop/basespace.hpp"
#include "chiraltop/chiralbundle.hpp"
#include "chiraltop/numkernel.hpp"

namespace chiraltop {

struct InvariantValue {
  long value = 0;
  double raw = 0.0;
  double residual = 0.0;  // |raw - value|
  double margin = 0.0;    // distance of the worst plaquette or step from the branch cut
  bool resolved = true;
};

// Throws Error(Unresolved) when the value did not round within tolerance.
long require_integer(const InvariantValue& v, const std::string& what);

InvariantValue chern1(const ChiralBundleData& b, const CycleHandle& cycle, const NumericPolicy& policy = {});
InvariantValue chern2(const ChiralBundleData& b, const CycleHandle& cycle, const NumericPolicy& policy = {});
InvariantValue w1(const ChiralBundleData& b, const CycleHandle& cycle, const NumericPolicy& policy = {});

enum class Framing { automatic, supplied, constant_frame_required };

// `frames` is only read in supplied mode: one N x m frame per grid node spanning the bundle.
InvariantValue w2(const ChiralBundleData& b, const CycleHandle& cycle, Framing framing = Framing::automatic,
                  const std::vector<CMatrix>* frames = nullptr, const NumericPolicy& policy = {});

// Global frame over a 3-cycle built from the projectors alone (see w2 automatic mode).
// Entries off the cycle are left empty.
std::vector<CMatrix> auto_frame(const ChiralBundleData& b, const CycleHandle& cycle, const NumericPolicy& policy = {});

// Unitary field on every node of a ball5 grid.
struct UnitaryField {
  BaseGrid grid;
  std::vector<CMatrix> values;
};

// Map from S^4 to SU(2). On a ball5 grid `values` follows grid.boundary_points();
// on a 4-sphere grid it covers every node.
struct SphereMap {
  BaseGrid grid;
  std::vector<CMatrix> values;
};

// (i / 240 pi^3) * lattice sum of eps Tr[A A A A A], returned raw. When `boundary` is
// given, F on the boundary must equal diag(f, 1) within tol_boundary.
double winding5(const UnitaryField& field, const SphereMap* boundary = nullptr, const NumericPolicy& policy = {});

struct Z2Result {
  int sign = 1;
  double cs5 = 0.0;
  double residual = 0.0;
};

Z2Result z2_witten(const SphereMap& f, const UnitaryField& extension, const NumericPolicy& policy = {});

// Dimension-generic core: sum over cells of eps Tr[A_1 ... A_k], the one-forms estimated at
// cell centres from edge logarithms of `values` to the policy's stencil_order. Exposed for
// the normalization tests.
std::complex<double> odd_trace_sum(const BaseGrid& grid, const CycleHandle& cycle, const std::vector<CMatrix>& values,
                                   const NumericPolicy& policy = {});

struct ReportEntry {
  std::string cycle;
  std::optional<InvariantValue> value;
  std::string reason;  // set when the entry is unresolved
};

struct InvariantReport {
  BaseGrid grid;
  int rank = 0;
  std::map<std::string, std::vector<ReportEntry>> classes;  // keys: w1, c1, w2, c2
  std::optional<int> z2;
  std::optional<double> cs5;
  std::string h_ref;
  NumericPolicy policy;

  bool has_unresolved() const;
};

// selector holds any of "w1", "c1", "w2", "c2"; empty means all that the base supports.
InvariantReport compute_report(const ChiralBundleData& b, const std::vector<std::string>& selector = {},
                               const NumericPolicy& policy = {}, std::vector<int> offset = {});

}  // namespace chiraltop

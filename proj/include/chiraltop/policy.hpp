#pragma once

#include <string>
#include <utility>
#include <vector>

namespace chiraltop {

// All numeric tolerances in one place. Field defaults are the documented defaults.
struct NumericPolicy {
  double tol_eig = 1e-10;
  double tol_herm = 1e-10;
  double tol_unitary = 1e-9;
  double degeneracy_tol = 1e-9;
  double sigma_min = 1e-8;
  double angle_margin = 1e-3;
  double det_min = 1e-8;
  double tol_collapse = 1e-9;
  double overlap_min = 0.1;
  double tol_proj = 1e-8;
  double tol_chiral = 1e-9;
  double gap_min = 1e-6;
  double gap_margin = 1e-6;
  double tol_frame_equal = 1e-9;
  double tol_boundary = 1e-8;
  double round_tol_w1 = 0.05;
  double round_tol_c1 = 1e-6;
  double round_tol_w2 = 0.2;
  double round_tol_c2 = 0.2;
  double branch_margin = 0.1;
  double z2_tol = 0.1;
  int smoothing_iterations = 10;
  // Accuracy order of the one-form estimates in the odd trace integrals: 2 averages the
  // edge logarithms over cell corners, 4 adds midpoint and transverse corrections.
  int stencil_order = 4;

  // Named access for overrides and the report echo.
  std::vector<std::pair<std::string, double>> entries() const;
  // Throws Error(BadParams) for unknown keys or out-of-range values.
  void set(const std::string& key, double value);
};

}  // namespace chiraltop

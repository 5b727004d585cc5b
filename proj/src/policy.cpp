#include "chiraltop/policy.hpp"

#include <cmath>
#include <cstdlib>
#include <thread>

#include "chiraltop/error.hpp"
#include "chiraltop/parallel.hpp"

namespace chiraltop {

namespace {

template <class Fn>
void for_each_field(NumericPolicy& p, Fn&& fn) {
  fn("tol_eig", p.tol_eig);
  fn("tol_herm", p.tol_herm);
  fn("tol_unitary", p.tol_unitary);
  fn("degeneracy_tol", p.degeneracy_tol);
  fn("sigma_min", p.sigma_min);
  fn("angle_margin", p.angle_margin);
  fn("det_min", p.det_min);
  fn("tol_collapse", p.tol_collapse);
  fn("overlap_min", p.overlap_min);
  fn("tol_proj", p.tol_proj);
  fn("tol_chiral", p.tol_chiral);
  fn("gap_min", p.gap_min);
  fn("gap_margin", p.gap_margin);
  fn("tol_frame_equal", p.tol_frame_equal);
  fn("tol_boundary", p.tol_boundary);
  fn("round_tol_w1", p.round_tol_w1);
  fn("round_tol_c1", p.round_tol_c1);
  fn("round_tol_w2", p.round_tol_w2);
  fn("round_tol_c2", p.round_tol_c2);
  fn("branch_margin", p.branch_margin);
  fn("z2_tol", p.z2_tol);
}

int g_workers = 0;

}  // namespace

std::vector<std::pair<std::string, double>> NumericPolicy::entries() const {
  std::vector<std::pair<std::string, double>> out;
  NumericPolicy copy = *this;
  for_each_field(copy, [&](const char* name, double& v) { out.emplace_back(name, v); });
  out.emplace_back("smoothing_iterations", smoothing_iterations);
  out.emplace_back("stencil_order", stencil_order);
  return out;
}

void NumericPolicy::set(const std::string& key, double value) {
  if (!std::isfinite(value)) throw Error(ErrorKind::BadParams, "policy value for '" + key + "' is not finite");
  if (key == "smoothing_iterations") {
    if (value < 0 || value > 1000 || value != std::floor(value))
      throw Error(ErrorKind::BadParams, "smoothing_iterations must be an integer in [0, 1000]");
    smoothing_iterations = static_cast<int>(value);
    return;
  }
  if (key == "stencil_order") {
    if (value != 2.0 && value != 4.0) throw Error(ErrorKind::BadParams, "stencil_order must be 2 or 4");
    stencil_order = static_cast<int>(value);
    return;
  }
  bool found = false;
  for_each_field(*this, [&](const char* name, double& v) {
    if (key != name) return;
    found = true;
    if (value <= 0.0) throw Error(ErrorKind::BadParams, "policy value for '" + key + "' must be positive");
    if (key == "branch_margin" || key == "angle_margin") {
      if (value >= 3.0) throw Error(ErrorKind::BadParams, "policy value for '" + key + "' must be below 3");
    } else if (key == "z2_tol" || key == "round_tol_w1" || key == "round_tol_c1" || key == "round_tol_w2" ||
               key == "round_tol_c2") {
      if (value >= 0.5) throw Error(ErrorKind::BadParams, "rounding tolerance '" + key + "' must be below 0.5");
    } else if (key == "overlap_min") {
      if (value >= 1.0) throw Error(ErrorKind::BadParams, "overlap_min must be below 1");
    } else if (value > 1.0) {
      throw Error(ErrorKind::BadParams, "tolerance '" + key + "' must not exceed 1");
    }
    v = value;
  });
  if (!found) throw Error(ErrorKind::BadParams, "unknown policy key '" + key + "'");
}

int worker_count() {
  if (g_workers > 0) return g_workers;
  if (const char* env = std::getenv("CHIRALTOP_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void set_worker_count(int n) { g_workers = n > 0 ? n : 0; }

}  // namespace chiraltop

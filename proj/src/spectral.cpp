#include "chiraltop/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/LU>

#include "chiraltop/error.hpp"
#include "chiraltop/invariants.hpp"
#include "chiraltop/parallel.hpp"

namespace chiraltop {

namespace {

Eigen::VectorXd eigenvalues_only(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::NoConvergence, "eigenvalue solver failed");
  return solver.eigenvalues();
}

int negative_count(const Eigen::VectorXd& ev) {
  int n = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) n += ev(i) < 0.0;
  return n;
}

void check_system_shapes(const QuantumSystemField& sys) {
  if (sys.hamiltonian.size() != sys.grid.size())
    throw Error(ErrorKind::DimensionMismatch, "hamiltonian field length does not match grid");
  if (sys.chi && sys.chi->size() != sys.grid.size())
    throw Error(ErrorKind::DimensionMismatch, "chirality field length does not match grid");
  if (sys.band_count < 1 || sys.band_count > sys.dim_h)
    throw Error(ErrorKind::BadParams, "band_count out of range");
}

std::string at_point(const BaseGrid& grid, std::size_t p) {
  std::ostringstream os;
  os << "node " << p << " (index";
  for (int i : grid.multi_index(p)) os << ' ' << i;
  os << ')';
  return os.str();
}

// Band indices [lo, hi) of the selected negative sector, or of the symmetric family.
struct BandWindow {
  int lo = 0;
  int hi = 0;
};

BandWindow band_window(int n_neg, int m, bool family) {
  return family ? BandWindow{n_neg - m, n_neg + m} : BandWindow{n_neg - m, n_neg};
}

ProjectorField eigen_projection(const QuantumSystemField& sys, bool family, const NumericPolicy& policy) {
  check_system_shapes(sys);
  const int m = sys.band_count;
  ProjectorField out(sys.grid.size());
  std::vector<int> counts(sys.grid.size());
  parallel_for(sys.grid.size(), [&](std::size_t p) {
    const auto eig = herm_eig(sys.hamiltonian[p], policy);
    const auto& ev = eig.eigenvalues;
    double min_abs = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < ev.size(); ++i) min_abs = std::min(min_abs, std::abs(ev(i)));
    if (min_abs < policy.gap_min)
      throw Error(ErrorKind::GapViolation, "eigenvalue " + std::to_string(min_abs) + " below gap_min at " +
                                               at_point(sys.grid, p), min_abs);
    const int n_neg = negative_count(ev);
    const auto w = band_window(n_neg, m, family);
    if (w.lo < 0 || w.hi > ev.size())
      throw Error(ErrorKind::GapViolation, "not enough bands on one side of zero at " + at_point(sys.grid, p));
    const CMatrix v = eig.eigenvectors.middleCols(w.lo, w.hi - w.lo);
    out[p] = v * v.adjoint();
    counts[p] = n_neg;
  });
  for (std::size_t p = 1; p < counts.size(); ++p)
    if (counts[p] != counts[0])
      throw Error(ErrorKind::GapViolation, "number of negative bands changes at " + at_point(sys.grid, p));
  return out;
}

// Cross ratio of four real points.
double cross_ratio(double x1, double x2, double x3, double x4) { return ((x1 - x3) * (x2 - x4)) / ((x1 - x4) * (x2 - x3)); }

// Contour for the interval [lo, hi] with the nearest outside eigenvalues `below` and `above`
// (infinite when absent). The real Mobius map T with T(lo) = -s, T(hi) = s, T(above) = 1/s,
// T(below) = -1/s takes the unit circle to the contour, and the trapezoid rule in that variable
// converges like s^nodes.
Contour conformal_contour(double lo, double hi, double below, double above) {
  const double c = 0.5 * (lo + hi);
  const double w = 0.5 * (hi - lo);
  // Nothing outside the window: any circle comfortably around it is exact.
  if (std::isinf(below) && std::isinf(above)) return Contour{{c, 0.0}, std::max(2.0 * w, 1.0)};
  if (!(below < lo && above > hi))
    throw Error(ErrorKind::GapViolation, "selected bands are not isolated from the rest of the spectrum");
  // Pad the window so a flat band still gives a non-degenerate map.
  const double gap = std::min(lo - below, above - hi);
  lo -= 0.05 * gap;
  hi += 0.05 * gap;
  // A one-sided gap gets a far virtual edge on the other side, which keeps infinity outside.
  const double span = std::max(hi - lo, gap);
  if (std::isinf(below)) below = lo - 20.0 * (span + (std::isinf(above) ? 0.0 : above - hi));
  if (std::isinf(above)) above = hi + 20.0 * (span + (lo - below));
  const double q = std::sqrt(cross_ratio(lo, hi, above, below));
  const double s = std::sqrt((q - 1.0) / (q + 1.0));
  // T^-1(x) for real x, from cross_ratio(z, lo, hi, above) = cross_ratio(x, -s, s, 1/s).
  const double k1 = (lo - above) / (lo - hi);
  auto inverse = [&](double x) {
    const double k = cross_ratio(x, -s, s, 1.0 / s);
    return (hi * k1 - k * above) / (k1 - k);
  };
  const double right = inverse(1.0), left = inverse(-1.0), origin = inverse(0.0);
  Contour out{{0.5 * (right + left), 0.0}, 0.5 * (right - left), 0.0};
  out.alpha = (origin - out.center.real()) / out.radius;
  return out;
}

Contour window_contour(const QuantumSystemField& sys, bool family, const NumericPolicy& policy) {
  check_system_shapes(sys);
  const int m = sys.band_count;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  double below = -std::numeric_limits<double>::infinity(), above = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < sys.grid.size(); ++p) {
    const auto ev = eigenvalues_only(sys.hamiltonian[p]);
    const int n_neg = negative_count(ev);
    const auto w = band_window(n_neg, m, family);
    if (w.lo < 0 || w.hi > ev.size())
      throw Error(ErrorKind::GapViolation, "not enough bands on one side of zero at " + at_point(sys.grid, p));
    lo = std::min(lo, ev(w.lo));
    hi = std::max(hi, ev(w.hi - 1));
    if (w.lo > 0) below = std::max(below, ev(w.lo - 1));
    if (w.hi < ev.size()) above = std::min(above, ev(w.hi));
  }
  (void)policy;
  return conformal_contour(lo, hi, below, above);
}

CMatrix sign_of(const CMatrix& h, const NumericPolicy& policy) {
  const auto eig = herm_eig(h, policy);
  Eigen::VectorXd s(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = eig.eigenvalues(i) < 0.0 ? -1.0 : 1.0;
  return eig.eigenvectors * s.cast<cplx>().asDiagonal() * eig.eigenvectors.adjoint();
}

}  // namespace

SystemValidation validate_system(const QuantumSystemField& sys, const NumericPolicy& policy) {
  check_system_shapes(sys);
  SystemValidation r;
  const std::size_t n = sys.grid.size();
  r.min_abs_eigenvalue = std::numeric_limits<double>::infinity();
  r.isolation_gap = std::numeric_limits<double>::infinity();
  std::vector<int> counts(n);
  for (std::size_t p = 0; p < n; ++p) {
    const CMatrix& h = sys.hamiltonian[p];
    if (h.rows() != sys.dim_h || h.cols() != sys.dim_h || !h.allFinite()) {
      r.passed = false;
      r.failures.push_back("malformed hamiltonian at " + at_point(sys.grid, p));
      return r;
    }
    r.hermitian_residual = std::max(r.hermitian_residual, max_abs(h - h.adjoint()));
    const auto ev = eigenvalues_only(h);
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      if (std::abs(ev(i)) < r.min_abs_eigenvalue) {
        r.min_abs_eigenvalue = std::abs(ev(i));
        r.gap_worst_point = p;
      }
    }
    counts[p] = negative_count(ev);
    const int lo = counts[p] - sys.band_count;
    if (lo > 0) r.isolation_gap = std::min(r.isolation_gap, ev(lo) - ev(lo - 1));
    if (sys.chi) {
      const CMatrix& c = (*sys.chi)[p];
      if (c.rows() != sys.dim_h || c.cols() != sys.dim_h || !c.allFinite()) {
        r.passed = false;
        r.failures.push_back("malformed chirality operator at " + at_point(sys.grid, p));
        return r;
      }
      const double inv = std::max(max_abs(c * c - CMatrix::Identity(sys.dim_h, sys.dim_h)), max_abs(c - c.adjoint()));
      r.involution_residual = std::max(r.involution_residual, inv);
      const double chiral = max_abs(c * h * c.adjoint() + h);
      if (chiral > r.chiral_residual) {
        r.chiral_residual = chiral;
        r.chiral_worst_point = p;
      }
      for (Eigen::Index i = 0; i < ev.size(); ++i)
        r.spectrum_asymmetry = std::max(r.spectrum_asymmetry, std::abs(ev(i) + ev(ev.size() - 1 - i)));
    }
  }
  r.negative_count = counts[0];
  if (sys.grid.kind() == SpaceKind::sphere) {
    const std::size_t base = sys.grid.base_point();
    for (std::size_t p : sys.grid.boundary_points()) {
      r.collapse_residual = std::max(r.collapse_residual, max_abs(sys.hamiltonian[p] - sys.hamiltonian[base]));
      if (sys.chi) r.collapse_residual = std::max(r.collapse_residual, max_abs((*sys.chi)[p] - (*sys.chi)[base]));
    }
  }
  auto fail = [&](const std::string& s) {
    r.passed = false;
    r.failures.push_back(s);
  };
  std::ostringstream os;
  if (r.hermitian_residual > policy.tol_herm) fail("hamiltonian not hermitian, residual " + std::to_string(r.hermitian_residual));
  if (sys.chi && r.involution_residual > policy.tol_unitary)
    fail("chirality operator is not a hermitian involution, residual " + std::to_string(r.involution_residual));
  if (sys.chi && r.chiral_residual > policy.tol_chiral) {
    os << "chiral symmetry residual " << r.chiral_residual << " at " << at_point(sys.grid, r.chiral_worst_point);
    fail(os.str());
  }
  if (r.min_abs_eigenvalue < policy.gap_min) {
    std::ostringstream g;
    g << "eigenvalue " << r.min_abs_eigenvalue << " below gap_min at " << at_point(sys.grid, r.gap_worst_point);
    fail(g.str());
  }
  for (std::size_t p = 1; p < n; ++p)
    if (counts[p] != counts[0]) {
      fail("number of negative bands changes at " + at_point(sys.grid, p));
      break;
    }
  if (r.negative_count < sys.band_count) fail("fewer negative bands than band_count");
  if (r.isolation_gap < policy.gap_min) fail("selected bands are not isolated, gap " + std::to_string(r.isolation_gap));
  if (r.collapse_residual > policy.tol_collapse) fail("sphere collapse residual " + std::to_string(r.collapse_residual));
  return r;
}

void require_valid_system(const QuantumSystemField& sys, const NumericPolicy& policy) {
  const auto r = validate_system(sys, policy);
  if (r.passed) return;
  if (sys.chi && (r.chiral_residual > policy.tol_chiral || r.involution_residual > policy.tol_unitary)) {
    std::ostringstream os;
    os << "max chiral residual " << r.chiral_residual << " at " << at_point(sys.grid, r.chiral_worst_point);
    throw Error(ErrorKind::ChiralityViolation, os.str(), r.chiral_residual);
  }
  if (r.hermitian_residual > policy.tol_herm) throw Error(ErrorKind::NonHermitian, r.failures.front(), r.hermitian_residual);
  throw Error(ErrorKind::GapViolation, r.failures.front(), r.min_abs_eigenvalue);
}

ProjectorField fermi_projection_riesz(const QuantumSystemField& sys, const Contour& contour, int nodes,
                                      const NumericPolicy& policy) {
  check_system_shapes(sys);
  if (nodes < 4) throw Error(ErrorKind::BadParams, "quadrature needs at least 4 nodes");
  if (!(contour.radius > 0.0)) throw Error(ErrorKind::BadParams, "contour radius must be positive");
  if (!(std::abs(contour.alpha) < 1.0)) throw Error(ErrorKind::BadParams, "contour clustering must lie in (-1, 1)");
  const int n = sys.dim_h;
  const double a = contour.alpha;
  std::vector<cplx> z(nodes), weight(nodes);
  for (int j = 0; j < nodes; ++j) {
    const cplx e = std::polar(1.0, 2.0 * std::numbers::pi * j / nodes);
    const cplx den = 1.0 + a * e;
    z[j] = contour.center + contour.radius * (e + a) / den;
    // (i/2pi) dz (H - z)^-1 with dz = z'(e) i e dtheta, written as weight * (z - H)^-1.
    weight[j] = contour.radius * (1.0 - a * a) / (den * den) * e / static_cast<double>(nodes);
  }
  ProjectorField out(sys.grid.size());
  std::vector<int> ranks(sys.grid.size());
  parallel_for(sys.grid.size(), [&](std::size_t p) {
    const CMatrix& h = sys.hamiltonian[p];
    const auto ev = eigenvalues_only(h);
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      const double dist = std::abs(std::abs(cplx(ev(i), 0.0) - contour.center) - contour.radius);
      if (dist < policy.gap_margin)
        throw Error(ErrorKind::ContourTouchesSpectrum, "eigenvalue " + std::to_string(ev(i)) + " within gap_margin of the contour at " +
                                                           at_point(sys.grid, p), dist);
    }
    CMatrix acc = CMatrix::Zero(n, n);
    const CMatrix id = CMatrix::Identity(n, n);
    for (int j = 0; j < nodes; ++j) {
      Eigen::PartialPivLU<CMatrix> lu(z[j] * id - h);
      acc += weight[j] * lu.inverse();
    }
    const double herm = max_abs(acc - acc.adjoint());
    const double idem = max_abs(acc * acc - acc);
    if (herm > policy.tol_proj || idem > policy.tol_proj)
      throw Error(ErrorKind::NoConvergence, "contour quadrature did not produce a projector at " + at_point(sys.grid, p),
                  std::max(herm, idem));
    ranks[p] = static_cast<int>(std::lround(acc.trace().real()));
    out[p] = std::move(acc);
  });
  for (std::size_t p = 1; p < ranks.size(); ++p)
    if (ranks[p] != ranks[0]) throw Error(ErrorKind::RankDrift, "projector rank changes at " + at_point(sys.grid, p));
  return out;
}

ProjectorField fermi_projection_eig(const QuantumSystemField& sys, const NumericPolicy& policy) {
  return eigen_projection(sys, false, policy);
}

ProjectorField family_projection_eig(const QuantumSystemField& sys, const NumericPolicy& policy) {
  return eigen_projection(sys, true, policy);
}

Contour negative_sector_contour(const QuantumSystemField& sys, const NumericPolicy& policy) {
  return window_contour(sys, false, policy);
}

Contour family_contour(const QuantumSystemField& sys, const NumericPolicy& policy) {
  return window_contour(sys, true, policy);
}

CMatrix projector_frame(const CMatrix& p, const NumericPolicy& policy) {
  const auto eig = herm_eig(0.5 * (p + p.adjoint()), policy);
  Eigen::Index first = eig.eigenvalues.size();
  while (first > 0 && eig.eigenvalues(first - 1) > 0.5) --first;
  return eig.eigenvectors.rightCols(eig.eigenvalues.size() - first);
}

void align_frames(const BaseGrid& grid, std::vector<CMatrix>& frames, const NumericPolicy& policy) {
  const auto tree = sweep_tree(grid);
  for (std::size_t p : tree.order) {
    const auto parent = tree.parent[p];
    if (parent < 0) continue;
    try {
      frames[p] = frames[p] * polar_unitary(frames[p].adjoint() * frames[static_cast<std::size_t>(parent)], policy);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NearSingular) throw;
    }
  }
}

ChiralSplitting chiral_split(const QuantumSystemField& sys, const ProjectorField& family, FrameMethod method,
                             const NumericPolicy& policy) {
  check_system_shapes(sys);
  if (!sys.chi) throw Error(ErrorKind::ChiralityViolation, "chiral_split needs a chirality operator");
  if (family.size() != sys.grid.size()) throw Error(ErrorKind::DimensionMismatch, "projector field length does not match grid");
  const std::size_t n = sys.grid.size();
  const int m = sys.band_count;
  ChiralSplitting s;
  s.grid = sys.grid;
  s.dim_h = sys.dim_h;
  s.rank = m;
  s.projector = family;
  s.pi_plus.resize(n);
  s.pi_minus.resize(n);
  s.gradation.resize(n);
  s.flattened.resize(n);
  s.frame_plus.resize(n);
  s.frame_minus.resize(n);
  s.theta.resize(n);

  parallel_for(n, [&](std::size_t p) {
    const CMatrix& proj = family[p];
    const CMatrix& chi = (*sys.chi)[p];
    const CMatrix gamma = proj * chi * proj;
    const double trace = gamma.trace().real();
    if (std::abs(trace) > 0.5)
      throw Error(ErrorKind::AsymmetricFamily, "trace of the gradation is " + std::to_string(trace) + " at " +
                                                   at_point(sys.grid, p), trace);
    const int rank2 = static_cast<int>(std::lround(proj.trace().real()));
    if (rank2 != 2 * m)
      throw Error(ErrorKind::AsymmetricFamily, "family projector has rank " + std::to_string(rank2) + ", expected " +
                                                   std::to_string(2 * m));
    s.gradation[p] = gamma;
    s.pi_plus[p] = 0.5 * (proj + gamma);
    s.pi_minus[p] = 0.5 * (proj - gamma);
    s.flattened[p] = proj * sign_of(sys.hamiltonian[p], policy) * proj;

    if (method == FrameMethod::gradation_eigen) {
      const auto eig = herm_eig(0.5 * (gamma + gamma.adjoint()), policy);
      const Eigen::Index dim = eig.eigenvalues.size();
      int n_minus = 0, n_plus = 0;
      for (Eigen::Index i = 0; i < dim; ++i) {
        n_minus += eig.eigenvalues(i) < -0.5;
        n_plus += eig.eigenvalues(i) > 0.5;
      }
      if (n_minus != m || n_plus != m)
        throw Error(ErrorKind::AsymmetricFamily, "gradation eigencount (" + std::to_string(n_plus) + ", " +
                                                     std::to_string(n_minus) + ") at " + at_point(sys.grid, p));
      s.frame_minus[p] = eig.eigenvectors.leftCols(m);
      s.frame_plus[p] = eig.eigenvectors.rightCols(m);
    } else {
      const auto eig = herm_eig(sys.hamiltonian[p], policy);
      const int n_neg = negative_count(eig.eigenvalues);
      if (n_neg < m) throw Error(ErrorKind::GapViolation, "not enough negative bands at " + at_point(sys.grid, p));
      const CMatrix psi_minus = eig.eigenvectors.middleCols(n_neg - m, m);
      const CMatrix psi_plus = chi * psi_minus;
      s.frame_plus[p] = std::sqrt(0.5) * (psi_plus + psi_minus);
      s.frame_minus[p] = std::sqrt(0.5) * (psi_plus - psi_minus);
    }
  });
  align_frames(sys.grid, s.frame_plus, policy);
  align_frames(sys.grid, s.frame_minus, policy);
  parallel_for(n, [&](std::size_t p) {
    s.theta[p] = s.frame_plus[p].adjoint() * s.flattened[p] * s.frame_minus[p];
    const double res = unitarity_residual(s.theta[p]);
    if (res > 1e-6) throw Error(ErrorKind::NonUnitary, "intertwiner is not unitary at " + at_point(sys.grid, p), res);
  });
  return s;
}

ChiralBundleData assemble_chiral_bundle(const ChiralSplitting& split, const HRef& h_ref, const NumericPolicy& policy) {
  const std::size_t n = split.grid.size();
  ChiralBundleData b;
  b.grid = split.grid;
  b.ambient_dim = split.dim_h;
  b.rank = split.rank;
  b.frame = split.frame_minus;
  b.phi.resize(n);
  switch (h_ref.mode) {
    case HRef::Mode::identity_in_frames:
      b.metadata["h_ref"] = "identity_in_frames";
      b.phi = split.theta;
      break;
    case HRef::Mode::self:
      b.metadata["h_ref"] = "self";
      for (std::size_t p = 0; p < n; ++p) b.phi[p] = split.theta[p].adjoint() * split.theta[p];
      break;
    case HRef::Mode::supplied:
      b.metadata["h_ref"] = h_ref.provenance.empty() ? "supplied" : "supplied:" + h_ref.provenance;
      if (h_ref.field.size() != n) throw Error(ErrorKind::DimensionMismatch, "h_ref field length does not match grid");
      for (std::size_t p = 0; p < n; ++p) {
        const CMatrix& h = h_ref.field[p];
        if (h.rows() != split.rank || h.cols() != split.rank)
          throw Error(ErrorKind::DimensionMismatch, "h_ref matrix has the wrong size");
        const double res = unitarity_residual(h);
        if (res > policy.tol_unitary) throw Error(ErrorKind::NonUnitary, "h_ref is not unitary", res);
        b.phi[p] = h.adjoint() * split.theta[p];
      }
      break;
  }
  // Re-unitarize the intertwiner so downstream logs see exact isometries.
  for (auto& f : b.phi) f = polar_unitary(f, policy);
  require_valid(b, policy);
  return b;
}

ChiralBundleData lower_band_bundle(const QuantumSystemField& sys, const NumericPolicy& policy) {
  check_system_shapes(sys);
  const int m = sys.band_count;
  ChiralBundleData b;
  b.grid = sys.grid;
  b.ambient_dim = sys.dim_h;
  b.rank = m;
  b.frame.resize(sys.grid.size());
  b.phi.assign(sys.grid.size(), CMatrix::Identity(m, m));
  b.metadata["h_ref"] = "none";
  std::vector<int> counts(sys.grid.size());
  parallel_for(sys.grid.size(), [&](std::size_t p) {
    const auto eig = herm_eig(sys.hamiltonian[p], policy);
    double min_abs = eig.eigenvalues.cwiseAbs().minCoeff();
    if (min_abs < policy.gap_min)
      throw Error(ErrorKind::GapViolation, "eigenvalue below gap_min at " + at_point(sys.grid, p), min_abs);
    counts[p] = negative_count(eig.eigenvalues);
    if (counts[p] < m) throw Error(ErrorKind::GapViolation, "not enough negative bands at " + at_point(sys.grid, p));
    b.frame[p] = eig.eigenvectors.middleCols(counts[p] - m, m);
  });
  for (std::size_t p = 1; p < counts.size(); ++p)
    if (counts[p] != counts[0])
      throw Error(ErrorKind::GapViolation, "number of negative bands changes at " + at_point(sys.grid, p));
  align_frames(sys.grid, b.frame, policy);
  return b;
}

TwinBandReport twin_band_check(const ChiralSplitting& split, const NumericPolicy& policy) {
  TwinBandReport r;
  if (split.grid.dim() < 2) {
    r.passed = false;
    r.failures.push_back("twin-band check needs a base of dimension 2 or more");
    return r;
  }
  const std::size_t n = split.grid.size();
  const int m = split.rank;
  std::vector<ChiralBundleData> bundles(4);
  for (int k = 0; k < 4; ++k) {
    ChiralBundleData& b = bundles[k];
    b.grid = split.grid;
    b.ambient_dim = split.dim_h;
    b.rank = m;
    b.frame.resize(n);
    b.phi.assign(n, CMatrix::Identity(m, m));
  }
  for (std::size_t p = 0; p < n; ++p) {
    const CMatrix lower = 0.5 * (split.projector[p] - split.flattened[p]);
    const CMatrix upper = 0.5 * (split.projector[p] + split.flattened[p]);
    bundles[0].frame[p] = projector_frame(lower, policy);
    bundles[1].frame[p] = projector_frame(upper, policy);
    bundles[2].frame[p] = projector_frame(split.pi_plus[p], policy);
    bundles[3].frame[p] = projector_frame(split.pi_minus[p], policy);
    for (auto& b : bundles)
      if (b.frame[p].cols() != m) {
        r.passed = false;
        r.failures.push_back("sub-bundle rank differs from " + std::to_string(m) + " at node " + std::to_string(p));
        return r;
      }
  }
  r.c1.assign(4, {});
  for (const auto& cycle : enumerate_cycles(split.grid, 2)) {
    r.cycles.push_back(cycle.label());
    for (int k = 0; k < 4; ++k) {
      try {
        r.c1[k].push_back(chern1(bundles[k], cycle, policy).value);
      } catch (const Error& e) {
        r.passed = false;
        r.failures.push_back(std::string("cycle ") + cycle.label() + ": " + e.what());
        r.c1[k].push_back(0);
      }
    }
    const std::size_t i = r.cycles.size() - 1;
    if (!(r.c1[0][i] == r.c1[1][i] && r.c1[1][i] == r.c1[2][i] && r.c1[2][i] == r.c1[3][i])) {
      r.passed = false;
      r.failures.push_back("c1 differs across the four sub-bundles on cycle " + cycle.label());
    }
  }
  return r;
}

}  // namespace chiraltop

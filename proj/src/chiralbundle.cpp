#include "chiraltop/chiralbundle.hpp"

#include <algorithm>
#include <sstream>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "chiraltop/error.hpp"
#include "chiraltop/parallel.hpp"

namespace chiraltop {

namespace {

void require_same_grid(const BaseGrid& a, const BaseGrid& b, const char* what) {
  if (!(a == b)) throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": grids differ");
}

void check_shapes(const ChiralBundleData& b) {
  if (b.frame.size() != b.grid.size() || b.phi.size() != b.grid.size())
    throw Error(ErrorKind::DimensionMismatch, "bundle field length does not match the grid");
}

CMatrix orthonormalize_columns(const CMatrix& v) {
  Eigen::JacobiSVD<CMatrix> svd(v, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace

CMatrix ChiralBundleData::ambient_automorphism(std::size_t point) const {
  const CMatrix& v = frame.at(point);
  return v * phi.at(point) * v.adjoint() + CMatrix::Identity(ambient_dim, ambient_dim) - v * v.adjoint();
}

ValidationReport validate(const ChiralBundleData& b, const NumericPolicy& policy) {
  ValidationReport r;
  const std::size_t n = b.grid.size();
  if (b.frame.size() != n || b.phi.size() != n || b.rank < 1 || b.rank > b.ambient_dim) {
    r.passed = false;
    r.failures.push_back("field sizes or rank inconsistent with the grid");
    return r;
  }
  for (std::size_t p = 0; p < n; ++p) {
    const CMatrix& v = b.frame[p];
    const CMatrix& f = b.phi[p];
    if (v.rows() != b.ambient_dim || v.cols() != b.rank || f.rows() != b.rank || f.cols() != b.rank) {
      r.passed = false;
      r.failures.push_back("matrix shape mismatch at node " + std::to_string(p));
      return r;
    }
    if (!v.allFinite() || !f.allFinite()) {
      r.passed = false;
      r.failures.push_back("non-finite entry at node " + std::to_string(p));
      return r;
    }
    r.frame_residual = std::max(r.frame_residual, unitarity_residual(v));
    r.phi_residual = std::max(r.phi_residual, unitarity_residual(f));
  }
  for (std::size_t p = 0; p < n; ++p) {
    for (int a = 0; a < b.grid.dim(); ++a) {
      const auto q = b.grid.neighbor(p, a);
      if (!q) continue;
      const double s = min_singular_value(b.frame[p].adjoint() * b.frame[*q]);
      if (s < r.min_overlap) {
        r.min_overlap = s;
        r.worst_link_point = p;
        r.worst_link_axis = a;
      }
    }
  }
  if (b.grid.kind() == SpaceKind::sphere) {
    const std::size_t base = b.grid.base_point();
    for (std::size_t p : b.grid.boundary_points()) {
      r.collapse_residual = std::max(r.collapse_residual, max_abs(b.frame[p] - b.frame[base]));
      r.collapse_residual = std::max(r.collapse_residual, max_abs(b.phi[p] - b.phi[base]));
    }
  }
  auto fail = [&](const std::string& what, double value) {
    std::ostringstream os;
    os << what << " " << value;
    r.failures.push_back(os.str());
    r.passed = false;
  };
  if (r.frame_residual > policy.tol_unitary) fail("frame residual", r.frame_residual);
  if (r.phi_residual > policy.tol_unitary) fail("phi unitarity residual", r.phi_residual);
  if (r.min_overlap < policy.overlap_min) {
    std::ostringstream os;
    os << "link overlap " << r.min_overlap << " at node " << r.worst_link_point << " axis " << r.worst_link_axis;
    r.failures.push_back(os.str());
    r.passed = false;
  }
  if (r.collapse_residual > policy.tol_collapse) fail("sphere collapse residual", r.collapse_residual);
  return r;
}

void require_valid(const ChiralBundleData& b, const NumericPolicy& policy) {
  const auto r = validate(b, policy);
  if (!r.passed) throw Error(ErrorKind::InvalidBundle, r.failures.front());
}

ChiralBundleData trivial_bundle(const BaseGrid& grid, int ambient_dim, int rank) {
  if (rank < 1 || rank > ambient_dim) throw Error(ErrorKind::BadParams, "trivial bundle needs 1 <= rank <= ambient_dim");
  ChiralBundleData b;
  b.grid = grid;
  b.ambient_dim = ambient_dim;
  b.rank = rank;
  b.frame.assign(grid.size(), CMatrix::Identity(ambient_dim, rank));
  b.phi.assign(grid.size(), CMatrix::Identity(rank, rank));
  return b;
}

ChiralBundleData apply_gauge(const ChiralBundleData& b, const GaugeField& g) {
  check_shapes(b);
  require_same_grid(b.grid, g.grid, "apply_gauge");
  if (g.g.size() != b.grid.size()) throw Error(ErrorKind::DimensionMismatch, "gauge field length does not match grid");
  ChiralBundleData out = b;
  parallel_for(b.grid.size(), [&](std::size_t p) {
    const CMatrix& u = g.g[p];
    if (u.rows() != b.rank || u.cols() != b.rank)
      throw Error(ErrorKind::DimensionMismatch, "gauge matrix size differs from bundle rank");
    out.frame[p] = b.frame[p] * u;
    out.phi[p] = u.adjoint() * b.phi[p] * u;
  });
  return out;
}

ChiralBundleData pullback(const ChiralBundleData& b, const BaseGrid& target, std::span<const std::size_t> map) {
  check_shapes(b);
  if (map.size() != target.size()) throw Error(ErrorKind::DimensionMismatch, "grid map length does not match target");
  ChiralBundleData out;
  out.grid = target;
  out.ambient_dim = b.ambient_dim;
  out.rank = b.rank;
  out.metadata = b.metadata;
  out.frame.resize(target.size());
  out.phi.resize(target.size());
  for (std::size_t y = 0; y < target.size(); ++y) {
    if (map[y] >= b.grid.size()) throw Error(ErrorKind::OutOfRange, "grid map sends a node outside the source grid");
    out.frame[y] = b.frame[map[y]];
    out.phi[y] = b.phi[map[y]];
  }
  return out;
}

ChiralBundleData tensor(const ChiralBundleData& b1, const ChiralBundleData& b2, const NumericPolicy& policy) {
  (void)policy;
  check_shapes(b1);
  check_shapes(b2);
  require_same_grid(b1.grid, b2.grid, "tensor");
  ChiralBundleData out;
  out.grid = b1.grid;
  out.ambient_dim = b1.ambient_dim * b2.ambient_dim;
  out.rank = b1.rank * b2.rank;
  out.frame.resize(b1.grid.size());
  out.phi.resize(b1.grid.size());
  parallel_for(b1.grid.size(), [&](std::size_t p) {
    out.frame[p] = orthonormalize_columns(kron(b1.frame[p], b2.frame[p]));
    out.phi[p] = kron(b1.phi[p], b2.phi[p]);
  });
  return out;
}

ChiralBundleData compose_automorphisms(const ChiralBundleData& b1, const ChiralBundleData& b2,
                                       const NumericPolicy& policy) {
  check_shapes(b1);
  check_shapes(b2);
  require_same_grid(b1.grid, b2.grid, "compose_automorphisms");
  if (b1.ambient_dim != b2.ambient_dim || b1.rank != b2.rank)
    throw Error(ErrorKind::FrameMismatch, "compose_automorphisms: bundle dimensions differ");
  ChiralBundleData out = b1;
  for (std::size_t p = 0; p < b1.grid.size(); ++p) {
    const double diff = max_abs(b1.frame[p] - b2.frame[p]);
    if (diff > policy.tol_frame_equal)
      throw Error(ErrorKind::FrameMismatch, "compose_automorphisms: frames differ at node " + std::to_string(p), diff);
    out.phi[p] = b1.phi[p] * b2.phi[p];
  }
  return out;
}

GradedCliffordData clifford_double(const ChiralBundleData& b, const NumericPolicy& policy) {
  check_shapes(b);
  const int n = b.ambient_dim;
  const int m = b.rank;
  GradedCliffordData c;
  c.grid = b.grid;
  c.ambient_dim = 2 * n;
  c.rank = 2 * m;
  c.frame.resize(b.grid.size());
  c.rho.resize(b.grid.size());
  c.gamma.assign(b.grid.size(), CMatrix::Zero(2 * m, 2 * m));
  CMatrix gamma = CMatrix::Zero(2 * m, 2 * m);
  gamma.topLeftCorner(m, m).setIdentity();
  gamma.bottomRightCorner(m, m) = -CMatrix::Identity(m, m);
  parallel_for(b.grid.size(), [&](std::size_t p) {
    CMatrix v = CMatrix::Zero(2 * n, 2 * m);
    v.topLeftCorner(n, m) = b.frame[p];
    v.bottomRightCorner(n, m) = b.frame[p];
    CMatrix rho = CMatrix::Zero(2 * m, 2 * m);
    rho.topRightCorner(m, m) = b.phi[p];
    rho.bottomLeftCorner(m, m) = b.phi[p].adjoint();
    const double square = max_abs(rho * rho - CMatrix::Identity(2 * m, 2 * m));
    const double anti = max_abs(gamma * rho + rho * gamma);
    if (square > policy.tol_unitary || anti > policy.tol_unitary)
      throw Error(ErrorKind::InvalidBundle, "clifford_double: rho^2 or anticommutation check failed",
                  std::max(square, anti));
    c.frame[p] = std::move(v);
    c.rho[p] = std::move(rho);
    c.gamma[p] = gamma;
  });
  return c;
}

namespace {

struct GradedFrames {
  CMatrix plus;
  CMatrix minus;
};

GradedFrames gradation_frames(const CMatrix& gamma, const NumericPolicy& policy) {
  const auto eig = herm_eig(gamma, policy);
  std::vector<Eigen::Index> plus, minus;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    if (eig.eigenvalues(i) > 0.5) plus.push_back(i);
    else if (eig.eigenvalues(i) < -0.5) minus.push_back(i);
  }
  if (plus.size() != minus.size() || plus.size() + minus.size() != static_cast<std::size_t>(gamma.rows()))
    throw Error(ErrorKind::AsymmetricGradation, "gradation indices n+ = " + std::to_string(plus.size()) +
                                                   ", n- = " + std::to_string(minus.size()));
  GradedFrames f{CMatrix(gamma.rows(), plus.size()), CMatrix(gamma.rows(), minus.size())};
  for (std::size_t j = 0; j < plus.size(); ++j) f.plus.col(j) = eig.eigenvectors.col(plus[j]);
  for (std::size_t j = 0; j < minus.size(); ++j) f.minus.col(j) = eig.eigenvectors.col(minus[j]);
  return f;
}

}  // namespace

std::vector<CMatrix> clifford_theta(const GradedCliffordData& c, const NumericPolicy& policy) {
  std::vector<CMatrix> theta(c.grid.size());
  parallel_for(c.grid.size(), [&](std::size_t p) {
    const auto f = gradation_frames(c.gamma[p], policy);
    theta[p] = f.plus.adjoint() * c.rho[p] * f.minus;
  });
  return theta;
}

ChiralBundleData clifford_reconstruct(const GradedCliffordData& c, const std::vector<CMatrix>& h_ref,
                                      const NumericPolicy& policy) {
  if (!h_ref.empty() && h_ref.size() != c.grid.size())
    throw Error(ErrorKind::DimensionMismatch, "h_ref field length does not match grid");
  ChiralBundleData out;
  out.grid = c.grid;
  out.ambient_dim = c.ambient_dim;
  out.rank = c.rank / 2;
  out.frame.resize(c.grid.size());
  out.phi.resize(c.grid.size());
  out.metadata["h_ref"] = h_ref.empty() ? "identity_in_frames" : "supplied";
  parallel_for(c.grid.size(), [&](std::size_t p) {
    const auto f = gradation_frames(c.gamma[p], policy);
    if (f.minus.cols() != out.rank)
      throw Error(ErrorKind::AsymmetricGradation, "gradation index differs from half the doubled rank");
    const CMatrix theta = f.plus.adjoint() * c.rho[p] * f.minus;
    if (h_ref.empty()) {
      out.phi[p] = theta;
    } else {
      const CMatrix& h = h_ref[p];
      if (h.rows() != out.rank || h.cols() != out.rank)
        throw Error(ErrorKind::DimensionMismatch, "h_ref matrix has the wrong size");
      const double res = unitarity_residual(h);
      if (res > policy.tol_unitary) throw Error(ErrorKind::NonUnitary, "h_ref is not unitary", res);
      out.phi[p] = h.adjoint() * theta;
    }
    out.frame[p] = c.frame[p] * f.minus;
  });
  return out;
}

CMatrix random_unitary(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  CMatrix z(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) z(i, j) = cplx(normal(rng), normal(rng));
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(m, m);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < m; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

GaugeField random_gauge(const BaseGrid& grid, int m, std::mt19937_64& rng) {
  GaugeField g{grid, std::vector<CMatrix>(grid.size())};
  const CMatrix boundary = random_unitary(m, rng);
  for (std::size_t p = 0; p < grid.size(); ++p)
    g.g[p] = grid.kind() != SpaceKind::torus && grid.on_boundary(p) ? boundary : random_unitary(m, rng);
  return g;
}

}  // namespace chiraltop

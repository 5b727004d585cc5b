#include "chiraltop/invariants.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "chiraltop/error.hpp"
#include "chiraltop/parallel.hpp"
#include "chiraltop/spectral.hpp"

namespace chiraltop {

namespace {

constexpr double kPi = std::numbers::pi;

void check_bundle(const ChiralBundleData& b) {
  if (b.frame.size() != b.grid.size() || b.phi.size() != b.grid.size())
    throw Error(ErrorKind::DimensionMismatch, "bundle field length does not match grid");
}

void check_degree(const CycleHandle& cycle, int degree, const char* what) {
  if (cycle.degree != degree || static_cast<int>(cycle.axes.size()) != degree)
    throw Error(ErrorKind::DegreeOutOfRange, std::string(what) + " needs a degree-" + std::to_string(degree) + " cycle");
}

CMatrix checked_overlap(const ChiralBundleData& b, std::size_t p, std::size_t q, const NumericPolicy& policy) {
  CMatrix o = b.frame[p].adjoint() * b.frame[q];
  const double s = min_singular_value(o);
  if (s < policy.overlap_min) {
    std::ostringstream os;
    os << "link overlap " << s << " between nodes " << p << " and " << q;
    throw Error(ErrorKind::Admissibility, os.str(), s);
  }
  return o;
}

InvariantValue rounded(double raw, double tol, double margin) {
  InvariantValue v;
  v.raw = raw;
  v.value = std::lround(raw);
  v.residual = std::abs(raw - static_cast<double>(v.value));
  v.margin = margin;
  v.resolved = v.residual <= tol;
  return v;
}

// Frame transport: the frame of Ran V(to) closest to `from`.
CMatrix transport(const CMatrix& v_to, const CMatrix& from, const NumericPolicy& policy) {
  return v_to * polar_unitary(v_to.adjoint() * from, policy);
}

struct Permutation {
  std::vector<int> order;
  int sign;
};

// Permutations of 0..k-1 with order[0] == 0, with signs.
std::vector<Permutation> anchored_permutations(int k) {
  std::vector<int> rest(k - 1);
  for (int i = 0; i < k - 1; ++i) rest[i] = i + 1;
  std::vector<Permutation> out;
  do {
    std::vector<int> order{0};
    order.insert(order.end(), rest.begin(), rest.end());
    int inversions = 0;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) inversions += order[i] > order[j];
    out.push_back({order, inversions % 2 ? -1 : 1});
  } while (std::next_permutation(rest.begin(), rest.end()));
  return out;
}

struct TwoSums {
  double a = 0.0;
  double b = 0.0;
  TwoSums& operator+=(const TwoSums& o) {
    a += o.a;
    b += o.b;
    return *this;
  }
};

}  // namespace

long require_integer(const InvariantValue& v, const std::string& what) {
  if (!v.resolved) {
    std::ostringstream os;
    os << what << " residual " << v.residual << " (raw " << v.raw << ")";
    throw Error(ErrorKind::Unresolved, os.str(), v.residual);
  }
  return v.value;
}

InvariantValue chern1(const ChiralBundleData& b, const CycleHandle& cycle, const NumericPolicy& policy) {
  check_bundle(b);
  check_degree(cycle, 2, "chern1");
  const auto cs = cells(b.grid, cycle);
  auto link = [&](std::size_t p, std::size_t q) { return det_phase(checked_overlap(b, p, q, policy), policy); };
  std::vector<double> flux(cs.size());
  parallel_for(cs.size(), [&](std::size_t i) {
    const auto& c = cs[i].corners;
    const cplx w = link(c[0], c[1]) * link(c[1], c[3]) * std::conj(link(c[2], c[3])) * std::conj(link(c[0], c[2]));
    flux[i] = cs[i].orientation * std::arg(w);
  });
  double worst = 0.0;
  for (double f : flux) worst = std::max(worst, std::abs(f));
  if (worst > kPi - policy.branch_margin)
    throw Error(ErrorKind::BranchMarginal, "plaquette flux " + std::to_string(worst) + " too close to pi", worst);
  const double total = ordered_sum<double>(flux.size(), [&](std::size_t i) { return flux[i]; });
  return rounded(total / (2.0 * kPi), policy.round_tol_c1, kPi - worst);
}

InvariantValue chern2(const ChiralBundleData& b, const CycleHandle& cycle, const NumericPolicy& policy) {
  check_bundle(b);
  check_degree(cycle, 4, "chern2");
  const auto cs = cells(b.grid, cycle);
  auto link = [&](std::size_t p, std::size_t q) { return polar_unitary(checked_overlap(b, p, q, policy), policy); };
  const auto sums = ordered_sum<TwoSums>(cs.size(), [&](std::size_t i) {
    const auto& c = cs[i].corners;
    std::array<CMatrix, 4> base;
    for (int mu = 0; mu < 4; ++mu) base[mu] = link(c[0], c[1u << mu]);
    std::array<std::array<CMatrix, 4>, 4> field;
    std::array<std::array<double, 4>, 4> abelian{};
    for (int mu = 0; mu < 4; ++mu) {
      for (int nu = mu + 1; nu < 4; ++nu) {
        const std::size_t both = (1u << mu) | (1u << nu);
        const CMatrix w = base[mu] * link(c[1u << mu], c[both]) * link(c[1u << nu], c[both]).adjoint() *
                          base[nu].adjoint();
        field[mu][nu] = unitary_log(polar_unitary(w, policy), policy);
        abelian[mu][nu] = field[mu][nu].trace().imag();
      }
    }
    auto tr = [&](int a, int b2, int c2, int d) { return (field[a][b2] * field[c2][d]).trace().real(); };
    TwoSums s;
    s.a = 8.0 * (tr(0, 1, 2, 3) - tr(0, 2, 1, 3) + tr(0, 3, 1, 2)) * cs[i].orientation;
    s.b = 8.0 * (abelian[0][1] * abelian[2][3] - abelian[0][2] * abelian[1][3] + abelian[0][3] * abelian[1][2]) *
          cs[i].orientation;
    return s;
  });
  // ch2 = -(1/32 pi^2) sum eps Tr F F; c1^2 = (1/16 pi^2) sum eps f f; c2 = c1^2 / 2 - ch2.
  const double ch2 = -sums.a / (32.0 * kPi * kPi);
  const double cup = sums.b / (16.0 * kPi * kPi);
  return rounded(0.5 * cup - ch2, policy.round_tol_c2, 0.0);
}

InvariantValue w1(const ChiralBundleData& b, const CycleHandle& cycle, const NumericPolicy& policy) {
  check_bundle(b);
  check_degree(cycle, 1, "w1");
  const auto cs = cells(b.grid, cycle);
  std::vector<double> step(cs.size());
  parallel_for(cs.size(), [&](std::size_t i) {
    const auto& c = cs[i].corners;
    step[i] = cs[i].orientation * std::arg(det_phase(b.phi[c[1]], policy) * std::conj(det_phase(b.phi[c[0]], policy)));
  });
  double worst = 0.0;
  for (double s : step) worst = std::max(worst, std::abs(s));
  if (worst > kPi - policy.branch_margin)
    throw Error(ErrorKind::StepMarginal, "phase step " + std::to_string(worst) + " too close to pi", worst);
  const double total = ordered_sum<double>(step.size(), [&](std::size_t i) { return step[i]; });
  return rounded(total / (2.0 * kPi), policy.round_tol_w1, kPi - worst);
}

std::vector<CMatrix> auto_frame(const ChiralBundleData& b, const CycleHandle& cycle, const NumericPolicy& policy) {
  check_bundle(b);
  check_degree(cycle, 3, "auto_frame");
  const BaseGrid& g = b.grid;
  std::vector<CMatrix> w(g.size());
  auto projector_seed = [&](std::size_t p) { return projector_frame(b.frame[p] * b.frame[p].adjoint(), policy); };

  if (g.kind() == SpaceKind::torus) {
    const std::size_t origin = cycle_points(g, cycle).front();
    w[origin] = projector_seed(origin);
    for (int level = 0; level < 3; ++level) {
      const int axis = cycle.axes[level];
      const int n = g.shape()[axis];
      // Line starts: framed nodes with index 0 (relative to the offset) on this and higher levels.
      std::vector<std::size_t> starts{origin};
      for (int lower = 0; lower < level; ++lower) {
        std::vector<std::size_t> grown;
        for (std::size_t s : starts) {
          std::size_t p = s;
          for (int j = 0; j < g.shape()[cycle.axes[lower]]; ++j) {
            grown.push_back(p);
            p = *g.neighbor(p, cycle.axes[lower]);
          }
        }
        starts = std::move(grown);
      }
      for (std::size_t s : starts) {
        std::vector<std::size_t> line{s};
        for (int j = 1; j < n; ++j) {
          const std::size_t p = *g.neighbor(line.back(), axis);
          w[p] = transport(b.frame[p], w[line.back()], policy);
          line.push_back(p);
        }
        const CMatrix closing = transport(b.frame[s], w[line.back()], policy);
        CMatrix holonomy;
        try {
          holonomy = unitary_log(polar_unitary(w[s].adjoint() * closing, policy), policy);
        } catch (const Error& e) {
          throw Error(ErrorKind::NotFramable, std::string("loop holonomy cannot be absorbed: ") + e.what());
        }
        for (int j = 1; j < n; ++j) w[line[j]] = w[line[j]] * antihermitian_exp(-(static_cast<double>(j) / n) * holonomy);
      }
    }
  } else {
    const auto tree = sweep_tree(g);
    const CMatrix seed = projector_seed(g.base_point());
    for (std::size_t p : tree.order) {
      if (tree.parent[p] < 0) w[p] = seed;
      else w[p] = transport(b.frame[p], w[static_cast<std::size_t>(tree.parent[p])], policy);
    }
  }

  // Smoothing: polar projection of neighbor sums, Jacobi sweeps.
  const auto pts = cycle_points(g, cycle);
  for (int it = 0; it < policy.smoothing_iterations; ++it) {
    std::vector<CMatrix> next = w;
    parallel_for(pts.size(), [&](std::size_t i) {
      const std::size_t p = pts[i];
      if (g.kind() != SpaceKind::torus && g.on_boundary(p)) return;
      CMatrix sum = CMatrix::Zero(b.ambient_dim, b.rank);
      for (int axis : cycle.axes) {
        sum += w[*g.neighbor(p, axis)];
        sum += w[*g.neighbor_back(p, axis)];
      }
      try {
        next[p] = transport(b.frame[p], sum, policy);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NearSingular) throw;
      }
    });
    w = std::move(next);
  }
  return w;
}

std::complex<double> odd_trace_sum(const BaseGrid& grid, const CycleHandle& cycle, const std::vector<CMatrix>& values,
                                   const NumericPolicy& policy) {
  const int k = static_cast<int>(cycle.axes.size());
  if (k % 2 == 0) throw Error(ErrorKind::DegreeOutOfRange, "trace contraction needs an odd-dimensional cycle");
  const auto pts = cycle_points(grid, cycle);
  const std::size_t n = pts.size();
  std::vector<std::int64_t> local(grid.size(), -1);
  for (std::size_t i = 0; i < n; ++i) local[pts[i]] = static_cast<std::int64_t>(i);

  // Local neighbor tables along the cycle axes, -1 where the cycle ends.
  std::vector<std::int64_t> fwd(n * k, -1), bwd(n * k, -1);
  for (std::size_t i = 0; i < n; ++i) {
    for (int b = 0; b < k; ++b) {
      if (const auto q = grid.neighbor(pts[i], cycle.axes[b])) fwd[i * k + b] = local[*q];
      if (const auto q = grid.neighbor_back(pts[i], cycle.axes[b])) bwd[i * k + b] = local[*q];
    }
  }
  auto step = [&](std::int64_t i, int b, int s) -> std::int64_t {
    for (; i >= 0 && s > 0; --s) i = fwd[static_cast<std::size_t>(i) * k + b];
    for (; i >= 0 && s < 0; ++s) i = bwd[static_cast<std::size_t>(i) * k + b];
    return i;
  };
  // Past the faces of a sphere grid the map is the constant base value, so missing
  // one-form samples are exactly zero there.
  const bool zero_outside = grid.kind() == SpaceKind::sphere;
  const bool high_order = policy.stencil_order >= 4;
  const Eigen::Index dim = values[pts.front()].rows();
  const CMatrix zero = CMatrix::Zero(dim, dim);

  struct Samples {
    std::vector<CMatrix> value;
    std::vector<char> valid;
  };
  auto sample = [&](const Samples& f, std::int64_t i) -> const CMatrix* {
    if (i >= 0 && f.valid[static_cast<std::size_t>(i)]) return &f.value[static_cast<std::size_t>(i)];
    return zero_outside ? &zero : nullptr;
  };

  // One-form along each cycle axis, estimated at the centre of the cell whose lowest corner is node i.
  std::vector<Samples> forms(k);
  for (int b = 0; b < k; ++b) {
    Samples edge{std::vector<CMatrix>(n), std::vector<char>(n, 0)};
    parallel_for(n, [&](std::size_t i) {
      const auto j = fwd[i * k + b];
      if (j < 0) return;
      edge.value[i] = unitary_log(values[pts[i]].adjoint() * values[pts[static_cast<std::size_t>(j)]], policy);
      edge.valid[i] = 1;
    });

    Samples cur = edge;
    if (high_order) {
      // Edge log = h A(mid) + h^3 A''/24 - h^3 [A', A]/12 + O(h^5); remove the cubic terms
      // using the neighboring collinear edges.
      parallel_for(n, [&](std::size_t i) {
        if (!edge.valid[i]) return;
        const CMatrix& l = edge.value[i];
        const CMatrix* lm = sample(edge, step(static_cast<std::int64_t>(i), b, -1));
        const CMatrix* lp = sample(edge, step(static_cast<std::int64_t>(i), b, 1));
        CMatrix second, first;
        if (lm && lp) {
          second = *lp + *lm - 2.0 * l;
          first = 0.5 * (*lp - *lm);
        } else if (lp) {
          const CMatrix* lpp = sample(edge, step(static_cast<std::int64_t>(i), b, 2));
          if (!lpp) return;
          second = l - 2.0 * *lp + *lpp;
          first = *lp - l;
        } else if (lm) {
          const CMatrix* lmm = sample(edge, step(static_cast<std::int64_t>(i), b, -2));
          if (!lmm) return;
          second = l - 2.0 * *lm + *lmm;
          first = l - *lm;
        } else {
          return;
        }
        cur.value[i] = l - second / 24.0 + (first * l - l * first) / 12.0;
      });
    }

    // Interpolate across every transverse axis to the cell centre.
    for (int a = 0; a < k; ++a) {
      if (a == b) continue;
      Samples next{std::vector<CMatrix>(n), std::vector<char>(n, 0)};
      parallel_for(n, [&](std::size_t i) {
        const auto ii = static_cast<std::int64_t>(i);
        const auto j = step(ii, a, 1);
        if (!cur.valid[i] || j < 0 || !cur.valid[static_cast<std::size_t>(j)]) return;
        const CMatrix& f0 = cur.value[i];
        const CMatrix& f1 = cur.value[static_cast<std::size_t>(j)];
        next.valid[i] = 1;
        if (!high_order) {
          next.value[i] = 0.5 * (f0 + f1);
          return;
        }
        const CMatrix* fm = sample(cur, step(ii, a, -1));
        const CMatrix* f2 = sample(cur, step(ii, a, 2));
        if (fm && f2) next.value[i] = (9.0 * (f0 + f1) - *fm - *f2) / 16.0;
        else if (f2) next.value[i] = (3.0 * f0 + 6.0 * f1 - *f2) / 8.0;
        else if (fm) next.value[i] = (6.0 * f0 + 3.0 * f1 - *fm) / 8.0;
        else next.value[i] = 0.5 * (f0 + f1);
      });
      cur = std::move(next);
    }
    forms[b] = std::move(cur);
  }

  const auto perms = anchored_permutations(k);
  const auto cs = cells(grid, cycle);
  return ordered_sum<std::complex<double>>(cs.size(), [&](std::size_t c) {
    const auto i = static_cast<std::size_t>(local[cs[c].corners.front()]);
    std::complex<double> s = 0.0;
    for (const auto& perm : perms) {
      CMatrix prod = forms[perm.order[0]].value[i];
      for (int j = 1; j < k; ++j) prod = prod * forms[perm.order[j]].value[i];
      s += static_cast<double>(perm.sign) * prod.trace();
    }
    return static_cast<double>(k * cs[c].orientation) * s;
  });
}

InvariantValue w2(const ChiralBundleData& b, const CycleHandle& cycle, Framing framing,
                  const std::vector<CMatrix>* frames, const NumericPolicy& policy) {
  check_bundle(b);
  check_degree(cycle, 3, "w2");
  const auto pts = cycle_points(b.grid, cycle);
  std::vector<CMatrix> global;
  switch (framing) {
    case Framing::constant_frame_required: {
      const CMatrix& v0 = b.frame[pts.front()];
      for (std::size_t p : pts)
        if (max_abs(b.frame[p] - v0) > policy.tol_frame_equal)
          throw Error(ErrorKind::NotFramable, "frame is not constant on the cycle (node " + std::to_string(p) + ")");
      global = b.frame;
      break;
    }
    case Framing::supplied: {
      if (!frames || frames->size() != b.grid.size())
        throw Error(ErrorKind::DimensionMismatch, "supplied framing must cover every grid node");
      for (std::size_t p : pts) {
        const CMatrix& f = (*frames)[p];
        if (f.rows() != b.ambient_dim || f.cols() != b.rank || unitarity_residual(f) > policy.tol_unitary ||
            max_abs(b.frame[p] * (b.frame[p].adjoint() * f) - f) > 1e-8)
          throw Error(ErrorKind::FrameMismatch, "supplied frame does not span the bundle at node " + std::to_string(p));
      }
      global = *frames;
      break;
    }
    case Framing::automatic: {
      if (b.grid.kind() == SpaceKind::torus) {
        for (int i = 0; i < 3; ++i) {
          for (int j = i + 1; j < 3; ++j) {
            const CycleHandle face{2, {cycle.axes[i], cycle.axes[j]}, cycle.base_offset, false};
            const auto c1 = chern1(b, face, policy);
            if (c1.value != 0)
              throw Error(ErrorKind::NotFramable, "c1 = " + std::to_string(c1.value) + " on sub-cycle " + face.label());
          }
        }
      }
      global = auto_frame(b, cycle, policy);
      break;
    }
  }
  std::vector<CMatrix> aligned(b.grid.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    const std::size_t p = pts[i];
    const CMatrix g = b.frame[p].adjoint() * global[p];
    aligned[p] = g.adjoint() * b.phi[p] * g;
  });
  const auto sum = odd_trace_sum(b.grid, cycle, aligned, policy);
  return rounded(sum.real() / (24.0 * kPi * kPi), policy.round_tol_w2, 0.0);
}

double winding5(const UnitaryField& field, const SphereMap* boundary, const NumericPolicy& policy) {
  if (field.grid.kind() != SpaceKind::ball5) throw Error(ErrorKind::UnsupportedSpace, "winding5 needs a ball5 grid");
  if (field.values.size() != field.grid.size())
    throw Error(ErrorKind::DimensionMismatch, "extension field length does not match grid");
  for (const auto& u : field.values) {
    const double res = unitarity_residual(u);
    if (res > policy.tol_unitary) throw Error(ErrorKind::NonUnitary, "extension field is not unitary", res);
  }
  if (boundary) {
    if (!(boundary->grid == field.grid))
      throw Error(ErrorKind::BoundaryMismatch, "boundary map and extension live on different grids");
    const auto& bp = field.grid.boundary_points();
    if (boundary->values.size() != bp.size())
      throw Error(ErrorKind::BoundaryMismatch, "boundary map does not cover the boundary nodes");
    double worst = 0.0;
    for (std::size_t i = 0; i < bp.size(); ++i) {
      const CMatrix& f = boundary->values[i];
      const CMatrix& u = field.values[bp[i]];
      if (f.rows() > u.rows()) throw Error(ErrorKind::BoundaryMismatch, "boundary map is larger than the extension");
      CMatrix embedded = CMatrix::Identity(u.rows(), u.cols());
      embedded.topLeftCorner(f.rows(), f.cols()) = f;
      worst = std::max(worst, max_abs(u - embedded));
    }
    if (worst > policy.tol_boundary)
      throw Error(ErrorKind::BoundaryMismatch, "extension deviates from the boundary map by " + std::to_string(worst), worst);
  }
  const auto cycle = enumerate_cycles(field.grid, 5).front();
  const auto sum = odd_trace_sum(field.grid, cycle, field.values, policy);
  // (i / 240 pi^3) * sum, whose imaginary part vanishes for unitary fields.
  return -sum.imag() / (240.0 * kPi * kPi * kPi);
}

Z2Result z2_witten(const SphereMap& f, const UnitaryField& extension, const NumericPolicy& policy) {
  if (f.grid.kind() != SpaceKind::ball5)
    throw Error(ErrorKind::UnsupportedSpace, "z2 needs the boundary map sampled on the ball5 boundary");
  for (const auto& u : f.values) {
    if (u.rows() != 2 || u.cols() != 2) throw Error(ErrorKind::DimensionMismatch, "boundary map must be 2 x 2");
    const double det_err = std::abs(u.determinant() - 1.0);
    const double res = unitarity_residual(u);
    if (res > policy.tol_unitary || det_err > policy.tol_unitary)
      throw Error(ErrorKind::NonUnitary, "boundary map does not take values in SU(2)", std::max(res, det_err));
  }
  Z2Result r;
  r.cs5 = winding5(extension, &f, policy);
  // Half of the raw value is the integer-normalized degree-5 density; the sign is
  // exp(2 pi i v) with v = cs5 / 2 forced onto a half-integer.
  const double v = 0.5 * r.cs5;
  const long twice = std::lround(2.0 * v);
  r.residual = std::abs(v - 0.5 * static_cast<double>(twice));
  if (r.residual > policy.z2_tol)
    throw Error(ErrorKind::Unresolved, "CS5 value " + std::to_string(r.cs5) + " is not near a half-integer level",
                r.residual);
  r.sign = (twice % 2 == 0) ? 1 : -1;
  return r;
}

bool InvariantReport::has_unresolved() const {
  for (const auto& [name, entries] : classes)
    for (const auto& e : entries)
      if (!e.value || !e.value->resolved) return true;
  return false;
}

InvariantReport compute_report(const ChiralBundleData& b, const std::vector<std::string>& selector,
                               const NumericPolicy& policy, std::vector<int> offset) {
  check_bundle(b);
  InvariantReport r;
  r.grid = b.grid;
  r.rank = b.rank;
  r.policy = policy;
  const auto it = b.metadata.find("h_ref");
  r.h_ref = it == b.metadata.end() ? "unspecified" : it->second;
  static const std::vector<std::pair<std::string, int>> kClasses{{"w1", 1}, {"c1", 2}, {"w2", 3}, {"c2", 4}};
  for (const auto& name : selector)
    if (std::none_of(kClasses.begin(), kClasses.end(), [&](const auto& c) { return c.first == name; }))
      throw Error(ErrorKind::BadParams, "unknown invariant '" + name + "'");
  for (const auto& [name, degree] : kClasses) {
    if (!selector.empty() && std::find(selector.begin(), selector.end(), name) == selector.end()) continue;
    if (degree > b.grid.dim()) continue;
    const auto handles = enumerate_cycles(b.grid, degree, offset);
    // Spheres carry no cycles below their dimension; such classes are left out.
    if (handles.empty()) continue;
    auto& entries = r.classes[name];
    for (const auto& cycle : handles) {
      ReportEntry e;
      e.cycle = cycle.label();
      try {
        if (name == "w1") e.value = w1(b, cycle, policy);
        else if (name == "c1") e.value = chern1(b, cycle, policy);
        else if (name == "w2") e.value = w2(b, cycle, Framing::automatic, nullptr, policy);
        else e.value = chern2(b, cycle, policy);
        if (!e.value->resolved) {
          std::ostringstream os;
          os << "residual " << e.value->residual << " exceeds the rounding tolerance (raw " << e.value->raw << ")";
          e.reason = os.str();
        }
      } catch (const Error& err) {
        e.value.reset();
        e.reason = err.what();
      }
      entries.push_back(std::move(e));
    }
  }
  return r;
}

}  // namespace chiraltop

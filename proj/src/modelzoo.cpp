#include "chiraltop/modelzoo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "chiraltop/error.hpp"
#include "chiraltop/parallel.hpp"

namespace chiraltop {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I{0.0, 1.0};

CMatrix pauli(int a) {
  CMatrix s(2, 2);
  switch (a) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -I, I, 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

CMatrix dot_sigma(double x, double y, double z) { return x * pauli(1) + y * pauli(2) + z * pauli(3); }

std::string base_of(const BaseGrid& g) { return std::string(to_string(g.kind())) + ":" + std::to_string(g.dim()); }

double param(const ModelSpec& s, const std::string& key) { return s.params.at(key); }
int iparam(const ModelSpec& s, const std::string& key) { return static_cast<int>(std::lround(s.params.at(key))); }

bool near_any(double x, std::initializer_list<double> points, double tol) {
  return std::any_of(points.begin(), points.end(), [&](double p) { return std::abs(x - p) < tol; });
}

// (sin k1, sin k2, M + cos k1 + cos k2)
std::array<double, 3> qwz(const std::vector<double>& k, double mass) {
  return {std::sin(k[0]), std::sin(k[1]), mass + std::cos(k[0]) + std::cos(k[1])};
}

ChiralBundleData bundle_shell(const BaseGrid& grid, int ambient, int rank, const std::string& model) {
  ChiralBundleData b;
  b.grid = grid;
  b.ambient_dim = ambient;
  b.rank = rank;
  b.frame.assign(grid.size(), CMatrix::Identity(ambient, rank));
  b.phi.assign(grid.size(), CMatrix::Identity(rank, rank));
  b.metadata["model"] = model;
  b.metadata["h_ref"] = "model";
  return b;
}

QuantumSystemField build_ssh(const ModelSpec& s, const BaseGrid& g) {
  const double t1 = param(s, "t1"), t2 = param(s, "t2");
  QuantumSystemField sys{g, 2, std::vector<CMatrix>(g.size()), std::vector<CMatrix>(g.size(), pauli(3)), 1};
  for (std::size_t p = 0; p < g.size(); ++p) {
    const double k = g.coordinates(p)[0];
    const cplx q = t1 + t2 * std::exp(I * k);
    CMatrix h(2, 2);
    h << 0, q, std::conj(q), 0;
    sys.hamiltonian[p] = h;
  }
  return sys;
}

QuantumSystemField build_monopole(const BaseGrid& g) {
  QuantumSystemField sys{g, 2, std::vector<CMatrix>(g.size()), std::nullopt, 1};
  for (std::size_t p = 0; p < g.size(); ++p) {
    const auto x = g.sphere_point(p);
    sys.hamiltonian[p] = dot_sigma(x[0], x[1], x[2]);
  }
  return sys;
}

QuantumSystemField build_dirac4d(const ModelSpec& s, const BaseGrid& g) {
  const double mass = param(s, "M");
  const auto& gamma = gamma_matrices();
  QuantumSystemField sys{g, 4, std::vector<CMatrix>(g.size()), std::nullopt, 2};
  parallel_for(g.size(), [&](std::size_t p) {
    const auto k = g.coordinates(p);
    CMatrix h = CMatrix::Zero(4, 4);
    double m = mass;
    for (int a = 0; a < 4; ++a) {
      h += std::sin(k[a]) * gamma[a];
      m -= std::cos(k[a]);
    }
    h += m * gamma[4];
    sys.hamiltonian[p] = h;
  });
  return sys;
}

QuantumSystemField build_chiral_chern(const ModelSpec& s, const BaseGrid& g) {
  const double mass = param(s, "M"), mu = param(s, "mu");
  const CMatrix tau1 = pauli(1);
  const CMatrix chi = kron(pauli(0), pauli(3));
  QuantumSystemField sys{g, 4, std::vector<CMatrix>(g.size()), std::vector<CMatrix>(g.size(), chi), 1};
  for (std::size_t p = 0; p < g.size(); ++p) {
    const auto d = qwz(g.coordinates(p), mass);
    const double r = std::hypot(d[0], d[1], d[2]);
    const CMatrix a = mu * pauli(0) + dot_sigma(d[0] / r, d[1] / r, d[2] / r);
    sys.hamiltonian[p] = kron(a, tau1);
  }
  return sys;
}

ChiralBundleData build_su2_degree(const ModelSpec& s, const BaseGrid& g) {
  const int n = iparam(s, "n");
  auto b = bundle_shell(g, 2, 2, s.name);
  parallel_for(g.size(), [&](std::size_t p) {
    const auto x = g.sphere_point(p);
    const double w[4] = {x[3], x[0], x[1], x[2]};
    const CMatrix u = su2_from_vector(w);
    CMatrix v = CMatrix::Identity(2, 2);
    const CMatrix step = n >= 0 ? u : CMatrix(u.adjoint());
    for (int i = 0; i < std::abs(n); ++i) v = v * step;
    b.phi[p] = v;
  });
  return b;
}

ChiralBundleData build_su2_torus(const ModelSpec& s, const BaseGrid& g) {
  const double mass = param(s, "M");
  auto b = bundle_shell(g, 2, 2, s.name);
  parallel_for(g.size(), [&](std::size_t p) {
    const auto k = g.coordinates(p);
    double w[4] = {mass - std::cos(k[0]) - std::cos(k[1]) - std::cos(k[2]), std::sin(k[0]), std::sin(k[1]),
                   std::sin(k[2])};
    const double r = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2] + w[3] * w[3]);
    for (double& v : w) v /= r;
    b.phi[p] = su2_from_vector(w);
  });
  return b;
}

ChiralBundleData build_phi_n(const ModelSpec& s, const BaseGrid& g) {
  static const char* keys[] = {"n", "n2", "n3", "n4"};
  std::vector<int> winding(4);
  for (int a = 0; a < 4; ++a) winding[a] = iparam(s, keys[a]);
  for (int a = g.dim(); a < 4; ++a)
    if (winding[a] != 0)
      throw Error(ErrorKind::BadParams, std::string("parameter ") + keys[a] + " needs a base of dimension " +
                                            std::to_string(a + 1));
  auto b = bundle_shell(g, 1, 1, s.name);
  for (std::size_t p = 0; p < g.size(); ++p) {
    const auto x = g.coordinates(p);
    double angle = 0.0;
    // Sphere coordinates run over [0, 1]; both ends are the collapsed base point.
    const double scale = g.kind() == SpaceKind::sphere ? 2.0 * kPi : 1.0;
    for (int a = 0; a < g.dim(); ++a) angle += winding[a] * scale * x[a];
    b.phi[p](0, 0) = std::exp(I * angle);
  }
  return b;
}

ChiralBundleData build_trivial(const ModelSpec& s, const BaseGrid& g) {
  const int m = iparam(s, "m");
  int ambient = iparam(s, "N");
  if (ambient == 0) ambient = m;
  if (ambient < m) throw Error(ErrorKind::BadParams, "ambient dimension N must be at least the rank m");
  return bundle_shell(g, ambient, m, s.name);
}

ChiralBundleData build_chern_line(const ModelSpec& s, const BaseGrid& g) {
  const double mass = param(s, "M");
  const int a = iparam(s, "a"), c = iparam(s, "b");
  auto b = bundle_shell(g, 2, 1, s.name);
  for (std::size_t p = 0; p < g.size(); ++p) {
    const auto k = g.coordinates(p);
    const auto d = qwz(k, mass);
    b.frame[p] = herm_eig(dot_sigma(d[0], d[1], d[2])).eigenvectors.leftCols(1);
    b.phi[p](0, 0) = std::exp(I * (a * k[0] + c * k[1]));
  }
  align_frames(g, b.frame);
  return b;
}

SphereMap build_hopf(const BaseGrid& g) {
  SphereMap f{g, {}};
  auto value = [](const std::vector<double>& k) {
    const auto w = suspended_hopf_vector(k);
    return su2_from_vector(w.data());
  };
  if (g.kind() == SpaceKind::ball5) {
    for (std::size_t p : g.boundary_points()) f.values.push_back(value(g.radial_direction(p)));
  } else {
    for (std::size_t p = 0; p < g.size(); ++p) f.values.push_back(value(g.sphere_point(p)));
  }
  return f;
}

void check_params(const ModelInfo& info, const ModelSpec& s) {
  auto get = [&](const char* k) { return s.params.at(k); };
  if (info.name == "ssh" && std::abs(std::abs(get("t1")) - std::abs(get("t2"))) < 1e-6)
    throw Error(ErrorKind::BadParams, "ssh: the gap closes at |t1| = |t2|");
  if (info.name == "dirac4d" && near_any(get("M"), {-4, -2, 0, 2, 4}, 1e-3))
    throw Error(ErrorKind::BadParams, "dirac4d: the gap closes at M in {0, +-2, +-4}");
  if ((info.name == "chern_line" || info.name == "chiral_chern") && near_any(get("M"), {-2, 0, 2}, 1e-3))
    throw Error(ErrorKind::BadParams, info.name + ": the gap closes at M in {0, +-2}");
  if (info.name == "su2_torus" && near_any(get("M"), {-3, -1, 1, 3}, 1e-3))
    throw Error(ErrorKind::BadParams, "su2_torus: the map d/|d| is singular at M in {+-1, +-3}");
}

}  // namespace

const char* to_string(ModelTarget target) {
  switch (target) {
    case ModelTarget::quantum_system: return "quantum_system";
    case ModelTarget::chiral_bundle: return "chiral_bundle";
    case ModelTarget::s4_map: return "s4_map";
  }
  return "?";
}

const std::vector<ModelInfo>& list_models() {
  static const std::vector<ModelInfo> catalog{
      {"ssh", ModelTarget::quantum_system, {"torus:1"}, "torus:128",
       {{"t1", -5, 5, 0.5, false}, {"t2", -5, 5, 1.0, false}},
       "w1 = 1 for |t2| > |t1|, 0 for |t2| < |t1|",
       "two-band chain H = [[0, q], [q*, 0]], q = t1 + t2 exp(ik), chirality s3"},
      {"dirac_monopole", ModelTarget::quantum_system, {"sphere:2"}, "sphere:30x30", {},
       "c1 = -1 for the lower band",
       "H(x) = x.s on S^2, no chirality; the lower band carries phi = 1"},
      {"su2_degree_n", ModelTarget::chiral_bundle, {"sphere:3"}, "sphere:24x24x24",
       {{"n", -5, 5, 1, true}},
       "w2 = n",
       "trivial rank-2 bundle with phi = g^n, g: S^3 -> SU(2) the identification x -> x3 + i x.s"},
      {"dirac4d", ModelTarget::quantum_system, {"torus:4"}, "torus:12x12x12x12",
       {{"M", -6, 6, 3, false}},
       "c2 = -1 for 2 < M < 4, +1 for -4 < M < -2, +3 for 0 < M < 2, -3 for -2 < M < 0, 0 for |M| > 4",
       "H = sum_a d_a Gamma_a, d = (sin k1..sin k4, M - sum cos k), two lower bands"},
      {"suspended_hopf", ModelTarget::s4_map, {"ball5:5", "sphere:4"}, "ball5:7x7x7x7x7", {},
       "z2 codomain {+1, -1}; restricts to the Hopf map on k0 = 0",
       "f(k) = 2/(1 + k0^2) (k0, k1k3 - k2k4, k1k4 + k2k3, (k1^2 + k2^2 - k3^2 - k4^2)/2) in SU(2)"},
      {"phi_n", ModelTarget::chiral_bundle, {"torus:1", "torus:2", "torus:3", "torus:4", "sphere:1"}, "torus:128",
       {{"n", -5, 5, 1, true}, {"n2", -5, 5, 0, true}, {"n3", -5, 5, 0, true}, {"n4", -5, 5, 0, true}},
       "w1 = n on axis 1 (n2, n3, n4 on further axes)",
       "trivial line bundle with phi = exp(i sum n_a k_a)"},
      {"trivial_m", ModelTarget::chiral_bundle,
       {"torus:1", "torus:2", "torus:3", "torus:4", "sphere:1", "sphere:2", "sphere:3", "sphere:4"}, "torus:8x8x8",
       {{"m", 1, 6, 1, true}, {"N", 0, 12, 0, true}},
       "all invariants 0",
       "constant frame, phi = identity; N = 0 means N = m"},
      {"chern_line", ModelTarget::chiral_bundle, {"torus:2"}, "torus:32x32",
       {{"M", -3, 3, 1, false}, {"a", -5, 5, 0, true}, {"b", -5, 5, 0, true}},
       "c1 = +1 for 0 < M < 2, -1 for -2 < M < 0, 0 for |M| > 2; w1 = (a, b)",
       "lower band of d.s, d = (sin k1, sin k2, M + cos k1 + cos k2), phi = exp(i (a k1 + b k2))"},
      {"chiral_chern", ModelTarget::quantum_system, {"torus:2"}, "torus:24x24",
       {{"M", -3, 3, 1, false}, {"mu", 1.05, 10, 2, false}},
       "c1 of the four twin bands equals chern_line c1 at the same M",
       "H = (mu + d^.s) x t1, chirality 1 x t3, d the chern_line vector"},
      {"su2_torus", ModelTarget::chiral_bundle, {"torus:3"}, "torus:16x16x16",
       {{"M", -4, 4, 2, false}},
       "w2 = -1 for 1 < |M| < 3, +2 for |M| < 1, 0 for |M| > 3",
       "trivial rank-2 bundle, phi = d0 + i d.s, d = (M - sum cos k, sin k1, sin k2, sin k3)/|.|"},
  };
  return catalog;
}

const ModelInfo& find_model(const std::string& name) {
  for (const auto& m : list_models())
    if (m.name == name) return m;
  std::string known;
  for (const auto& m : list_models()) known += (known.empty() ? "" : ", ") + m.name;
  throw Error(ErrorKind::BadParams, "unknown model '" + name + "'; available: " + known);
}

ModelSpec make_spec(const std::string& name, const std::map<std::string, double>& params) {
  const auto& info = find_model(name);
  ModelSpec s{name, {}, info.target};
  for (const auto& [key, value] : params)
    if (std::none_of(info.params.begin(), info.params.end(), [&](const ParamRange& r) { return r.name == key; }))
      throw Error(ErrorKind::BadParams, name + ": unknown parameter '" + key + "'");
  for (const auto& r : info.params) {
    const auto it = params.find(r.name);
    const double v = it == params.end() ? r.fallback : it->second;
    if (!std::isfinite(v) || v < r.lo || v > r.hi) {
      std::ostringstream os;
      os << name << ": parameter " << r.name << " = " << v << " outside [" << r.lo << ", " << r.hi << "]";
      throw Error(ErrorKind::BadParams, os.str());
    }
    if (r.integer && v != std::round(v))
      throw Error(ErrorKind::BadParams, name + ": parameter " + r.name + " must be an integer");
    s.params[r.name] = v;
  }
  check_params(info, s);
  return s;
}

BaseGrid default_grid(const std::string& name) {
  const std::string desc = find_model(name).default_grid;
  const auto colon = desc.find(':');
  std::vector<int> shape;
  std::stringstream ss(desc.substr(colon + 1));
  std::string part;
  while (std::getline(ss, part, 'x')) shape.push_back(std::stoi(part));
  return make_grid(space_kind_from_string(desc.substr(0, colon)), static_cast<int>(shape.size()), shape);
}

ModelOutput build(const ModelSpec& spec, const BaseGrid& grid) {
  const auto& info = find_model(spec.name);
  const ModelSpec s = make_spec(spec.name, spec.params);
  const std::string base = base_of(grid);
  if (std::find(info.bases.begin(), info.bases.end(), base) == info.bases.end()) {
    std::string accepted;
    for (const auto& b : info.bases) accepted += (accepted.empty() ? "" : ", ") + b;
    throw Error(ErrorKind::BadParams, spec.name + " is defined over " + accepted + ", not " + base);
  }
  if (s.name == "ssh") return build_ssh(s, grid);
  if (s.name == "dirac_monopole") return build_monopole(grid);
  if (s.name == "su2_degree_n") return build_su2_degree(s, grid);
  if (s.name == "dirac4d") return build_dirac4d(s, grid);
  if (s.name == "suspended_hopf") return build_hopf(grid);
  if (s.name == "phi_n") return build_phi_n(s, grid);
  if (s.name == "trivial_m") return build_trivial(s, grid);
  if (s.name == "chern_line") return build_chern_line(s, grid);
  if (s.name == "chiral_chern") return build_chiral_chern(s, grid);
  return build_su2_torus(s, grid);
}

const std::vector<CMatrix>& gamma_matrices() {
  static const std::vector<CMatrix> g{
      kron(pauli(1), pauli(1)), kron(pauli(1), pauli(2)), kron(pauli(1), pauli(3)),
      kron(pauli(2), pauli(0)), kron(pauli(3), pauli(0)),
  };
  return g;
}

CMatrix su2_from_vector(const double* w) {
  return w[0] * pauli(0) + I * (w[1] * pauli(1) + w[2] * pauli(2) + w[3] * pauli(3));
}

std::vector<double> suspended_hopf_vector(const std::vector<double>& k) {
  if (k.size() != 5) throw Error(ErrorKind::DimensionMismatch, "suspended Hopf map takes a point of S^4");
  const double s = 2.0 / (1.0 + k[0] * k[0]);
  return {s * k[0], s * (k[1] * k[3] - k[2] * k[4]), s * (k[1] * k[4] + k[2] * k[3]),
          s * 0.5 * (k[1] * k[1] + k[2] * k[2] - k[3] * k[3] - k[4] * k[4])};
}

UnitaryField constant_field(const BaseGrid& grid, int n) {
  if (grid.kind() != SpaceKind::ball5) throw Error(ErrorKind::UnsupportedSpace, "unitary fields live on ball5 grids");
  return UnitaryField{grid, std::vector<CMatrix>(grid.size(), CMatrix::Identity(n, n))};
}

UnitaryField gamma_probe_field(const BaseGrid& grid, double amplitude) {
  if (grid.kind() != SpaceKind::ball5) throw Error(ErrorKind::UnsupportedSpace, "unitary fields live on ball5 grids");
  const auto& gamma = gamma_matrices();
  UnitaryField f{grid, std::vector<CMatrix>(grid.size())};
  parallel_for(grid.size(), [&](std::size_t p) {
    const auto t = grid.coordinates(p);
    double r2 = 0.0;
    CMatrix dir = CMatrix::Zero(4, 4);
    for (int a = 0; a < 5; ++a) {
      const double x = 2.0 * t[a] - 1.0;
      r2 += x * x;
      dir += x * gamma[a];
    }
    const double r = std::sqrt(r2);
    CMatrix u = std::cos(amplitude * r) * CMatrix::Identity(4, 4);
    if (r > 0.0) u += I * (std::sin(amplitude * r) / r) * dir;
    f.values[p] = u;
  });
  return f;
}

}  // namespace chiraltop

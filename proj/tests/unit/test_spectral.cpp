#include <doctest.h>

#include <cmath>
#include <random>

#include "chiraltop/spectral.hpp"
#include "checks.hpp"
#include "oracles.hpp"
#include "tuples.hpp"

using namespace chiraltop;
using chiraltop::testing::error_kind;
using chiraltop::testing::first_value;
using chiraltop::testing::system_model;
using chiraltop::testing::tuple_of;

namespace {

CMatrix pauli(int i) {
  CMatrix s = CMatrix::Zero(2, 2);
  const cplx I(0, 1);
  if (i == 1) s << 0, 1, 1, 0;
  if (i == 2) s << 0, -I, I, 0;
  if (i == 3) s << 1, 0, 0, -1;
  return s;
}

QuantumSystemField constant_system(const CMatrix& h, std::optional<CMatrix> chi, int bands, int points = 8) {
  QuantumSystemField s;
  s.grid = make_grid(SpaceKind::torus, 1, {points});
  s.dim_h = static_cast<int>(h.rows());
  s.hamiltonian.assign(s.grid.size(), h);
  if (chi) s.chi = std::vector<CMatrix>(s.grid.size(), *chi);
  s.band_count = bands;
  return s;
}

double max_diff(const ProjectorField& a, const ProjectorField& b) {
  double e = 0.0;
  for (std::size_t p = 0; p < a.size(); ++p) e = std::max(e, max_abs(a[p] - b[p]));
  return e;
}

// Smooth random chiral family on a ring: H = W [[0, Q], [Q^dag, 0]] W^dag, chi = W s3 W^dag.
QuantumSystemField random_chiral_system(int m, std::mt19937_64& rng) {
  const auto grid = make_grid(SpaceKind::torus, 1, {16});
  const CMatrix w = random_unitary(2 * m, rng);
  const CMatrix q0 = 3.0 * random_unitary(m, rng);
  const CMatrix q1 = random_unitary(m, rng);
  const CMatrix q2 = random_unitary(m, rng);
  QuantumSystemField s;
  s.grid = grid;
  s.dim_h = 2 * m;
  s.band_count = m;
  std::vector<CMatrix> chi;
  CMatrix g = CMatrix::Zero(2 * m, 2 * m);
  g.topLeftCorner(m, m).setIdentity();
  g.bottomRightCorner(m, m) = -CMatrix::Identity(m, m);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const double k = grid.coordinates(p)[0];
    const CMatrix q = q0 + std::cos(k) * q1 + 0.5 * std::sin(k) * q2;
    CMatrix h = CMatrix::Zero(2 * m, 2 * m);
    h.topRightCorner(m, m) = q;
    h.bottomLeftCorner(m, m) = q.adjoint();
    s.hamiltonian.push_back(w * h * w.adjoint());
    chi.push_back(w * g * w.adjoint());
  }
  s.chi = chi;
  return s;
}

void check_split_identities(const ChiralSplitting& s, double tol) {
  const int n = s.dim_h;
  for (std::size_t p = 0; p < s.grid.size(); ++p) {
    const CMatrix& P = s.projector[p];
    CHECK(max_abs(s.pi_plus[p] + s.pi_minus[p] - P) <= tol);
    CHECK(max_abs(s.pi_plus[p] * s.pi_plus[p] - s.pi_plus[p]) <= tol);
    CHECK(max_abs(s.pi_minus[p] * s.pi_minus[p] - s.pi_minus[p]) <= tol);
    CHECK(max_abs(s.pi_plus[p] * s.pi_minus[p]) <= tol);
    CHECK(max_abs(s.gradation[p] * s.gradation[p] - P) <= tol);
    CHECK(max_abs(s.flattened[p] * s.flattened[p] - P) <= tol);
    CHECK(max_abs(s.gradation[p] * s.flattened[p] + s.flattened[p] * s.gradation[p]) <= tol);
    CHECK(max_abs(s.flattened[p] * s.pi_plus[p] * s.flattened[p] - s.pi_minus[p]) <= tol);
    CHECK(max_abs(s.flattened[p] * s.pi_minus[p] * s.flattened[p] - s.pi_plus[p]) <= tol);
    CHECK(unitarity_residual(s.theta[p]) <= tol);
    CHECK(s.projector[p].rows() == n);
  }
}

}  // namespace

TEST_CASE("Riesz projector of SSH matches the eigenprojector") {
  const auto sys = system_model("ssh", {{"t1", 0.5}, {"t2", 1.0}}, "torus:128");
  const auto riesz = fermi_projection_riesz(sys, negative_sector_contour(sys), 64);
  CHECK(max_diff(riesz, fermi_projection_eig(sys)) <= 1e-10);
}

TEST_CASE("Riesz projector of a constant two-level system") {
  CMatrix h = CMatrix::Zero(2, 2);
  h(0, 0) = -1.0;
  h(1, 1) = 1.0;
  const auto sys = constant_system(h, std::nullopt, 1);
  const auto lower = fermi_projection_riesz(sys, Contour{{-1.0, 0.0}, 0.5}, 64);
  CMatrix expected = CMatrix::Zero(2, 2);
  expected(0, 0) = 1.0;
  for (const auto& p : lower) CHECK(max_abs(p - expected) < 1e-12);
  const auto all = fermi_projection_riesz(sys, Contour{{0.0, 0.0}, 3.0}, 64);
  for (const auto& p : all) CHECK(max_abs(p - CMatrix::Identity(2, 2)) < 1e-12);
}

TEST_CASE("clustered nodes integrate the same projector") {
  CMatrix h = CMatrix::Zero(2, 2);
  h(0, 0) = -1.0;
  h(1, 1) = 1.0;
  const auto sys = constant_system(h, std::nullopt, 1);
  CMatrix expected = CMatrix::Zero(2, 2);
  expected(0, 0) = 1.0;
  for (double alpha : {-0.3, 0.2, 0.3})  // error ~ |alpha|^64 from the pole at the centre
    for (const auto& p : fermi_projection_riesz(sys, Contour{{-1.0, 0.0}, 0.5, alpha}, 64))
      CHECK(max_abs(p - expected) < 1e-12);
  CHECK(error_kind([&] { fermi_projection_riesz(sys, Contour{{-1.0, 0.0}, 0.5, 1.0}, 64); }) == ErrorKind::BadParams);
}

TEST_CASE("window contours reach eigenprojector accuracy on a wide band") {
  // Negative sector [-7, -1] against +1: a plain circle converges only like 0.77^nodes.
  const auto sys = system_model("dirac4d", {{"M", 3.0}}, "torus:6x6x6x6");
  const auto contour = negative_sector_contour(sys);
  CHECK(std::abs(contour.alpha) > 0.0);
  CHECK(max_diff(fermi_projection_riesz(sys, contour, 64), fermi_projection_eig(sys)) <= 1e-10);
  Contour plain = contour;
  plain.alpha = 0.0;
  NumericPolicy loose;
  loose.tol_proj = 1.0;
  CHECK(max_diff(fermi_projection_riesz(sys, plain, 64, loose), fermi_projection_eig(sys)) > 1e-10);
}

TEST_CASE("Riesz projector refuses contours touching the spectrum") {
  CMatrix h = pauli(3);
  const auto sys = constant_system(h, std::nullopt, 1);
  CHECK(error_kind([&] { fermi_projection_riesz(sys, Contour{{0.0, 0.0}, 1.0}, 64); }) ==
        ErrorKind::ContourTouchesSpectrum);
}

TEST_CASE("eigenprojector of the monopole family is (1 - x.s)/2") {
  const auto sys = system_model("dirac_monopole", {}, "sphere:12x12");
  const auto proj = fermi_projection_eig(sys);
  for (std::size_t p = 0; p < sys.grid.size(); ++p) {
    const auto x = sys.grid.sphere_point(p);
    const CMatrix oracle = 0.5 * (CMatrix::Identity(2, 2) - x[0] * pauli(1) - x[1] * pauli(2) - x[2] * pauli(3));
    CHECK(max_abs(proj[p] - oracle) < 1e-12);
  }
}

TEST_CASE("lower band of SSH validates after framing") {
  const auto sys = system_model("ssh", {{"t1", 0.5}, {"t2", 1.0}}, "torus:128");
  const auto b = lower_band_bundle(sys);
  CHECK(b.rank == 1);
  CHECK(validate(b).passed);
}

TEST_CASE("eigenprojector reports a gap closing") {
  auto sys = system_model("ssh", {{"t1", 0.5}, {"t2", 1.0}}, "torus:16");
  sys.hamiltonian[5].setZero();
  CHECK(error_kind([&] { fermi_projection_eig(sys); }) == ErrorKind::GapViolation);
  CHECK(error_kind([&] { require_valid_system(sys); }) == ErrorKind::GapViolation);
}

TEST_CASE("system validation flags broken chirality") {
  auto sys = system_model("ssh", {{"t1", 0.5}, {"t2", 1.0}}, "torus:16");
  sys.hamiltonian[3] += 0.2 * pauli(3);
  const auto v = validate_system(sys);
  CHECK_FALSE(v.passed);
  CHECK(v.chiral_worst_point == 3);
  CHECK(error_kind([&] { require_valid_system(sys); }) == ErrorKind::ChiralityViolation);
}

TEST_CASE("chiral_split of SSH: the intertwiner is the phase of q") {
  const auto sys = system_model("ssh", {{"t1", 0.5}, {"t2", 1.0}}, "torus:64");
  const auto s = chiral_split(sys, family_projection_eig(sys));
  CHECK(s.rank == 1);
  for (std::size_t p = 0; p < sys.grid.size(); ++p) {
    const double k = sys.grid.coordinates(p)[0];
    const cplx q = 0.5 + 1.0 * std::polar(1.0, k);
    // Convention: Theta = Pi_+ rho Pi_- equals q/|q| in the gradation frames.
    CHECK(std::abs(s.theta[p](0, 0) - q / std::abs(q)) < 1e-12);
  }
}

TEST_CASE("chiral_split of a constant block system") {
  for (int m : {1, 2, 3}) {
    const CMatrix h = kron(pauli(3), CMatrix::Identity(m, m));
    const CMatrix chi = kron(pauli(1), CMatrix::Identity(m, m));
    const auto sys = constant_system(h, chi, m);
    const auto s = chiral_split(sys, family_projection_eig(sys));
    for (std::size_t p = 0; p < sys.grid.size(); ++p) {
      CHECK(std::lround(s.pi_plus[p].trace().real()) == m);
      CHECK(std::lround(s.pi_minus[p].trace().real()) == m);
      const bool plus = max_abs(s.theta[p] - CMatrix::Identity(m, m)) < 1e-12;
      const bool minus = max_abs(s.theta[p] + CMatrix::Identity(m, m)) < 1e-12;
      CHECK((plus || minus));
    }
  }
}

TEST_CASE("chiral_split identities hold on random chiral families") {
  std::mt19937_64 rng(29);
  for (int m : {1, 2, 3}) {
    const auto sys = random_chiral_system(m, rng);
    require_valid_system(sys);
    check_split_identities(chiral_split(sys, family_projection_eig(sys)), 1e-10);
    check_split_identities(chiral_split(sys, fermi_projection_riesz(sys, family_contour(sys), 64)), 1e-10);
  }
}

TEST_CASE("chiral_split identities hold on the zoo systems") {
  for (const auto& sys : {system_model("ssh", {{"t1", 1.0}, {"t2", 0.5}}, "torus:128"),
                          system_model("chiral_chern", {{"M", -1.0}}, "torus:24x24")})
    check_split_identities(chiral_split(sys, family_projection_eig(sys)), 1e-10);
}

TEST_CASE("chiral_split rejects a family without chiral balance") {
  const auto sys = system_model("ssh", {{"t1", 0.5}, {"t2", 1.0}}, "torus:16");
  CHECK(error_kind([&] { chiral_split(sys, fermi_projection_eig(sys)); }) == ErrorKind::AsymmetricFamily);
}

TEST_CASE("both frame constructions agree up to gauge") {
  const auto sys = system_model("chiral_chern", {{"M", 1.0}}, "torus:24x24");
  const auto family = family_projection_eig(sys);
  const auto a = chiral_split(sys, family, FrameMethod::gradation_eigen);
  const auto b = chiral_split(sys, family, FrameMethod::energy_basis);
  for (std::size_t p = 0; p < sys.grid.size(); ++p) {
    CHECK(max_abs(a.frame_minus[p] * a.frame_minus[p].adjoint() - b.frame_minus[p] * b.frame_minus[p].adjoint()) < 1e-10);
    CHECK(max_abs(a.frame_plus[p] * a.frame_plus[p].adjoint() - b.frame_plus[p] * b.frame_plus[p].adjoint()) < 1e-10);
  }
  CHECK(tuple_of(assemble_chiral_bundle(a)) == tuple_of(assemble_chiral_bundle(b)));
}

TEST_CASE("assemble with the intertwiner as reference trivializes phi") {
  for (const auto& sys : {system_model("ssh", {{"t1", 0.5}, {"t2", 1.0}}, "torus:128"),
                          system_model("chiral_chern", {{"M", 1.0}}, "torus:24x24")}) {
    HRef self;
    self.mode = HRef::Mode::self;
    const auto b = assemble_chiral_bundle(chiral_split(sys, family_projection_eig(sys)), self);
    CHECK(b.metadata.at("h_ref") == "self");
    for (const auto& f : b.phi) CHECK(max_abs(f - CMatrix::Identity(b.rank, b.rank)) < 1e-10);
    const auto t = tuple_of(b);
    for (const auto& [name, values] : t)
      if (name[0] == 'w')
        for (long v : values) CHECK(v == 0);
  }
}

TEST_CASE("SSH winding with the default reference") {
  auto w = [](double t1, double t2) {
    const auto sys = system_model("ssh", {{"t1", t1}, {"t2", t2}}, "torus:128");
    const auto b = assemble_chiral_bundle(chiral_split(sys, family_projection_eig(sys)));
    CHECK(b.metadata.at("h_ref") == "identity_in_frames");
    return first_value(b, "w1", 1);
  };
  // Oracle: winding of t1 + t2 exp(ik) about the origin.
  CHECK(w(0.5, 1.0) == 1);
  CHECK(w(1.0, 0.5) == 0);
  CHECK(w(-0.5, 1.0) == 1);
  CHECK(w(0.2, -0.9) == 1);
}

TEST_CASE("reference fields related by a null-homotopic automorphism give equal tuples") {
  const auto sys = system_model("ssh", {{"t1", 0.5}, {"t2", 1.0}}, "torus:128");
  const auto split = chiral_split(sys, family_projection_eig(sys));
  HRef h;
  h.mode = HRef::Mode::supplied;
  for (std::size_t p = 0; p < sys.grid.size(); ++p) {
    const double k = sys.grid.coordinates(p)[0];
    h.field.push_back(CMatrix::Constant(1, 1, std::polar(1.0, 0.8 * std::sin(k) + 0.3)));
  }
  CHECK(tuple_of(assemble_chiral_bundle(split, h)) == tuple_of(assemble_chiral_bundle(split)));
}

TEST_CASE("twin-band check on the 2D chiral model") {
  for (double mass : {1.0, -1.0, 2.5}) {
    const auto sys = system_model("chiral_chern", {{"M", mass}}, "torus:24x24");
    const auto r = twin_band_check(chiral_split(sys, family_projection_eig(sys)));
    CHECK(r.passed);
    REQUIRE(r.c1.size() == 4);
    for (const auto& list : r.c1) CHECK(list == r.c1[0]);
    const long expected = mass == 1.0 ? 1 : mass == -1.0 ? -1 : 0;
    CHECK(r.c1[0] == std::vector<long>{expected});
  }
}

TEST_CASE("twin-band check on a constant system is all zero") {
  const auto sys = [] {
    QuantumSystemField s;
    s.grid = make_grid(SpaceKind::torus, 2, {6, 6});
    s.dim_h = 2;
    s.band_count = 1;
    s.hamiltonian.assign(s.grid.size(), pauli(1));
    s.chi = std::vector<CMatrix>(s.grid.size(), pauli(3));
    return s;
  }();
  const auto r = twin_band_check(chiral_split(sys, family_projection_eig(sys)));
  CHECK(r.passed);
  for (const auto& list : r.c1)
    for (long v : list) CHECK(v == 0);
}

TEST_CASE("twin-band check on a chiral four-band sphere model") {
  // H = (2 + x.s) x t1 with chirality 1 x t3; the bands at +-1 carry the monopole charge.
  QuantumSystemField s;
  s.grid = make_grid(SpaceKind::sphere, 2, {24, 24});
  s.dim_h = 4;
  s.band_count = 1;
  std::vector<CMatrix> chi;
  for (std::size_t p = 0; p < s.grid.size(); ++p) {
    const auto x = s.grid.sphere_point(p);
    const CMatrix d = 2.0 * CMatrix::Identity(2, 2) + x[0] * pauli(1) + x[1] * pauli(2) + x[2] * pauli(3);
    s.hamiltonian.push_back(kron(d, pauli(1)));
    chi.push_back(kron(CMatrix::Identity(2, 2), pauli(3)));
  }
  s.chi = chi;
  require_valid_system(s);
  const auto r = twin_band_check(chiral_split(s, family_projection_eig(s)));
  CHECK(r.passed);
  REQUIRE(r.c1.size() == 4);
  for (const auto& list : r.c1) CHECK(list == r.c1[0]);
  CHECK(r.c1[0].size() == 1);
  CHECK(r.c1[0][0] != 0);
}

TEST_CASE("chiral zoo systems have symmetric spectra") {
  for (const auto& sys : {system_model("ssh", {{"t1", 0.5}, {"t2", 1.0}}, "torus:128"),
                          system_model("chiral_chern", {{"M", 1.0}}, "torus:24x24")}) {
    const auto v = validate_system(sys);
    CHECK(v.passed);
    CHECK(v.spectrum_asymmetry < 1e-10);
  }
}

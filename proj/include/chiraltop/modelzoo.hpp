#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "chiraltop/basespace.hpp"
#include "chiraltop/chiralbundle.hpp"
#include "chiraltop/invariants.hpp"
#include "chiraltop/spectral.hpp"

namespace chiraltop {

enum class ModelTarget { quantum_system, chiral_bundle, s4_map };

const char* to_string(ModelTarget target);

struct ModelSpec {
  std::string name;
  std::map<std::string, double> params;
  ModelTarget target = ModelTarget::quantum_system;
};

struct ParamRange {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
  double fallback = 0.0;
  bool integer = false;
};

struct ModelInfo {
  std::string name;
  ModelTarget target;
  std::vector<std::string> bases;  // accepted "kind:dim" strings
  std::string default_grid;
  std::vector<ParamRange> params;
  std::string realizes;
  std::string description;
};

const std::vector<ModelInfo>& list_models();
// Throws BadParams naming the known models.
const ModelInfo& find_model(const std::string& name);

// Fills defaults and the target, and checks ranges and model-specific constraints.
ModelSpec make_spec(const std::string& name, const std::map<std::string, double>& params = {});

using ModelOutput = std::variant<QuantumSystemField, ChiralBundleData, SphereMap>;

ModelOutput build(const ModelSpec& spec, const BaseGrid& grid);

// Grid in the model's default shape.
BaseGrid default_grid(const std::string& name);

// Five anticommuting 4 x 4 hermitian matrices: s1 x s1, s1 x s2, s1 x s3, s2 x 1, s3 x 1.
const std::vector<CMatrix>& gamma_matrices();

// w0 + i (w1 s1 + w2 s2 + w3 s3) for a unit 4-vector.
CMatrix su2_from_vector(const double* w);

// Values of the suspended Hopf map at a point k of S^4 (five components).
std::vector<double> suspended_hopf_vector(const std::vector<double>& k);

// Ball5 fields used for the degree-5 integrals. All are unitary at every node.
UnitaryField constant_field(const BaseGrid& grid, int n);
// exp(i a p.Gamma) with p = 2t - 1; smooth, not constant on the boundary.
UnitaryField gamma_probe_field(const BaseGrid& grid, double amplitude);

}  // namespace chiraltop

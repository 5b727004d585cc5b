#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chiraltop/basespace.hpp"
#include "chiraltop/chiralbundle.hpp"
#include "chiraltop/classify.hpp"
#include "chiraltop/invariants.hpp"
#include "chiraltop/modelzoo.hpp"
#include "chiraltop/spectral.hpp"

namespace chiraltop {

// "torus:24x24", "sphere:30x30x30", "ball5:6x6x6x6x6"; a bare shape such as "128" or
// "24x24" takes `fallback` as its kind (torus when absent).
BaseGrid parse_grid(const std::string& text, std::optional<SpaceKind> fallback = std::nullopt);

// Structured-text documents with sorted keys. Complex entries are [re, im] pairs in
// row-major order; doubles are written in shortest round-trip form.
std::string dump_system(const QuantumSystemField& sys);          // .cqs
QuantumSystemField load_system(const std::string& text);
std::string dump_bundle(const ChiralBundleData& b);              // .cbd
ChiralBundleData load_bundle(const std::string& text);
std::string dump_sphere_map(const SphereMap& f);                 // .s4m
SphereMap load_sphere_map(const std::string& text);
std::string dump_unitary_field(const UnitaryField& f);           // .d5m
UnitaryField load_unitary_field(const std::string& text);
// Per-node m x m reference isomorphisms for the split command.
std::string dump_href(const BaseGrid& grid, const std::vector<CMatrix>& field);
std::vector<CMatrix> load_href(const std::string& text, const BaseGrid& grid);

std::string report_json(const InvariantReport& r);
std::string policy_json(const NumericPolicy& policy);
std::string catalog_json();
std::string group_json(const AbelianGroup& g);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace chiraltop

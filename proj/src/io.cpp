#include "chiraltop/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "chiraltop/error.hpp"

namespace chiraltop {

namespace {

using json = nlohmann::json;

constexpr int kVersion = 1;

json matrix_json(const CMatrix& a) {
  json out = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.push_back({a(i, j).real(), a(i, j).imag()});
  return out;
}

CMatrix matrix_from(const json& j, int rows, int cols, const char* what) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(rows) * cols)
    throw Error(ErrorKind::Format, std::string(what) + ": expected " + std::to_string(rows * cols) + " entries");
  CMatrix a(rows, cols);
  std::size_t k = 0;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c, ++k) {
      const json& e = j[k];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw Error(ErrorKind::Format, std::string(what) + ": entries must be [re, im] pairs");
      a(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
    }
  return a;
}

json field_json(const std::vector<CMatrix>& values) {
  json out = json::array();
  for (const auto& v : values) out.push_back(matrix_json(v));
  return out;
}

std::vector<CMatrix> field_from(const json& j, std::size_t count, int rows, int cols, const char* what) {
  if (!j.is_array() || j.size() != count)
    throw Error(ErrorKind::Format, std::string(what) + ": expected " + std::to_string(count) + " matrices");
  std::vector<CMatrix> out;
  out.reserve(count);
  for (const auto& e : j) out.push_back(matrix_from(e, rows, cols, what));
  return out;
}

json parse_document(const std::string& text, const char* format) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Format, std::string("malformed document: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::Format, "document must be an object");
  if (doc.value("format", "") != format)
    throw Error(ErrorKind::Format, std::string("expected a ") + format + " document");
  if (doc.value("version", 0) != kVersion) throw Error(ErrorKind::Format, "unsupported document version");
  return doc;
}

template <class T>
T required(const json& doc, const char* key) {
  if (!doc.contains(key)) throw Error(ErrorKind::Format, std::string("missing field '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::Format, std::string("field '") + key + "' has the wrong type");
  }
}

const json& member(const json& doc, const char* key) {
  if (!doc.contains(key)) throw Error(ErrorKind::Format, std::string("missing field '") + key + "'");
  return doc.at(key);
}

json header(const char* format, const BaseGrid& grid) {
  return json{{"format", format}, {"version", kVersion}, {"base", grid.describe()}};
}

json invariant_json(const ReportEntry& e) {
  if (e.value && e.value->resolved) return e.value->value;
  return "Unresolved";
}

}  // namespace

BaseGrid parse_grid(const std::string& text, std::optional<SpaceKind> fallback) {
  std::string kind_part, shape_part = text;
  const auto colon = text.find(':');
  SpaceKind kind = fallback.value_or(SpaceKind::torus);
  if (colon != std::string::npos) {
    kind = space_kind_from_string(text.substr(0, colon));
    shape_part = text.substr(colon + 1);
  }
  std::vector<int> shape;
  std::stringstream ss(shape_part);
  std::string piece;
  while (std::getline(ss, piece, 'x')) {
    std::size_t used = 0;
    int n = 0;
    try {
      n = std::stoi(piece, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (piece.empty() || used != piece.size())
      throw Error(ErrorKind::UnsupportedSpace, "cannot read grid descriptor '" + text + "'");
    shape.push_back(n);
  }
  if (shape.empty()) throw Error(ErrorKind::UnsupportedSpace, "cannot read grid descriptor '" + text + "'");
  return make_grid(kind, static_cast<int>(shape.size()), shape);
}

std::string dump_system(const QuantumSystemField& sys) {
  json doc = header("cqs", sys.grid);
  doc["N"] = sys.dim_h;
  doc["band_count"] = sys.band_count;
  doc["H"] = field_json(sys.hamiltonian);
  doc["chi"] = sys.chi ? field_json(*sys.chi) : json(nullptr);
  return doc.dump();
}

QuantumSystemField load_system(const std::string& text) {
  const json doc = parse_document(text, "cqs");
  QuantumSystemField sys;
  sys.grid = parse_grid(required<std::string>(doc, "base"));
  sys.dim_h = required<int>(doc, "N");
  sys.band_count = required<int>(doc, "band_count");
  if (sys.dim_h < 1) throw Error(ErrorKind::Format, "N must be positive");
  sys.hamiltonian = field_from(member(doc, "H"), sys.grid.size(), sys.dim_h, sys.dim_h, "H");
  if (doc.contains("chi") && !doc.at("chi").is_null())
    sys.chi = field_from(member(doc, "chi"), sys.grid.size(), sys.dim_h, sys.dim_h, "chi");
  return sys;
}

std::string dump_bundle(const ChiralBundleData& b) {
  json doc = header("cbd", b.grid);
  doc["N"] = b.ambient_dim;
  doc["m"] = b.rank;
  doc["V"] = field_json(b.frame);
  doc["phi"] = field_json(b.phi);
  doc["metadata"] = b.metadata;
  return doc.dump();
}

ChiralBundleData load_bundle(const std::string& text) {
  const json doc = parse_document(text, "cbd");
  ChiralBundleData b;
  b.grid = parse_grid(required<std::string>(doc, "base"));
  b.ambient_dim = required<int>(doc, "N");
  b.rank = required<int>(doc, "m");
  if (b.rank < 1 || b.rank > b.ambient_dim) throw Error(ErrorKind::Format, "rank must lie in 1..N");
  b.frame = field_from(member(doc, "V"), b.grid.size(), b.ambient_dim, b.rank, "V");
  b.phi = field_from(member(doc, "phi"), b.grid.size(), b.rank, b.rank, "phi");
  if (doc.contains("metadata")) b.metadata = required<std::map<std::string, std::string>>(doc, "metadata");
  return b;
}

std::string dump_sphere_map(const SphereMap& f) {
  json doc = header("s4m", f.grid);
  doc["n"] = f.values.empty() ? 0 : static_cast<int>(f.values.front().rows());
  doc["values"] = field_json(f.values);
  return doc.dump();
}

SphereMap load_sphere_map(const std::string& text) {
  const json doc = parse_document(text, "s4m");
  SphereMap f;
  f.grid = parse_grid(required<std::string>(doc, "base"));
  const int n = required<int>(doc, "n");
  std::size_t count = 0;
  if (f.grid.kind() == SpaceKind::ball5) count = f.grid.boundary_points().size();
  else if (f.grid.kind() == SpaceKind::sphere && f.grid.dim() == 4) count = f.grid.size();
  else throw Error(ErrorKind::Format, "an S^4 map lives on a ball5 boundary or a 4-sphere grid");
  f.values = field_from(member(doc, "values"), count, n, n, "values");
  return f;
}

std::string dump_unitary_field(const UnitaryField& f) {
  json doc = header("d5m", f.grid);
  doc["n"] = f.values.empty() ? 0 : static_cast<int>(f.values.front().rows());
  doc["values"] = field_json(f.values);
  return doc.dump();
}

UnitaryField load_unitary_field(const std::string& text) {
  const json doc = parse_document(text, "d5m");
  UnitaryField f;
  f.grid = parse_grid(required<std::string>(doc, "base"));
  if (f.grid.kind() != SpaceKind::ball5) throw Error(ErrorKind::Format, "a D^5 field lives on a ball5 grid");
  const int n = required<int>(doc, "n");
  f.values = field_from(member(doc, "values"), f.grid.size(), n, n, "values");
  return f;
}

std::string dump_href(const BaseGrid& grid, const std::vector<CMatrix>& field) {
  json doc = header("href", grid);
  doc["m"] = field.empty() ? 0 : static_cast<int>(field.front().rows());
  doc["values"] = field_json(field);
  return doc.dump();
}

std::vector<CMatrix> load_href(const std::string& text, const BaseGrid& grid) {
  const json doc = parse_document(text, "href");
  if (!(parse_grid(required<std::string>(doc, "base")) == grid))
    throw Error(ErrorKind::DimensionMismatch, "reference field lives on a different grid");
  const int m = required<int>(doc, "m");
  return field_from(member(doc, "values"), grid.size(), m, m, "values");
}

std::string policy_json(const NumericPolicy& policy) {
  json out = json::object();
  for (const auto& [k, v] : policy.entries()) out[k] = v;
  return out.dump();
}

std::string report_json(const InvariantReport& r) {
  json doc = json::object();
  json cycles = json::object(), raw = json::object(), residuals = json::object(), margins = json::object();
  json unresolved = json::array();
  for (const auto& [name, entries] : r.classes) {
    json values = json::array(), cyc = json::array(), rw = json::array(), res = json::array(), mg = json::array();
    for (const auto& e : entries) {
      values.push_back(invariant_json(e));
      cyc.push_back(e.cycle);
      rw.push_back(e.value ? json(e.value->raw) : json(nullptr));
      res.push_back(e.value ? json(e.value->residual) : json(nullptr));
      mg.push_back(e.value ? json(e.value->margin) : json(nullptr));
      if (!e.value || !e.value->resolved) unresolved.push_back({{"class", name}, {"cycle", e.cycle}, {"reason", e.reason}});
    }
    doc[name] = values;
    cycles[name] = cyc;
    raw[name] = rw;
    residuals[name] = res;
    margins[name] = mg;
  }
  doc["base"] = r.grid.describe();
  doc["rank"] = r.rank;
  doc["cycles"] = cycles;
  doc["raw"] = raw;
  doc["residuals"] = residuals;
  doc["margins"] = margins;
  doc["unresolved"] = unresolved;
  doc["h_ref"] = r.h_ref;
  doc["policy"] = json::parse(policy_json(r.policy));
  if (r.z2) doc["z2"] = *r.z2;
  if (r.cs5) doc["cs5"] = *r.cs5;
  return doc.dump(2);
}

std::string catalog_json() {
  json models = json::array();
  for (const auto& m : list_models()) {
    json params = json::array();
    for (const auto& p : m.params)
      params.push_back({{"name", p.name}, {"min", p.lo}, {"max", p.hi}, {"default", p.fallback}, {"integer", p.integer}});
    models.push_back({{"name", m.name},
                      {"target", to_string(m.target)},
                      {"bases", m.bases},
                      {"default_grid", m.default_grid},
                      {"params", params},
                      {"realizes", m.realizes},
                      {"description", m.description}});
  }
  return json{{"models", models}}.dump(2);
}

std::string group_json(const AbelianGroup& g) {
  return json{{"free_rank", g.free_rank}, {"torsion", g.torsion}, {"labels", g.labels}, {"text", g.to_string()}}.dump();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Format, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Format, "cannot write '" + path + "'");
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
  if (!out) throw Error(ErrorKind::Format, "failed writing '" + path + "'");
}

}  // namespace chiraltop

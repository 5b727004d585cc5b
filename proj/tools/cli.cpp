#include "cli.hpp"

#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "chiraltop/classify.hpp"
#include "chiraltop/io.hpp"
#include "chiraltop/modelzoo.hpp"
#include "chiraltop/parallel.hpp"
#include "chiraltop/spectral.hpp"

namespace chiraltop::cli {

namespace {

using json = nlohmann::json;

// Usage problems detected after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, sep))
    if (!piece.empty()) out.push_back(piece);
  return out;
}

double parse_number(const std::string& text, const std::string& key) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (text.empty() || used != text.size())
    throw Error(ErrorKind::BadParams, "value '" + text + "' for '" + key + "' is not a number");
  return v;
}

// "a=1,b=2" -> {a: 1, b: 2}
std::map<std::string, double> parse_assignments(const std::string& text) {
  std::map<std::string, double> out;
  for (const auto& item : split_list(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw Error(ErrorKind::BadParams, "expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    out[key] = parse_number(item.substr(eq + 1), key);
  }
  return out;
}

NumericPolicy make_policy(const std::string& overrides) {
  NumericPolicy policy;
  for (const auto& [k, v] : parse_assignments(overrides)) policy.set(k, v);
  return policy;
}

std::vector<int> parse_offset(const std::string& text) {
  std::vector<int> out;
  for (const auto& piece : split_list(text, ',')) {
    const double v = parse_number(piece, "offset");
    if (v != static_cast<int>(v)) throw Error(ErrorKind::BadParams, "offsets must be integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

struct Options {
  std::string policy;
  int threads = 0;

  // classify / homotopy
  std::string space = "sphere";
  int dim = 0;
  int rank = 0;
  std::string rank_text;
  int degree = 0;
  bool classifying = false;
  bool as_json = false;

  // model
  std::string name;
  std::string params;
  std::string grid;
  std::string emit;

  // split
  std::string input;
  std::string output;
  std::string href = "identity";
  std::string href_file;
  std::string projector = "riesz";
  int nodes = 64;
  std::string frames = "gradation";
  bool lower_band = false;
  std::string theta_out;

  // invariants
  std::string cycles;
  std::string report;
  std::string offset;

  // z2 / winding5 / field
  std::string f_path;
  std::string F_path;
  std::string kind = "constant";
  std::string boundary_out;
  double amplitude = 0.5;
};

int cmd_classify(const Options& o, std::ostream& out) {
  const auto g = classify_space(space_kind_from_string(o.space), o.dim, o.rank);
  out << (o.as_json ? group_json(g) : g.to_string()) << '\n';
  return ExitCode::ok;
}

int cmd_homotopy(const Options& o, std::ostream& out) {
  std::optional<int> rank;
  if (o.rank_text != "inf") {
    const double v = parse_number(o.rank_text, "rank");
    if (v != static_cast<int>(v) || v < 1) throw Error(ErrorKind::BadParams, "rank must be a positive integer or 'inf'");
    rank = static_cast<int>(v);
  }
  const auto g = o.classifying ? pi_classifying(rank, o.degree) : pi_unitary(rank, o.degree);
  out << (o.as_json ? group_json(g) : g.to_string()) << '\n';
  return ExitCode::ok;
}

int cmd_models(std::ostream& out) {
  out << catalog_json() << '\n';
  return ExitCode::ok;
}

int cmd_model(const Options& o, std::ostream& out) {
  const auto& info = find_model(o.name);
  const auto spec = make_spec(o.name, parse_assignments(o.params));
  BaseGrid grid;
  if (o.grid.empty()) {
    grid = default_grid(o.name);
  } else {
    const auto colon = info.bases.front().find(':');
    grid = parse_grid(o.grid, space_kind_from_string(info.bases.front().substr(0, colon)));
  }
  const auto built = build(spec, grid);
  std::string text;
  if (const auto* sys = std::get_if<QuantumSystemField>(&built)) text = dump_system(*sys);
  else if (const auto* b = std::get_if<ChiralBundleData>(&built)) text = dump_bundle(*b);
  else text = dump_sphere_map(std::get<SphereMap>(built));
  write_text_file(o.emit, text);
  out << "wrote " << to_string(info.target) << " '" << o.name << "' on " << grid.describe() << " to " << o.emit << '\n';
  return ExitCode::ok;
}

int cmd_split(const Options& o, const NumericPolicy& policy, std::ostream& out) {
  const auto sys = load_system(read_text_file(o.input));
  ChiralBundleData b;
  if (o.lower_band) {
    b = lower_band_bundle(sys, policy);
  } else {
    if (!sys.chi)
      throw Error(ErrorKind::ChiralityViolation, "the system has no chirality operator; use --lower-band for its negative bands");
    require_valid_system(sys, policy);
    ProjectorField family;
    if (o.projector == "riesz") family = fermi_projection_riesz(sys, family_contour(sys, policy), o.nodes, policy);
    else family = family_projection_eig(sys, policy);
    const auto method = o.frames == "energy" ? FrameMethod::energy_basis : FrameMethod::gradation_eigen;
    const auto split = chiral_split(sys, family, method, policy);
    HRef h;
    if (o.href == "self") {
      h.mode = HRef::Mode::self;
    } else if (o.href == "file") {
      if (o.href_file.empty()) throw UsageError("--href file needs --href-file PATH");
      h.mode = HRef::Mode::supplied;
      h.field = load_href(read_text_file(o.href_file), sys.grid);
      h.provenance = o.href_file;
    }
    if (!o.theta_out.empty()) write_text_file(o.theta_out, dump_href(sys.grid, split.theta));
    b = assemble_chiral_bundle(split, h, policy);
  }
  write_text_file(o.output, dump_bundle(b));
  out << "wrote rank " << b.rank << " bundle on " << b.grid.describe() << " (h_ref " << b.metadata["h_ref"] << ") to "
      << o.output << '\n';
  return ExitCode::ok;
}

int cmd_invariants(const Options& o, const NumericPolicy& policy, std::ostream& out) {
  const auto b = load_bundle(read_text_file(o.input));
  require_valid(b, policy);
  const auto report = compute_report(b, split_list(o.cycles, ','), policy, parse_offset(o.offset));
  const auto full = json::parse(report_json(report));
  json summary = json::object();
  for (const auto& [name, entries] : report.classes) summary[name] = full.at(name);
  if (!o.report.empty()) write_text_file(o.report, report_json(report));
  out << summary.dump() << '\n';
  return report.has_unresolved() ? ExitCode::unresolved : ExitCode::ok;
}

int cmd_z2(const Options& o, const NumericPolicy& policy, std::ostream& out) {
  if (o.F_path.empty())
    throw UsageError(
        "z2 needs an extension F of the map over D^5 (pass --F FILE.d5m); no extension is constructed "
        "automatically, it must be supplied");
  const auto f = load_sphere_map(read_text_file(o.f_path));
  const auto F = load_unitary_field(read_text_file(o.F_path));
  const auto r = z2_witten(f, F, policy);
  out << json{{"z2", r.sign}, {"cs5", r.cs5}, {"residual", r.residual}}.dump() << '\n';
  return ExitCode::ok;
}

int cmd_winding5(const Options& o, const NumericPolicy& policy, std::ostream& out) {
  const auto F = load_unitary_field(read_text_file(o.F_path));
  out << json{{"cs5", winding5(F, nullptr, policy)}}.dump() << '\n';
  return ExitCode::ok;
}

int cmd_field(const Options& o, std::ostream& out) {
  const auto grid = parse_grid(o.grid, SpaceKind::ball5);
  if (grid.kind() != SpaceKind::ball5) throw UsageError("fields live on ball5 grids");
  UnitaryField F;
  if (o.kind == "constant") F = constant_field(grid, 3);
  else if (o.kind == "probe") F = gamma_probe_field(grid, o.amplitude);
  else throw UsageError("unknown field kind '" + o.kind + "'");
  write_text_file(o.emit, dump_unitary_field(F));
  if (!o.boundary_out.empty()) {
    if (o.kind != "constant") throw UsageError("--boundary is only available for the constant field");
    SphereMap f{grid, std::vector<CMatrix>(grid.boundary_points().size(), CMatrix::Identity(2, 2))};
    write_text_file(o.boundary_out, dump_sphere_map(f));
  }
  out << "wrote " << o.kind << " field on " << grid.describe() << " to " << o.emit << '\n';
  return ExitCode::ok;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnsupportedSpace:
      return ExitCode::usage;
    case ErrorKind::OutsideProvedRange:
    case ErrorKind::OutsideTabulatedRange:
    case ErrorKind::DegreeOutOfRange:
    case ErrorKind::OutOfRange:
      return ExitCode::range;
    case ErrorKind::BadParams:
      return ExitCode::params;
    case ErrorKind::Unresolved:
    case ErrorKind::IncompleteReport:
    case ErrorKind::NotFramable:
    case ErrorKind::BranchCut:
    case ErrorKind::BranchMarginal:
    case ErrorKind::StepMarginal:
      return ExitCode::unresolved;
    case ErrorKind::BoundaryMismatch:
      return ExitCode::boundary;
    default:
      return ExitCode::validation;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Topological invariants of chiral quantum systems", "chiraltop"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--policy", o.policy, "numeric policy overrides, key=value,...");
  app.add_option("--threads", o.threads, "worker threads (default: CHIRALTOP_THREADS or all cores)")->check(CLI::NonNegativeNumber);

  auto* classify = app.add_subcommand("classify", "classification group of chiral bundles over S^d or T^d");
  classify->add_option("--space", o.space, "sphere or torus")->check(CLI::IsMember({"sphere", "torus"}));
  classify->add_option("--dim", o.dim, "base dimension")->required();
  classify->add_option("--rank", o.rank, "bundle rank")->required();
  classify->add_flag("--json", o.as_json, "print the group as JSON");

  auto* homotopy = app.add_subcommand("homotopy", "homotopy groups of U(m) or of the classifying space");
  homotopy->add_option("--rank", o.rank_text, "rank m or 'inf'")->required();
  homotopy->add_option("--degree", o.degree, "homotopy degree k")->required();
  homotopy->add_flag("--classifying", o.classifying, "classifying space instead of U(m)");
  homotopy->add_flag("--json", o.as_json, "print the group as JSON");

  auto* models = app.add_subcommand("models", "print the model catalog as JSON");

  auto* model = app.add_subcommand("model", "build a catalog model and write it to a file");
  model->add_option("--name", o.name, "model name")->required();
  model->add_option("--params", o.params, "parameters, key=value,...");
  model->add_option("--grid", o.grid, "grid such as 128, 24x24 or sphere:30x30 (default: the model's grid)");
  model->add_option("--emit", o.emit, "output path")->required();

  auto* split = app.add_subcommand("split", "turn a chiral system (.cqs) into a chiral bundle (.cbd)");
  split->add_option("--input", o.input, ".cqs input")->required();
  split->add_option("--output", o.output, ".cbd output")->required();
  split->add_option("--href", o.href, "reference isomorphism: identity, self or file")
      ->check(CLI::IsMember({"identity", "self", "file"}));
  split->add_option("--href-file", o.href_file, "reference field for --href file");
  split->add_option("--projector", o.projector, "riesz or eig")->check(CLI::IsMember({"riesz", "eig"}));
  split->add_option("--nodes", o.nodes, "quadrature nodes for the riesz projector")->check(CLI::Range(4, 1 << 16));
  split->add_option("--frames", o.frames, "gradation or energy")->check(CLI::IsMember({"gradation", "energy"}));
  split->add_flag("--lower-band", o.lower_band, "bundle of the negative bands with phi = 1 (no chirality needed)");
  split->add_option("--theta-out", o.theta_out, "also write the intertwiner field as a reference file");

  auto* invariants = app.add_subcommand("invariants", "evaluate the invariant tuple of a bundle (.cbd)");
  invariants->add_option("--input", o.input, ".cbd input")->required();
  invariants->add_option("--cycles", o.cycles, "subset of w1,c1,w2,c2 (default: all)");
  invariants->add_option("--report", o.report, "write the full JSON report here");
  invariants->add_option("--offset", o.offset, "transverse offset of torus cycles, i1,i2,...");

  auto* z2 = app.add_subcommand("z2", "Z/2 invariant of an S^4 map from a supplied D^5 extension");
  z2->add_option("--f", o.f_path, ".s4m map")->required();
  z2->add_option("--F", o.F_path, ".d5m extension");

  auto* w5 = app.add_subcommand("winding5", "raw degree-5 winding integral of a D^5 field");
  w5->add_option("--F", o.F_path, ".d5m field")->required();

  auto* field = app.add_subcommand("field", "write a test field on a ball5 grid");
  field->add_option("--kind", o.kind, "constant (SU(3) identity) or probe (smooth U(4) field)")
      ->check(CLI::IsMember({"constant", "probe"}));
  field->add_option("--grid", o.grid, "ball5 grid such as 6x6x6x6x6")->required();
  field->add_option("--emit", o.emit, "output path")->required();
  field->add_option("--boundary", o.boundary_out, "also write the matching constant S^4 map");
  field->add_option("--amplitude", o.amplitude, "probe field amplitude");

  std::vector<const char*> argv{"chiraltop"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ExitCode::ok : ExitCode::usage;
  }

  try {
    if (o.threads > 0) set_worker_count(o.threads);
    const NumericPolicy policy = make_policy(o.policy);
    if (*classify) return cmd_classify(o, out);
    if (*homotopy) return cmd_homotopy(o, out);
    if (*models) return cmd_models(out);
    if (*model) return cmd_model(o, out);
    if (*split) return cmd_split(o, policy, out);
    if (*invariants) return cmd_invariants(o, policy, out);
    if (*z2) return cmd_z2(o, policy, out);
    if (*w5) return cmd_winding5(o, policy, out);
    if (*field) return cmd_field(o, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return ExitCode::usage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return ExitCode::internal;
  }
  return ExitCode::usage;
}

}  // namespace chiraltop::cli

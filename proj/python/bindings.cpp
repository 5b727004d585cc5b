#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "chiraltop/classify.hpp"
#include "chiraltop/error.hpp"
#include "chiraltop/io.hpp"
#include "chiraltop/modelzoo.hpp"
#include "chiraltop/spectral.hpp"

namespace py = pybind11;
using namespace chiraltop;

namespace {

NumericPolicy policy_from(const std::map<std::string, double>& overrides) {
  NumericPolicy p;
  for (const auto& [k, v] : overrides) p.set(k, v);
  return p;
}

py::object json_loads(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Invariants and classification of chiral vector bundles";

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
  error_type.call_once_and_store_result([&] { return py::object(py::exception<Error>(m, "ChiraltopError")); });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const py::object& type = error_type.get_stored();
      py::object exc = type(e.what());
      exc.attr("kind") = to_string(e.kind());
      PyErr_SetObject(type.ptr(), exc.ptr());
    }
  });

  py::class_<BaseGrid>(m, "Grid")
      .def(py::init([](const std::string& descriptor) { return parse_grid(descriptor); }), py::arg("descriptor"))
      .def_property_readonly("kind", [](const BaseGrid& g) { return std::string(to_string(g.kind())); })
      .def_property_readonly("dim", &BaseGrid::dim)
      .def_property_readonly("shape", &BaseGrid::shape)
      .def_property_readonly("size", &BaseGrid::size)
      .def("__eq__", &BaseGrid::operator==)
      .def("__repr__", &BaseGrid::describe);

  py::class_<AbelianGroup>(m, "AbelianGroup")
      .def_readonly("free_rank", &AbelianGroup::free_rank)
      .def_readonly("torsion", &AbelianGroup::torsion)
      .def_readonly("labels", &AbelianGroup::labels)
      .def("__eq__", &AbelianGroup::operator==)
      .def("__str__", &AbelianGroup::to_string)
      .def("__repr__", [](const AbelianGroup& g) { return "AbelianGroup(" + g.to_string() + ")"; });

  m.def("classify_space",
        [](const std::string& kind, int d, int rank) { return classify_space(space_kind_from_string(kind), d, rank); },
        py::arg("kind"), py::arg("dim"), py::arg("rank"));
  m.def("pi_unitary", &pi_unitary, py::arg("rank"), py::arg("degree"), "rank None means U(infinity)");
  m.def("pi_classifying", &pi_classifying, py::arg("rank"), py::arg("degree"));

  py::class_<QuantumSystemField>(m, "QuantumSystem")
      .def_readonly("grid", &QuantumSystemField::grid)
      .def_readonly("dim_h", &QuantumSystemField::dim_h)
      .def_readonly("band_count", &QuantumSystemField::band_count)
      .def("hamiltonian", [](const QuantumSystemField& s, std::size_t p) { return s.hamiltonian.at(p); })
      .def_property_readonly("has_chirality", [](const QuantumSystemField& s) { return s.chi.has_value(); })
      .def("to_json", &dump_system)
      .def_static("from_json", &load_system);

  py::class_<ChiralBundleData>(m, "Bundle")
      .def_readonly("grid", &ChiralBundleData::grid)
      .def_readonly("ambient_dim", &ChiralBundleData::ambient_dim)
      .def_readonly("rank", &ChiralBundleData::rank)
      .def_readonly("metadata", &ChiralBundleData::metadata)
      .def("frame", [](const ChiralBundleData& b, std::size_t p) { return b.frame.at(p); })
      .def("phi", [](const ChiralBundleData& b, std::size_t p) { return b.phi.at(p); })
      .def("to_json", &dump_bundle)
      .def_static("from_json", &load_bundle);

  py::class_<SphereMap>(m, "SphereMap")
      .def_readonly("grid", &SphereMap::grid)
      .def("__len__", [](const SphereMap& f) { return f.values.size(); })
      .def("value", [](const SphereMap& f, std::size_t i) { return f.values.at(i); })
      .def("to_json", &dump_sphere_map)
      .def_static("from_json", &load_sphere_map);

  m.def("models", [] { return json_loads(catalog_json()); });
  m.def(
      "build_model",
      [](const std::string& name, const std::map<std::string, double>& params,
         const std::optional<std::string>& grid) -> py::object {
        const auto spec = make_spec(name, params);
        const BaseGrid g = grid ? parse_grid(*grid) : default_grid(name);
        auto out = build(spec, g);
        return std::visit([](auto&& v) { return py::cast(std::move(v)); }, std::move(out));
      },
      py::arg("name"), py::arg("params") = std::map<std::string, double>{}, py::arg("grid") = py::none());

  m.def(
      "split",
      [](const QuantumSystemField& sys, const std::string& href, const std::string& projector, int nodes,
         const std::map<std::string, double>& policy) {
        const auto pol = policy_from(policy);
        require_valid_system(sys, pol);
        const ProjectorField family = projector == "riesz"
                                          ? fermi_projection_riesz(sys, family_contour(sys, pol), nodes, pol)
                                          : family_projection_eig(sys, pol);
        const auto s = chiral_split(sys, family, FrameMethod::gradation_eigen, pol);
        HRef h;
        if (href == "self") h.mode = HRef::Mode::self;
        else if (href != "identity") throw Error(ErrorKind::BadParams, "href must be 'identity' or 'self'");
        return assemble_chiral_bundle(s, h, pol);
      },
      py::arg("system"), py::arg("href") = "identity", py::arg("projector") = "riesz", py::arg("nodes") = 64,
      py::arg("policy") = std::map<std::string, double>{});
  m.def(
      "lower_band",
      [](const QuantumSystemField& sys, const std::map<std::string, double>& policy) {
        return lower_band_bundle(sys, policy_from(policy));
      },
      py::arg("system"), py::arg("policy") = std::map<std::string, double>{});

  m.def(
      "invariants",
      [](const ChiralBundleData& b, const std::vector<std::string>& cycles, const std::map<std::string, double>& policy) {
        const auto pol = policy_from(policy);
        require_valid(b, pol);
        return json_loads(report_json(compute_report(b, cycles, pol)));
      },
      py::arg("bundle"), py::arg("cycles") = std::vector<std::string>{},
      py::arg("policy") = std::map<std::string, double>{});
  m.def(
      "class_label",
      [](const ChiralBundleData& b, const std::map<std::string, double>& policy) {
        const auto pol = policy_from(policy);
        const auto r = compute_report(b, {}, pol);
        return match_report(r, b.grid.kind(), b.grid.dim(), b.rank).text;
      },
      py::arg("bundle"), py::arg("policy") = std::map<std::string, double>{});

  m.def("tensor", [](const ChiralBundleData& a, const ChiralBundleData& b) { return tensor(a, b); });
  m.def("compose", [](const ChiralBundleData& a, const ChiralBundleData& b) { return compose_automorphisms(a, b); });
  m.def("validate", [](const ChiralBundleData& b) { return validate(b).passed; });

  m.def(
      "winding5_probe",
      [](const std::string& grid, double amplitude) { return winding5(gamma_probe_field(parse_grid(grid, SpaceKind::ball5), amplitude)); },
      py::arg("grid"), py::arg("amplitude") = 0.5);
}

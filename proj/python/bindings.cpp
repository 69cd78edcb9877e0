#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "gfl/cli.hpp"
#include "gfl/diagnostics.hpp"
#include "gfl/error.hpp"
#include "gfl/models.hpp"

namespace py = pybind11;
using namespace gfl;

namespace {

struct Model {
  ModelPtr ptr;
};

std::vector<std::pair<std::string, std::string>> table_rows(const Volume& v, const Alphabet& a,
                                                            const std::vector<Scalar>& probs) {
  std::vector<std::pair<std::string, std::string>> rows;
  const auto xs = enumerate_configurations(v, a);
  for (std::size_t i = 0; i < xs.size(); ++i) rows.emplace_back(xs[i].str(a), probs[i].str());
  return rows;
}

Configuration parse_condition(const std::string& text, const Alphabet& a) {
  return text.empty() ? Configuration{} : Configuration::parse(text, a);
}

}  // namespace

PYBIND11_MODULE(_gfl, m) {
  m.doc() = "Finite-window random fields, conditional kernels and Gibbsianness diagnostics";

  py::register_exception<Error>(m, "GflError", PyExc_ValueError);

  py::class_<Model>(m, "Model")
      .def(py::init([](const std::string& descriptor, const std::string& mode) {
             return Model{model_from_descriptor(descriptor, parse_numeric_mode(mode))};
           }),
           py::arg("descriptor"), py::arg("mode") = "rational")
      .def("describe", [](const Model& self) { return self.ptr->describe(); })
      .def_property_readonly("mode", [](const Model& self) { return std::string(to_string(self.ptr->mode())); })
      .def_property_readonly("window",
                             [](const Model& self) {
                               std::vector<std::string> out;
                               for (const auto& s : self.ptr->window()) out.push_back(s.str());
                               return out;
                             })
      .def_property_readonly("alphabet", [](const Model& self) { return self.ptr->alphabet().names(); })
      .def("probability",
           [](const Model& self, const std::string& config) {
             return self.ptr->probability(Configuration::parse(config, self.ptr->alphabet())).str();
           })
      .def("__repr__", [](const Model& self) { return "<gibbsfield.Model " + self.ptr->describe() + ">"; });

  m.def(
      "conditional",
      [](const Model& model, const std::string& volume, const std::string& condition) {
        const Volume v = Volume::parse(volume);
        const auto k = finite_conditional(*model.ptr, v, parse_condition(condition, model.ptr->alphabet()));
        return table_rows(v, model.ptr->alphabet(), k.probs());
      },
      py::arg("model"), py::arg("volume"), py::arg("condition") = "");

  m.def(
      "reconstruct",
      [](const Model& model, const std::string& volume, const std::string& condition) {
        const Volume v = Volume::parse(volume);
        const auto k = reconstruct_from_one_point(one_point_kernels(model.ptr), model.ptr->alphabet(), v,
                                                  parse_condition(condition, model.ptr->alphabet()));
        return table_rows(v, model.ptr->alphabet(), k.probs());
      },
      py::arg("model"), py::arg("volume"), py::arg("condition") = "");

  m.def(
      "diagnose_json",
      [](const Model& model, const std::string& site, const std::string& filtration, const std::string& family,
         double tol, std::uint64_t seed) {
        const Site t = site.empty() ? cli::default_site(model.ptr->window()) : Site::parse(site);
        const auto f = cli::parse_filtration(filtration, model.ptr->window(), t);
        const auto fam = cli::parse_family(family, model.ptr->alphabet(), seed);
        py::gil_scoped_release release;
        return uniform_convergence_report(*model.ptr, t, f, fam, tol).to_json();
      },
      py::arg("model"), py::arg("site") = "", py::arg("filtration") = "geometric",
      py::arg("family") = "standard:4", py::arg("tol") = 1e-12, py::arg("seed") = 24301);

  m.def(
      "example2_conditional",
      [](std::size_t ones, std::size_t sites, const std::string& tau) {
        return example2_conditional(ones, sites, Scalar::parse(tau)).str();
      },
      py::arg("ones"), py::arg("sites"), py::arg("tau") = "1");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<std::string> full{"gfl"};
        full.insert(full.end(), args.begin(), args.end());
        std::vector<const char*> argv;
        for (const auto& a : full) argv.push_back(a.c_str());
        std::ostringstream out;
        std::ostringstream err;
        const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rbe/app/config.hpp"
#include "rbe/app/field_io.hpp"
#include "rbe/app/run.hpp"
#include "rbe/relkin.hpp"

namespace py = pybind11;
using namespace rbe;

namespace {

py::array_t<double> vec3(const Vec3& v) {
  const double xyz[3] = {v.x, v.y, v.z};
  return py::array_t<double>(3, xyz);
}

Momentum3 momentum(const std::array<double, 3>& p) { return Momentum3(p[0], p[1], p[2]); }

}  // namespace

PYBIND11_MODULE(_rbe_slab, m) {
  m.doc() = "Steady relativistic Boltzmann slab solver";

  // translators are tried newest first, so the base class goes in first
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ArithmeticError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def(
      "run",
      [](const std::string& mode, const std::vector<std::string>& overrides,
         const std::optional<std::string>& config, const std::string& out) -> py::tuple {
        app::RunConfig cfg;
        try {
          cfg = app::parse_config(config, overrides);
        } catch (const ConfigError& e) {
          return py::make_tuple(static_cast<int>(app::kExitConfig), std::string(e.what()), std::string());
        }
        cfg.mode = mode;
        cfg.out = out;
        app::RunResult r;
        {
          py::gil_scoped_release release;
          r = app::run(cfg);
        }
        return py::make_tuple(r.exit_code, r.message, r.report);
      },
      py::arg("mode"), py::arg("overrides") = std::vector<std::string>{}, py::arg("config") = py::none(),
      py::arg("out") = "rbe-out",
      "Run one mode; returns (exit_code, message, report_json).");

  m.def(
      "validate_config",
      [](const std::vector<std::string>& overrides, const std::optional<std::string>& config) {
        app::parse_config(config, overrides);
      },
      py::arg("overrides") = std::vector<std::string>{}, py::arg("config") = py::none(),
      "Raise ConfigError for an invalid configuration.");
  m.def("config_keys", &app::config_keys);

  m.def(
      "read_field",
      [](const std::string& path) {
        const DistField f = app::read_field(path);
        const auto& q = f.grid().momentum();
        py::array_t<double> values({f.n_p(), f.n_x()});
        std::copy(f.values().begin(), f.values().end(), values.mutable_data());
        py::array_t<double> nodes({q.size(), std::size_t{3}});
        auto n = nodes.mutable_unchecked<2>();
        for (std::size_t i = 0; i < q.size(); ++i) {
          const Vec3 p = q.node(i);
          n(i, 0) = p.x;
          n(i, 1) = p.y;
          n(i, 2) = p.z;
        }
        py::dict d;
        d["values"] = values;
        d["x"] = f.grid().x();
        d["nodes"] = nodes;
        d["weights"] = q.weights();
        return d;
      },
      py::arg("path"), "Field file as {values (n_p, n_x), x, nodes (n_p, 3), weights}.");

  m.def(
      "invariants",
      [](const std::array<double, 3>& p, const std::array<double, 3>& q) {
        const Invariants inv = invariants(momentum(p), momentum(q));
        return py::make_tuple(inv.s, inv.g);
      },
      py::arg("p"), py::arg("q"), "(s, g) of an on-shell pair.");
  m.def(
      "moller_velocity",
      [](const std::array<double, 3>& p, const std::array<double, 3>& q) {
        return moller_velocity(momentum(p), momentum(q));
      },
      py::arg("p"), py::arg("q"));
  m.def(
      "post_collision",
      [](const std::array<double, 3>& p, const std::array<double, 3>& q, const std::array<double, 3>& w) {
        const auto out = post_collision(momentum(p), momentum(q), Vec3{w[0], w[1], w[2]});
        return py::make_tuple(vec3(out.p.p), vec3(out.q.p));
      },
      py::arg("p"), py::arg("q"), py::arg("omega"), "(p', q') for a unit direction omega.");
}

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hullcap/config.hpp"
#include "hullcap/errors.hpp"
#include "hullcap/field_core.hpp"
#include "hullcap/hull_solver.hpp"
#include "hullcap/isoperimetry.hpp"
#include "hullcap/p_laplace.hpp"
#include "hullcap/runner.hpp"
#include "hullcap/shapes.hpp"
#include "hullcap/symmetrization.hpp"
#include "hullcap/warped_radial.hpp"

namespace py = pybind11;
using namespace hullcap;

namespace {

std::vector<py::ssize_t> shape_of(const Grid& g) {
  std::vector<py::ssize_t> s;
  for (int a = 0; a < g.dim(); ++a) s.push_back(g.extent(a));
  return s;
}

void check_shape(const Grid& g, const py::buffer_info& info) {
  const auto want = shape_of(g);
  if (info.shape != want) throw InvalidArgument("array shape does not match the grid");
}

py::array_t<double> field_to_numpy(const ScalarField& f) {
  py::array_t<double> out(shape_of(*f.grid));
  std::copy(f.values.begin(), f.values.end(), out.mutable_data());
  return out;
}

py::array_t<bool> mask_to_numpy(const RegionMask& m) {
  py::array_t<bool> out(shape_of(*m.grid));
  bool* d = out.mutable_data();
  for (std::size_t i = 0; i < m.size(); ++i) d[i] = m.cells[i] != 0;
  return out;
}

ScalarField field_from_numpy(const GridPtr& g, const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  check_shape(*g, a.request());
  return ScalarField(g, std::vector<double>(a.data(), a.data() + a.size()));
}

RegionMask mask_from_numpy(const GridPtr& g, const py::array_t<bool, py::array::c_style | py::array::forcecast>& a) {
  check_shape(*g, a.request());
  RegionMask m(g);
  for (py::ssize_t i = 0; i < a.size(); ++i) m.cells[i] = a.data()[i] ? 1 : 0;
  return m;
}

py::dict report_dict(const SolveReport& r) {
  py::dict d;
  d["solver"] = r.solver;
  d["iterations"] = r.iterations;
  d["objective"] = r.objective;
  d["gap"] = r.gap;
  d["converged"] = r.converged;
  d["notes"] = r.notes;
  return d;
}

}  // namespace

PYBIND11_MODULE(_hullcap, m) {
  m.doc() = "Outward-minimising hulls, p-capacities and comparison geometry on grids";
  m.attr("__version__") = kToolVersion;

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

  py::class_<Grid, std::shared_ptr<Grid>>(m, "Grid")
      .def_property_readonly("dim", &Grid::dim)
      .def_property_readonly("shape", [](const Grid& g) { return shape_of(g); })
      .def_property_readonly("spacing", &Grid::spacing)
      .def_property_readonly("origin", [](const Grid& g) {
        return std::vector<double>(g.origin().begin(), g.origin().begin() + g.dim());
      })
      .def("__repr__", [](const Grid& g) {
        std::string s = "Grid(shape=(";
        for (int a = 0; a < g.dim(); ++a) s += std::to_string(g.extent(a)) + (a + 1 < g.dim() ? ", " : "");
        return s + "), h=" + format_double(g.spacing()) + ")";
      });

  auto as_mutable = [](const GridPtr& g) { return std::const_pointer_cast<Grid>(g); };
  auto as_const = [](const std::shared_ptr<Grid>& g) { return GridPtr(g); };

  m.def(
      "box_grid", [=](int n, int cells, double lo, double extent) { return as_mutable(make_box_grid(n, cells, lo, extent)); },
      py::arg("n"), py::arg("cells"), py::arg("lo") = -1.0, py::arg("extent") = 2.0,
      "Square or cubic grid of `cells` per axis covering [lo, lo + extent]^n.");
  m.def(
      "make_grid",
      [=](std::vector<int> dims, double h, std::vector<double> origin) {
        return as_mutable(make_grid(std::move(dims), h, std::move(origin)));
      },
      py::arg("dims"), py::arg("spacing"), py::arg("origin"));

  py::class_<ShapeSpec>(m, "ShapeSpec")
      .def(py::init<>())
      .def(py::init([](std::string name, std::vector<double> center, double radius) {
             ShapeSpec s;
             s.name = std::move(name);
             require(center.size() >= 2 && center.size() <= 3, "center needs 2 or 3 coordinates");
             for (std::size_t a = 0; a < center.size(); ++a) s.center[a] = center[a];
             s.radius = radius;
             return s;
           }),
           py::arg("name"), py::arg("center") = std::vector<double>{0.0, 0.0}, py::arg("radius") = 0.25)
      .def_readwrite("name", &ShapeSpec::name)
      .def_readwrite("radius", &ShapeSpec::radius)
      .def_readwrite("points", &ShapeSpec::points)
      .def_readwrite("amplitude", &ShapeSpec::amplitude)
      .def_readwrite("rotation", &ShapeSpec::rotation)
      .def_readwrite("gap", &ShapeSpec::gap)
      .def_readwrite("bar_width", &ShapeSpec::bar_width)
      .def_readwrite("side", &ShapeSpec::side)
      .def_readwrite("arm_length", &ShapeSpec::arm_length)
      .def_readwrite("arm_width", &ShapeSpec::arm_width)
      .def_readwrite("fourier", &ShapeSpec::fourier)
      .def_property(
          "center", [](const ShapeSpec& s) { return std::vector<double>(s.center.begin(), s.center.end()); },
          [](ShapeSpec& s, const std::vector<double>& c) {
            require(c.size() >= 2 && c.size() <= 3, "center needs 2 or 3 coordinates");
            s.center = {0.0, 0.0, 0.0};
            for (std::size_t a = 0; a < c.size(); ++a) s.center[a] = c[a];
          });

  m.def("shape_names", &shape_names);
  m.def(
      "rasterize", [=](const ShapeSpec& s, const std::shared_ptr<Grid>& g) { return mask_to_numpy(rasterize(s, as_const(g))); },
      py::arg("shape"), py::arg("grid"), "Boolean cell-centre rasterisation of a preset.");
  m.def(
      "perimeter",
      [=](const std::shared_ptr<Grid>& g, py::array_t<bool, py::array::c_style | py::array::forcecast> a) {
        return mollified_perimeter(mask_from_numpy(as_const(g), a));
      },
      py::arg("grid"), py::arg("mask"), "Mollified perimeter of a mask.");
  m.def(
      "volume",
      [=](const std::shared_ptr<Grid>& g, py::array_t<bool, py::array::c_style | py::array::forcecast> a) {
        return measure(mask_from_numpy(as_const(g), a)).volume;
      },
      py::arg("grid"), py::arg("mask"));

  m.def(
      "compute_hull",
      [=](const std::shared_ptr<Grid>& g, py::array_t<bool, py::array::c_style | py::array::forcecast> obstacle,
          double gap_tol, int max_iters, int box_padding, double threshold) {
        ObstacleProblem pb{as_const(g), mask_from_numpy(as_const(g), obstacle), box_padding,
                           TvParams{.max_iters = max_iters, .gap_tol = gap_tol}};
        HullResult h;
        {
          py::gil_scoped_release release;
          h = compute_hull(pb, threshold);
        }
        py::dict d;
        d["hull"] = mask_to_numpy(h.hull);
        d["relaxed"] = field_to_numpy(h.relaxed);
        d["perimeter"] = h.hull_perimeter;
        d["volume"] = h.hull_volume;
        d["cap1_estimate"] = h.cap1_estimate;
        d["report"] = report_dict(h.report);
        return d;
      },
      py::arg("grid"), py::arg("obstacle"), py::arg("gap_tol") = 1e-3, py::arg("max_iters") = 20000,
      py::arg("box_padding") = 8, py::arg("threshold") = 0.5,
      "Strictly outward-minimising hull of an obstacle mask.");
  m.def(
      "is_outward_minimising",
      [=](const std::shared_ptr<Grid>& g, py::array_t<bool, py::array::c_style | py::array::forcecast> a, double tol) {
        const RegionMask mask = mask_from_numpy(as_const(g), a);
        OutwardVerdict v;
        {
          py::gil_scoped_release release;
          v = is_outward_minimising(mask, tol);
        }
        return py::make_tuple(v.verdict, v.gap);
      },
      py::arg("grid"), py::arg("mask"), py::arg("tol") = 1e-2, "(verdict, gap)");

  m.def(
      "p_capacity",
      [=](const std::shared_ptr<Grid>& g, py::array_t<bool, py::array::c_style | py::array::forcecast> obstacle, double p,
          std::vector<double> radii, std::vector<double> center, bool mirror) {
        PLaplaceConfig cfg;
        cfg.p = p;
        cfg.radii_schedule = std::move(radii);
        require(center.size() <= 3, "center has at most 3 coordinates");
        for (std::size_t a = 0; a < center.size(); ++a) cfg.center[a] = center[a];
        cfg.mirror = mirror;
        const RegionMask ob = mask_from_numpy(as_const(g), obstacle);
        PotentialResult r;
        {
          py::gil_scoped_release release;
          r = solve_potential(as_const(g), ob, cfg);
        }
        return py::make_tuple(r.capacity, field_to_numpy(r.potential));
      },
      py::arg("grid"), py::arg("obstacle"), py::arg("p"), py::arg("radii"),
      py::arg("center") = std::vector<double>{0.0, 0.0}, py::arg("mirror") = false,
      "(capacity, potential) relative to the last truncation ball.");

  py::class_<WarpedProfile>(m, "WarpedProfile")
      .def_readonly("name", &WarpedProfile::name)
      .def_readonly("n", &WarpedProfile::n)
      .def("f", [](const WarpedProfile& p, double r) { return p.f(r); });
  m.def("profile_names", &profile_names);
  m.def("preset_profile", &preset_profile, py::arg("name"), py::arg("n"), py::arg("a") = 0.5);
  m.def(
      "radial_p_capacity",
      [](const WarpedProfile& prof, double rho0, double p) {
        const RadialCapacity c = radial_p_capacity(prof, rho0, p);
        return py::make_tuple(c.capacity, c.parabolic);
      },
      py::arg("profile"), py::arg("rho0"), py::arg("p"), "(capacity, parabolic)");
  m.def("radial_relative_capacity", &radial_relative_capacity, py::arg("profile"), py::arg("rho0"), py::arg("R"),
        py::arg("p"));
  m.def(
      "radial_hull",
      [](const WarpedProfile& prof, double rho0) {
        const RadialVerdict v = radial_hull(prof, rho0);
        return py::make_tuple(to_string(v.kind), v.witness_radius);
      },
      py::arg("profile"), py::arg("rho0"), "(verdict, witness radius)");
  m.def("avr", [](const WarpedProfile& prof) { return avr(prof).value; }, py::arg("profile"));
  m.def("sphere_area", &sphere_area, py::arg("profile"), py::arg("rho"));
  m.def("ball_volume", &ball_volume, py::arg("profile"), py::arg("rho"));
  m.def("willmore_radial", &willmore_radial, py::arg("profile"), py::arg("rho"));

  m.def(
      "constrained_isoperimetric",
      [=](const std::shared_ptr<Grid>& g, py::array_t<bool, py::array::c_style | py::array::forcecast> container,
          double v) {
        const RegionMask U = mask_from_numpy(as_const(g), container);
        IsoSet s;
        {
          py::gil_scoped_release release;
          s = constrained_isoperimetric(U, v);
        }
        py::dict d;
        d["set"] = mask_to_numpy(s.set);
        d["area"] = s.area;
        d["volume"] = s.volume;
        d["multiplier"] = s.multiplier;
        d["seed"] = s.seed;
        return d;
      },
      py::arg("grid"), py::arg("container"), py::arg("volume"));
  m.def("conical_profile", &conical_profile, py::arg("v"), py::arg("W"), py::arg("n"));

  m.def(
      "random_smooth_field",
      [=](const std::shared_ptr<Grid>& g, std::uint64_t seed) { return field_to_numpy(random_smooth_field(as_const(g), seed)); },
      py::arg("grid"), py::arg("seed"));
  m.def(
      "polya_szego_check",
      [=](const std::shared_ptr<Grid>& g, py::array_t<double, py::array::c_style | py::array::forcecast> f,
          double C_g) {
        const ScalarField field = field_from_numpy(as_const(g), f);
        const PolyaSzegoResult r = polya_szego_check(field, RegionMask(as_const(g), true), C_g);
        py::dict d;
        d["lhs"] = r.lhs;
        d["rhs"] = r.rhs;
        d["l2_defect"] = r.l2_defect;
        d["holds"] = r.holds;
        return d;
      },
      py::arg("grid"), py::arg("field"), py::arg("C_g") = 1.0, "Field must vanish on the grid boundary.");
  m.def(
      "first_eigenvalue",
      [=](const std::shared_ptr<Grid>& g, py::array_t<bool, py::array::c_style | py::array::forcecast> support,
          double tol) {
        const RegionMask s = mask_from_numpy(as_const(g), support);
        Eigenpair e;
        {
          py::gil_scoped_release release;
          e = first_eigenvalue(s, tol);
        }
        return py::make_tuple(e.lambda1, field_to_numpy(e.eigenfield));
      },
      py::arg("grid"), py::arg("support"), py::arg("tol") = 1e-8, "(lambda1, eigenfield)");
  m.def("ball_first_eigenvalue", &ball_first_eigenvalue, py::arg("n"), py::arg("volume"));

  m.def(
      "normalise_config", [](const std::string& text) { return emit_config(parse_config_text(text)); }, py::arg("text"),
      "Parses INI text and returns it in normalised form with every default filled in.");
  m.def(
      "run",
      [](const std::string& text, const std::string& out, bool force, bool deterministic) {
        RunConfig cfg = parse_config_text(text);
        RunOptions opts;
        opts.out_override = out;
        opts.force = force;
        opts.deterministic = deterministic;
        RunManifest man;
        {
          py::gil_scoped_release release;
          man = run(cfg, opts);
        }
        py::dict d;
        d["manifest"] = man.text;
        d["path"] = man.path;
        d["cache_hit"] = man.cache_hit;
        d["pass"] = man.pass;
        d["exit_code"] = man.exit_code;
        return d;
      },
      py::arg("config_text"), py::arg("out") = "", py::arg("force") = false, py::arg("deterministic") = false,
      "Runs an INI config; returns the manifest text and verdict.");
}

// Python bindings. Fields cross the boundary as numpy arrays of shape
// (height, width) or (height, width, channels); grid spacing travels
// separately because numpy has no place for it.
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "motgv/pgm.hpp"
#include "motgv/solver.hpp"

namespace py = pybind11;
using namespace motgv;

namespace {

py::array_t<double> to_numpy(const GridField& f) {
  if (f.channels() == 1) {
    py::array_t<double> out({f.height(), f.width()});
    std::copy(f.data().begin(), f.data().end(), out.mutable_data());
    return out;
  }
  py::array_t<double> out({f.height(), f.width(), f.channels()});
  std::copy(f.data().begin(), f.data().end(), out.mutable_data());
  return out;
}

GridField from_numpy(py::array_t<double, py::array::c_style | py::array::forcecast> a, double h) {
  if (a.ndim() != 2 && a.ndim() != 3) throw InputError("expected a 2-D or 3-D array");
  const int channels = a.ndim() == 3 ? static_cast<int>(a.shape(2)) : 1;
  GridField f(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)), channels, h);
  std::copy(a.data(), a.data() + a.size(), f.data().begin());
  return f;
}

ExponentMap map_from_numpy(py::array_t<double, py::array::c_style | py::array::forcecast> a,
                           double p_max) {
  if (a.ndim() != 2) throw InputError("exponent map: expected a 2-D array");
  ExponentMap m(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)), 2.0, p_max);
  for (int j = 0; j < m.height(); ++j)
    for (int i = 0; i < m.width(); ++i) m.set(i, j, a.at(j, i));
  return m;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Anisotropic second-order TGV with Musielak-Orlicz integrands";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_RuntimeError);
  py::register_exception<UnsupportedFamilyError>(m, "UnsupportedFamilyError", PyExc_ValueError);

  py::class_<ExponentMap>(m, "ExponentMap")
      .def(py::init(&map_from_numpy), py::arg("p"), py::arg("p_max") = kDefaultPMax)
      .def_static("constant",
                  [](int w, int h, double p) { return ExponentMap::constant(w, h, p); },
                  py::arg("width"), py::arg("height"), py::arg("p"))
      .def_static("load_csv", [](const std::string& path) { return ExponentMap::load_csv(path); })
      .def("save_csv", &ExponentMap::save_csv)
      .def_property_readonly("width", &ExponentMap::width)
      .def_property_readonly("height", &ExponentMap::height)
      .def("to_numpy", [](const ExponentMap& mm) {
        py::array_t<double> out({mm.height(), mm.width()});
        double* d = out.mutable_data();
        for (std::size_t c = 0; c < mm.cells(); ++c) d[c] = mm.p(c);
        return out;
      });

  py::class_<PhiSpec>(m, "PhiSpec")
      .def_static("power", &PhiSpec::power, py::arg("p"), py::arg("p_max") = kDefaultPMax)
      .def_static("variable_exponent", &PhiSpec::variable_exponent, py::arg("map"))
      .def_static("piecewise_linear", &PhiSpec::piecewise_linear, py::arg("pieces"))
      .def("eval", &PhiSpec::eval, py::arg("cell"), py::arg("t"))
      .def("conjugate", &PhiSpec::conjugate)
      .def("recession", &PhiSpec::recession, py::arg("cell"))
      .def("left_derivative", &PhiSpec::left_derivative, py::arg("cell"), py::arg("t"));

  py::class_<TgvWeights>(m, "TgvWeights")
      .def(py::init([](double a1, double a2) { return TgvWeights{a1, a2}; }), py::arg("alpha1"),
           py::arg("alpha2"))
      .def_readwrite("alpha1", &TgvWeights::alpha1)
      .def_readwrite("alpha2", &TgvWeights::alpha2);

  m.def(
      "modular",
      [](const PhiSpec& phi, py::array_t<double> f, double h) {
        return modular(phi, from_numpy(f, h));
      },
      py::arg("phi"), py::arg("f"), py::arg("h") = 0.0);
  m.def(
      "luxemburg_norm",
      [](const PhiSpec& phi, py::array_t<double> f, double h) {
        return luxemburg_norm(phi, from_numpy(f, h));
      },
      py::arg("phi"), py::arg("f"), py::arg("h") = 0.0);
  m.def(
      "anisotropic_variation",
      [](const PhiSpec& phi, py::array_t<double> f, double h) {
        return anisotropic_variation(phi, from_numpy(f, h)).value;
      },
      py::arg("phi"), py::arg("f"), py::arg("h") = 0.0);

  m.def(
      "tgv2",
      [](const PhiSpec& phi, double alpha1, double alpha2, py::array_t<double> u, double h,
         int max_iters) {
        TgvOptions opts;
        if (max_iters > 0) opts.max_iters = max_iters;
        TgvResult r = tgv2_primal(phi, {alpha1, alpha2}, from_numpy(u, h), opts);
        return py::make_tuple(r.value, r.gap, to_numpy(r.w_opt));
      },
      py::arg("phi"), py::arg("alpha1"), py::arg("alpha2"), py::arg("u"), py::arg("h") = 0.0,
      py::arg("max_iters") = 0, "Returns (value, certified gap, minimizing w field).");
  m.def(
      "tgv2_dual",
      [](const PhiSpec& phi, double alpha1, double alpha2, py::array_t<double> u, double h,
         int max_iters) { return tgv2_dual(phi, {alpha1, alpha2}, from_numpy(u, h), max_iters); },
      py::arg("phi"), py::arg("alpha1"), py::arg("alpha2"), py::arg("u"), py::arg("h") = 0.0,
      py::arg("max_iters") = 30000);

  m.def(
      "denoise",
      [](py::array_t<double> f, const PhiSpec& phi, double alpha1, double alpha2, double h,
         int max_iters, double tol_gap, bool blur) {
        GridField data = from_numpy(f, h);
        OperatorPair K = blur ? blur_op(data.width(), data.height(), data.h())
                              : identity_op(data.width(), data.height(), data.h());
        SolverConfig cfg;
        if (max_iters > 0) cfg.max_iters = max_iters;
        cfg.tol_gap = tol_gap;
        DenoiseResult r = denoise_tgv(data, K, phi, {alpha1, alpha2}, cfg);
        return py::make_tuple(to_numpy(r.u_star), r.energy_trace.back(), r.iters_used);
      },
      py::arg("f"), py::arg("phi"), py::arg("alpha1"), py::arg("alpha2"), py::arg("h") = 0.0,
      py::arg("max_iters") = 0, py::arg("tol_gap") = 1e-6, py::arg("blur") = false,
      "Returns (denoised field, final objective, iterations used).");

  m.def(
      "affine_projection",
      [](py::array_t<double> u, double h) {
        auto [aff, res] = affine_projection(from_numpy(u, h));
        return py::make_tuple(to_numpy(aff), to_numpy(res));
      },
      py::arg("u"), py::arg("h") = 0.0);

  m.def(
      "make_pmap",
      [](py::array_t<double> image, double k, double sigma, double h) {
        return make_pmap(from_numpy(image, h), k, sigma);
      },
      py::arg("image"), py::arg("k") = 32.0, py::arg("sigma") = 1.0, py::arg("h") = 0.0);

  m.def("load_pgm", [](const std::string& path) { return to_numpy(load_pgm(path).field); },
        py::arg("path"));
  m.def(
      "save_pgm",
      [](const std::string& path, py::array_t<double> f, int maxval, bool binary) {
        save_pgm(path, from_numpy(f, 0.0), maxval, binary);
      },
      py::arg("path"), py::arg("f"), py::arg("maxval") = 255, py::arg("binary") = false);
}

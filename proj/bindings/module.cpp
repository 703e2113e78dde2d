#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <string>
#include <vector>

#include "lal/combinatorics.hpp"
#include "lal/curves.hpp"
#include "lal/lal.hpp"
#include "lal/sample.hpp"
#include "lal/simulate.hpp"

namespace py = pybind11;

namespace {

py::object to_py_int(const boost::multiprecision::cpp_int& v) {
  const std::string s = v.str();
  PyObject* obj = PyLong_FromString(s.c_str(), nullptr, 10);
  if (!obj) throw py::error_already_set();
  return py::reinterpret_steal<py::object>(obj);
}

py::tuple to_fraction(const lal::ExactFraction& f) {
  return py::make_tuple(to_py_int(f.num), to_py_int(f.den));
}

// Batch size: a positive int, the string "inf", or float('inf').
lal::BatchSize to_batch_size(const py::object& m) {
  if (py::isinstance<py::str>(m)) {
    if (m.cast<std::string>() == "inf") return lal::BatchSize::infinite();
    throw py::value_error("m must be a positive integer or 'inf'");
  }
  if (py::isinstance<py::float_>(m)) {
    const double v = m.cast<double>();
    if (std::isinf(v) && v > 0) return lal::BatchSize::infinite();
    throw py::value_error("m must be a positive integer or 'inf'");
  }
  return lal::BatchSize::finite(m.cast<long long>());
}

constexpr double kInf = std::numeric_limits<double>::infinity();

lal::CalibrationSample make_sample(const std::vector<double>& losses,
                                   double support_min, double support_max) {
  return lal::build_sample(losses, support_min, support_max);
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() =
      "Distribution-free level-alpha limits on out-of-sample losses: "
      "order-statistic tail probabilities, limit queries, step curves, and "
      "exact verification oracles.";

  mod.def("log_binomial", &lal::log_binomial, py::arg("b"), py::arg("r"),
          "ln C(b, r); -inf when r < 0, r > b, or b < 0.");
  mod.def("order_pmf", &lal::order_pmf, py::arg("n"), py::arg("m"),
          py::arg("i"), py::arg("j"),
          "P[i-th smallest of m out-of-sample losses lies between "
          "calibration order statistics j and j+1].");
  mod.def("tail_a", &lal::tail_a, py::arg("k"), py::arg("n"), py::arg("m"),
          py::arg("q"),
          "a(k): P[q-th smallest of m out-of-sample losses exceeds the k-th "
          "calibration order statistic].");
  mod.def("tail_a_all", &lal::tail_a_all, py::arg("n"), py::arg("m"),
          py::arg("q"), "a(k) for k = 1..n+1.");
  mod.def("binomial_cdf", &lal::binomial_cdf, py::arg("k"), py::arg("n"),
          py::arg("beta"));
  mod.def("binomial_quantile", &lal::binomial_quantile, py::arg("p"),
          py::arg("n"), py::arg("beta"),
          "Smallest k with binomial_cdf(k, n, beta) >= p.");
  mod.def(
      "exact_tail_a",
      [](long long k, long long n, long long m, long long q) {
        return to_fraction(lal::exact_tail_a(k, n, m, q));
      },
      py::arg("k"), py::arg("n"), py::arg("m"), py::arg("q"),
      "a(k) as an exact (numerator, denominator) pair; n + m <= 500.");

  mod.def("ceil_fraction", &lal::ceil_fraction, py::arg("m"), py::arg("beta"),
          "ceil(m * beta) with a snap-to-integer guard.");
  mod.def("k_star_finite", &lal::k_star_finite, py::arg("n"), py::arg("m"),
          py::arg("beta"), py::arg("alpha"));
  mod.def("k_star_single", &lal::k_star_single, py::arg("n"),
          py::arg("alpha"));
  mod.def("k_star_infinite", &lal::k_star_infinite, py::arg("n"),
          py::arg("beta"), py::arg("alpha"));

  mod.def(
      "limit",
      [](const std::vector<double>& losses, const py::object& m, double beta,
         double alpha, double support_min, double support_max) {
        const lal::CalibrationSample sample =
            make_sample(losses, support_min, support_max);
        const lal::LalOutcome out =
            lal::lal(sample, {to_batch_size(m), beta, alpha});
        py::dict d;
        d["k_star"] = out.k_star;
        d["limit"] = out.limit;
        d["exact_coverage"] = out.exact_coverage;
        d["ordinal"] = out.ordinal ? py::cast(*out.ordinal) : py::none();
        d["conservative_under_ties"] = out.conservative_under_ties;
        return d;
      },
      py::arg("losses"), py::arg("m") = 1, py::arg("beta") = 1.0,
      py::arg("alpha") = 0.1, py::arg("support_min") = -kInf,
      py::arg("support_max") = kInf,
      "Level-alpha limit on the beta-fraction of m out-of-sample losses, "
      "from a calibration loss list.");

  mod.def(
      "curve",
      [](const std::vector<double>& losses, const py::object& m, double beta,
         double support_min, double support_max) {
        const lal::LalCurve curve = lal::curve_breakpoints(
            make_sample(losses, support_min, support_max), to_batch_size(m),
            beta);
        py::list points;
        for (const auto& p : curve.breakpoints)
          points.append(py::make_tuple(p.k, p.alpha, p.limit));
        return points;
      },
      py::arg("losses"), py::arg("m") = 1, py::arg("beta") = 1.0,
      py::arg("support_min") = -kInf, py::arg("support_max") = kInf,
      "Exact step-curve breakpoints as (k, alpha, limit) tuples.");

  mod.def(
      "oracle_pmf",
      [](long long n, long long m, long long i, long long j) {
        return to_fraction(lal::enumeration_pmf(n, m, i, j));
      },
      py::arg("n"), py::arg("m"), py::arg("i"), py::arg("j"),
      "order_pmf by exhaustive partition enumeration (n + m <= 22).");
  mod.def(
      "oracle_exceeds",
      [](long long n, long long m, long long q, long long k) {
        return to_fraction(lal::enumeration_exceeds(n, m, q, k));
      },
      py::arg("n"), py::arg("m"), py::arg("q"), py::arg("k"),
      "tail_a by exhaustive partition enumeration (n + m <= 22).");

#ifdef VERSION_INFO
  mod.attr("__version__") = VERSION_INFO;
#else
  mod.attr("__version__") = "dev";
#endif
}

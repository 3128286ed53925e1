// Python bindings.  States cross the boundary as complex numpy arrays:
// kets are 2 x d (qubit row, environment column), densities 2 x 2.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "catbound/cli.hpp"

namespace py = pybind11;
using namespace catbound;

namespace {

using CArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

CMatrix to_matrix(const CArray& a, const char* what) {
  if (a.ndim() != 2) throw DimensionError(std::string(what) + ": expected a 2-d array");
  CMatrix m(a.shape(0), a.shape(1));
  auto r = a.unchecked<2>();
  for (py::ssize_t i = 0; i < a.shape(0); ++i)
    for (py::ssize_t j = 0; j < a.shape(1); ++j) m(i, j) = r(i, j);
  return m;
}

CVector to_vector(const CArray& a) {
  if (a.ndim() != 1) throw DimensionError("expected a 1-d array");
  auto r = a.unchecked<1>();
  CVector v(a.shape(0));
  for (py::ssize_t i = 0; i < a.shape(0); ++i) v[i] = r(i);
  return v;
}

CArray from_matrix(const CMatrix& m) {
  CArray a({m.rows(), m.cols()});
  auto w = a.mutable_unchecked<2>();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) w(i, j) = m(i, j);
  return a;
}

CArray from_vector(const CVector& v) {
  CArray a(v.dim());
  auto w = a.mutable_unchecked<1>();
  for (std::size_t i = 0; i < v.dim(); ++i) w(i) = v[i];
  return a;
}

CArray from_density(const CatDensity& rho) {
  CMatrix m(2, 2);
  for (std::size_t q = 0; q < 2; ++q)
    for (std::size_t qp = 0; qp < 2; ++qp) m(q, qp) = rho(q, qp);
  return from_matrix(m);
}

CatDensity to_density(const CArray& a) {
  const CMatrix m = to_matrix(a, "density");
  if (m.rows() != 2 || m.cols() != 2) throw DimensionError("density: expected a 2x2 array");
  CatDensity rho;
  for (std::size_t q = 0; q < 2; ++q)
    for (std::size_t qp = 0; qp < 2; ++qp) rho(q, qp) = m(q, qp);
  return rho;
}

BipartiteKet to_ket(const CArray& a) { return BipartiteKet::normalize(to_matrix(a, "ket")); }

std::array<double, 3> bloch_tuple(const BlochVector& p) { return {p.x, p.y, p.z}; }

// JSON documents become plain Python objects via their text form.
py::object to_python(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

}  // namespace

PYBIND11_MODULE(_catbound, m) {
  m.doc() = "Least-paradoxical cat states: reduced states, the lambda(A) relation, and the constrained optimizer";
  m.attr("__version__") = CATBOUND_VERSION;

  py::register_exception<Error>(m, "CatboundError", PyExc_ValueError);

  m.def("lambda_max_sq", &lambda_max_sq);
  m.def("lambda_from_overlap", [](double a) { return lambda_from_overlap(OverlapA{a}); }, py::arg("a"));
  m.def("lambda_residual", [](double l, double a) { return lambda_residual(l, OverlapA{a}); }, py::arg("lam"),
        py::arg("a"));

  m.def("partial_trace", [](const CArray& ket) { return from_density(partial_trace_env(to_ket(ket))); },
        py::arg("ket"), "2x2 reduced density matrix of a 2 x d ket (renormalized).");
  m.def("bloch", [](const CArray& rho) { return bloch_tuple(bloch(to_density(rho))); }, py::arg("rho"));
  m.def("p_alive", [](const CArray& rho) { return p_alive(to_density(rho)); }, py::arg("rho"));
  m.def("trace_distance", [](const CArray& a, const CArray& b) { return trace_distance(to_density(a), to_density(b)); },
        py::arg("a"), py::arg("b"));
  m.def(
      "schmidt",
      [](const CArray& ket) {
        const SchmidtForm f = schmidt(to_ket(ket));
        py::dict d;
        d["coefficients"] = py::make_tuple(f.coeff_alive, f.coeff_dead);
        d["qubit_vecs"] = py::make_tuple(from_vector(f.qubit_vecs[0]), from_vector(f.qubit_vecs[1]));
        d["env_vecs"] = py::make_tuple(from_vector(f.env_vecs[0]), from_vector(f.env_vecs[1]));
        d["rank_one"] = f.rank_one;
        d["reconstructed"] = from_matrix(reconstruct(f).amp());
        return d;
      },
      py::arg("ket"));

  m.def(
      "construct_optimal",
      [](const CArray& psi1, const CArray& psi2) {
        const OptimalTriple t = construct_optimal(to_vector(psi1), to_vector(psi2));
        return py::make_tuple(from_matrix(t.chi.amp()), from_matrix(t.chi1.amp()), from_matrix(t.chi2.amp()));
      },
      py::arg("psi1"), py::arg("psi2"), "Returns (chi, chi1, chi2) as 2 x d arrays.");
  m.def(
      "check_constraints",
      [](const CArray& chi1, const CArray& chi2, double tol) {
        return to_python(to_json(check_constraints(to_ket(chi1), to_ket(chi2), FeasibilityTolerances::uniform(tol))));
      },
      py::arg("chi1"), py::arg("chi2"), py::arg("tol") = 1e-10);
  m.def("qubit_triplet", [] {
    const QubitTriplet t = qubit_triplet();
    return py::make_tuple(from_vector(t.one), from_vector(t.two), from_vector(t.three));
  });

  m.def(
      "optimize",
      [](std::size_t dim, std::size_t restarts, std::uint64_t seed, double tol_constraint, std::size_t threads) {
        OptimizerConfig c;
        c.env_dim = dim;
        c.restarts = restarts;
        c.master_seed = seed;
        c.tol_constraint = tol_constraint;
        c.threads = threads;
        c.validate();
        std::optional<OptimizationResult> r;
        {
          py::gil_scoped_release release;
          r.emplace(optimize(c));
        }
        return to_python(to_json(*r));
      },
      py::arg("dim") = 2, py::arg("restarts") = 32, py::arg("seed") = 0, py::arg("tol_constraint") = 1e-8,
      py::arg("threads") = 0);
  m.def("sweep", [](std::size_t steps) { return to_python(to_json(sweep_a(steps))); }, py::arg("steps") = 101);
  m.def(
      "sampling_oracle",
      [](std::size_t dim, std::size_t samples, std::uint64_t seed, double slack, double feas_tol) {
        return to_python(to_json(sampling_oracle(dim, samples, seed, slack, feas_tol)));
      },
      py::arg("dim") = 2, py::arg("samples") = 100000, py::arg("seed") = 0, py::arg("slack") = 1e-9,
      py::arg("feas_tol") = 0.05);
  m.def(
      "verify",
      [](std::size_t dim, std::uint64_t seed) {
        py::list out;
        for (const Check& c : verification_suite(dim, seed)) {
          py::dict d;
          d["name"] = c.name;
          d["residual"] = c.residual;
          d["tolerance"] = c.tolerance;
          d["pass"] = c.pass;
          out.append(d);
        }
        return out;
      },
      py::arg("dim") = 2, py::arg("seed") = 0);
}

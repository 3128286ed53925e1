#include "catbound/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace catbound {

namespace {

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw FormatError("expected a [re, im] pair");
  const Complex z(j[0].get<double>(), j[1].get<double>());
  if (!is_finite(z)) throw FormatError("non-finite amplitude");
  return z;
}

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Json to_json(const BipartiteKet& k) {
  Json amp = Json::array();
  for (std::size_t q = 0; q < 2; ++q) {
    Json row = Json::array();
    for (std::size_t e = 0; e < k.env_dim(); ++e) row.push_back(complex_json(k.amp()(q, e)));
    amp.push_back(std::move(row));
  }
  Json j;
  j["env_dim"] = k.env_dim();
  j["amp"] = std::move(amp);
  return j;
}

Json to_json(const CatDensity& rho) {
  return Json::array({Json::array({complex_json(rho(0, 0)), complex_json(rho(0, 1))}),
                      Json::array({complex_json(rho(1, 0)), complex_json(rho(1, 1))})});
}

Json to_json(const BlochVector& p) { return Json::array({p.x, p.y, p.z}); }

Json to_json(const FeasibilityReport& r) {
  Json j;
  j["c1_chi_overlap"] = r.c1_chi_overlap;
  j["c2_rho_distance"] = r.c2_rho_distance;
  j["c3_bloch_antipodal"] = r.c3_bloch_antipodal;
  j["eq3_residual"] = r.eq3_residual;
  j["eq9_residual"] = r.eq9_residual;
  j["xi_norm_residual"] = r.xi_norm_residual;
  j["model_defined"] = r.model_defined;
  j["feasible"] = r.feasible;
  return j;
}

Json to_json(const OptimizationResult& r) {
  Json j;
  j["best_objective"] = r.best_objective;
  j["best_p_alive"] = r.best_p_alive;
  j["params"] = Json{{"chi1", to_json(r.chi1)}, {"chi2", to_json(r.chi2)}};
  j["report"] = to_json(r.report);
  j["restart_index"] = r.restart_index;
  j["iterations_total"] = r.iterations_total;
  j["converged"] = r.converged;
  return j;
}

Json to_json(const OracleReport& r) {
  Json j;
  j["samples"] = r.samples;
  j["feasible_count"] = r.feasible_count;
  j["max_feasible_p_alive"] = r.max_feasible_p_alive;
  j["violations_of_bound"] = r.violations_of_bound;
  return j;
}

Json to_json(const std::vector<SweepRow>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    Json j;
    j["a"] = r.a;
    j["lambda"] = r.lambda;
    j["lambda_sq"] = r.lambda_sq;
    j["residual_eq7"] = r.residual;
    out.push_back(std::move(j));
  }
  return out;
}

BipartiteKet ket_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("env_dim") || !j.contains("amp"))
    throw FormatError("ket: expected an object with env_dim and amp");
  if (!j["env_dim"].is_number_integer() || j["env_dim"].get<long long>() < 1)
    throw FormatError("ket: env_dim must be a positive integer");
  const auto d = j["env_dim"].get<std::size_t>();
  const Json& amp = j["amp"];
  if (!amp.is_array() || amp.size() != 2) throw FormatError("ket: amp must have two rows");
  CMatrix m(2, d);
  for (std::size_t q = 0; q < 2; ++q) {
    if (!amp[q].is_array() || amp[q].size() != d) throw FormatError("ket: amp row length must equal env_dim");
    for (std::size_t e = 0; e < d; ++e) m(q, e) = complex_from_json(amp[q][e]);
  }
  const double n = m.frobenius_norm();
  if (std::abs(n - 1.0) > tol::kReconstruction) throw FormatError("ket: amplitudes are not unit norm");
  return BipartiteKet::normalize(std::move(m));
}

CatDensity density_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || !j[1].is_array() || j[0].size() != 2 ||
      j[1].size() != 2)
    throw FormatError("density: expected a 2x2 array of [re, im] pairs");
  CatDensity rho;
  for (std::size_t q = 0; q < 2; ++q)
    for (std::size_t qp = 0; qp < 2; ++qp) rho(q, qp) = complex_from_json(j[q][qp]);
  return rho;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "a,lambda,lambda_sq,residual_eq7\n";
  for (const auto& r : rows)
    out << format_real(r.a) << ',' << format_real(r.lambda) << ',' << format_real(r.lambda_sq) << ','
        << format_real(r.residual) << '\n';
  return out.str();
}

}  // namespace catbound

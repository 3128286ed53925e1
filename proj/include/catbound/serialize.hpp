#pragma once

// JSON / CSV encodings shared by the CLI and the Python bindings.
//
// Ket:      {"env_dim": d, "amp": [[[re, im], ...d], [[re, im], ...d]]}
// Density:  [[[re, im], [re, im]], [[re, im], [re, im]]]
// Bloch:    [x, y, z]

#include <string>
#include <vector>

#include "json.hpp"

#include "catbound/catmodel.hpp"
#include "catbound/optimizer.hpp"
#include "catbound/quantum.hpp"

namespace catbound {

using Json = nlohmann::ordered_json;

/// Raised for structurally invalid input documents.
class FormatError : public Error {
 public:
  using Error::Error;
};

Json to_json(const BipartiteKet& k);
Json to_json(const CatDensity& rho);
Json to_json(const BlochVector& p);
Json to_json(const FeasibilityReport& r);
Json to_json(const OptimizationResult& r);
Json to_json(const OracleReport& r);
Json to_json(const std::vector<SweepRow>& rows);

/// Throws FormatError on malformed input, including a norm more than 1e-10
/// away from 1 (smaller deviations are renormalized).
BipartiteKet ket_from_json(const Json& j);
CatDensity density_from_json(const Json& j);

/// Header `a,lambda,lambda_sq,residual_eq7`, LF line endings, %.17g reals.
std::string sweep_csv(const std::vector<SweepRow>& rows);

std::string format_real(double v);

}  // namespace catbound

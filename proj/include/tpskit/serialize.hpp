#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "tpskit/algebra.hpp"
#include "tpskit/core.hpp"
#include "tpskit/examples.hpp"
#include "tpskit/observables.hpp"
#include "tpskit/tps.hpp"

namespace tpskit {

using Json = nlohmann::json;

// Layouts:
//   matrix         {"rows": r, "cols": c, "data": [[re, im], ...]}  row-major
//   Tps            {"dim": n, "k": k, "l": l, "basis": matrix}  column j*l+i is x_{ji}
//   ObservablePair {"r": matrix, "t": matrix, "hermitian": bool}
//   algebra        {"n": n, "span": [matrix, ...]}
// Malformed input throws InvalidInput naming the offending field.

Json to_json(const ComplexMatrix& m);
Json to_json(const Tps& t);
Json to_json(const ObservablePair& p);
Json to_json(const OperatorAlgebra& a);
Json to_json(const TppVerdict& v);
Json to_json(const SchmidtReport& s);
Json to_json(const AnalysisReport& r);
Json to_json(const ExampleBundle& b);

ComplexMatrix matrix_from_json(const Json& j, const std::string& field = "matrix");
/// A state is a matrix with one column or a bare array of [re, im] pairs.
ComplexMatrix state_from_json(const Json& j, const std::string& field = "state");
Tps tps_from_json(const Json& j, const Tolerance& tol = {});
ObservablePair observable_pair_from_json(const Json& j, const Tolerance& tol = {});
OperatorAlgebra algebra_from_json(const Json& j, const std::string& field = "algebra");

/// Parses text; syntax errors become InvalidInput naming `what`.
Json parse_json(std::string_view text, const std::string& what);

/// Reads and parses a file; unreadable files raise InvalidInput.
Json read_json_file(const std::string& path);

/// Compact dump with a trailing newline; doubles print shortest round-trip.
std::string dump(const Json& j);

}  // namespace tpskit

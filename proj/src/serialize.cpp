#include "tpskit/serialize.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace tpskit {

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::InvalidInput, "field '" + field + "': " + what);
}

const Json& member(const Json& j, const std::string& field, const std::string& key) {
  if (!j.is_object()) bad(field, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) bad(field + "." + key, "missing");
  return *it;
}

Index count(const Json& j, const std::string& field) {
  if (!j.is_number_integer() || j.get<long long>() < 0) bad(field, "expected a nonnegative integer");
  return static_cast<Index>(j.get<long long>());
}

Complex complex_from(const Json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    bad(field, "expected [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Json complex_to(const Complex& c) { return Json::array({c.real(), c.imag()}); }

}  // namespace

Json to_json(const ComplexMatrix& m) {
  Json data = Json::array();
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) data.push_back(complex_to(m(r, c)));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Json to_json(const Tps& t) {
  return {{"dim", t.dim()}, {"k", t.k()}, {"l", t.l()}, {"basis", to_json(t.basis())}};
}

Json to_json(const ObservablePair& p) {
  return {{"r", to_json(p.r())}, {"t", to_json(p.t())}, {"hermitian", p.hermitian()}};
}

Json to_json(const OperatorAlgebra& a) {
  Json span = Json::array();
  for (Index m = 0; m < a.dim(); ++m) span.push_back(to_json(a.element(m)));
  return {{"n", a.dim_space()}, {"span", std::move(span)}};
}

Json to_json(const TppVerdict& v) {
  return {{"is_tpp", v.is_tpp},
          {"k", v.k},
          {"l", v.l},
          {"trivial_shape", v.trivial_shape},
          {"checks",
           {{"commute", v.checks.commute},
            {"join_full", v.checks.join_full},
            {"mutual_commutant", v.checks.mutual_commutant},
            {"trivial_center", v.checks.trivial_center},
            {"star_closed", v.checks.star_closed},
            {"dims_square", v.checks.dims_square}}}};
}

Json to_json(const SchmidtReport& s) {
  return {{"rank", s.rank},
          {"coefficients", s.coefficients},
          {"left_vectors", to_json(s.left_vectors)},
          {"right_vectors", to_json(s.right_vectors)}};
}

Json to_json(const AnalysisReport& r) {
  return {{"schmidt", to_json(r.schmidt)},
          {"product", r.product},
          {"tps_shape", Json::array({r.k, r.l})},
          {"compatibility", r.compatibility},
          {"residuals", r.residuals}};
}

Json to_json(const ExampleBundle& b) {
  Json reports = Json::object();
  for (const auto& [name, report] : b.reports) reports[name] = to_json(report);
  return {{"example", b.name},
          {"ok", b.ok()},
          {"checks", b.checks},
          {"verdicts", b.verdicts},
          {"residuals", b.residuals},
          {"reports", std::move(reports)}};
}

ComplexMatrix matrix_from_json(const Json& j, const std::string& field) {
  const Index rows = count(member(j, field, "rows"), field + ".rows");
  const Index cols = count(member(j, field, "cols"), field + ".cols");
  const Json& data = member(j, field, "data");
  if (!data.is_array()) bad(field + ".data", "expected an array");
  if (static_cast<Index>(data.size()) != rows * cols) {
    bad(field + ".data", "expected " + std::to_string(rows * cols) + " entries, got " +
                             std::to_string(data.size()));
  }
  ComplexMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      const Index at = r * cols + c;
      m(r, c) = complex_from(data[at], field + ".data[" + std::to_string(at) + "]");
    }
  }
  return m;
}

ComplexMatrix state_from_json(const Json& j, const std::string& field) {
  if (j.is_array()) {
    ComplexMatrix v(static_cast<Index>(j.size()), 1);
    for (std::size_t at = 0; at < j.size(); ++at)
      v(static_cast<Index>(at), 0) = complex_from(j[at], field + "[" + std::to_string(at) + "]");
    return v;
  }
  const ComplexMatrix m = matrix_from_json(j, field);
  if (m.cols() != 1) bad(field + ".cols", "a state has exactly one column");
  return m;
}

Tps tps_from_json(const Json& j, const Tolerance& tol) {
  const Index k = count(member(j, "tps", "k"), "tps.k");
  const Index l = count(member(j, "tps", "l"), "tps.l");
  ComplexMatrix basis = matrix_from_json(member(j, "tps", "basis"), "tps.basis");
  if (j.contains("dim") && count(j["dim"], "tps.dim") != basis.rows()) {
    bad("tps.dim", "does not match the basis size");
  }
  return Tps::create(k, l, std::move(basis), tol);
}

ObservablePair observable_pair_from_json(const Json& j, const Tolerance& tol) {
  ComplexMatrix r = matrix_from_json(member(j, "observables", "r"), "observables.r");
  ComplexMatrix t = matrix_from_json(member(j, "observables", "t"), "observables.t");
  if (j.contains("hermitian")) {
    if (!j["hermitian"].is_boolean()) bad("observables.hermitian", "expected a boolean");
    return ObservablePair(std::move(r), std::move(t), j["hermitian"].get<bool>(), tol);
  }
  return ObservablePair(std::move(r), std::move(t), tol);
}

OperatorAlgebra algebra_from_json(const Json& j, const std::string& field) {
  const Index n = count(member(j, field, "n"), field + ".n");
  const Json& span = member(j, field, "span");
  if (!span.is_array()) bad(field + ".span", "expected an array");
  std::vector<ComplexMatrix> elements;
  for (std::size_t m = 0; m < span.size(); ++m) {
    const std::string name = field + ".span[" + std::to_string(m) + "]";
    ComplexMatrix e = matrix_from_json(span[m], name);
    if (e.rows() != n || e.cols() != n) bad(name, "expected an n x n matrix");
    require_finite(e, name);
    elements.push_back(std::move(e));
  }
  return OperatorAlgebra::from_elements(n, elements);
}

Json parse_json(std::string_view text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::InvalidInput, what + ": " + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_json(text.str(), path);
}

std::string dump(const Json& j) { return j.dump() + "\n"; }

}  // namespace tpskit

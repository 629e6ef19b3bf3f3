#include "tpskit/cli.hpp"

#include <cstdint>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tpskit/algebra.hpp"
#include "tpskit/examples.hpp"
#include "tpskit/observables.hpp"
#include "tpskit/refactor.hpp"
#include "tpskit/serialize.hpp"

namespace tpskit {

namespace {

std::pair<Index, Index> parse_shape(const std::string& s) {
  const auto x = s.find('x');
  try {
    if (x != std::string::npos) {
      std::size_t used_k = 0;
      std::size_t used_l = 0;
      const long long k = std::stoll(s.substr(0, x), &used_k);
      const long long l = std::stoll(s.substr(x + 1), &used_l);
      if (used_k == x && used_l == s.size() - x - 1) return {k, l};
    }
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::InvalidInput, "field 'shape': expected KxL, got '" + s + "'");
}

void write_file(const std::string& path, const Json& j) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::InvalidInput, "cannot write " + path);
  f << dump(j);
}

}  // namespace

Tolerance parse_tolerance(const std::string& spec) {
  Tolerance tol;
  std::stringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::InvalidInput, "field 'tol': expected key=value, got '" + item + "'");
    }
    const std::string key = item.substr(0, eq);
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidInput, "field 'tol." + key + "': not a number");
    }
    if (key == "eig") {
      tol.eig_cluster = value;
    } else if (key == "rank") {
      tol.rank_rel = value;
    } else if (key == "res") {
      tol.residual = value;
    } else {
      throw Error(ErrorKind::InvalidInput, "field 'tol': unknown key '" + key + "'");
    }
  }
  tol.validate();
  return tol;
}

bool is_input_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch:
    case ErrorKind::ZeroState:
    case ErrorKind::NonFinite:
    case ErrorKind::InvalidInput:
    case ErrorKind::NotHermitian:
    case ErrorKind::NonCompositeDim:
    case ErrorKind::ShapeTooSmall:
    case ErrorKind::ZeroAlpha:
    case ErrorKind::GridOverflow:
    case ErrorKind::SingularBasis:
      return true;
    default:
      return false;
  }
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tensor product structures: construct, verify, compare, refactor."};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::string tol_spec;
  app.add_option("--seed", seed, "Seed for randomized constructions")->envname("TPSKIT_SEED");
  app.add_option("--tol", tol_spec, "Tolerances as eig=..,rank=..,res=..");

  std::string state_file;
  std::string tps_file;
  auto* analyze = app.add_subcommand("analyze", "Schmidt analysis of a state under a TPS");
  analyze->add_option("--state", state_file)->required();
  analyze->add_option("--tps", tps_file)->required();

  std::string observables_file;
  auto* build = app.add_subcommand("build-tps", "TPS from a standard complete set");
  build->add_option("--observables", observables_file)->required();

  std::string shape;
  std::string mode = "dual";
  std::string prefix;
  bool orthonormal = false;
  auto* refactor = app.add_subcommand("refactor", "TPS making a state product or entangled");
  refactor->add_option("--state", state_file)->required();
  refactor->add_option("--shape", shape, "KxL")->required();
  refactor->add_option("--mode", mode)->check(CLI::IsMember({"product", "entangled", "dual"}));
  refactor->add_flag("--orthonormal", orthonormal);
  refactor->add_option("--out", prefix, "Write PREFIX.<mode>.json instead of stdout");

  std::string a1_file;
  std::string a2_file;
  auto* verify = app.add_subcommand("verify-tpp", "Certify a pair of algebras as a TPP");
  verify->add_option("--a1", a1_file)->required();
  verify->add_option("--a2", a2_file)->required();

  std::string example_name;
  Index degree = 4;
  auto* example = app.add_subcommand("example", "Reproduce a worked example");
  example->add_option("name", example_name)
      ->required()
      ->check(CLI::IsMember({"bell", "bargmann", "com"}));
  example->add_option("--degree", degree, "Exponent grid size for bargmann and com");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    const Tolerance tol = tol_spec.empty() ? Tolerance{} : parse_tolerance(tol_spec);

    if (*analyze) {
      const ComplexMatrix w = state_from_json(read_json_file(state_file));
      const Tps t = tps_from_json(read_json_file(tps_file), tol);
      out << dump(to_json(tpskit::analyze(w, t, tol)));
      return 0;
    }

    if (*build) {
      const ObservablePair p = observable_pair_from_json(read_json_file(observables_file), tol);
      out << dump(to_json(tps_from_observables(p, tol)));
      return 0;
    }

    if (*refactor) {
      const ComplexMatrix w = state_from_json(read_json_file(state_file));
      const auto [k, l] = parse_shape(shape);
      std::vector<std::pair<std::string, Tps>> made;
      if (mode == "product" || mode == "dual")
        made.emplace_back("product", tps_making_state_product(w, k, l, orthonormal, tol));
      if (mode == "entangled" || mode == "dual")
        made.emplace_back("entangled", tps_making_state_entangled(w, k, l, orthonormal, tol));

      Json verdicts = Json::object();
      bool consistent = true;
      for (const auto& [name, t] : made) {
        const bool product = is_product(w, t, tol);
        verdicts[name] = {{"product", product}};
        consistent = consistent && product == (name == "product");
      }
      if (!prefix.empty()) {
        Json files = Json::object();
        for (const auto& [name, t] : made) {
          const std::string path = prefix + "." + name + ".json";
          write_file(path, to_json(t));
          files[name] = path;
        }
        out << dump({{"files", files}, {"verdicts", verdicts}});
      } else if (made.size() == 1) {
        out << dump(to_json(made.front().second));
      } else {
        Json tps = Json::object();
        for (const auto& [name, t] : made) tps[name] = to_json(t);
        out << dump({{"tps", tps}, {"verdicts", verdicts}});
      }
      return consistent ? 0 : 1;
    }

    if (*verify) {
      const OperatorAlgebra a1 = algebra_from_json(read_json_file(a1_file), "a1");
      const OperatorAlgebra a2 = algebra_from_json(read_json_file(a2_file), "a2");
      const TppVerdict v = is_tpp(a1, a2, tol);
      out << dump(to_json(v));
      return v.is_tpp ? 0 : 1;
    }

    if (*example) {
      ExampleBundle b;
      if (example_name == "bell") {
        b = example_bell(seed, tol);
      } else if (example_name == "bargmann") {
        b = example_bargmann(degree, tol);
      } else {
        b = example_center_of_mass(degree, tol);
      }
      out << dump(to_json(b));
      return b.ok() ? 0 : 1;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_input_error(e.kind()) ? 2 : 1;
  }
  return 2;
}

}  // namespace tpskit

// linfty: rational models of mapping spaces from cdga and L-infinity models.
//
// Exit codes: 0 success, 1 validation failure, 2 parse error.  Diagnostics
// are written to stderr as one JSON object.

#include "linfty/all.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using namespace linfty;
using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << text;
}

int fail(const json& diag, int code) {
  std::cerr << diag.dump() << "\n";
  return code;
}

int cmd_check(const std::string& file) {
  ModelSpec spec = parse(read_file(file));
  json problems = json::array();
  Cdga A = build_cdga(spec);
  for (const auto& v : check_cdga(A)) problems.push_back({{"algebra", "cdga"}, {"violation", describe(v)}});
  std::cout << "cdga: dim " << A.dim() << (spec.cdga ? "" : " (ground field)") << "\n";
  if (spec.linf) {
    LInftyAlgebra L = build_linf(spec);
    for (const auto& v : check_linfty(L)) problems.push_back({{"algebra", "linf"}, {"violation", describe(v)}});
    std::cout << "linf: dim " << L.dim() << ", max arity " << L.max_arity() << "\n";
    if (problems.empty()) {
      LInftyAlgebra T = tensor(A, L);
      for (const auto& m : spec.mcs) {
        Element tau = build_mc(spec, A, L, T, m.name);
        Element f = curvature(T, tau);
        if (f.is_zero()) {
          std::cout << "mc " << m.name << ": Maurer-Cartan\n";
        } else {
          problems.push_back({{"mc", m.name}, {"curvature", f.to_string()}});
        }
      }
    }
  }
  if (!problems.empty()) return fail({{"error", "validation"}, {"problems", problems}}, 1);
  std::cout << "ok\n";
  return 0;
}

int cmd_homotopy(const std::string& file, std::string mc, std::optional<int> max_degree, const std::string& json_out) {
  ModelSpec spec = parse(read_file(file));
  if (mc.empty()) mc = default_mc(spec);
  MapOptions opt;
  opt.max_degree = max_degree;
  MappingSpaceReport r = map_model(spec, mc, opt);
  if (json_out == "-") {
    std::cout << to_json(r).dump(2) << "\n";
    return 0;
  }
  std::cout << to_text(r);
  if (!json_out.empty()) write_output(json_out, to_json(r).dump(2) + "\n");
  return 0;
}

int cmd_ce_model(const std::string& file, std::string mc, bool as_json) {
  ModelSpec spec = parse(read_file(file));
  if (mc.empty()) mc = default_mc(spec);
  MappingSpaceReport r = map_model(spec, mc);
  if (as_json) {
    std::cout << json{{"schema_version", kReportSchemaVersion},
                      {"sullivan", to_json(r.sullivan)},
                      {"minimal_model", to_json(r.minimal.model)}}
                     .dump(2)
              << "\n";
    return 0;
  }
  std::cout << to_text(r.sullivan) << "\n";
  if (!r.sullivan_minimal) std::cout << "minimal: " << to_text(r.minimal.model) << "\n";
  return 0;
}

int cmd_example_cp(int n, int m, bool as_json, bool print_spec) {
  std::string text = builtin_cp_inclusion(n, m);
  if (print_spec) {
    std::cout << text;
    return 0;
  }
  MappingSpaceReport r = map_model(parse(text), "tau");
  if (as_json) {
    std::cout << to_json(r).dump(2) << "\n";
  } else {
    std::cout << to_text(r);
  }
  return 0;
}

int cmd_halperin(const std::string& file, bool as_json) {
  ModelSpec spec = parse(read_file(file));
  if (!spec.cdga) throw ValidationError("halperin: file needs a cdga block");
  HalperinReport r = halperin_check(build_presentation(*spec.cdga));
  json j{{"schema_version", kReportSchemaVersion},
         {"holds", r.holds},
         {"no_negative_derivations", r.no_negative_derivations},
         {"isomorphism_verified", r.isomorphism_verified},
         {"regular_sequence_assumed", r.regular_sequence_assumed}};
  json rows = json::array();
  for (const auto& [deg, ker] : r.kernel_dims) {
    rows.push_back({{"degree", deg}, {"kernel", ker}, {"derivation_degree", -deg - 1}, {"derivations", r.derivation_dims.at(-deg - 1)}});
  }
  j["degrees"] = rows;
  if (r.witness) j["witness"] = *r.witness;
  if (as_json) {
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << (r.holds ? "holds" : "fails") << ": pi_odd(aut X) " << (r.holds ? "vanishes" : "is nonzero")
            << " in positive degrees\n";
  std::cout << "negative-degree derivations: " << (r.no_negative_derivations ? "none" : "present") << "\n";
  for (const auto& row : rows) {
    std::cout << "  H_" << row["degree"].get<int>() << ": ker D^pi = " << row["kernel"].get<int>() << ", Der^"
              << row["derivation_degree"].get<int>() << " = " << row["derivations"].get<int>() << "\n";
  }
  std::cout << "isomorphism ker D^pi = Der(A): " << (r.isomorphism_verified ? "verified" : "FAILED") << "\n";
  if (r.witness) std::cout << "witness: " << *r.witness << "\n";
  std::cout << "(the relations are assumed to form a regular sequence)\n";
  return 0;
}

int cmd_verify_path(const std::string& file, const std::string& from, const std::string& to, const std::string& path) {
  ModelSpec spec = parse(read_file(file));
  Cdga A = build_cdga(spec);
  LInftyAlgebra L = build_linf(spec);
  LInftyAlgebra T = tensor(A, L);
  McElement t0 = McElement::make(T, build_mc(spec, A, L, T, from));
  McElement t1 = McElement::make(T, build_mc(spec, A, L, T, to));
  GSimplex lambda = build_path(spec, A, L, T, path);
  if (!verify_mc_path(T, t0, t1, lambda)) {
    json diag{{"error", "validation"}, {"message", "path is not a Maurer-Cartan 1-simplex from " + from + " to " + to}};
    try {
      diag["curvature"] = simplex_curvature(T, lambda).to_string();
    } catch (const Error& e) {
      diag["detail"] = e.what();
    }
    diag["face0"] = face(0, lambda).to_string();
    diag["face1"] = face(1, lambda).to_string();
    return fail(diag, 1);
  }
  std::cout << "verified: " << path << " is a path from " << from << " to " << to << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rational models of mapping spaces"};
  app.require_subcommand(1);

  std::string file, mc, json_out, from, to, path;
  std::optional<int> max_degree;
  bool as_json = false, print_spec = false;
  int n = 0, m = 0;

  auto* check = app.add_subcommand("check", "Validate a model file");
  check->add_option("file", file, "Model file")->required();

  auto* homotopy = app.add_subcommand("homotopy", "Rational homotopy of the mapping space component");
  homotopy->add_option("file", file, "Model file")->required();
  homotopy->add_option("--mc", mc, "Maurer-Cartan element");
  homotopy->add_option("--max-degree", max_degree, "Largest n with pi_{n+1} reported");
  homotopy->add_option("--json", json_out, "Write the JSON report to a file ('-' for stdout)");

  auto* ce = app.add_subcommand("ce-model", "Sullivan model of the component");
  ce->add_option("file", file, "Model file")->required();
  ce->add_option("--mc", mc, "Maurer-Cartan element");
  ce->add_flag("--json", as_json, "JSON output");

  auto* example = app.add_subcommand("example", "Built-in examples");
  example->require_subcommand(1);
  auto* cp = example->add_subcommand("cp", "Inclusion CP^n -> CP^m");
  cp->add_option("n", n, "Source CP^n")->required();
  cp->add_option("m", m, "Target CP^m, m >= n")->required();
  cp->add_flag("--json", as_json, "JSON output");
  cp->add_flag("--print-spec", print_spec, "Print the model file instead of running it");

  auto* halperin = app.add_subcommand("halperin", "Halperin criterion for an F0 presentation");
  halperin->add_option("file", file, "Model file with a cdga block")->required();
  halperin->add_flag("--json", as_json, "JSON output");

  auto* vpath = app.add_subcommand("verify-path", "Check a Maurer-Cartan path certificate");
  vpath->add_option("file", file, "Model file")->required();
  vpath->add_option("--from", from, "Source mc element")->required();
  vpath->add_option("--to", to, "Target mc element")->required();
  vpath->add_option("--path", path, "Path declaration")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*check) return cmd_check(file);
    if (*homotopy) return cmd_homotopy(file, mc, max_degree, json_out);
    if (*ce) return cmd_ce_model(file, mc, as_json);
    if (*cp) return cmd_example_cp(n, m, as_json, print_spec);
    if (*halperin) return cmd_halperin(file, as_json);
    if (*vpath) return cmd_verify_path(file, from, to, path);
  } catch (const ParseError& e) {
    return fail({{"error", "parse"}, {"line", e.pos().line}, {"column", e.pos().column}, {"message", e.message()}}, 2);
  } catch (const OverflowError& e) {
    return fail({{"error", "overflow"}, {"message", e.what()}}, 1);
  } catch (const Error& e) {
    return fail({{"error", "validation"}, {"message", e.what()}}, 1);
  } catch (const std::exception& e) {
    return fail({{"error", "internal"}, {"message", e.what()}}, 1);
  }
  return 1;
}

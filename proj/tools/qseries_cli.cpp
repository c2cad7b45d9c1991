#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "qseries/verify.hpp"

namespace {

using namespace qseries;

// Dense within a finite window, sparse when the series is exact everywhere.
void print_series(std::ostream& os, const TruncatedSeries& f) {
  if (f.bound() == kUnbounded) {
    for (const auto& [e, c] : f.entries())
      os << e << "\t" << rat_str_min(c) << "\n";
    return;
  }
  auto it = f.entries().begin();
  for (Exp e = f.valuation(); e < f.bound(); ++e) {
    if (it != f.entries().end() && it->first == e) {
      os << e << "\t" << rat_str_min(it->second) << "\n";
      ++it;
    } else {
      os << e << "\t0\n";
    }
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw error("cannot write file: " + path);
  out << j.dump(2) << "\n";
}

void emit_series(const TruncatedSeries& f, const std::string& json_path) {
  if (json_path.empty())
    print_series(std::cout, f);
  else
    write_json_file(json_path, series_to_json(f));
}

}  // namespace

int main(int argc, char** argv) {
  using namespace qseries;

  CLI::App app{"exact q-series expansions and congruence verification"};
  app.require_subcommand(1);

  std::string form_text, eta_text, json_path, chi_text, profile;
  Exp bound = 0, ell = 0, t_index = 0;
  long lambda = 0, weight = 0, n_max = 0;
  std::vector<std::string> check_list;
  std::vector<Exp> ell_list;
  bool run_full = false;
  std::string report_path;

  CLI::App* expand = app.add_subcommand("expand", "print the expansion of a form");
  expand->add_option("--form", form_text, "named form or product expression");
  expand->add_option("--eta", eta_text, "eta quotient, e.g. \"eta(2t)^1 * eta(1t)^-2\"");
  expand->add_option("--bound", bound, "exponent bound of the window")->default_val(32);
  expand->add_option("--json", json_path, "write the series as JSON to this file");

  CLI::App* hecke_cmd = app.add_subcommand("hecke", "apply a half-integral weight Hecke operator");
  hecke_cmd->add_option("--form", form_text, "input form expression")->required();
  hecke_cmd->add_option("--ell", ell, "odd prime index of T(ell^2)")->required();
  hecke_cmd->add_option("--lambda", lambda, "integer lambda for weight lambda + 1/2")->required();
  hecke_cmd->add_option("--chi", chi_text, "character as a Kronecker discriminant");
  hecke_cmd->add_option("--bound", bound, "expansion bound of the input")->default_val(256);
  hecke_cmd->add_option("--json", json_path, "write the image as JSON to this file");

  CLI::App* shimura_cmd = app.add_subcommand("shimura", "apply the index t lift");
  shimura_cmd->add_option("--form", form_text, "input form expression")->required();
  shimura_cmd->add_option("--t", t_index, "squarefree lift index")->required();
  shimura_cmd->add_option("--k", weight, "integer weight parameter")->required();
  shimura_cmd->add_option("--bound", bound, "expansion bound of the input")->default_val(4096);
  shimura_cmd->add_option("--json", json_path, "write the lift as JSON to this file");

  CLI::App* verify_cmd = app.add_subcommand("verify", "run congruence checks");
  verify_cmd->add_option("--check", check_list, "check ids (repeatable, comma separated)")
      ->delimiter(',');
  verify_cmd->add_option("--ell", ell_list, "primes to check (repeatable)");
  verify_cmd->add_option("--n-max", n_max, "coefficient range for theorem checks");
  verify_cmd->add_option("--bound", bound, "series bound for identity checks");
  verify_cmd->add_option("--profile", profile, "quick or full suite");
  verify_cmd->add_flag("--all", run_full, "run the full suite");
  verify_cmd->add_option("--json", json_path, "write the report as JSON to this file");

  CLI::App* report_cmd = app.add_subcommand("report", "render a saved JSON report");
  report_cmd->add_option("file", report_path, "report file written by verify --json")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
      return app.exit(e);
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (expand->parsed()) {
      if (form_text.empty() == eta_text.empty())
        throw error("expand needs exactly one of --form or --eta");
      FormCache cache;
      TruncatedSeries f = eta_text.empty()
                              ? cache.get(form_text, bound)
                              : eta_expand(parse_eta_quotient(eta_text), bound);
      emit_series(f, json_path);
      return 0;
    }

    if (hecke_cmd->parsed()) {
      FormCache cache;
      TruncatedSeries f = cache.get(form_text, bound);
      QuadChar chi = QuadChar::trivial();
      if (!chi_text.empty()) chi = QuadChar::kron(std::stol(chi_text));
      emit_series(hecke(f, HeckeSpec{ell, lambda, chi}), json_path);
      return 0;
    }

    if (shimura_cmd->parsed()) {
      FormCache cache;
      TruncatedSeries f = cache.get(form_text, bound);
      emit_series(shimura(f, t_index, weight), json_path);
      return 0;
    }

    if (verify_cmd->parsed()) {
      FormCache cache;
      std::vector<CongruenceReport> reports;
      if (!profile.empty()) {
        reports = run_all(cache, profile);
      } else if (run_full) {
        reports = run_all(cache, "full");
      } else if (!check_list.empty()) {
        for (const auto& id : check_list)
          for (auto& r : run_check(cache, id, ell_list, n_max, bound))
            reports.push_back(std::move(r));
      } else {
        reports = run_all(cache, "quick");
      }
      std::cout << render_report_table(reports);
      if (!json_path.empty()) write_json_file(json_path, reports_to_json(reports));
      return reports_exit_code(reports);
    }

    if (report_cmd->parsed()) {
      std::ifstream in(report_path);
      if (!in) throw error("cannot read file: " + report_path);
      json j = json::parse(in, nullptr, false);
      if (j.is_discarded()) throw error("malformed report json: not valid JSON");
      std::vector<CongruenceReport> reports = reports_from_json(j);
      std::cout << render_report_table(reports);
      return reports_exit_code(reports);
    }
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

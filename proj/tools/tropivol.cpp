// tropivol: exact max-plus volumes, dimensional integrals, and base-change
// conductor calculations on cell-presented definable sets.
//
//   tropivol <verb> <file.sx> [--json] [--oracle-lmax N] [--oracle-imax N]
//   tropivol gen <kind> [count]     (seeded by TROPIVOL_SEED)

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tropivol/dsl.hpp"
#include "tropivol/gen.hpp"

namespace {

// Coefficient magnitudes are unrestricted, but the exact integer search
// degrades beyond machine scale; warn past 2^32.
void warn_large_integers(const tropivol::SExpr& e, const std::string& path) {
  static const tropivol::Int threshold = tropivol::Int(1) << 32;
  if (e.is_integer()) {
    if (abs(e.integer_value()) > threshold)
      std::cerr << path << ":" << e.loc().line << ": warning: coefficient exceeds 2^32; "
                << "expect slow exact searches\n";
    return;
  }
  if (e.is_list())
    for (const auto& item : e.items()) warn_large_integers(item, path);
}

int run_verb(const std::string& verb_name, const std::string& path, bool json, int oracle_imax,
             int oracle_lmax) {
  auto verb = tropivol::dsl::verb_of(verb_name);
  if (!verb) {
    std::cerr << "error: unknown verb '" << verb_name << "'\n";
    return 1;
  }
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open " << path << "\n";
    return 1;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    auto doc = tropivol::parse_document(buf.str());
    for (const auto& form : doc) warn_large_integers(form, path);
    tropivol::dsl::Command cmd = tropivol::dsl::make_command(*verb, doc);
    cmd.format = json ? tropivol::dsl::OutputFormat::Json : tropivol::dsl::OutputFormat::Text;
    cmd.oracle_imax = oracle_imax;
    cmd.oracle_lmax = oracle_lmax;

    tropivol::dsl::RunResult result = tropivol::dsl::run(cmd);
    std::cout << result.output;
    return result.exit_code;
  } catch (const tropivol::ParseError& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact dimensional motivic integration on cell-presented sets"};
  app.require_subcommand(1);

  std::string file;
  bool json = false;
  int oracle_imax = 0, oracle_lmax = 0;

  const char* verbs[] = {"vol",     "integrate", "fubini", "cov",        "motivic",
                         "compare", "conductor", "trace",  "additivity", "snf"};
  std::vector<CLI::App*> subs;
  for (const char* v : verbs) {
    CLI::App* sub = app.add_subcommand(v);
    sub->add_option("file", file, "input .sx document")->required();
    sub->add_flag("--json", json, "emit JSON instead of text");
    if (std::string(v) == "vol") {
      sub->add_option("--oracle-imax", oracle_imax, "also run the truncation oracle");
      sub->add_option("--oracle-lmax", oracle_lmax, "truncation levels for the oracle");
    }
    subs.push_back(sub);
  }

  std::string gen_kind;
  int gen_count = 5;
  CLI::App* gen = app.add_subcommand("gen", "emit a seeded random corpus");
  gen->add_option("kind", gen_kind, "cells | integrals | products | maps | sequences")
      ->required();
  gen->add_option("count", gen_count, "number of documents");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    unsigned long seed = 0;
    if (const char* env = std::getenv("TROPIVOL_SEED")) seed = std::strtoul(env, nullptr, 10);
    try {
      std::cout << tropivol::gen::corpus(gen_kind, gen_count, seed);
      return 0;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  for (size_t i = 0; i < subs.size(); ++i)
    if (subs[i]->parsed()) return run_verb(verbs[i], file, json, oracle_imax, oracle_lmax);
  return 1;
}

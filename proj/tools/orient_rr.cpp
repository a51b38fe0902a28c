// orient-rr: runs scripts and verification sweeps, printing JSON or text.

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "orr/dsl.hpp"
#include "orr/rr.hpp"

namespace {

using json = nlohmann::ordered_json;

struct Flags {
  std::string theory = "additive";
  int truncation = 10;
  int max_dim = 3;
  bool json = false;
  bool text = false;
};

int report_parse_error(const orr::dsl::ParseError& e, const std::string& source, bool as_json) {
  std::cerr << source << ":" << e.line() << ":" << e.column() << ": " << orr::to_string(e.code()) << ": " << e.what()
            << "\n";
  if (as_json) {
    json out;
    out["version"] = "1";
    out["error"] = {{"code", std::string(orr::to_string(e.code()))},
                    {"line", e.line()},
                    {"column", e.column()},
                    {"message", e.what()}};
    std::cout << out.dump(2) << "\n";
  }
  return 2;
}

int execute(const std::string& text, const std::string& source, const Flags& f, bool as_json) {
  orr::dsl::Script script;
  try {
    script = orr::dsl::parse(text, f.theory);
  } catch (const orr::dsl::ParseError& e) {
    return report_parse_error(e, source, as_json);
  }
  orr::dsl::RunOptions opt;
  opt.theory = f.theory;
  opt.truncation = f.truncation;
  opt.max_dim = f.max_dim;
  opt.threads = orr::default_threads();
  try {
    const orr::dsl::RunResult r = orr::dsl::run(script, opt);
    if (as_json)
      std::cout << r.report.dump(2) << "\n";
    else
      std::cout << orr::dsl::render_text(r.report);
    return r.exit_code;
  } catch (const std::exception& e) {
    std::cerr << source << ": internal error: " << e.what() << "\n";
    return 3;
  }
}

bool read_input(const std::string& path, std::string& out) {
  if (path == "-") {
    out.assign(std::istreambuf_iterator<char>(std::cin), {});
    return true;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"orient-rr: oriented cohomology and Riemann-Roch checks"};
  app.require_subcommand(1);
  Flags f;
  auto add_common = [&f](CLI::App* a) {
    a->add_option("--theory", f.theory, "additive | multiplicative | universal:k");
    a->add_option("--truncation,--order", f.truncation, "series truncation order")->check(CLI::Range(1, 64));
    a->add_option("--max-dim", f.max_dim, "projective dimension bound for sweeps")->check(CLI::Range(1, 6));
    a->add_flag("--json", f.json, "print the JSON report");
    a->add_flag("--text", f.text, "print the plain-text report");
  };
  add_common(&app);

  std::string path = "-";
  CLI::App* run = app.add_subcommand("run", "run a script file ('-' for stdin)");
  run->add_option("script", path, "script path");
  add_common(run);

  CLI::App* print = app.add_subcommand("print", "pretty-print a script");
  print->add_option("script", path, "script path");
  add_common(print);

  CLI::App* check = app.add_subcommand("check", "run a built-in verification");
  check->require_subcommand(1);
  add_common(check);
  CLI::App* grr = check->add_subcommand("grr", "Riemann-Roch sweep over all orientation pairs");
  add_common(grr);
  CLI::App* fgl = check->add_subcommand("fgl", "formal group law axioms for every orientation");
  add_common(fgl);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*check) {
    const std::string text = *grr ? "check grr max_dim " + std::to_string(f.max_dim) + ";\n" : "check fgl;\n";
    return execute(text, "check", f, !f.text);
  }

  std::string text;
  if (!read_input(path, text)) {
    std::cerr << "cannot read " << path << "\n";
    return 2;
  }
  const std::string source = path == "-" ? "<stdin>" : path;
  if (*print) {
    try {
      std::cout << orr::dsl::print(orr::dsl::parse(text, f.theory));
      return 0;
    } catch (const orr::dsl::ParseError& e) {
      return report_parse_error(e, source, f.json);
    }
  }
  return execute(text, source, f, f.json && !f.text);
}

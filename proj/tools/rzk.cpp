#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "rzk/session.hpp"

namespace {

int run_file(const std::string& path, const rzk::RunConfig& config, const std::string& json_path,
             bool want_suite) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot open " << path << "\n";
    return 2;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  rzk::SessionAst ast;
  try {
    ast = rzk::parse_session(buf.str());
  } catch (const rzk::SyntaxError& e) {
    std::cerr << path << ":" << e.line << ":" << e.column << ": " << e.what();
    if (!e.expected.empty()) std::cerr << " (expected " << e.expected << ")";
    std::cerr << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return 2;
  }

  if (want_suite) {
    bool has_suite = false;
    for (const auto& st : ast.statements)
      if (std::holds_alternative<rzk::SuiteStmt>(st.body)) has_suite = true;
    if (!has_suite) std::cerr << "note: " << path << " declares no suite statements\n";
  }

  auto started = std::chrono::steady_clock::now();
  rzk::SessionResult res;
  try {
    res = rzk::run_session(ast, config);
  } catch (const std::exception& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return 2;
  }
  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - started)
                     .count();

  if (!json_path.empty()) {
    std::ofstream out(json_path);
    out << res.report.dump(2) << "\n";
  }
  std::cout << path << ": " << res.yes << " yes, " << res.no << " no, " << res.unknown
            << " unknown, " << res.errors << " errors (" << elapsed << " ms)\n";
  for (const auto& e : res.report["entries"]) {
    std::string v = e["verdict"].get<std::string>();
    if (v == "no" || v == "error")
      std::cout << "  line " << e["line"] << " [" << e["kind"].get<std::string>() << "] "
                << e["name"].get<std::string>() << ": " << v << "\n";
  }
  return res.exit_code();
}

int repl(const rzk::RunConfig& config) {
  std::cout << "rzk repl; statements end with ';', blank line quits\n";
  std::string buffer, line, history;
  while (std::getline(std::cin, line)) {
    if (line.empty() && buffer.empty()) break;
    buffer += line + "\n";
    if (buffer.find(';') == std::string::npos) continue;
    try {
      // re-run accumulated declarations plus the new statement each round:
      // sessions are cheap at desk scale and the environment stays coherent
      rzk::SessionAst ast = rzk::parse_session(history + buffer);
      rzk::SessionResult res = rzk::run_session(ast, config);
      const auto& entries = res.report["entries"];
      if (!entries.empty()) {
        const auto& e = entries[entries.size() - 1];
        std::cout << "[" << e["kind"].get<std::string>() << "] "
                  << e["name"].get<std::string>() << ": " << e["verdict"].get<std::string>()
                  << "\n";
        if (e["detail"].contains("realizer"))
          std::cout << "  realizer: " << e["detail"]["realizer"].get<std::string>() << "\n";
        if (e["detail"].contains("normal_form"))
          std::cout << "  normal form: " << e["detail"]["normal_form"].get<std::string>()
                    << "\n";
      }
      history += buffer;
    } catch (const std::exception& ex) {
      std::cout << "error: " << ex.what() << "\n";
    }
    buffer.clear();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rzk: a realizability workbench over the SK term pca"};
  app.require_subcommand(1);

  rzk::RunConfig config;
  std::string json_path;
  app.add_option("--fuel", config.fuel, "reduction step budget (default 10000)");
  app.add_option("--depth", config.depth, "realizer search depth (default 7)");
  app.add_option("--seed", config.seed, "seed for randomized suites");
  app.add_option("--json", json_path, "write the JSON report to this path");
  app.add_option("--jobs", config.jobs, "worker threads for independent queries");

  std::string check_file, suite_file;
  CLI::App* check = app.add_subcommand("check", "run a session file");
  check->add_option("file", check_file, "session file (.rzk)")->required();
  check->fallthrough();
  CLI::App* suite = app.add_subcommand("suite", "run a suite session file");
  suite->add_option("file", suite_file, "session file (.rzk)")->required();
  suite->fallthrough();
  CLI::App* repl_cmd = app.add_subcommand("repl", "interactive session");
  repl_cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (check->parsed()) return run_file(check_file, config, json_path, false);
  if (suite->parsed()) return run_file(suite_file, config, json_path, true);
  if (repl_cmd->parsed()) return repl(config);
  return 2;
}

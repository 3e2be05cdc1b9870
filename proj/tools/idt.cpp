// idt: check datatype and program declarations, evaluate expressions, or run a REPL.

#include <unistd.h>

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "idt/session.hpp"

using idt::Session;
using idt::SessionOptions;
using idt::Status;

namespace {

bool useColor() { return std::getenv("NO_COLOR") == nullptr && isatty(STDERR_FILENO); }

int code(Status s) { return static_cast<int>(s); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Elaborator for inductive families described by codes"};
  app.require_subcommand(1);

  SessionOptions opt;
  opt.color = useColor();
  std::vector<std::string> files;
  std::string expr;
  bool noRecheck = false;

  auto common = [&](CLI::App* sc) {
    sc->add_flag("--show-codes", opt.showCodes, "print each datatype's code");
    sc->add_flag("--emit-trace", opt.emitTrace, "print the elaboration trace of each datatype");
    sc->add_flag("--no-recheck", noRecheck, "skip kernel re-checking of elaboration output");
  };

  auto* check = app.add_subcommand("check", "elaborate files");
  common(check);
  check->add_option("files", files, "source files")->required()->check(CLI::ExistingFile);

  auto* elab = app.add_subcommand("elab", "elaborate files and print datatype codes");
  common(elab);
  elab->add_option("files", files, "source files")->required()->check(CLI::ExistingFile);

  auto* eval = app.add_subcommand("eval", "load files and print the normal form of an expression");
  common(eval);
  eval->add_option("-e,--expr", expr, "expression")->required();
  eval->add_option("files", files, "source files")->check(CLI::ExistingFile);

  auto* repl = app.add_subcommand("repl", "interactive session (:t e, :eq a b, :load f, :q)");
  common(repl);
  repl->add_option("files", files, "source files")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return code(Status::InputFailed);
  }

  opt.recheck = !noRecheck;
  if (elab->parsed()) opt.showCodes = true;
  Session s(opt);
  Status st = s.loadFiles(files, std::cout, std::cerr);
  if (st != Status::Ok) return code(st);

  if (eval->parsed()) {
    try {
      std::cout << s.evalExpr(expr) << "\n";
    } catch (const idt::SyntaxError& e) {
      std::cerr << s.formatSyntax(e, "-e");
      return code(Status::InputFailed);
    } catch (const idt::ElabError& e) {
      std::cerr << s.formatError(e, "-e");
      return code(Status::ElabFailed);
    }
  } else if (repl->parsed()) {
    bool tty = isatty(STDIN_FILENO);
    std::string line;
    for (;;) {
      if (tty) std::cout << "> " << std::flush;
      if (!std::getline(std::cin, line)) break;
      if (!s.replLine(line, std::cout, std::cerr)) break;
    }
  }
  return code(Status::Ok);
}

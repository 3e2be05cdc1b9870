#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "idt/generics.hpp"

namespace idt {

struct SessionOptions {
  bool recheck = true;
  bool showCodes = false;
  bool emitTrace = false;
  bool color = false;
};

/** Exit statuses of the driver. */
enum class Status { Ok = 0, ElabFailed = 1, InputFailed = 2 };

class Session {
 public:
  explicit Session(SessionOptions o = {}) : opt_(o) {}

  /** Processes every declaration of each file in order; stops at the first failure. */
  Status loadFiles(const std::vector<std::string>& paths, std::ostream& out, std::ostream& err);
  Status loadText(const std::string& text, const std::string& origin, std::ostream& out, std::ostream& err);

  /** Elaborates one declaration; the scope is unchanged when it throws. */
  void declare(const Decl& d, std::ostream& out);

  /** Normal form of a synthesizable expression. */
  std::string evalExpr(const std::string& src);
  std::string typeOf(const std::string& src);
  /** `t1 t2`: decides equality with the derived procedure for their type. */
  std::string decideEq(const std::string& src);

  /** Handles one REPL line; returns false on `:q`. */
  bool replLine(const std::string& line, std::ostream& out, std::ostream& err);

  /** Rebuilds every global from its stored type and term with full kernel checks. */
  void recheckFromScratch() const;

  std::string codeDump(const std::string& data) const;
  std::string formatError(const ElabError& e, const std::string& origin) const;
  std::string formatSyntax(const SyntaxError& e, const std::string& origin) const;

  const Scope& scope() const { return scope_; }
  Scope& scope() { return scope_; }
  DerivingRegistry& registry() { return reg_; }

 private:
  SessionOptions opt_;
  Scope scope_;
  DerivingRegistry reg_;

  std::string errorWord() const;
};

}  // namespace idt

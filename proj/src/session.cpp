#include "idt/session.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "idt/labels.hpp"

namespace idt {

namespace {

std::string where(const std::string& origin, const Span& sp) {
  std::string s = origin.empty() ? "<input>" : origin;
  if (sp.valid()) s += ":" + std::to_string(sp.line) + ":" + std::to_string(sp.col);
  return s;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string Session::errorWord() const { return opt_.color ? "\x1b[1;31merror\x1b[0m" : "error"; }

std::string Session::formatError(const ElabError& e, const std::string& origin) const {
  std::string s = where(origin, e.span) + ": " + errorWord() + "[" + errName(e.kind) + "]: " + e.what() + "\n";
  for (auto& t : e.trail) s += "  while: " + t + "\n";
  return s;
}

std::string Session::formatSyntax(const SyntaxError& e, const std::string& origin) const {
  return where(origin, e.span) + ": " + errorWord() + "[Syntax]: " + e.what() + "\n";
}

std::string Session::codeDump(const std::string& d) const {
  const DataInfo& di = scope_.data.at(d);
  std::vector<std::string> names = di.paramNames;
  names.insert(names.end(), di.indexNames.begin(), di.indexNames.end());
  return printCode(resugarAt(scope_, static_cast<int>(names.size()), di.code), names, di.unindexed());
}

void Session::declare(const Decl& d, std::ostream& out) {
  Scope work = scope_;
  if (auto* dd = std::get_if<DataDecl>(&d)) {
    TraceNode trace;
    DataOptions o;
    o.recheck = opt_.recheck;
    if (opt_.emitTrace) o.trace = &trace;
    elabData(work, *dd, o);
    if (work.data.at(dd->name).unindexed()) {
      try {
        addGenerics(work, dd->name, opt_.recheck);
      } catch (ElabError& e) {
        throw ElabError(e.kind, dd->span, e.trail, e.what());
      }
    }
    runDeriving(work, *dd, reg_);
    commitScope(scope_, work);
    if (opt_.emitTrace) out << renderTrace(trace);
    if (opt_.showCodes) out << dd->name << " = " << codeDump(dd->name) << "\n";
  } else {
    elabDefine(work, std::get<LetDecl>(d), opt_.recheck);
    commitScope(scope_, work);
  }
}

Status Session::loadText(const std::string& text, const std::string& origin, std::ostream& out, std::ostream& err) {
  std::vector<Decl> decls;
  try {
    decls = parseFile(text);
  } catch (const SyntaxError& e) {
    err << formatSyntax(e, origin);
    return Status::InputFailed;
  }
  for (auto& d : decls) {
    try {
      declare(d, out);
    } catch (const ElabError& e) {
      err << formatError(e, origin);
      return Status::ElabFailed;
    }
  }
  return Status::Ok;
}

Status Session::loadFiles(const std::vector<std::string>& paths, std::ostream& out, std::ostream& err) {
  for (auto& p : paths) {
    std::ifstream f(p, std::ios::binary);
    if (!f) {
      err << p << ": " << errorWord() << "[Io]: cannot read file\n";
      return Status::InputFailed;
    }
    std::stringstream ss;
    ss << f.rdbuf();
    Status st = loadText(ss.str(), p, out, err);
    if (st != Status::Ok) return st;
  }
  return Status::Ok;
}

std::string Session::evalExpr(const std::string& src) {
  Ctx ctx(&scope_.g);
  auto [t, T] = elabSynth(scope_, ctx, parseTerm(src), opt_.recheck);
  return display(scope_, ctx, normalize(ctx, t));
}

std::string Session::typeOf(const std::string& src) {
  Ctx ctx(&scope_.g);
  auto [t, T] = elabSynth(scope_, ctx, parseTerm(src), opt_.recheck);
  return display(scope_, ctx, ctx.quote(T));
}

std::string Session::decideEq(const std::string& src) {
  ExtP e = parseTerm(src);
  if (e->k != EK::App)
    throw ElabError(EErr::CannotSynthesize, e->span, {"decide equality"},
                    "expected two arguments; parenthesize compound terms as :eq (t1) (t2)");
  Ctx ctx(&scope_.g);
  auto [x, X] = elabSynth(scope_, ctx, e->a[0], opt_.recheck);
  TermP y = elabCheck(scope_, ctx, e->a[1], X, opt_.recheck);
  auto proc = eqForType(scope_, X);
  if (!proc)
    throw ElabError(EErr::DerivingUnsupported, e->span, {"decide equality"},
                    "no derived equality for " + display(scope_, ctx, ctx.quote(X)) + "; add `deriving Eq`");
  return (*proc)(ctx.eval(x), ctx.eval(y)) == Decision::Equal ? "equal" : "not equal";
}

bool Session::replLine(const std::string& raw, std::ostream& out, std::ostream& err) {
  std::string line = trim(raw);
  if (line.empty()) return true;
  try {
    if (line == ":q" || line == ":quit") return false;
    if (line.rfind(":t ", 0) == 0) {
      out << typeOf(line.substr(3)) << "\n";
    } else if (line.rfind(":eq ", 0) == 0) {
      out << decideEq(line.substr(4)) << "\n";
    } else if (line.rfind(":load ", 0) == 0) {
      loadFiles({trim(line.substr(6))}, out, err);
    } else if (line[0] == ':') {
      err << errorWord() << ": unknown command " << line.substr(0, line.find(' ')) << " (:t, :eq, :load, :q)\n";
    } else {
      out << evalExpr(line) << "\n";
    }
  } catch (const ElabError& e) {
    err << formatError(e, "");
  } catch (const SyntaxError& e) {
    err << formatSyntax(e, "");
  }
  return true;
}

void Session::recheckFromScratch() const {
  Globals fresh;
  for (auto& n : scope_.g.order) {
    const Global& g = scope_.g.m.at(n);
    addGlobal(fresh, n, g.type, g.term, true);
  }
}

}  // namespace idt

#pragma once

#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "idt/term.hpp"

namespace idt {

// External terms -------------------------------------------------------------

enum class EK {
  Var,      // s; reserved builtins and code constructors ('var, 'Pi, ...) are Vars too
  Num,      // n
  Tag,      // 'tag
  UnitVal,  // ()
  App,      // a0 a1
  Lam,      // \s. a0
  Pi,       // (s : a0) -> a1; s empty for A -> B
  Sigma,    // (s : a0) * a1; s empty for A * B
  Times,    // a0 '* a1
  EqT,      // a0 == a1
  Ann,      // (a0 : a1)
  Pair,     // (a0, a1)
  Tuple,    // [a0 a1 ... an]
  EnumLit,  // {names}
  ElimLit,  // [names_i -> a_i, ...]
  DLabel,   // <s args>, names[i] is "p", "i" or "c:<var>"
  PLabel,   // <s a1.. : a0>
};

struct Ext;
using ExtP = std::shared_ptr<const Ext>;

struct Ext {
  EK k;
  std::string s;
  long n = 0;
  std::vector<ExtP> a;
  std::vector<std::string> names;
  Span span;
};

ExtP emk(EK k, std::vector<ExtP> a = {}, std::string s = {}, Span sp = {});
ExtP evar(const std::string& x, Span sp = {});
ExtP eapp(ExtP f, ExtP x);

/** Structural equality ignoring spans. */
bool extEq(const ExtP& x, const ExtP& y);

/** Head and arguments of an application spine. */
std::pair<ExtP, std::vector<ExtP>> spine(const ExtP& e);

// Declarations ---------------------------------------------------------------

struct Binder {
  std::string name;
  ExtP type;
  Span span;
};

struct PatArg {
  enum Kind { Plain, Index, Constraint } kind = Plain;
  ExtP term;        // the pattern term (Plain / Index) or the constraint value
  std::string var;  // constrained index variable
  Span span;
};

struct Pattern {
  std::string head;
  std::vector<PatArg> args;
  Span span;
};

struct Constructor {
  std::string tag;
  std::vector<Binder> args;
  Span span;
};

struct ByBlock;

/** A clause `pat => con` or a nested `pat by case|rec x` block. */
struct DataEntry {
  Pattern pat;
  std::shared_ptr<Constructor> con;  // set for clauses
  std::shared_ptr<ByBlock> by;       // set for by-blocks
};

struct ByBlock {
  bool rec = false;
  std::string var;
  std::vector<DataEntry> body;
};

struct DataDecl {
  std::string name;
  std::vector<Binder> params, indices;
  std::vector<DataEntry> body;
  std::vector<std::string> deriving;
  Span span;
};

struct Program {
  Pattern pat;
  ExtP rhs;  // set for `=> e`
  bool rec = false;
  std::string var;  // set for `by`
  std::vector<Program> subs;
  Span span;
};

struct LetDecl {
  std::string name;
  std::vector<Binder> params;
  ExtP result;
  Program prog;
  Span span;
};

using Decl = std::variant<DataDecl, LetDecl>;

bool declEq(const Decl& x, const Decl& y);

// Parsing --------------------------------------------------------------------

struct SyntaxError : std::runtime_error {
  Span span;
  std::set<std::string> expected;
  SyntaxError(Span sp, std::set<std::string> exp, const std::string& msg)
      : std::runtime_error(msg), span(sp), expected(std::move(exp)) {}
};

std::vector<Decl> parseFile(const std::string& text);
ExtP parseTerm(const std::string& text);

// Printing -------------------------------------------------------------------

std::string printExt(const ExtP& e);
std::string printDecl(const Decl& d);
std::string printFile(const std::vector<Decl>& ds);

struct PrintOptions {
  bool unitVarI = false;    // print 'varI () as 'var
  bool natDecimal = false;  // print closed zero/suc chains as numerals
};

/** Core term to named external syntax; `names` lists the context, innermost last. */
ExtP toExt(const TermP& t, const std::vector<std::string>& names, const PrintOptions& opt = {});
std::string printTerm(const TermP& t, const std::vector<std::string>& names, const PrintOptions& opt = {});
/** Dump grammar for description codes. */
std::string printCode(const TermP& code, const std::vector<std::string>& names, bool unindexed);

}  // namespace idt

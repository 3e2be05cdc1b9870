#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "idt/term.hpp"

namespace idt {

struct Value;
using V = std::shared_ptr<const Value>;
struct Globals;

struct EnvNode {
  V v;
  std::shared_ptr<const EnvNode> next;
};

struct Env {
  std::shared_ptr<const EnvNode> head;
  int size = 0;
  const Globals* g = nullptr;
  Env push(V v) const { return Env{std::make_shared<EnvNode>(EnvNode{std::move(v), head}), size + 1, g}; }
  const V& at(int index) const;
};

struct Closure {
  Env env;
  TermP body;
  std::function<V(V)> native;
  std::string name;
};
using CloP = std::shared_ptr<const Closure>;

/** One stuck eliminator in a neutral spine. */
struct Elim {
  K k;
  std::vector<V> a;
};

struct Value {
  K k;
  int n = 0;           // Set level, or the head level of a neutral
  std::string s;       // names, tags, hints; a non-empty s on a neutral means an opaque global head
  std::vector<V> a;
  CloP clo;            // Pi / Sigma codomain, Lam body
  std::vector<Elim> sp;  // neutral spine, innermost first
  std::string tel;
};

V vmk(K k, std::vector<V> a = {}, std::string s = {}, int n = 0);
V vvar(int level);
V vset(int l);
V vpi(const std::string& x, V dom, std::function<V(V)> cod);
V vsigma(const std::string& x, V dom, std::function<V(V)> cod);
V vlam(const std::string& x, std::function<V(V)> body);
V vunit();
V vtt();

struct Global {
  std::string name;
  TermP type;
  TermP term;  // null when opaque
  V vtype;
  V value;     // null when opaque
};

struct Globals {
  std::map<std::string, Global> m;
  std::vector<std::string> order;
  const Global* find(const std::string& n) const {
    auto it = m.find(n);
    return it == m.end() ? nullptr : &it->second;
  }
};

// Evaluation -----------------------------------------------------------------

V eval(const Env& env, const TermP& t);
V vapp(const V& f, const V& x);
V applyClo(const CloP& c, const V& x);
V vfst(const V& p);
V vsnd(const V& p);

V vInterp(const V& D, const V& X);
V vIInterp(const V& I, const V& D, const V& X);
V vAll(const V& D, const V& X, const V& P, const V& d);
V vIAll(const V& I, const V& D, const V& X, const V& P, const V& d);
V vIMuFam(const V& I, const V& R);  // \j. IMu I R j
V vPiEnum(const V& E, const V& P);

/** Converts a value to a beta/iota-normal term at binder depth `depth`. */
TermP readback(int depth, const V& v);

/** Looks up the index type of a description label value. */
V labelIndexTypeV(const V& dlabel);

// Typing ---------------------------------------------------------------------

enum class KErr { UnboundVariable, NotAFunction, NotAPair, UniverseMismatch, TypeMismatch };
const char* kerrName(KErr e);

struct KernelError : std::runtime_error {
  KErr kind;
  TermP term;
  KernelError(KErr k, TermP t, const std::string& msg) : std::runtime_error(msg), kind(k), term(std::move(t)) {}
};

struct CtxEntry {
  std::string name;
  V type;
  V value;  // null for a declaration
};

class Ctx {
 public:
  explicit Ctx(const Globals* g) { env_.g = g; }
  const Globals* globals() const { return env_.g; }
  int depth() const { return static_cast<int>(entries_.size()); }
  const Env& env() const { return env_; }
  const std::vector<CtxEntry>& entries() const { return entries_; }
  /** Entry for de Bruijn index `i`. */
  const CtxEntry& at(int i) const { return entries_[entries_.size() - 1 - i]; }
  Ctx extend(const std::string& name, V type) const;
  Ctx define(const std::string& name, V type, V value) const;
  V fresh() const { return vvar(depth()); }
  V eval(const TermP& t) const { return idt::eval(env_, t); }
  TermP quote(const V& v) const { return readback(depth(), v); }
  std::vector<std::string> names() const;

 private:
  Env env_;
  std::vector<CtxEntry> entries_;
};

V infer(const Ctx& ctx, const TermP& t);
void check(const Ctx& ctx, const TermP& t, const V& T);
/** Checks that `t` is a type and returns its universe level. */
int checkType(const Ctx& ctx, const TermP& t);

TermP normalize(const Ctx& ctx, const TermP& t);
bool defEqV(int depth, const V& x, const V& y);
bool defEq(const Ctx& ctx, const TermP& t, const TermP& u);
/** Conversion with universe cumulativity: Set i <= Set j for i <= j. */
bool subtype(int depth, const V& x, const V& y);

/** Type-checks and adds a global definition (or an opaque declaration when term is null). */
void addGlobal(Globals& g, const std::string& name, const TermP& type, const TermP& term, bool recheck = true);

}  // namespace idt

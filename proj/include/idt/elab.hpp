#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "idt/kernel.hpp"
#include "idt/surface.hpp"

namespace idt {

enum class EErr {
  CannotSynthesize,
  CheckMismatch,
  UnknownTag,
  DuplicateTag,
  BadTupleArity,
  NotAConstructorType,
  NotAFunction,
  UnboundName,
  UnjustifiedCall,
  PatternHeadMismatch,
  UnsupportedScrutinee,
  ScrutineeNotFree,
  MissingClause,
  OverlappingClauses,
  NonPositive,
  DuplicateName,
  DuplicateConstructor,
  DependentIndex,
  ClausesAfterBy,
  NestingTooDeep,
  NotTagged,
  DerivingUnsupported,
  UnknownProperty,
  DuplicateProperty,
  KernelRejected,
};
const char* errName(EErr e);

struct ElabError : std::runtime_error {
  EErr kind;
  Span span;
  std::vector<std::string> trail;  // outermost goal first
  ElabError(EErr k, Span sp, std::vector<std::string> tr, const std::string& msg)
      : std::runtime_error(msg), kind(k), span(sp), trail(std::move(tr)) {}
};

/** What the elaborator knows about a declared datatype. */
struct DataInfo {
  std::string name;
  std::vector<std::string> paramNames, indexNames;
  TermP type;                       // Pi ps. Pi is. Set
  TermP code;                       // elaborated code under ps, is (call/return reduced)
  std::vector<std::string> tags;    // every constructor tag, in declaration order
  std::vector<std::string> derived;
  std::map<std::string, std::vector<std::string>> argNames;  // per tag, as declared
  bool unindexed() const { return indexNames.empty(); }
};

struct Scope {
  Globals g;
  std::map<std::string, DataInfo> data;
  std::vector<std::string> dataOrder;
  std::map<std::string, std::string> ctorOwner;  // constructor tag -> first datatype declaring it
  std::set<std::string> programs;
};

/** Copies what `work` added on top of `into` back into `into`. Values hold a pointer
 *  to the globals they were evaluated against, so new entries are re-evaluated. */
void commitScope(Scope& into, const Scope& work);

/** A description of an elaboration goal, formatted only when an error is reported. */
struct Goal {
  std::function<std::string()> describe;
  Span span;
};

class Elab {
 public:
  explicit Elab(const Scope& s) : s_(s) {}

  std::pair<TermP, V> synth(const Ctx& ctx, const ExtP& e);
  TermP check(const Ctx& ctx, const ExtP& e, const V& T);
  /** Elaborates a type; returns the term and its universe level. */
  std::pair<TermP, int> type(const Ctx& ctx, const ExtP& e);

  /** Recursive calls to the program being defined resolve to labelled hypotheses. */
  void setProgram(const std::string& name, V type) {
    progName_ = name;
    progType_ = std::move(type);
  }

  [[noreturn]] void error(EErr k, Span sp, const std::string& msg) const;
  /** Rethrows a kernel failure as an elaboration error at the current goal. */
  [[noreturn]] void kernelFailure(const KernelError& ke, Span sp) const;

  class GoalGuard {
   public:
    GoalGuard(Elab& e, Goal g);
    ~GoalGuard();
    GoalGuard(const GoalGuard&) = delete;
    GoalGuard& operator=(const GoalGuard&) = delete;

   private:
    Elab& e_;
  };
  GoalGuard goal(std::function<std::string()> describe, Span sp) { return GoalGuard(*this, Goal{std::move(describe), sp}); }

  std::string show(const Ctx& ctx, const V& v) const;
  std::string showTerm(const Ctx& ctx, const TermP& t) const;
  const Scope& scope() const { return s_; }
  Span currentSpan() const;

 private:
  const Scope& s_;
  std::vector<Goal> goals_;
  std::string progName_;
  V progType_;

  TermP checkIn(const Ctx& ctx, const ExtP& e, const V& T);
  std::pair<TermP, V> synthIn(const Ctx& ctx, const ExtP& e);
  std::pair<TermP, V> synthApp(const Ctx& ctx, const ExtP& e);
  std::pair<TermP, V> applyArgs(const Ctx& ctx, TermP f, V F, const std::vector<ExtP>& args, size_t from,
                                const ExtP& whole);
  std::optional<std::pair<TermP, V>> builtin(const Ctx& ctx, const std::string& name, const std::vector<ExtP>& args,
                                             const ExtP& whole);
  std::optional<TermP> checkBuiltin(const Ctx& ctx, const std::string& name, const std::vector<ExtP>& args,
                                    const V& T, const ExtP& whole);
  std::optional<TermP> constructor(const Ctx& ctx, const std::string& c, const std::vector<ExtP>& args, const V& T,
                                   const ExtP& whole);
  TermP payload(const Ctx& ctx, const V& code, const std::vector<ExtP>& args, size_t& next, const V& fix,
                const ExtP& whole, bool last);
  TermP tuple(const Ctx& ctx, const std::vector<ExtP>& xs, size_t i, const V& T, const ExtP& whole);
  TermP numeral(const Ctx& ctx, long n, const V& T, const ExtP& whole);
  std::pair<TermP, V> recursiveCall(const Ctx& ctx, const std::vector<ExtP>& args, const ExtP& whole);
  TermP motiveTerm(const Ctx& ctx, const V& pi);
  bool isLocal(const Ctx& ctx, const std::string& x) const;
};

/** Entry points: elaborate, then re-check the output in the kernel when `recheck` is set. */
std::pair<TermP, V> elabSynth(const Scope& s, const Ctx& ctx, const ExtP& e, bool recheck = true);
TermP elabCheck(const Scope& s, const Ctx& ctx, const ExtP& e, const V& T, bool recheck = true);

/** Folds datatype and program applications back into their names for display. */
TermP resugar(const Scope& s, const TermP& t);
TermP resugarAt(const Scope& s, int depth, const TermP& t);

/** Printing with resugaring and, when Nat is the usual one, decimal numerals. */
std::string display(const Scope& s, const Ctx& ctx, const TermP& t);

}  // namespace idt

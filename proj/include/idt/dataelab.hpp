#pragma once

#include <string>
#include <vector>

#include "idt/elab.hpp"

namespace idt {

/** One judgment instance of a datatype elaboration. */
struct TraceNode {
  std::string judgment;
  std::string input;
  std::string output;
  Span span;
  std::vector<TraceNode> children;
};

/** Indented text, one judgment per line. */
std::string renderTrace(const TraceNode& root);

struct DataOptions {
  bool recheck = true;         // kernel re-checks every judgment output and the final entry
  TraceNode* trace = nullptr;  // receives an ElabData node when set
};

/** Elaborates a datatype declaration into `s`. On error `s` is left unchanged. */
void elabData(Scope& s, const DataDecl& d, const DataOptions& o = {});

/** Adds `elim_D` (case analysis) and `rec_D` (with inductive hypotheses) for an
 *  unindexed datatype: `Π ps (x : D ps) (P : D ps -> Set1). methods -> P x`. */
void addEliminators(Scope& s, const std::string& d, bool recheck = true);

/** Evaluates `D ps` for a datatype in scope. */
V dataTypeV(const Scope& s, const std::string& d, const std::vector<V>& ps);

/** Binds `k` parameters of the Pi chain `ty` by lambdas (or Pis when `lam` is false). */
V overParams(V ty, size_t k, std::vector<V> ps, bool lam, std::function<V(const std::vector<V>&)> f);

}  // namespace idt

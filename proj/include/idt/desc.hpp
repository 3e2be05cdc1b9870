#pragma once

#include <optional>
#include <string>
#include <vector>

#include "idt/kernel.hpp"

namespace idt {

// Operations on the description universes. Typing and iota-rules are kernel
// builtins (see eval.cpp / check.cpp); these are the library entry points.

inline V interpDesc(const V& D, const V& X) { return vInterp(D, X); }
inline V interpIDesc(const V& I, const V& D, const V& X) { return vIInterp(I, D, X); }
inline V allDesc(const V& D, const V& X, const V& P, const V& d) { return vAll(D, X, P, d); }
inline V allIDesc(const V& I, const V& D, const V& X, const V& P, const V& d) { return vIAll(I, D, X, P, d); }

/** Tags of a canonical enumeration, or nullopt when it is not closed. */
std::optional<std::vector<std::string>> enumTags(const V& E);

/** `[t0 -> e0, ...]`: \e. switch E P (e0, ..., ⋄) e. E and P live at the current depth. */
TermP switchLit(const TermP& E, const TermP& P, const std::vector<TermP>& branches);

/** Right-nested tuple terminated by ⋄. */
TermP tupleTerm(const std::vector<TermP>& xs);

/** 'sigma {tags} [tag_k -> codes_k] with the motive chosen for `codeType` (Desc or IDesc I). */
TermP sigmaCode(const std::vector<std::string>& tags, const std::vector<TermP>& codes, const TermP& codeType);

/** The natural numbers code with a bare 'var for the successor. */
TermP natDesc();

struct TaggedView {
  std::vector<std::string> tags;
  std::vector<V> codes;  // one per tag, in order
};

/** Splits a canonical 'sigma code into its constructor codes. */
std::optional<TaggedView> viewTagged(const V& code);

/** Index of a canonical enumeration index value, -1 when neutral. */
int numeralValue(const V& v);

/** The k-th enumeration index as a value. */
V numeralV(int k);

/** Binders a constructor method takes for `code`: false for an argument, true for an
 *  inductive hypothesis (only when `hyps`). `depth` is used to open dependent fields. */
std::vector<bool> ctorBinders(const V& code, bool hyps, int depth);

/** Evaluates builtin `k` applied to already-evaluated arguments. */
V applyBuiltin(const Globals* g, K k, const std::vector<V>& args);

}  // namespace idt

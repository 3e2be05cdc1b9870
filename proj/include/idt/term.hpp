#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace idt {

struct Span {
  int line = 0, col = 0, endLine = 0, endCol = 0;
  bool valid() const { return line > 0; }
};

// Child layout per kind is listed next to each entry. "binds" marks a child
// that lives under one extra binder (its name is kept in Term::s).
#define IDT_KINDS(X)                                                         \
  X(Var)        /* n = de Bruijn index */                                    \
  X(Lvl)        /* n = de Bruijn level; only inside Builder output */        \
  X(Const)      /* s = global name */                                        \
  X(Set)        /* n = level 0..2 */                                         \
  X(Pi)         /* a0 dom, a1 cod (binds) */                                 \
  X(Lam)        /* a0 body (binds), optional a1 domain annotation */         \
  X(App)        /* a0 fun, a1 arg */                                         \
  X(Sigma)      /* a0 dom, a1 cod (binds) */                                 \
  X(Pair)       /* a0, a1 */                                                 \
  X(Fst)        /* a0 */                                                     \
  X(Snd)        /* a0 */                                                     \
  X(Split)      /* a0 motive, a1 method, a2 pair */                          \
  X(Unit)                                                                    \
  X(Void)       /* the inhabitant of Unit */                                 \
  X(UnitElim)   /* a0 motive, a1 method, a2 scrutinee */                     \
  X(UId)                                                                     \
  X(Tag)        /* s = tag name */                                           \
  X(EnumU)                                                                   \
  X(NilE)                                                                    \
  X(ConsE)      /* a0 tag, a1 rest */                                        \
  X(EnumT)      /* a0 enumeration */                                         \
  X(ZeroE)      /* s = tag hint for printing */                              \
  X(SucE)       /* a0; s = tag hint */                                       \
  X(PiE)        /* a0 E, a1 P */                                             \
  X(Switch)     /* a0 E, a1 P, a2 tuple, a3 index */                         \
  X(Eq)         /* a0 A, a1 x, a2 y */                                       \
  X(Refl)                                                                    \
  X(J)          /* a0 A, a1 x, a2 P, a3 d, a4 y, a5 q */                     \
  X(Desc)                                                                    \
  X(DVar)                                                                    \
  X(DOne)                                                                    \
  X(DTimes)     /* a0, a1 */                                                 \
  X(DPi)        /* a0 S, a1 T */                                             \
  X(DSigma)     /* a0 S, a1 T */                                             \
  X(DSigmaE)    /* a0 E, a1 T */                                             \
  X(Interp)     /* a0 D, a1 X */                                             \
  X(Mu)         /* a0 D */                                                   \
  X(In)         /* a0 payload; s = constructor hint */                       \
  X(Induction)  /* a0 D, a1 P, a2 m, a3 x */                                 \
  X(All)        /* a0 D, a1 X, a2 P, a3 d */                                 \
  X(IndMap)     /* a0 D, a1 P, a2 m, a3 sub-code, a4 d */                    \
  X(IDesc)      /* a0 I */                                                   \
  X(DVarI)      /* a0 index */                                               \
  X(IInterp)    /* a0 I, a1 D, a2 X */                                       \
  X(IMu)        /* a0 I, a1 R, a2 i */                                       \
  X(IInduction) /* a0 I, a1 R, a2 P, a3 m, a4 i, a5 x */                     \
  X(IAll)       /* a0 I, a1 D, a2 X, a3 P, a4 d */                           \
  X(IIndMap)    /* a0 I, a1 R, a2 P, a3 m, a4 sub-code, a5 d */              \
  X(LabelTy)    /* s head, a0 result type, then (arg, argType) pairs */      \
  X(LRet)       /* a0 */                                                     \
  X(LCall)      /* a0 label type, a1 labelled value */                       \
  X(DLabelTy)   /* s head, tel: 'p' one child, 'i' (term, type),             \
                   'c' (index var term, value, type) */                      \
  X(DRet)       /* a0 E, a1 T */                                             \
  X(DCall)      /* a0 label type, a1 d */                                    \
  X(DecEnum)    /* a0 E, a1 x, a2 y, a3 P, a4 eq, a5 neq */                  \
  X(Ann)        /* a0 term, a1 type */

enum class K : uint8_t {
#define IDT_ENUM(k) k,
  IDT_KINDS(IDT_ENUM)
#undef IDT_ENUM
      // value-only forms
      Neutral,
  DecEnumR,
};

const char* kindName(K k);

struct Term;
using TermP = std::shared_ptr<const Term>;

struct Term {
  K k;
  int n = 0;
  std::string s;
  std::vector<TermP> a;
  std::string tel;  // entry codes for DLabelTy
};

/** Number of binders introduced above child `i` of a node of kind `k`. */
int bindersAt(K k, size_t i);

TermP mk(K k, std::vector<TermP> a = {}, std::string s = {}, int n = 0);

// Smart constructors for the common shapes.
TermP var(int i);
TermP cnst(const std::string& name);
TermP set(int l);
TermP pi(const std::string& x, TermP a, TermP b);
TermP arrow(TermP a, TermP b);
TermP lam(const std::string& x, TermP body);
TermP lamAnn(const std::string& x, TermP dom, TermP body);
TermP app(TermP f, TermP x);
TermP apps(TermP f, const std::vector<TermP>& xs);
TermP sigma(const std::string& x, TermP a, TermP b);
TermP times(TermP a, TermP b);
TermP pair(TermP a, TermP b);
TermP fst(TermP p);
TermP snd(TermP p);
TermP unit();
TermP tt();
TermP tag(const std::string& t);
TermP enumLit(const std::vector<std::string>& tags);
TermP numeral(int i, const std::string& hint = {});
TermP eq(TermP A, TermP x, TermP y);
TermP refl();

/** Alpha-equality: binder names and printing hints are ignored. */
bool alphaEq(const TermP& x, const TermP& y);

/** Adds `by` to every variable with index >= cutoff. */
TermP shift(const TermP& t, int by, int cutoff = 0);

/** Replaces variable `depth + j` (0 <= j < xs.size()) with xs[j] shifted
 *  under the current binders; variables above are lowered by xs.size(). */
TermP substMany(const TermP& t, const std::vector<TermP>& xs);
inline TermP subst1(const TermP& t, const TermP& x) { return substMany(t, {x}); }

bool mentionsConst(const TermP& t, const std::string& name);
bool mentionsVar(const TermP& t, int index);

/** Builds terms with de Bruijn levels so that generated code can name
 *  variables by reference; close() converts levels back to indices. */
class Builder {
 public:
  explicit Builder(int depth) : depth_(depth) {}
  int depth() const { return depth_; }
  TermP lam(const std::string& x, const std::function<TermP(TermP)>& body);
  TermP pi(const std::string& x, TermP dom, const std::function<TermP(TermP)>& body);
  TermP sigma(const std::string& x, TermP dom, const std::function<TermP(TermP)>& body);
  /** A variable of the ambient context given by its index at construction depth. */
  TermP ambient(int index) const { return mk(K::Lvl, {}, {}, depth0() - 1 - index); }
  /** Turns a term written at the builder's base depth into level form. */
  TermP lift(const TermP& t) const;
  TermP close(const TermP& t) const;

 private:
  int depth0() const { return base_; }
  int depth_;
  int base_ = depth_;
};

}  // namespace idt

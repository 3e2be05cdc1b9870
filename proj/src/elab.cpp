#include "idt/elab.hpp"

#include <algorithm>

#include "idt/desc.hpp"

namespace idt {

const char* errName(EErr e) {
  switch (e) {
    case EErr::CannotSynthesize: return "CannotSynthesize";
    case EErr::CheckMismatch: return "CheckMismatch";
    case EErr::UnknownTag: return "UnknownTag";
    case EErr::DuplicateTag: return "DuplicateTag";
    case EErr::BadTupleArity: return "BadTupleArity";
    case EErr::NotAConstructorType: return "NotAConstructorType";
    case EErr::NotAFunction: return "NotAFunction";
    case EErr::UnboundName: return "UnboundName";
    case EErr::UnjustifiedCall: return "UnjustifiedCall";
    case EErr::PatternHeadMismatch: return "PatternHeadMismatch";
    case EErr::UnsupportedScrutinee: return "UnsupportedScrutinee";
    case EErr::ScrutineeNotFree: return "ScrutineeNotFree";
    case EErr::MissingClause: return "MissingClause";
    case EErr::OverlappingClauses: return "OverlappingClauses";
    case EErr::NonPositive: return "NonPositive";
    case EErr::DuplicateName: return "DuplicateName";
    case EErr::DuplicateConstructor: return "DuplicateConstructor";
    case EErr::DependentIndex: return "DependentIndex";
    case EErr::ClausesAfterBy: return "ClausesAfterBy";
    case EErr::NestingTooDeep: return "NestingTooDeep";
    case EErr::NotTagged: return "NotTagged";
    case EErr::DerivingUnsupported: return "DerivingUnsupported";
    case EErr::UnknownProperty: return "UnknownProperty";
    case EErr::DuplicateProperty: return "DuplicateProperty";
    case EErr::KernelRejected: return "KernelRejected";
  }
  return "?";
}

namespace {

constexpr long kMaxNumeral = 5000;

V arrowV(V a, V b) {
  return vpi("_", std::move(a), [b](V) { return b; });
}
V motiveV(V dom) { return arrowV(std::move(dom), vset(2)); }
V enumTV(V E) { return vmk(K::EnumT, {std::move(E)}); }

std::string clip(std::string s) {
  if (s.size() > 100) s = s.substr(0, 97) + "...";
  return s;
}

struct Sig {
  K k;
  int arity;
  std::function<V()> type;
};

V inductionMethod(V D, V MuD, V P) {
  return vpi("d", vInterp(D, MuD), [D, MuD, P](V d) {
    return arrowV(vAll(D, MuD, P, d), vapp(P, vmk(K::In, {d})));
  });
}

V iinductionMethod(V I, V R, V P) {
  V X = vIMuFam(I, R);
  return vpi("i", I, [I, R, X, P](V i) {
    V Ri = vapp(R, i);
    return vpi("d", vIInterp(I, Ri, X), [I, Ri, X, P, i](V d) {
      return arrowV(vIAll(I, Ri, X, P, d), vapp(vapp(P, i), vmk(K::In, {d})));
    });
  });
}

V iMotive(V I, V R) {
  return vpi("i", I, [I, R](V i) { return motiveV(vmk(K::IMu, {I, R, i})); });
}

const std::map<std::string, Sig>& signatures() {
  static const std::map<std::string, Sig> sigs = [] {
    std::map<std::string, Sig> m;
    V U = vmk(K::EnumU), Set0 = vset(0), Set2 = vset(2);
    m["EnumT"] = {K::EnumT, 1, [=] { return arrowV(U, Set0); }};
    m["consE"] = {K::ConsE, 2, [=] { return arrowV(vmk(K::UId), arrowV(U, U)); }};
    m["piE"] = {K::PiE, 2, [=] { return vpi("E", U, [=](V E) { return arrowV(motiveV(enumTV(E)), Set2); }); }};
    m["switch"] = {K::Switch, 4, [=] {
                     return vpi("E", U, [=](V E) {
                       return vpi("P", motiveV(enumTV(E)), [=](V P) {
                         return arrowV(vPiEnum(E, P), vpi("x", enumTV(E), [=](V x) { return vapp(P, x); }));
                       });
                     });
                   }};
    m["Eq"] = {K::Eq, 3, [=] { return vpi("A", Set2, [=](V A) { return arrowV(A, arrowV(A, Set2)); }); }};
    m["J"] = {K::J, 6, [=] {
                return vpi("A", Set2, [=](V A) {
                  return vpi("x", A, [=](V x) {
                    V Pt = vpi("y", A, [=](V y) { return arrowV(vmk(K::Eq, {A, x, y}), Set2); });
                    return vpi("P", Pt, [=](V P) {
                      return arrowV(vapp(vapp(P, x), vmk(K::Refl)), vpi("y", A, [=](V y) {
                                      return vpi("q", vmk(K::Eq, {A, x, y}), [=](V q) { return vapp(vapp(P, y), q); });
                                    }));
                    });
                  });
                });
              }};
    m["unitElim"] = {K::UnitElim, 3, [=] {
                       return vpi("C", motiveV(vunit()), [=](V C) {
                         return arrowV(vapp(C, vtt()), vpi("u", vunit(), [=](V u) { return vapp(C, u); }));
                       });
                     }};
    m["Mu"] = {K::Mu, 1, [=] { return arrowV(vmk(K::Desc), Set0); }};
    m["interp"] = {K::Interp, 2, [=] { return arrowV(vmk(K::Desc), arrowV(Set0, Set0)); }};
    m["induction"] = {K::Induction, 4, [=] {
                        return vpi("D", vmk(K::Desc), [=](V D) {
                          V MuD = vmk(K::Mu, {D});
                          return vpi("P", motiveV(MuD), [=](V P) {
                            return arrowV(inductionMethod(D, MuD, P), vpi("x", MuD, [=](V x) { return vapp(P, x); }));
                          });
                        });
                      }};
    m["All"] = {K::All, 4, [=] {
                  return vpi("D", vmk(K::Desc), [=](V D) {
                    return vpi("X", Set0, [=](V X) {
                      return vpi("P", motiveV(X), [=](V) { return arrowV(vInterp(D, X), Set2); });
                    });
                  });
                }};
    m["indMap"] = {K::IndMap, 5, [=] {
                     return vpi("D", vmk(K::Desc), [=](V D) {
                       V MuD = vmk(K::Mu, {D});
                       return vpi("P", motiveV(MuD), [=](V P) {
                         return arrowV(inductionMethod(D, MuD, P), vpi("S", vmk(K::Desc), [=](V S) {
                                         return vpi("d", vInterp(S, MuD), [=](V d) { return vAll(S, MuD, P, d); });
                                       }));
                       });
                     });
                   }};
    m["IDesc"] = {K::IDesc, 1, [=] { return arrowV(Set0, vset(1)); }};
    m["iinterp"] = {K::IInterp, 3, [=] {
                      return vpi("I", Set0, [=](V I) {
                        return arrowV(vmk(K::IDesc, {I}), arrowV(arrowV(I, Set0), Set0));
                      });
                    }};
    m["IMu"] = {K::IMu, 3, [=] {
                  return vpi("I", Set0, [=](V I) {
                    return arrowV(arrowV(I, vmk(K::IDesc, {I})), arrowV(I, Set0));
                  });
                }};
    m["iinduction"] = {K::IInduction, 6, [=] {
                         return vpi("I", Set0, [=](V I) {
                           return vpi("R", arrowV(I, vmk(K::IDesc, {I})), [=](V R) {
                             return vpi("P", iMotive(I, R), [=](V P) {
                               return arrowV(iinductionMethod(I, R, P), vpi("i", I, [=](V i) {
                                               return vpi("x", vmk(K::IMu, {I, R, i}),
                                                          [=](V x) { return vapp(vapp(P, i), x); });
                                             }));
                             });
                           });
                         });
                       }};
    m["IAll"] = {K::IAll, 5, [=] {
                   return vpi("I", Set0, [=](V I) {
                     return vpi("D", vmk(K::IDesc, {I}), [=](V D) {
                       return vpi("X", arrowV(I, Set0), [=](V X) {
                         V Pt = vpi("i", I, [=](V i) { return motiveV(vapp(X, i)); });
                         return vpi("P", Pt, [=](V) { return arrowV(vIInterp(I, D, X), Set2); });
                       });
                     });
                   });
                 }};
    m["iindMap"] = {K::IIndMap, 6, [=] {
                      return vpi("I", Set0, [=](V I) {
                        return vpi("R", arrowV(I, vmk(K::IDesc, {I})), [=](V R) {
                          V X = vIMuFam(I, R);
                          return vpi("P", iMotive(I, R), [=](V P) {
                            return arrowV(iinductionMethod(I, R, P), vpi("S", vmk(K::IDesc, {I}), [=](V S) {
                                            return vpi("d", vIInterp(I, S, X), [=](V d) { return vIAll(I, S, X, P, d); });
                                          }));
                          });
                        });
                      });
                    }};
    m["decEnum"] = {K::DecEnum, 6, [=] {
                      return vpi("E", U, [=](V E) {
                        V ET = enumTV(E);
                        return vpi("x", ET, [=](V x) {
                          return vpi("y", ET, [=](V y) {
                            V Pt = arrowV(ET, motiveV(ET));
                            return vpi("P", Pt, [=](V P) {
                              V eqT = vpi("x", ET, [=](V a) { return vapp(vapp(P, a), a); });
                              V neqT = vpi("x", ET, [=](V a) { return vpi("y", ET, [=](V b) { return vapp(vapp(P, a), b); }); });
                              return arrowV(eqT, arrowV(neqT, vapp(vapp(P, x), y)));
                            });
                          });
                        });
                      });
                    }};
    return m;
  }();
  return sigs;
}

// Builtins that only make sense in checking mode.
bool checkOnly(const std::string& n) {
  static const std::set<std::string> s = {"refl", "ze", "su", "'var", "'1", "'varI", "'Pi", "'Sigma", "'sigma", "In",
                                          "return"};
  return s.count(n) > 0;
}

std::optional<std::pair<TermP, V>> constant(const std::string& n) {
  if (n == "Set") return std::make_pair(set(0), vset(1));
  if (n == "Set1") return std::make_pair(set(1), vset(2));
  if (n == "Unit") return std::make_pair(unit(), vset(0));
  if (n == "UId") return std::make_pair(mk(K::UId), vset(0));
  if (n == "EnumU") return std::make_pair(mk(K::EnumU), vset(0));
  if (n == "Desc") return std::make_pair(mk(K::Desc), vset(1));
  if (n == "nilE") return std::make_pair(mk(K::NilE), vmk(K::EnumU));
  return std::nullopt;
}

bool isCode(const V& T) { return T->k == K::Desc || T->k == K::IDesc; }

/** Fixpoint type view used by constructor sugar. */
struct Fix {
  V T;
  V I, R;  // null for Mu
  V code;
  std::string hint;
  V family() const {
    V I0 = I, R0 = R;
    std::string h = hint;
    return vlam("j", [I0, R0, h](V j) { return vmk(K::IMu, {I0, R0, j}, h); });
  }
  V interp(const V& A) const { return I ? vIInterp(I, A, family()) : vInterp(A, T); }
  V rec(const V& j) const { return I ? vmk(K::IMu, {I, R, j}, hint) : T; }
};

std::optional<Fix> fixView(const V& T) {
  if (T->k == K::Mu) return Fix{T, nullptr, nullptr, T->a[0], {}};
  if (T->k == K::IMu) return Fix{T, T->a[0], T->a[1], vapp(T->a[1], T->a[2]), T->s};
  return std::nullopt;
}

// Tag path through nested 'sigma choices.
bool findTag(const V& code, const std::string& c, std::vector<std::pair<int, std::string>>& path, V& leaf, int depth) {
  if (depth > 8 || code->k != K::DSigmaE) return false;
  auto tags = enumTags(code->a[0]);
  if (!tags) return false;
  for (size_t k = 0; k < tags->size(); ++k) {
    if ((*tags)[k] == c) {
      path.push_back({static_cast<int>(k), c});
      leaf = vapp(code->a[1], numeralV(static_cast<int>(k)));
      return true;
    }
  }
  for (size_t k = 0; k < tags->size(); ++k) {
    path.push_back({static_cast<int>(k), (*tags)[k]});
    if (findTag(vapp(code->a[1], numeralV(static_cast<int>(k))), c, path, leaf, depth + 1)) return true;
    path.pop_back();
  }
  return false;
}

}  // namespace

// Goals and errors ------------------------------------------------------------

Elab::GoalGuard::GoalGuard(Elab& e, Goal g) : e_(e) {
  if (!g.span.valid()) g.span = e.currentSpan();
  e.goals_.push_back(std::move(g));
}
Elab::GoalGuard::~GoalGuard() { e_.goals_.pop_back(); }

Span Elab::currentSpan() const {
  for (auto it = goals_.rbegin(); it != goals_.rend(); ++it)
    if (it->span.valid()) return it->span;
  return Span{};
}

void Elab::error(EErr k, Span sp, const std::string& msg) const {
  std::vector<std::string> trail;
  for (auto& g : goals_) trail.push_back(g.describe());
  if (!sp.valid()) sp = currentSpan();
  throw ElabError(k, sp, std::move(trail), msg);
}

void Elab::kernelFailure(const KernelError& ke, Span sp) const {
  error(EErr::KernelRejected, sp, std::string("kernel rejected the elaborated term (") + kerrName(ke.kind) + "): " + ke.what());
}

std::string Elab::show(const Ctx& ctx, const V& v) const { return showTerm(ctx, ctx.quote(v)); }

std::string Elab::showTerm(const Ctx& ctx, const TermP& t) const { return clip(display(s_, ctx, t)); }

bool Elab::isLocal(const Ctx& ctx, const std::string& x) const {
  for (auto& e : ctx.entries())
    if (e.name == x) return true;
  return false;
}

namespace {

std::optional<int> lookupLocal(const Ctx& ctx, const std::string& x) {
  const auto& es = ctx.entries();
  for (int i = static_cast<int>(es.size()) - 1; i >= 0; --i)
    if (es[i].name == x) return static_cast<int>(es.size()) - 1 - i;
  return std::nullopt;
}

}  // namespace

// Synthesis -------------------------------------------------------------------

std::pair<TermP, V> Elab::synth(const Ctx& ctx, const ExtP& e) { return synthIn(ctx, e); }
TermP Elab::check(const Ctx& ctx, const ExtP& e, const V& T) { return checkIn(ctx, e, T); }

std::pair<TermP, int> Elab::type(const Ctx& ctx, const ExtP& e) {
  if ((e->k == EK::Pi || e->k == EK::Sigma)) {
    auto g = goal([&] { return "elaborate the type " + clip(printExt(e)); }, e->span);
    auto [dom, l1] = type(ctx, e->a[0]);
    std::string x = e->s.empty() ? "_" : e->s;
    Ctx c2 = ctx.extend(x, ctx.eval(dom));
    auto [cod, l2] = type(c2, e->a[1]);
    return {mk(e->k == EK::Pi ? K::Pi : K::Sigma, {dom, cod}, x), std::max(l1, l2)};
  }
  auto [t, T] = synthIn(ctx, e);
  if (T->k != K::Set) error(EErr::CheckMismatch, e->span, "expected a type, but " + clip(printExt(e)) + " has type " + show(ctx, T));
  return {t, T->n};
}

std::pair<TermP, V> Elab::synthIn(const Ctx& ctx, const ExtP& e) {
  auto g = goal([&] { return "synthesize " + clip(printExt(e)); }, e->span);
  switch (e->k) {
    case EK::Var:
    case EK::App:
      return synthApp(ctx, e);
    case EK::Pi:
    case EK::Sigma: {
      auto [t, l] = type(ctx, e);
      return {t, vset(l)};
    }
    case EK::UnitVal:
      return {tt(), vunit()};
    case EK::Tag:
      return {tag(e->s), vmk(K::UId)};
    case EK::EnumLit:
      return {checkIn(ctx, e, vmk(K::EnumU)), vmk(K::EnumU)};
    case EK::Num: {
      const Global* nat = s_.g.find("Nat");
      if (!nat || !nat->value) error(EErr::CannotSynthesize, e->span, "numerals need a Nat datatype in scope or a type annotation");
      V T = nat->value;
      return {mk(K::Ann, {checkIn(ctx, e, T), cnst("Nat")}), T};
    }
    case EK::Ann: {
      auto [T, l] = type(ctx, e->a[1]);
      (void)l;
      V Tv = ctx.eval(T);
      TermP t = checkIn(ctx, e->a[0], Tv);
      return {mk(K::Ann, {t, T}), Tv};
    }
    case EK::EqT: {
      TermP a, b;
      V A;
      try {
        auto r = synthIn(ctx, e->a[0]);
        a = r.first;
        A = r.second;
        b = checkIn(ctx, e->a[1], A);
      } catch (const ElabError& err) {
        if (err.kind != EErr::CannotSynthesize) throw;
        auto r = synthIn(ctx, e->a[1]);
        b = r.first;
        A = r.second;
        a = checkIn(ctx, e->a[0], A);
      }
      TermP At = ctx.quote(A);
      TermP t = eq(At, a, b);
      try {
        return {t, infer(ctx, t)};
      } catch (const KernelError& ke) {
        kernelFailure(ke, e->span);
      }
    }
    case EK::Pair: {
      auto [a, A] = synthIn(ctx, e->a[0]);
      auto [b, B] = synthIn(ctx, e->a[1]);
      return {pair(a, b), vsigma("_", A, [B](V) { return B; })};
    }
    case EK::DLabel: {
      auto t = std::make_shared<Term>();
      t->k = K::DLabelTy;
      t->s = e->s;
      for (size_t i = 0; i < e->a.size(); ++i) {
        const std::string& m = e->names[i];
        if (m == "p") {
          t->a.push_back(synthIn(ctx, e->a[i]).first);
          t->tel += 'p';
        } else if (m == "i") {
          auto [x, X] = synthIn(ctx, e->a[i]);
          t->a.push_back(x);
          t->a.push_back(ctx.quote(X));
          t->tel += 'i';
        } else {
          std::string v = m.substr(2);
          auto idx = lookupLocal(ctx, v);
          if (!idx) error(EErr::UnboundName, e->span, "constrained index " + v + " is not in scope");
          V X = ctx.at(*idx).type;
          t->a.push_back(var(*idx));
          t->a.push_back(checkIn(ctx, e->a[i], X));
          t->a.push_back(ctx.quote(X));
          t->tel += 'c';
        }
      }
      return {t, vset(1)};
    }
    case EK::PLabel: {
      auto [R, l] = type(ctx, e->a[0]);
      std::vector<TermP> as{R};
      for (size_t i = 1; i < e->a.size(); ++i) {
        auto [x, X] = synthIn(ctx, e->a[i]);
        as.push_back(x);
        as.push_back(ctx.quote(X));
      }
      return {mk(K::LabelTy, std::move(as), e->s), vset(l)};
    }
    case EK::Lam:
      error(EErr::CannotSynthesize, e->span, "cannot synthesize a type for a lambda; annotate it as (\\x. e : A -> B)");
    case EK::Tuple:
    case EK::ElimLit:
      error(EErr::CannotSynthesize, e->span, "tuples and eliminator literals need a known type; annotate them");
    case EK::Times:
      error(EErr::CannotSynthesize, e->span, "description codes need a known type (Desc or IDesc I)");
  }
  error(EErr::CannotSynthesize, e->span, "cannot synthesize a type");
}

std::pair<TermP, V> Elab::synthApp(const Ctx& ctx, const ExtP& e) {
  auto [h, args] = spine(e);
  if (h->k == EK::Var) {
    const std::string& x = h->s;
    if (auto idx = lookupLocal(ctx, x)) return applyArgs(ctx, var(*idx), ctx.at(*idx).type, args, 0, e);
    if (!progName_.empty() && x == progName_) return recursiveCall(ctx, args, e);
    if (const Global* g = s_.g.find(x)) return applyArgs(ctx, cnst(x), g->vtype, args, 0, e);
    if (auto c = constant(x)) return applyArgs(ctx, c->first, c->second, args, 0, e);
    if (auto b = builtin(ctx, x, args, e)) return *b;
    if (checkOnly(x))
      error(EErr::CannotSynthesize, e->span, x + " can only be checked against a known type; annotate it as (e : T)");
    if (auto it = s_.ctorOwner.find(x); it != s_.ctorOwner.end()) {
      // Constructors of a datatype without parameters or indices determine their type.
      const DataInfo& di = s_.data.at(it->second);
      const Global* dg = s_.g.find(di.name);
      if (di.unindexed() && di.paramNames.empty() && dg && dg->value)
        return {mk(K::Ann, {checkIn(ctx, e, dg->value), cnst(di.name)}), dg->value};
      error(EErr::CannotSynthesize, e->span,
            "constructor " + x + " needs its type from context; annotate it as (" + clip(printExt(e)) + " : T)");
    }
    error(EErr::UnboundName, h->span, "unbound name " + x);
  }
  auto [f, F] = synthIn(ctx, h);
  return applyArgs(ctx, f, F, args, 0, e);
}

std::pair<TermP, V> Elab::applyArgs(const Ctx& ctx, TermP f, V F, const std::vector<ExtP>& args, size_t from,
                                    const ExtP& whole) {
  for (size_t i = from; i < args.size(); ++i) {
    if (F->k != K::Pi)
      error(EErr::NotAFunction, whole->span, "too many arguments: " + showTerm(ctx, f) + " has type " + show(ctx, F));
    TermP a = checkIn(ctx, args[i], F->a[0]);
    f = app(f, a);
    F = applyClo(F->clo, ctx.eval(a));
  }
  return {f, F};
}

std::optional<std::pair<TermP, V>> Elab::builtin(const Ctx& ctx, const std::string& name, const std::vector<ExtP>& args,
                                                 const ExtP& whole) {
  auto need = [&](size_t n) {
    if (args.size() < n)
      error(EErr::CannotSynthesize, whole->span, name + " expects " + std::to_string(n) + " arguments");
  };
  if (name == "fst" || name == "snd") {
    need(1);
    auto [p, S] = synthIn(ctx, args[0]);
    if (S->k != K::Sigma) error(EErr::CheckMismatch, args[0]->span, "projection from a term of type " + show(ctx, S));
    TermP t = name == "fst" ? fst(p) : snd(p);
    V T = name == "fst" ? S->a[0] : applyClo(S->clo, vfst(ctx.eval(p)));
    return applyArgs(ctx, t, T, args, 1, whole);
  }
  if (name == "split") {
    need(3);
    auto [p, S] = synthIn(ctx, args[2]);
    if (S->k != K::Sigma) error(EErr::CheckMismatch, args[2]->span, "split of a term of type " + show(ctx, S));
    TermP C = checkIn(ctx, args[0], motiveV(S));
    V Cv = ctx.eval(C);
    V A = S->a[0];
    auto Sc = S->clo;
    V ft = vpi("a", A, [Sc, Cv](V a) {
      return vpi("b", applyClo(Sc, a), [Cv, a](V b) { return vapp(Cv, vmk(K::Pair, {a, b})); });
    });
    TermP f = checkIn(ctx, args[1], ft);
    TermP t = mk(K::Split, {C, f, p});
    return applyArgs(ctx, t, vapp(Cv, ctx.eval(p)), args, 3, whole);
  }
  if (name == "call") {
    need(2);
    auto [L, l] = type(ctx, args[0]);
    (void)l;
    V Lv = ctx.eval(L);
    if (Lv->k == K::LabelTy) {
      TermP c = checkIn(ctx, args[1], Lv);
      return applyArgs(ctx, mk(K::LCall, {L, c}), Lv->a[0], args, 2, whole);
    }
    if (Lv->k == K::DLabelTy) {
      TermP c = checkIn(ctx, args[1], Lv);
      return applyArgs(ctx, mk(K::DCall, {L, c}), vmk(K::IDesc, {labelIndexTypeV(Lv)}), args, 2, whole);
    }
    error(EErr::CheckMismatch, args[0]->span, "call expects a label type, got " + show(ctx, Lv));
  }
  if (name == "Set2") error(EErr::CannotSynthesize, whole->span, "Set2 is the top universe and has no type");
  auto it = signatures().find(name);
  if (it == signatures().end()) return std::nullopt;
  const Sig& sg = it->second;
  need(static_cast<size_t>(sg.arity));
  V T = sg.type();
  std::vector<TermP> ts;
  for (int i = 0; i < sg.arity; ++i) {
    TermP a = checkIn(ctx, args[i], T->a[0]);
    ts.push_back(a);
    T = applyClo(T->clo, ctx.eval(a));
  }
  TermP t = mk(sg.k, std::move(ts));
  if (T->k == K::Set) {
    // Universe-valued builtins: the kernel computes the precise level.
    try {
      T = infer(ctx, t);
    } catch (const KernelError& ke) {
      kernelFailure(ke, whole->span);
    }
  }
  return applyArgs(ctx, t, T, args, sg.arity, whole);
}

std::pair<TermP, V> Elab::recursiveCall(const Ctx& ctx, const std::vector<ExtP>& args, const ExtP& whole) {
  V F = progType_;
  std::vector<TermP> as;
  std::vector<TermP> argTypes;
  for (auto& a : args) {
    if (F->k != K::Pi) error(EErr::NotAFunction, whole->span, "too many arguments in recursive call to " + progName_);
    TermP t = checkIn(ctx, a, F->a[0]);
    as.push_back(t);
    argTypes.push_back(ctx.quote(F->a[0]));
    F = applyClo(F->clo, ctx.eval(t));
  }
  if (F->k == K::Pi)
    error(EErr::UnjustifiedCall, whole->span, "recursive calls to " + progName_ + " must be fully applied");
  std::vector<TermP> lab{ctx.quote(F)};
  for (size_t i = 0; i < as.size(); ++i) {
    lab.push_back(as[i]);
    lab.push_back(argTypes[i]);
  }
  TermP L = mk(K::LabelTy, std::move(lab), progName_);
  V Lv = ctx.eval(L);
  for (int i = 0; i < ctx.depth(); ++i) {
    const V& T = ctx.at(i).type;
    if (T->k == K::LabelTy && T->s == progName_ && defEqV(ctx.depth(), T, Lv)) return {mk(K::LCall, {L, var(i)}), F};
  }
  error(EErr::UnjustifiedCall, whole->span,
        "no structural hypothesis " + showTerm(ctx, L) + " is in scope for this recursive call");
}

// Checking --------------------------------------------------------------------

TermP Elab::motiveTerm(const Ctx& ctx, const V& pi) {
  TermP body = readback(ctx.depth() + 1, applyClo(pi->clo, vvar(ctx.depth())));
  return lam(pi->clo->name.empty() ? "x" : pi->clo->name, body);
}

TermP Elab::tuple(const Ctx& ctx, const std::vector<ExtP>& xs, size_t i, const V& T, const ExtP& whole) {
  if (T->k == K::Unit) {
    if (i != xs.size())
      error(EErr::BadTupleArity, whole->span, "tuple has " + std::to_string(xs.size() - i) + " component(s) too many");
    return tt();
  }
  if (T->k == K::Sigma) {
    if (i == xs.size()) error(EErr::BadTupleArity, whole->span, "tuple is missing components for " + show(ctx, T));
    TermP a = checkIn(ctx, xs[i], T->a[0]);
    TermP b = tuple(ctx, xs, i + 1, applyClo(T->clo, ctx.eval(a)), whole);
    return pair(a, b);
  }
  error(EErr::CheckMismatch, whole->span, "tuple checked against " + show(ctx, T));
}

TermP Elab::numeral(const Ctx& ctx, long n, const V& T, const ExtP& whole) {
  if (n > kMaxNumeral) error(EErr::CheckMismatch, whole->span, "numeral too large (limit " + std::to_string(kMaxNumeral) + ")");
  auto fix = fixView(T);
  if (!fix) error(EErr::NotAConstructorType, whole->span, "numeral checked against non-datatype " + show(ctx, T));
  // zero via constructor sugar, then suc layers built directly to keep deep numerals cheap.
  TermP acc;
  {
    auto r = constructor(ctx, "zero", {}, T, whole);
    if (!r) error(EErr::UnknownTag, whole->span, show(ctx, T) + " has no constructor zero");
    acc = *r;
  }
  for (long i = 0; i < n; ++i) {
    auto fixv = *fix;
    std::vector<std::pair<int, std::string>> path;
    V leaf;
    if (!findTag(fixv.code, "suc", path, leaf, 0)) error(EErr::UnknownTag, whole->span, show(ctx, T) + " has no constructor suc");
    // suc must take exactly one recursive argument.
    bool ok = false;
    if (leaf->k == K::DVar || leaf->k == K::DVarI) ok = true;
    if (leaf->k == K::DTimes && (leaf->a[0]->k == K::DVar || leaf->a[0]->k == K::DVarI) && leaf->a[1]->k == K::DOne)
      ok = true;
    if (!ok) error(EErr::CheckMismatch, whole->span, "numerals need suc to take one recursive argument");
    TermP pl = leaf->k == K::DTimes ? pair(acc, tt()) : acc;
    for (auto it = path.rbegin(); it != path.rend(); ++it) pl = pair(idt::numeral(it->first, it->second), pl);
    auto in = std::make_shared<Term>();
    in->k = K::In;
    in->a = {pl};
    in->s = "suc";
    in->n = static_cast<int>(path.size());
    acc = in;
  }
  return acc;
}

TermP Elab::payload(const Ctx& ctx, const V& code, const std::vector<ExtP>& args, size_t& next, const V& fixT,
                    const ExtP& whole, bool last) {
  auto fix = *fixView(fixT);
  auto take = [&](const V& A) {
    if (next >= args.size())
      error(EErr::BadTupleArity, whole->span, "constructor is missing an argument of type " + show(ctx, A));
    return checkIn(ctx, args[next++], A);
  };
  switch (code->k) {
    case K::DOne:
      return tt();
    case K::DSigma: {
      const V& S = code->a[0];
      if (next < args.size()) {
        TermP a = checkIn(ctx, args[next++], S);
        TermP rest = payload(ctx, vapp(code->a[1], ctx.eval(a)), args, next, fixT, whole, last);
        return pair(a, rest);
      }
      if (S->k == K::Eq) {
        if (!defEqV(ctx.depth(), S->a[1], S->a[2]))
          error(EErr::CheckMismatch, whole->span,
                "constraint " + show(ctx, S->a[1]) + " == " + show(ctx, S->a[2]) + " does not hold definitionally");
        TermP rest = payload(ctx, vapp(code->a[1], vmk(K::Refl)), args, next, fixT, whole, last);
        return pair(refl(), rest);
      }
      error(EErr::BadTupleArity, whole->span, "constructor is missing an argument of type " + show(ctx, S));
    }
    case K::DTimes: {
      TermP a = take(fix.interp(code->a[0]));
      return pair(a, payload(ctx, code->a[1], args, next, fixT, whole, last));
    }
    case K::DSigmaE: {
      TermP k = take(enumTV(code->a[0]));
      return pair(k, payload(ctx, vapp(code->a[1], ctx.eval(k)), args, next, fixT, whole, last));
    }
    case K::DPi:
      return take(fix.interp(code));
    case K::DVar:
      return take(fix.T);
    case K::DVarI:
      return take(fix.rec(code->a[0]));
    default:
      error(EErr::CheckMismatch, whole->span, "cannot see the constructor structure of " + show(ctx, code));
  }
}

std::optional<TermP> Elab::constructor(const Ctx& ctx, const std::string& c, const std::vector<ExtP>& args, const V& T,
                                       const ExtP& whole) {
  auto fix = fixView(T);
  if (!fix) return std::nullopt;
  std::vector<std::pair<int, std::string>> path;
  V leaf;
  if (!findTag(fix->code, c, path, leaf, 0)) return std::nullopt;
  auto g = goal([&, c] { return "constructor " + c + " against " + show(ctx, T); }, whole->span);
  size_t next = 0;
  TermP pl = payload(ctx, leaf, args, next, T, whole, true);
  if (next != args.size())
    error(EErr::BadTupleArity, whole->span,
          "constructor " + c + " applied to " + std::to_string(args.size() - next) + " argument(s) too many");
  for (auto it = path.rbegin(); it != path.rend(); ++it) pl = pair(idt::numeral(it->first, it->second), pl);
  auto in = std::make_shared<Term>();
  in->k = K::In;
  in->a = {pl};
  in->s = c;
  in->n = static_cast<int>(path.size());
  return TermP(in);
}

std::optional<TermP> Elab::checkBuiltin(const Ctx& ctx, const std::string& name, const std::vector<ExtP>& args,
                                        const V& T, const ExtP& whole) {
  auto arity = [&](size_t n) {
    if (args.size() != n)
      error(EErr::CheckMismatch, whole->span, name + " expects " + std::to_string(n) + " argument(s) here");
  };
  auto mismatch = [&](const std::string& what) -> TermP {
    error(EErr::CheckMismatch, whole->span, name + " is " + what + ", but the expected type is " + show(ctx, T));
  };
  if (name == "refl") {
    arity(0);
    if (T->k != K::Eq) return mismatch("an equality proof");
    if (!defEqV(ctx.depth(), T->a[1], T->a[2]))
      error(EErr::CheckMismatch, whole->span,
            "refl: " + show(ctx, T->a[1]) + " and " + show(ctx, T->a[2]) + " are not definitionally equal");
    return refl();
  }
  if (name == "ze" || name == "su") {
    if (T->k != K::EnumT || T->a[0]->k != K::ConsE) return mismatch("an enumeration index");
    if (name == "ze") {
      arity(0);
      return mk(K::ZeroE);
    }
    arity(1);
    return mk(K::SucE, {checkIn(ctx, args[0], enumTV(T->a[0]->a[1]))});
  }
  if (name == "'var") {
    arity(0);
    if (T->k == K::Desc) return mk(K::DVar);
    if (T->k == K::IDesc && T->a[0]->k == K::Unit) return mk(K::DVarI, {tt()});
    return mismatch("a Desc code");
  }
  if (name == "'1") {
    arity(0);
    if (!isCode(T)) return mismatch("a description code");
    return mk(K::DOne);
  }
  if (name == "'varI") {
    arity(1);
    if (T->k != K::IDesc) return mismatch("an IDesc code");
    return mk(K::DVarI, {checkIn(ctx, args[0], T->a[0])});
  }
  if (name == "'Pi" || name == "'Sigma") {
    arity(2);
    if (!isCode(T)) return mismatch("a description code");
    auto [S, l] = type(ctx, args[0]);
    if (l > 0) error(EErr::CheckMismatch, args[0]->span, "description domains must live in Set");
    TermP Tf = checkIn(ctx, args[1], arrowV(ctx.eval(S), T));
    return mk(name == "'Pi" ? K::DPi : K::DSigma, {S, Tf});
  }
  if (name == "'sigma") {
    arity(2);
    if (!isCode(T)) return mismatch("a description code");
    TermP E = checkIn(ctx, args[0], vmk(K::EnumU));
    TermP Tf = checkIn(ctx, args[1], arrowV(enumTV(ctx.eval(E)), T));
    return mk(K::DSigmaE, {E, Tf});
  }
  if (name == "In") {
    arity(1);
    if (T->k == K::Mu) return mk(K::In, {checkIn(ctx, args[0], vInterp(T->a[0], T))});
    if (T->k == K::IMu)
      return mk(K::In, {checkIn(ctx, args[0], vIInterp(T->a[0], vapp(T->a[1], T->a[2]), vIMuFam(T->a[0], T->a[1])))});
    return mismatch("a datatype value");
  }
  if (name == "return") {
    if (T->k == K::LabelTy) {
      arity(1);
      return mk(K::LRet, {checkIn(ctx, args[0], T->a[0])});
    }
    if (T->k == K::DLabelTy) {
      arity(2);
      TermP E = checkIn(ctx, args[0], vmk(K::EnumU));
      V I = labelIndexTypeV(T);
      TermP Tf = checkIn(ctx, args[1], arrowV(enumTV(ctx.eval(E)), vmk(K::IDesc, {I})));
      return mk(K::DRet, {E, Tf});
    }
    return mismatch("a labelled return");
  }
  return std::nullopt;
}

TermP Elab::checkIn(const Ctx& ctx, const ExtP& e, const V& T) {
  auto g = goal([&] { return "check " + clip(printExt(e)) + " against " + show(ctx, T); }, e->span);
  switch (e->k) {
    case EK::Lam: {
      if (T->k != K::Pi) error(EErr::CheckMismatch, e->span, "lambda checked against non-function type " + show(ctx, T));
      V x = ctx.fresh();
      TermP body = checkIn(ctx.extend(e->s, T->a[0]), e->a[0], applyClo(T->clo, x));
      return lam(e->s, body);
    }
    case EK::UnitVal:
      if (T->k == K::Sigma) error(EErr::BadTupleArity, e->span, "() is missing components for " + show(ctx, T));
      break;
    case EK::Tuple:
      return tuple(ctx, e->a, 0, T, e);
    case EK::Pair:
      if (T->k == K::Sigma) {
        TermP a = checkIn(ctx, e->a[0], T->a[0]);
        TermP b = checkIn(ctx, e->a[1], applyClo(T->clo, ctx.eval(a)));
        return pair(a, b);
      }
      break;
    case EK::EnumLit: {
      if (T->k != K::EnumU) break;
      std::set<std::string> seen;
      for (auto& n : e->names)
        if (!seen.insert(n).second) error(EErr::DuplicateTag, e->span, "tag " + n + " appears twice in the enumeration");
      return enumLit(e->names);
    }
    case EK::ElimLit: {
      if (e->names.empty() && T->k == K::Unit) return tt();
      if (T->k != K::Pi || T->a[0]->k != K::EnumT)
        error(EErr::CheckMismatch, e->span, "eliminator literal checked against " + show(ctx, T));
      V E = T->a[0]->a[0];
      auto tags = enumTags(E);
      if (!tags) error(EErr::CheckMismatch, e->span, "eliminator literal over a non-canonical enumeration " + show(ctx, E));
      std::map<std::string, size_t> at;
      for (size_t i = 0; i < e->names.size(); ++i) {
        if (!at.emplace(e->names[i], i).second) error(EErr::DuplicateTag, e->span, "branch " + e->names[i] + " given twice");
        if (std::find(tags->begin(), tags->end(), e->names[i]) == tags->end())
          error(EErr::UnknownTag, e->a[i]->span, "tag " + e->names[i] + " is not in " + show(ctx, E));
      }
      std::vector<TermP> branches;
      for (size_t k = 0; k < tags->size(); ++k) {
        auto it = at.find((*tags)[k]);
        if (it == at.end()) error(EErr::BadTupleArity, e->span, "missing branch for tag " + (*tags)[k]);
        branches.push_back(checkIn(ctx, e->a[it->second], applyClo(T->clo, numeralV(static_cast<int>(k)))));
      }
      return switchLit(ctx.quote(E), motiveTerm(ctx, T), branches);
    }
    case EK::Tag: {
      if (T->k == K::EnumT) {
        const Value* p = T->a[0].get();
        int k = 0;
        while (p->k == K::ConsE) {
          if (p->a[0]->k == K::Tag && p->a[0]->s == e->s) return idt::numeral(k, e->s);
          p = p->a[1].get();
          ++k;
        }
        error(EErr::UnknownTag, e->span, "tag '" + e->s + " is not in " + show(ctx, T));
      }
      break;
    }
    case EK::Num:
      return numeral(ctx, e->n, T, e);
    case EK::Var:
    case EK::App: {
      auto [h, args] = spine(e);
      if (h->k != EK::Var || lookupLocal(ctx, h->s)) break;
      const std::string& x = h->s;
      if (auto c = constructor(ctx, x, args, T, e)) return *c;
      if (!progName_.empty() && x == progName_) break;
      if (s_.g.find(x) || constant(x)) break;
      if (auto b = checkBuiltin(ctx, x, args, T, e)) return *b;
      if (signatures().count(x) || x == "fst" || x == "snd" || x == "split" || x == "call" || x == "Set2") break;
      if (fixView(T))
        error(EErr::UnknownTag, h->span, x + " is not a constructor of " + show(ctx, T));
      if (s_.ctorOwner.count(x))
        error(EErr::NotAConstructorType, e->span,
              "constructor " + x + " checked against " + show(ctx, T) + ", which is not a datatype");
      error(EErr::UnboundName, h->span, "unbound name " + x);
    }
    case EK::Times: {
      if (!isCode(T)) error(EErr::CheckMismatch, e->span, "'* builds description codes, but the expected type is " + show(ctx, T));
      TermP a = checkIn(ctx, e->a[0], T);
      TermP b = checkIn(ctx, e->a[1], T);
      return mk(K::DTimes, {a, b});
    }
    default:
      break;
  }
  auto [t, U] = synthIn(ctx, e);
  if (!subtype(ctx.depth(), U, T))
    error(EErr::CheckMismatch, e->span, "expected " + show(ctx, T) + ", but " + clip(printExt(e)) + " has type " + show(ctx, U));
  return t;
}

// Entry points ------------------------------------------------------------------

std::pair<TermP, V> elabSynth(const Scope& s, const Ctx& ctx, const ExtP& e, bool recheck) {
  Elab el(s);
  auto r = el.synth(ctx, e);
  if (recheck) {
    try {
      V T = infer(ctx, r.first);
      if (!subtype(ctx.depth(), T, r.second) || !subtype(ctx.depth(), r.second, T))
        throw ElabError(EErr::KernelRejected, e->span, {"synthesize " + clip(printExt(e))},
                        "kernel type disagrees with the elaborated type");
    } catch (const KernelError& ke) {
      throw ElabError(EErr::KernelRejected, e->span, {"synthesize " + clip(printExt(e))},
                      std::string("kernel rejected the elaborated term (") + kerrName(ke.kind) + "): " + ke.what());
    }
  }
  return r;
}

TermP elabCheck(const Scope& s, const Ctx& ctx, const ExtP& e, const V& T, bool recheck) {
  Elab el(s);
  TermP t = el.check(ctx, e, T);
  if (recheck) {
    try {
      idt::check(ctx, t, T);
    } catch (const KernelError& ke) {
      throw ElabError(EErr::KernelRejected, e->span, {"check " + clip(printExt(e))},
                      std::string("kernel rejected the elaborated term (") + kerrName(ke.kind) + "): " + ke.what());
    }
  }
  return t;
}

// Display -----------------------------------------------------------------------

namespace {

/** First-order matching of `t` (at depth `base`) against a pattern whose
 *  variables at levels [base, base + n) are holes. */
struct Matcher {
  int base, n, pdepth;  // pdepth: depth the pattern was read back at
  std::vector<TermP> bind;

  bool go(const TermP& t, const TermP& p, int b) {
    if (p->k == K::Var && p->n >= b) {
      int level = pdepth - 1 - (p->n - b);
      if (level >= base) {
        int h = level - base;
        if (h >= n) return false;
        for (int j = 0; j < b; ++j)
          if (mentionsVar(t, j)) return false;
        TermP s = shift(t, -b, 0);
        if (bind[h]) return alphaEq(bind[h], s);
        bind[h] = s;
        return true;
      }
      if (t->k != K::Var || t->n < b) return false;
      return base - 1 - (t->n - b) == level;
    }
    if (p->k == K::Var) return t->k == K::Var && t->n == p->n;
    if (t->k != p->k || t->a.size() != p->a.size() || t->tel != p->tel) return false;
    if ((t->k == K::Tag || t->k == K::Const) && t->s != p->s) return false;
    if (t->k == K::Set && t->n != p->n) return false;
    for (size_t i = 0; i < t->a.size(); ++i)
      if (!go(t->a[i], p->a[i], b + bindersAt(t->k, i))) return false;
    return true;
  }
};

class Resugar {
 public:
  explicit Resugar(const Scope& s) : s_(s) {}

  TermP go(const TermP& t, int depth) {
    if (t->k == K::IMu && !t->s.empty()) {
      if (auto r = data(t, depth)) return *r;
    }
    if (t->k == K::LCall && t->a[0]->k == K::LabelTy && s_.programs.count(t->a[0]->s)) {
      const TermP& L = t->a[0];
      std::vector<TermP> args;
      for (size_t i = 1; i + 1 < L->a.size(); i += 2) args.push_back(go(L->a[i], depth));
      return apps(cnst(L->s), args);
    }
    if (t->a.empty()) return t;
    auto c = std::make_shared<Term>(*t);
    for (size_t i = 0; i < c->a.size(); ++i) c->a[i] = go(t->a[i], depth + bindersAt(t->k, i));
    return c;
  }

 private:
  const Scope& s_;

  std::optional<TermP> data(const TermP& t, int depth) {
    auto it = s_.data.find(t->s);
    if (it == s_.data.end()) return std::nullopt;
    const Global* g = s_.g.find(t->s);
    if (!g || !g->value) return std::nullopt;
    const DataInfo& di = it->second;
    int n = static_cast<int>(di.paramNames.size() + di.indexNames.size());
    V v = g->value;
    for (int j = 0; j < n; ++j) {
      if (v->k != K::Lam) return std::nullopt;
      v = applyClo(v->clo, vvar(depth + j));
    }
    TermP pat = readback(depth + n, v);
    Matcher m{depth, n, depth + n, std::vector<TermP>(n)};
    if (!m.go(t, pat, 0)) return std::nullopt;
    std::vector<TermP> args;
    for (auto& b : m.bind) {
      if (!b) return std::nullopt;
      args.push_back(go(b, depth));
    }
    return apps(cnst(t->s), args);
  }
};

bool usualNat(const Scope& s) {
  auto it = s.data.find("Nat");
  if (it == s.data.end()) return false;
  const DataInfo& d = it->second;
  return d.paramNames.empty() && d.indexNames.empty() && d.tags == std::vector<std::string>{"zero", "suc"};
}

}  // namespace

TermP resugar(const Scope& s, const TermP& t) { return Resugar(s).go(t, 0); }
TermP resugarAt(const Scope& s, int depth, const TermP& t) { return Resugar(s).go(t, depth); }

std::string display(const Scope& s, const Ctx& ctx, const TermP& t) {
  PrintOptions o;
  o.natDecimal = usualNat(s);
  return printTerm(Resugar(s).go(t, ctx.depth()), ctx.names(), o);
}

void commitScope(Scope& into, const Scope& work) {
  for (auto& n : work.g.order) {
    if (into.g.find(n)) continue;
    const Global& g = work.g.m.at(n);
    addGlobal(into.g, n, g.type, g.term, false);
  }
  into.data = work.data;
  into.dataOrder = work.dataOrder;
  into.ctorOwner = work.ctorOwner;
  into.programs = work.programs;
}

}  // namespace idt

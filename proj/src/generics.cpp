#include "idt/generics.hpp"

#include <algorithm>

#include "idt/desc.hpp"

namespace idt {

namespace {

V arrowV(V a, V b) {
  return vpi("_", std::move(a), [b](V) { return b; });
}
V pairV(V a, V b) { return vmk(K::Pair, {std::move(a), std::move(b)}); }
V constSet1() {
  return vlam("i", [](V) { return vlam("y", [](V) { return vset(1); }); });
}

[[noreturn]] void fail(EErr k, Span sp, const std::string& what, const std::string& msg) {
  throw ElabError(k, sp, {what}, msg);
}

const DataInfo& unindexedData(const Scope& s, const std::string& d, const char* what) {
  auto it = s.data.find(d);
  if (it == s.data.end()) fail(EErr::UnboundName, {}, what, d + " is not a datatype");
  if (!it->second.unindexed()) fail(EErr::DerivingUnsupported, {}, what, d + " is an indexed family");
  return it->second;
}

void define(Scope& s, const std::string& name, const TermP& type, const TermP& term, bool recheck) {
  try {
    addGlobal(s.g, name, type, term, recheck);
  } catch (const KernelError& ke) {
    throw ElabError(EErr::KernelRejected, {}, {"generate " + name},
                    std::string("kernel rejected ") + name + " (" + kerrName(ke.kind) + "): " + ke.what());
  }
}

// \i y. unitElim (\u. IMu Unit R u -> Set1) P i y
V lift(const Globals* g, const V& R, const V& P) {
  V C = vlam("u", [R](V u) { return arrowV(vmk(K::IMu, {vunit(), R, u}), vset(1)); });
  return vlam("i", [g, C, P](V i) {
    V f = applyBuiltin(g, K::UnitElim, {C, P, i});
    return vlam("y", [f](V y) { return vapp(f, y); });
  });
}

// Payload comparison where both sides are known to be canonical.
class NoConfusionGen {
 public:
  NoConfusionGen(const Globals* g, DataView v) : g_(g), v_(std::move(v)) {}

  V body(V dx, V dy) const {
    const Globals* g = g_;
    V E = v_.E, T = v_.T, X = v_.X;
    V K1 = vlam("_", [](V) { return vset(1); });
    V Q = vlam("k1", [=](V k1) {
      return vlam("k2", [=](V k2) {
        return vpi("b1", vIInterp(vunit(), vapp(T, k1), X),
                   [=](V) { return vpi("b2", vIInterp(vunit(), vapp(T, k2), X), [](V) { return vset(1); }); });
      });
    });
    V same = vlam("k", [=](V k) {
      return vlam("b1", [=](V b1) {
        return vlam("b2", [=](V b2) {
          V eqT = vmk(K::Eq, {vIInterp(vunit(), vapp(T, k), X), b1, b2});
          return vpi("P", vset(0), [eqT](V P) { return arrowV(arrowV(eqT, P), P); });
        });
      });
    });
    V diff = vlam("k1", [](V) {
      return vlam("k2", [](V) {
        return vlam("b1", [](V) { return vlam("b2", [](V) { return vpi("P", vset(0), [](V P) { return P; }); }); });
      });
    });
    V inner = vlam("k1", [=](V k1) {
      return vlam("b1", [=](V b1) {
        V f = vlam("k2", [=](V k2) {
          return vlam("b2", [=](V b2) {
            return vapp(vapp(applyBuiltin(g, K::DecEnum, {E, k1, k2, Q, same, diff}), b1), b2);
          });
        });
        return applyBuiltin(g, K::Split, {K1, f, dy});
      });
    });
    return applyBuiltin(g, K::Split, {K1, inner, dx});
  }

  V statement(V i, V x, V j, V y) const {
    const Globals* g = g_;
    V R = v_.R;
    V K1 = constSet1();
    auto self = this;
    V m = vlam("i", [=](V) {
      return vlam("dx", [=](V dx) {
        return vlam("h", [=](V) {
          V m2 = vlam("j", [=](V) {
            return vlam("dy", [=](V dy) { return vlam("h", [=](V) { return self->body(dx, dy); }); });
          });
          return applyBuiltin(g, K::IInduction, {vunit(), R, K1, m2, j, y});
        });
      });
    });
    return applyBuiltin(g, K::IInduction, {vunit(), R, K1, m, i, x});
  }

  // NoConfusion x x, by cases on the constructor.
  V diagonal(V x) const {
    const Globals* g = g_;
    V R = v_.R, E = v_.E, T = v_.T, X = v_.X;
    auto self = this;
    V P = vlam("i", [=](V i) { return vlam("y", [=](V y) { return self->statement(i, y, i, y); }); });
    V Pk = vlam("k", [=](V k) {
      return vpi("b", vIInterp(vunit(), vapp(T, k), X), [=](V b) {
        V d = pairV(k, b);
        return self->body(d, d);
      });
    });
    V proof = vlam("b", [](V) {
      return vlam("P", [](V) { return vlam("f", [](V f) { return vapp(f, vmk(K::Refl)); }); });
    });
    V branches = vtt();
    for (size_t k = 0; k < v_.tags.size(); ++k) branches = pairV(proof, branches);
    V C = vlam("d", [=](V d) { return self->body(d, d); });
    V f = vlam("k", [=](V k) {
      V sw = applyBuiltin(g, K::Switch, {E, Pk, branches, k});
      return vlam("b", [sw](V b) { return vapp(sw, b); });
    });
    V m = vlam("i", [=](V) {
      return vlam("d", [=](V d) { return vlam("h", [=](V) { return applyBuiltin(g, K::Split, {C, f, d}); }); });
    });
    return applyBuiltin(g, K::IInduction, {vunit(), R, P, m, vtt(), x});
  }

 private:
  const Globals* g_;
  DataView v_;
};

}  // namespace

DataView viewData(const Scope& s, const std::string& d, const std::vector<V>& ps) {
  DataView v;
  v.type = dataTypeV(s, d, ps);
  if (v.type->k != K::IMu) fail(EErr::NotTagged, {}, "view " + d, d + " is not a datatype");
  v.R = v.type->a[1];
  V R = v.R;
  std::string name = d;
  v.X = vlam("j", [R, name](V j) { return vmk(K::IMu, {vunit(), R, j}, name); });
  v.code = vapp(R, vtt());
  auto tv = viewTagged(v.code);
  if (!tv) fail(EErr::NotTagged, {}, "view " + d, "the code of " + d + " is not a 'sigma over constructor tags");
  v.E = v.code->a[0];
  v.T = v.code->a[1];
  v.tags = tv->tags;
  return v;
}

void deriveCase(Scope& s, const std::string& d, bool recheck) {
  const DataInfo& di = unindexedData(s, d, "derive case analysis");
  const Global* g = s.g.find(d);
  const Scope* sp = &s;
  const Globals* gs = &s.g;
  size_t np = di.paramNames.size();
  viewData(s, d, [&] {
    std::vector<V> ps;
    for (size_t j = 0; j < np; ++j) ps.push_back(vvar(static_cast<int>(j)));
    return ps;
  }());
  V type = overParams(g->vtype, np, {}, false, [=](const std::vector<V>& ps) {
    DataView v = viewData(*sp, d, ps);
    return vpi("P", arrowV(v.type, vset(1)), [=](V P) {
      V mt = vpi("d", vIInterp(vunit(), v.code, v.X), [=](V dd) { return vapp(P, vmk(K::In, {dd})); });
      return vpi("m", mt, [=](V) { return vpi("x", v.type, [=](V x) { return vapp(P, x); }); });
    });
  });
  V value = overParams(g->vtype, np, {}, true, [=](const std::vector<V>& ps) {
    DataView v = viewData(*sp, d, ps);
    return vlam("P", [=](V P) {
      return vlam("m", [=](V m) {
        return vlam("x", [=](V x) {
          V Pp = lift(gs, v.R, P);
          V R = v.R, X = v.X;
          V Cm = vlam("u", [=](V u) {
            V Ru = vapp(R, u);
            return vpi("d", vIInterp(vunit(), Ru, X),
                       [=](V dd) { return arrowV(vIAll(vunit(), Ru, X, Pp, dd), vapp(vapp(Pp, u), vmk(K::In, {dd}))); });
          });
          V M0 = vlam("d", [m](V dd) { return vlam("h", [m, dd](V) { return vapp(m, dd); }); });
          V M = vlam("i", [=](V i) { return applyBuiltin(gs, K::UnitElim, {Cm, M0, i}); });
          return applyBuiltin(gs, K::IInduction, {vunit(), R, Pp, M, vtt(), x});
        });
      });
    });
  });
  define(s, caseName(d), readback(0, type), readback(0, value), recheck);
}

void specializeNoConfusion(Scope& s, const std::string& d, bool recheck) {
  const DataInfo& di = unindexedData(s, d, "specialize NoConfusion");
  const Global* g = s.g.find(d);
  const Scope* sp = &s;
  const Globals* gs = &s.g;
  int np = static_cast<int>(di.paramNames.size());
  std::vector<V> probe;
  for (int j = 0; j < np; ++j) probe.push_back(vvar(j));
  viewData(s, d, probe);

  V stType = overParams(g->vtype, np, {}, false, [=](const std::vector<V>& ps) {
    V D = dataTypeV(*sp, d, ps);
    return arrowV(D, arrowV(D, vset(1)));
  });
  V stValue = overParams(g->vtype, np, {}, true, [=](const std::vector<V>& ps) {
    auto gen = std::make_shared<NoConfusionGen>(gs, viewData(*sp, d, ps));
    return vlam("x", [=](V x) { return vlam("y", [=](V y) { return gen->statement(vtt(), x, vtt(), y); }); });
  });
  define(s, noConfusionTypeName(d), readback(0, stType), readback(0, stValue), recheck);

  // Π ps (x y : D ps) (q : x == y). NoConfusion_D ps x y
  auto Dps = [&](int by) {
    std::vector<TermP> xs;
    for (int j = 0; j < np; ++j) xs.push_back(var(np - 1 - j + by));
    return apps(cnst(d), xs);
  };
  std::vector<TermP> args;
  for (int j = 0; j < np; ++j) args.push_back(var(np - 1 - j + 3));
  args.push_back(var(2));
  args.push_back(var(1));
  TermP pfType = pi("x", Dps(0), pi("y", Dps(1), pi("q", eq(Dps(2), var(1), var(0)), apps(cnst(noConfusionTypeName(d)), args))));
  std::vector<std::pair<std::string, TermP>> tele;
  {
    TermP t = g->type;
    for (int j = 0; j < np; ++j) {
      tele.emplace_back(t->s, t->a[0]);
      t = t->a[1];
    }
  }
  for (int j = np; j-- > 0;) pfType = pi(tele[j].first, tele[j].second, pfType);

  V pfValue = overParams(g->vtype, np, {}, true, [=](const std::vector<V>& ps) {
    auto gen = std::make_shared<NoConfusionGen>(gs, viewData(*sp, d, ps));
    V D = dataTypeV(*sp, d, ps);
    return vlam("x", [=](V x) {
      return vlam("y", [=](V y) {
        return vlam("q", [=](V q) {
          V P = vlam("y", [=](V y2) { return vlam("q", [=](V) { return gen->statement(vtt(), x, vtt(), y2); }); });
          return applyBuiltin(gs, K::J, {D, x, P, gen->diagonal(x), y, q});
        });
      });
    });
  });
  define(s, noConfusionName(d), pfType, readback(0, pfValue), recheck);
}

void addGenerics(Scope& s, const std::string& d, bool recheck) {
  deriveCase(s, d, recheck);
  specializeNoConfusion(s, d, recheck);
}

Decision decideEqEnum(const V& E, const V& x, const V& y) {
  static const V P = vlam("x", [](V) { return vlam("y", [](V) { return vmk(K::UId); }); });
  static const V yes = vlam("x", [](V) { return vmk(K::Tag, {}, "equal"); });
  static const V no = vlam("x", [](V) { return vlam("y", [](V) { return vmk(K::Tag, {}, "not-equal"); }); });
  V r = applyBuiltin(nullptr, K::DecEnum, {E, x, y, P, yes, no});
  if (r->k != K::Tag) throw std::logic_error("decideEqEnum: indices are not canonical");
  return r->s == "equal" ? Decision::Equal : Decision::NotEqual;
}

// Deriving -------------------------------------------------------------------

namespace {

bool hasDerivedEq(const Scope& s, const std::string& d) {
  auto it = s.data.find(d);
  if (it == s.data.end() || !it->second.unindexed()) return false;
  auto& ds = it->second.derived;
  return std::find(ds.begin(), ds.end(), "Eq") != ds.end();
}

bool isVariable(const V& T) { return T->k == K::Neutral && T->s.empty() && T->sp.empty(); }

// Why a field domain lacks decidable equality, or empty when it has one.
std::string domainProblem(const Scope& s, const V& S, int depth) {
  switch (S->k) {
    case K::EnumT:
      return enumTags(S->a[0]) ? "" : "a field ranges over an enumeration that is not closed";
    case K::Unit:
      return "";
    case K::IMu:
      if (!S->s.empty() && hasDerivedEq(s, S->s)) return "";
      return "a field of type " + printTerm(resugarAt(s, depth, readback(depth, S)), {}) + " has no derived equality";
    default:
      if (isVariable(S)) return "";
      return "a field of type " + printTerm(readback(depth, S), {}) + " has no decidable equality";
  }
}

}  // namespace

Membership eqMembership(const Scope& s, const V& code, int depth) {
  Membership out;
  auto refuse = [&](std::string why) {
    out.reason = std::move(why);
    return out;
  };
  switch (code->k) {
    case K::DOne:
      out.witness = EqWitness{EqWitness::One, {}, nullptr, {}, {}};
      return out;
    case K::DVarI:
    case K::DVar:
      out.witness = EqWitness{EqWitness::Rec, {}, nullptr, {}, {}};
      return out;
    case K::DTimes: {
      Membership l = eqMembership(s, code->a[0], depth);
      if (!l.witness) return l;
      Membership r = eqMembership(s, code->a[1], depth);
      if (!r.witness) return r;
      out.witness = EqWitness{EqWitness::Times, {*l.witness, *r.witness}, nullptr, {}, {}};
      return out;
    }
    case K::DSigmaE: {
      auto tags = enumTags(code->a[0]);
      if (!tags) return refuse("constructor choice over an enumeration that is not closed");
      EqWitness w{EqWitness::Choice, {}, nullptr, {}, *tags};
      for (size_t k = 0; k < tags->size(); ++k) {
        Membership m = eqMembership(s, vapp(code->a[1], numeralV(static_cast<int>(k))), depth);
        if (!m.witness) return m;
        w.parts.push_back(*m.witness);
      }
      out.witness = w;
      return out;
    }
    case K::DSigma: {
      std::string p = domainProblem(s, code->a[0], depth);
      if (!p.empty()) return refuse(p);
      V T = code->a[1];
      Membership m = eqMembership(s, vapp(T, vvar(depth)), depth + 1);
      if (!m.witness) return m;
      out.witness = EqWitness{EqWitness::Field, {*m.witness}, code->a[0], T->clo ? T->clo->name : "x", {}};
      return out;
    }
    case K::DPi:
      return refuse("the code contains a function field ('Pi)");
    default:
      return refuse("the code is not canonical");
  }
}

bool eqSubDesc(const Scope& s, const V& code, int depth) {
  // Every node reachable from the root must be one of the accepted shapes.
  std::vector<std::pair<V, int>> todo{{code, depth}};
  while (!todo.empty()) {
    auto [c, dp] = todo.back();
    todo.pop_back();
    switch (c->k) {
      case K::DOne:
      case K::DVar:
      case K::DVarI:
        break;
      case K::DTimes:
        todo.push_back({c->a[0], dp});
        todo.push_back({c->a[1], dp});
        break;
      case K::DSigmaE: {
        auto tags = enumTags(c->a[0]);
        if (!tags) return false;
        for (size_t k = 0; k < tags->size(); ++k) todo.push_back({vapp(c->a[1], numeralV(static_cast<int>(k))), dp});
        break;
      }
      case K::DSigma:
        if (!domainProblem(s, c->a[0], dp).empty()) return false;
        todo.push_back({vapp(c->a[1], vvar(dp)), dp + 1});
        break;
      default:
        return false;
    }
  }
  return true;
}

namespace {

// Structural equality on canonical values of one code. Sub-codes are memoized by the node
// they come from, so repeated comparisons do not re-evaluate the code.
class EqOnCode {
 public:
  EqOnCode(const Scope& s, V code) : s_(&s), code_(std::move(code)) {}

  Decision operator()(const V& x, const V& y) {
    if (x->k != K::In || y->k != K::In) throw std::logic_error("deriveEq: values are not canonical");
    return go(code_, x->a[0], y->a[0]);
  }

 private:
  const Scope* s_;
  V code_;
  std::map<V, EqProc> fields_;
  std::map<std::pair<V, int>, V> choices_;
  std::map<V, V> constant_;

  Decision go(const V& c, const V& x, const V& y) {
    switch (c->k) {
      case K::DOne:
        return Decision::Equal;
      case K::DVar:
      case K::DVarI:
        return (*this)(x, y);
      case K::DTimes:
        if (go(c->a[0], vfst(x), vfst(y)) == Decision::NotEqual) return Decision::NotEqual;
        return go(c->a[1], vsnd(x), vsnd(y));
      case K::DSigmaE: {
        if (decideEqEnum(c->a[0], vfst(x), vfst(y)) == Decision::NotEqual) return Decision::NotEqual;
        return go(choice(c, vfst(x)), vsnd(x), vsnd(y));
      }
      case K::DSigma: {
        if (field(c->a[0])(vfst(x), vfst(y)) == Decision::NotEqual) return Decision::NotEqual;
        return go(body(c, vfst(x)), vsnd(x), vsnd(y));
      }
      default:
        throw std::logic_error("deriveEq: code outside the equality sub-universe");
    }
  }

  const EqProc& field(const V& S) {
    auto it = fields_.find(S);
    if (it != fields_.end()) return it->second;
    auto eqS = eqForType(*s_, S);
    if (!eqS) throw std::logic_error("deriveEq: field type without equality");
    if (fields_.size() > 64) fields_.clear();
    return fields_.emplace(S, *eqS).first->second;
  }

  V choice(const V& c, const V& tag) {
    int k = numeralValue(tag);
    if (k < 0) return vapp(c->a[1], tag);
    auto key = std::make_pair(c, k);
    auto it = choices_.find(key);
    if (it != choices_.end()) return it->second;
    if (choices_.size() > 256) choices_.clear();
    return choices_.emplace(key, vapp(c->a[1], tag)).first->second;
  }

  V body(const V& c, const V& a) {
    const V& T = c->a[1];
    bool constant = T->k == K::Lam && T->clo->body && !mentionsVar(T->clo->body, 0);
    if (!constant) return vapp(T, a);
    auto it = constant_.find(c);
    if (it != constant_.end()) return it->second;
    if (constant_.size() > 256) constant_.clear();
    return constant_.emplace(c, vapp(T, a)).first->second;
  }
};

EqProc eqOnCode(const Scope& s, const V& code) {
  auto impl = std::make_shared<EqOnCode>(s, code);
  return [impl](const V& x, const V& y) { return (*impl)(x, y); };
}

}  // namespace

std::optional<EqProc> eqForType(const Scope& s, const V& type) {
  switch (type->k) {
    case K::EnumT: {
      V E = type->a[0];
      return EqProc([E](const V& x, const V& y) { return decideEqEnum(E, x, y); });
    }
    case K::Unit:
      return EqProc([](const V&, const V&) { return Decision::Equal; });
    case K::IMu: {
      if (type->s.empty() || !hasDerivedEq(s, type->s)) return std::nullopt;
      V code = vapp(type->a[1], vtt());
      if (!eqMembership(s, code).witness) return std::nullopt;
      return eqOnCode(s, code);
    }
    default:
      return std::nullopt;
  }
}

EqProc deriveEq(const Scope& s, const std::string& d, const std::vector<V>& ps) {
  DataView v = viewData(s, d, ps);
  Membership m = eqMembership(s, v.code);
  if (!m.witness) throw ElabError(EErr::DerivingUnsupported, {}, {"derive Eq for " + d}, m.reason);
  return eqOnCode(s, v.code);
}

DerivingRegistry::DerivingRegistry() {
  DerivableProperty eqp;
  eqp.name = "Eq";
  eqp.subDesc = eqSubDesc;
  eqp.membership = eqMembership;
  eqp.derive = [](Scope& s, const std::string& d, const EqWitness&) {
    auto& ds = s.data.at(d).derived;
    if (std::find(ds.begin(), ds.end(), "Eq") == ds.end()) ds.push_back("Eq");
  };
  add(std::move(eqp));
}

void DerivingRegistry::add(DerivableProperty p) {
  if (props_.count(p.name)) throw ElabError(EErr::DuplicateProperty, {}, {"register " + p.name}, p.name + " is already registered");
  std::string n = p.name;
  props_.emplace(n, std::move(p));
}

const DerivableProperty& DerivingRegistry::get(const std::string& name, Span sp) const {
  auto it = props_.find(name);
  if (it == props_.end()) throw ElabError(EErr::UnknownProperty, sp, {"deriving " + name}, "no derivable property named " + name);
  return it->second;
}

std::vector<std::string> DerivingRegistry::names() const {
  std::vector<std::string> out;
  for (auto& [n, p] : props_) out.push_back(n);
  return out;
}

void runDeriving(Scope& s, const DataDecl& d, const DerivingRegistry& reg) {
  for (auto& name : d.deriving) {
    std::string what = "deriving " + name + " for " + d.name;
    const DerivableProperty& p = reg.get(name, d.span);
    const DataInfo& di = s.data.at(d.name);
    if (!di.unindexed())
      throw ElabError(EErr::DerivingUnsupported, d.span, {what}, "cannot derive " + name + " for the indexed family " + d.name);
    int np = static_cast<int>(di.paramNames.size());
    std::vector<V> ps;
    for (int j = 0; j < np; ++j) ps.push_back(vvar(j));
    DataView v = viewData(s, d.name, ps);
    Membership m = p.membership(s, v.code, np);
    if (!m.witness)
      throw ElabError(EErr::DerivingUnsupported, d.span, {what}, "cannot derive " + name + " for " + d.name + ": " + m.reason);
    p.derive(s, d.name, *m.witness);
  }
}

}  // namespace idt

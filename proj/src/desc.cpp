#include "idt/desc.hpp"

namespace idt {

std::optional<std::vector<std::string>> enumTags(const V& E) {
  std::vector<std::string> tags;
  const Value* p = E.get();
  while (p->k == K::ConsE) {
    if (p->a[0]->k != K::Tag) return std::nullopt;
    tags.push_back(p->a[0]->s);
    p = p->a[1].get();
  }
  if (p->k != K::NilE) return std::nullopt;
  return tags;
}

TermP tupleTerm(const std::vector<TermP>& xs) {
  TermP t = tt();
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) t = pair(*it, t);
  return t;
}

TermP switchLit(const TermP& E, const TermP& P, const std::vector<TermP>& branches) {
  std::vector<TermP> shifted;
  for (auto& b : branches) shifted.push_back(shift(b, 1));
  return lam("e", mk(K::Switch, {shift(E, 1), shift(P, 1), tupleTerm(shifted), var(0)}));
}

TermP sigmaCode(const std::vector<std::string>& tags, const std::vector<TermP>& codes, const TermP& codeType) {
  TermP E = enumLit(tags);
  TermP P = lam("_", shift(codeType, 1));
  return mk(K::DSigmaE, {E, switchLit(E, P, codes)});
}

TermP natDesc() { return sigmaCode({"zero", "suc"}, {mk(K::DOne), mk(K::DVar)}, mk(K::Desc)); }

std::optional<TaggedView> viewTagged(const V& code) {
  if (code->k != K::DSigmaE) return std::nullopt;
  auto tags = enumTags(code->a[0]);
  if (!tags) return std::nullopt;
  TaggedView v;
  v.tags = *tags;
  V T = code->a[1];
  V idx = vmk(K::ZeroE);
  for (size_t i = 0; i < tags->size(); ++i) {
    v.codes.push_back(vapp(T, idx));
    idx = vmk(K::SucE, {idx});
  }
  return v;
}

int numeralValue(const V& v) {
  int n = 0;
  const Value* p = v.get();
  while (p->k == K::SucE) {
    ++n;
    p = p->a[0].get();
  }
  return p->k == K::ZeroE ? n : -1;
}

V numeralV(int k) {
  V v = vmk(K::ZeroE);
  for (int i = 0; i < k; ++i) v = vmk(K::SucE, {v});
  return v;
}

std::vector<bool> ctorBinders(const V& code, bool hyps, int depth) {
  std::vector<bool> out;
  V c = code;
  for (;;) {
    switch (c->k) {
      case K::DOne:
        return out;
      case K::DSigma:
      case K::DSigmaE:
        out.push_back(false);
        c = vapp(c->a[1], vvar(depth++));
        break;
      case K::DTimes:
        out.push_back(false);
        if (hyps) out.push_back(true);
        c = c->a[1];
        break;
      default:
        out.push_back(false);
        if (hyps) out.push_back(true);
        return out;
    }
  }
}

V applyBuiltin(const Globals* g, K k, const std::vector<V>& args) {
  Env env;
  env.g = g;
  for (auto& a : args) env = env.push(a);
  std::vector<TermP> vs;
  int n = static_cast<int>(args.size());
  for (int i = 0; i < n; ++i) vs.push_back(var(n - 1 - i));
  return eval(env, mk(k, std::move(vs)));
}

}  // namespace idt

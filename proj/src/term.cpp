#include "idt/term.hpp"

#include <stdexcept>

namespace idt {

const char* kindName(K k) {
  switch (k) {
#define IDT_NAME(x) \
  case K::x:        \
    return #x;
    IDT_KINDS(IDT_NAME)
#undef IDT_NAME
    case K::Neutral:
      return "Neutral";
    case K::DecEnumR:
      return "DecEnumR";
  }
  return "?";
}

int bindersAt(K k, size_t i) {
  switch (k) {
    case K::Pi:
    case K::Sigma:
      return i == 1 ? 1 : 0;
    case K::Lam:
      return i == 0 ? 1 : 0;
    default:
      return 0;
  }
}

TermP mk(K k, std::vector<TermP> a, std::string s, int n) {
  auto t = std::make_shared<Term>();
  t->k = k;
  t->a = std::move(a);
  t->s = std::move(s);
  t->n = n;
  return t;
}

TermP var(int i) { return mk(K::Var, {}, {}, i); }
TermP cnst(const std::string& name) { return mk(K::Const, {}, name); }
TermP set(int l) { return mk(K::Set, {}, {}, l); }
TermP pi(const std::string& x, TermP a, TermP b) { return mk(K::Pi, {std::move(a), std::move(b)}, x); }
TermP arrow(TermP a, TermP b) { return pi("_", std::move(a), shift(b, 1)); }
TermP lam(const std::string& x, TermP body) { return mk(K::Lam, {std::move(body)}, x); }
TermP lamAnn(const std::string& x, TermP dom, TermP body) {
  return mk(K::Lam, {std::move(body), std::move(dom)}, x);
}
TermP app(TermP f, TermP x) { return mk(K::App, {std::move(f), std::move(x)}); }
TermP apps(TermP f, const std::vector<TermP>& xs) {
  for (auto& x : xs) f = app(f, x);
  return f;
}
TermP sigma(const std::string& x, TermP a, TermP b) { return mk(K::Sigma, {std::move(a), std::move(b)}, x); }
TermP times(TermP a, TermP b) { return sigma("_", std::move(a), shift(b, 1)); }
TermP pair(TermP a, TermP b) { return mk(K::Pair, {std::move(a), std::move(b)}); }
TermP fst(TermP p) { return mk(K::Fst, {std::move(p)}); }
TermP snd(TermP p) { return mk(K::Snd, {std::move(p)}); }
TermP unit() { return mk(K::Unit); }
TermP tt() { return mk(K::Void); }
TermP tag(const std::string& t) { return mk(K::Tag, {}, t); }
TermP enumLit(const std::vector<std::string>& tags) {
  TermP e = mk(K::NilE);
  for (auto it = tags.rbegin(); it != tags.rend(); ++it) e = mk(K::ConsE, {tag(*it), e});
  return e;
}
TermP numeral(int i, const std::string& hint) {
  TermP t = mk(K::ZeroE);
  for (int j = 0; j < i; ++j) t = mk(K::SucE, {t});
  if (!hint.empty()) {
    auto c = std::make_shared<Term>(*t);
    c->s = hint;
    t = c;
  }
  return t;
}
TermP eq(TermP A, TermP x, TermP y) { return mk(K::Eq, {std::move(A), std::move(x), std::move(y)}); }
TermP refl() { return mk(K::Refl); }

static bool hintOnly(K k) { return k == K::ZeroE || k == K::SucE || k == K::In || k == K::IMu; }

bool alphaEq(const TermP& x, const TermP& y) {
  if (x == y) return true;
  if (!x || !y) return false;
  if (x->k != y->k || (x->n != y->n && !hintOnly(x->k)) || x->a.size() != y->a.size() || x->tel != y->tel) return false;
  bool binderName = x->k == K::Pi || x->k == K::Sigma || x->k == K::Lam;
  if (!binderName && !hintOnly(x->k) && x->s != y->s) return false;
  for (size_t i = 0; i < x->a.size(); ++i)
    if (!alphaEq(x->a[i], y->a[i])) return false;
  return true;
}

template <class F>
static TermP mapVars(const TermP& t, int depth, const F& f) {
  if (t->k == K::Var || t->k == K::Lvl) return f(t, depth);
  if (t->a.empty()) return t;
  std::vector<TermP> as;
  as.reserve(t->a.size());
  bool changed = false;
  for (size_t i = 0; i < t->a.size(); ++i) {
    auto c = mapVars(t->a[i], depth + bindersAt(t->k, i), f);
    changed = changed || c != t->a[i];
    as.push_back(std::move(c));
  }
  if (!changed) return t;
  auto r = std::make_shared<Term>(*t);
  r->a = std::move(as);
  return r;
}

TermP shift(const TermP& t, int by, int cutoff) {
  if (by == 0) return t;
  return mapVars(t, cutoff, [by](const TermP& v, int d) -> TermP {
    if (v->k == K::Var && v->n >= d) return var(v->n + by);
    return v;
  });
}

TermP substMany(const TermP& t, const std::vector<TermP>& xs) {
  int m = static_cast<int>(xs.size());
  return mapVars(t, 0, [&](const TermP& v, int d) -> TermP {
    if (v->k != K::Var || v->n < d) return v;
    int j = v->n - d;
    if (j < m) return shift(xs[j], d);
    return var(v->n - m);
  });
}

static bool anyNode(const TermP& t, int depth, const std::function<bool(const TermP&, int)>& p) {
  if (p(t, depth)) return true;
  for (size_t i = 0; i < t->a.size(); ++i)
    if (anyNode(t->a[i], depth + bindersAt(t->k, i), p)) return true;
  return false;
}

bool mentionsConst(const TermP& t, const std::string& name) {
  return anyNode(t, 0, [&](const TermP& x, int) { return x->k == K::Const && x->s == name; });
}

bool mentionsVar(const TermP& t, int index) {
  return anyNode(t, 0, [&](const TermP& x, int d) { return x->k == K::Var && x->n == index + d; });
}

TermP Builder::lam(const std::string& x, const std::function<TermP(TermP)>& body) {
  int l = depth_++;
  auto b = body(mk(K::Lvl, {}, {}, l));
  depth_--;
  return mk(K::Lam, {b}, x);
}

TermP Builder::pi(const std::string& x, TermP dom, const std::function<TermP(TermP)>& body) {
  int l = depth_++;
  auto b = body(mk(K::Lvl, {}, {}, l));
  depth_--;
  return mk(K::Pi, {std::move(dom), b}, x);
}

TermP Builder::sigma(const std::string& x, TermP dom, const std::function<TermP(TermP)>& body) {
  int l = depth_++;
  auto b = body(mk(K::Lvl, {}, {}, l));
  depth_--;
  return mk(K::Sigma, {std::move(dom), b}, x);
}

TermP Builder::lift(const TermP& t) const {
  int base = base_;
  return mapVars(t, 0, [base](const TermP& v, int d) -> TermP {
    if (v->k == K::Var && v->n >= d) return mk(K::Lvl, {}, {}, base - 1 - (v->n - d));
    return v;
  });
}

TermP Builder::close(const TermP& t) const {
  int base = base_;
  return mapVars(t, 0, [base](const TermP& v, int d) -> TermP {
    if (v->k == K::Lvl) {
      int idx = base + d - 1 - v->n;
      if (idx < 0) throw std::logic_error("builder level escapes its scope");
      return var(idx);
    }
    return v;
  });
}

}  // namespace idt

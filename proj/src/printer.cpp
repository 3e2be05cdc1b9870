#include <algorithm>
#include <optional>
#include <set>
#include <sstream>

#include "idt/surface.hpp"

namespace idt {

// External printer ------------------------------------------------------------

namespace {

// Precedence: 0 binders/lambda, 1 arrow, 2 products, 3 equality, 4 application, 5 atoms.
int precOf(const ExtP& e) {
  switch (e->k) {
    case EK::Lam:
      return 0;
    case EK::Pi:
    case EK::Sigma:
      if (!e->s.empty()) return 0;
      return e->k == EK::Pi ? 1 : 2;
    case EK::Times:
      return 2;
    case EK::EqT:
      return 3;
    case EK::App:
      return 4;
    default:
      return 5;
  }
}

void pr(std::ostream& os, const ExtP& e, int ctx);

void prAt(std::ostream& os, const ExtP& e, int ctx) {
  if (precOf(e) < ctx) {
    os << '(';
    pr(os, e, 0);
    os << ')';
  } else {
    pr(os, e, ctx);
  }
}

void prPatArg(std::ostream& os, PatArg::Kind k, const std::string& var, const ExtP& t) {
  if (k == PatArg::Plain) {
    prAt(os, t, 5);
  } else {
    os << '[';
    if (k == PatArg::Constraint) os << var << " = ";
    pr(os, t, 0);
    os << ']';
  }
}

void pr(std::ostream& os, const ExtP& e, int ctx) {
  switch (e->k) {
    case EK::Var:
      os << e->s;
      return;
    case EK::Num:
      os << e->n;
      return;
    case EK::Tag:
      os << '\'' << e->s;
      return;
    case EK::UnitVal:
      os << "()";
      return;
    case EK::App:
      prAt(os, e->a[0], 4);
      os << ' ';
      prAt(os, e->a[1], 5);
      return;
    case EK::Lam: {
      os << '\\' << e->s;
      ExtP b = e->a[0];
      while (b->k == EK::Lam) {
        os << ' ' << b->s;
        b = b->a[0];
      }
      os << ". ";
      pr(os, b, 0);
      return;
    }
    case EK::Pi:
    case EK::Sigma: {
      const char* op = e->k == EK::Pi ? " -> " : " * ";
      if (e->s.empty()) {
        prAt(os, e->a[0], e->k == EK::Pi ? 2 : 3);
        os << op;
        prAt(os, e->a[1], e->k == EK::Pi ? 0 : 2);
      } else {
        os << '(' << e->s << " : ";
        pr(os, e->a[0], 0);
        os << ')' << op;
        pr(os, e->a[1], 0);
      }
      return;
    }
    case EK::Times:
      prAt(os, e->a[0], 3);
      os << " '* ";
      prAt(os, e->a[1], 2);
      return;
    case EK::EqT:
      prAt(os, e->a[0], 4);
      os << " == ";
      prAt(os, e->a[1], 4);
      return;
    case EK::Ann:
      os << '(';
      pr(os, e->a[0], 0);
      os << " : ";
      pr(os, e->a[1], 0);
      os << ')';
      return;
    case EK::Pair: {
      os << '(';
      pr(os, e->a[0], 0);
      ExtP r = e->a[1];
      while (r->k == EK::Pair) {
        os << ", ";
        pr(os, r->a[0], 0);
        r = r->a[1];
      }
      os << ", ";
      pr(os, r, 0);
      os << ')';
      return;
    }
    case EK::Tuple:
      os << '[';
      for (size_t i = 0; i < e->a.size(); ++i) {
        if (i) os << ' ';
        prAt(os, e->a[i], 5);
      }
      os << ']';
      return;
    case EK::EnumLit:
      os << '{';
      for (size_t i = 0; i < e->names.size(); ++i) os << (i ? "," : "") << e->names[i];
      os << '}';
      return;
    case EK::ElimLit:
      os << '[';
      for (size_t i = 0; i < e->names.size(); ++i) {
        if (i) os << ", ";
        os << e->names[i] << " -> ";
        pr(os, e->a[i], 0);
      }
      os << ']';
      return;
    case EK::DLabel:
      os << '<' << e->s;
      for (size_t i = 0; i < e->a.size(); ++i) {
        const std::string& m = e->names[i];
        os << ' ';
        if (m == "p")
          prPatArg(os, PatArg::Plain, "", e->a[i]);
        else if (m == "i")
          prPatArg(os, PatArg::Index, "", e->a[i]);
        else
          prPatArg(os, PatArg::Constraint, m.substr(2), e->a[i]);
      }
      os << '>';
      return;
    case EK::PLabel:
      os << '<' << e->s;
      for (size_t i = 1; i < e->a.size(); ++i) {
        os << ' ';
        prAt(os, e->a[i], 5);
      }
      os << " : ";
      pr(os, e->a[0], 0);
      os << '>';
      return;
  }
}

void prPattern(std::ostream& os, const Pattern& p) {
  os << p.head;
  for (auto& a : p.args) {
    os << ' ';
    prPatArg(os, a.kind, a.var, a.term);
  }
}

void prBinders(std::ostream& os, const std::vector<Binder>& bs, char open, char close) {
  for (auto& b : bs) {
    os << ' ' << open << b.name << " : ";
    pr(os, b.type, 0);
    os << close;
  }
}

void prEntries(std::ostream& os, const std::vector<DataEntry>& es, int indent) {
  for (auto& e : es) {
    os << std::string(indent, ' ');
    prPattern(os, e.pat);
    if (e.con) {
      os << " => " << e.con->tag;
      prBinders(os, e.con->args, '(', ')');
      os << '\n';
    } else {
      os << " by " << (e.by->rec ? "rec " : "case ") << e.by->var << '\n';
      prEntries(os, e.by->body, indent + 2);
    }
  }
}

void prProgram(std::ostream& os, const Program& p, int indent) {
  os << std::string(indent, ' ');
  prPattern(os, p.pat);
  if (p.rhs) {
    os << " => ";
    pr(os, p.rhs, 0);
    return;
  }
  os << " by " << (p.rec ? "rec " : "case ") << p.var << " {";
  for (size_t i = 0; i < p.subs.size(); ++i) {
    os << (i ? ";\n" : "\n");
    prProgram(os, p.subs[i], indent + 2);
  }
  os << '\n' << std::string(indent, ' ') << '}';
}

}  // namespace

std::string printExt(const ExtP& e) {
  std::ostringstream os;
  pr(os, e, 0);
  return os.str();
}

std::string printDecl(const Decl& d) {
  std::ostringstream os;
  if (auto* dd = std::get_if<DataDecl>(&d)) {
    os << "data " << dd->name;
    prBinders(os, dd->params, '(', ')');
    prBinders(os, dd->indices, '[', ']');
    os << " : Set where\n";
    prEntries(os, dd->body, 2);
    if (!dd->deriving.empty()) {
      os << "deriving";
      for (size_t i = 0; i < dd->deriving.size(); ++i) os << (i ? ", " : " ") << dd->deriving[i];
      os << '\n';
    }
  } else {
    auto& l = std::get<LetDecl>(d);
    os << "let " << l.name;
    prBinders(os, l.params, '(', ')');
    os << " : ";
    pr(os, l.result, 0);
    os << " where\n";
    prProgram(os, l.prog, 2);
    os << '\n';
  }
  return os.str();
}

std::string printFile(const std::vector<Decl>& ds) {
  std::string out;
  for (size_t i = 0; i < ds.size(); ++i) {
    if (i) out += '\n';
    out += printDecl(ds[i]);
  }
  return out;
}

// Core to external -----------------------------------------------------------

namespace {

ExtP bapp(const std::string& f, std::initializer_list<ExtP> xs) {
  ExtP e = evar(f);
  for (auto& x : xs) e = eapp(e, x);
  return e;
}

void freeNames(const TermP& t, int depth, const std::vector<std::string>& names, std::set<std::string>& out) {
  if (t->k == K::Var) {
    int i = t->n - depth;
    if (i >= 0 && i < static_cast<int>(names.size())) out.insert(names[names.size() - 1 - i]);
    return;
  }
  if (t->k == K::Const) {
    out.insert(t->s);
    return;
  }
  for (size_t i = 0; i < t->a.size(); ++i) freeNames(t->a[i], depth + bindersAt(t->k, i), names, out);
}

class ToExt {
 public:
  ToExt(std::vector<std::string> names, const PrintOptions& o) : names_(std::move(names)), opt_(o) {}

  ExtP go(const TermP& t) {
    switch (t->k) {
      case K::Var: {
        int i = t->n;
        if (i < static_cast<int>(names_.size())) return evar(names_[names_.size() - 1 - i]);
        return evar("#" + std::to_string(i));
      }
      case K::Lvl:
        return evar("@" + std::to_string(t->n));
      case K::Const:
        return evar(t->s);
      case K::Set:
        return evar(t->n == 0 ? "Set" : "Set" + std::to_string(t->n));
      case K::Pi:
      case K::Sigma: {
        ExtP dom = go(t->a[0]);
        std::string x = binder(t->s, t->a[1]);
        ExtP body = under(x, t->a[1]);
        return emk(t->k == K::Pi ? EK::Pi : EK::Sigma, {dom, body}, x == "_" ? "" : x);
      }
      case K::Lam: {
        if (auto lit = elimLiteral(t)) return lit;
        std::string x = binder(t->s, t->a[0]);
        return emk(EK::Lam, {under(x, t->a[0])}, x);
      }
      case K::App: {
        return eapp(go(t->a[0]), go(t->a[1]));
      }
      case K::Pair:
        return emk(EK::Pair, {go(t->a[0]), go(t->a[1])});
      case K::Fst:
        return bapp("fst", {go(t->a[0])});
      case K::Snd:
        return bapp("snd", {go(t->a[0])});
      case K::Split:
        return bapp("split", {go(t->a[0]), go(t->a[1]), go(t->a[2])});
      case K::Unit:
        return evar("Unit");
      case K::Void:
        return emk(EK::UnitVal);
      case K::UnitElim:
        return bapp("unitElim", {go(t->a[0]), go(t->a[1]), go(t->a[2])});
      case K::UId:
        return evar("UId");
      case K::Tag:
        return emk(EK::Tag, {}, t->s);
      case K::EnumU:
        return evar("EnumU");
      case K::NilE:
      case K::ConsE: {
        if (auto tags = literalTags(t)) {
          auto e = std::make_shared<Ext>();
          e->k = EK::EnumLit;
          e->names = *tags;
          return e;
        }
        if (t->k == K::NilE) return evar("nilE");
        return bapp("consE", {go(t->a[0]), go(t->a[1])});
      }
      case K::EnumT:
        return bapp("EnumT", {go(t->a[0])});
      case K::ZeroE:
        if (!t->s.empty()) return emk(EK::Tag, {}, t->s);
        return evar("ze");
      case K::SucE:
        if (!t->s.empty()) return emk(EK::Tag, {}, t->s);
        return bapp("su", {go(t->a[0])});
      case K::PiE:
        return bapp("piE", {go(t->a[0]), go(t->a[1])});
      case K::Switch:
        return bapp("switch", {go(t->a[0]), go(t->a[1]), go(t->a[2]), go(t->a[3])});
      case K::Eq: {
        const TermP& x = t->a[1];
        TermP h = x;
        while (h->k == K::App) h = h->a[0];
        if (h->k == K::Var || h->k == K::Const) return emk(EK::EqT, {go(x), go(t->a[2])});
        return bapp("Eq", {go(t->a[0]), go(x), go(t->a[2])});
      }
      case K::Refl:
        return evar("refl");
      case K::J:
        return bapp("J", {go(t->a[0]), go(t->a[1]), go(t->a[2]), go(t->a[3]), go(t->a[4]), go(t->a[5])});
      case K::Desc:
        return evar("Desc");
      case K::DVar:
        return evar("'var");
      case K::DOne:
        return evar("'1");
      case K::DTimes:
        return emk(EK::Times, {go(t->a[0]), go(t->a[1])});
      case K::DPi:
        return bapp("'Pi", {go(t->a[0]), go(t->a[1])});
      case K::DSigma:
        return bapp("'Sigma", {go(t->a[0]), go(t->a[1])});
      case K::DSigmaE:
        return bapp("'sigma", {go(t->a[0]), go(t->a[1])});
      case K::Interp:
        return bapp("interp", {go(t->a[0]), go(t->a[1])});
      case K::Mu:
        return bapp("Mu", {go(t->a[0])});
      case K::In:
        if (auto c = constructorForm(t)) return c;
        return bapp("In", {go(t->a[0])});
      case K::Induction:
        return bapp("induction", {go(t->a[0]), go(t->a[1]), go(t->a[2]), go(t->a[3])});
      case K::All:
        return bapp("All", {go(t->a[0]), go(t->a[1]), go(t->a[2]), go(t->a[3])});
      case K::IndMap:
        return bapp("indMap", {go(t->a[0]), go(t->a[1]), go(t->a[2]), go(t->a[3]), go(t->a[4])});
      case K::IDesc:
        return bapp("IDesc", {go(t->a[0])});
      case K::DVarI:
        if (opt_.unitVarI && t->a[0]->k == K::Void) return evar("'var");
        return bapp("'varI", {go(t->a[0])});
      case K::IInterp:
        return bapp("iinterp", {go(t->a[0]), go(t->a[1]), go(t->a[2])});
      case K::IMu:
        return bapp("IMu", {go(t->a[0]), go(t->a[1]), go(t->a[2])});
      case K::IInduction:
        return bapp("iinduction", {go(t->a[0]), go(t->a[1]), go(t->a[2]), go(t->a[3]), go(t->a[4]), go(t->a[5])});
      case K::IAll:
        return bapp("IAll", {go(t->a[0]), go(t->a[1]), go(t->a[2]), go(t->a[3]), go(t->a[4])});
      case K::IIndMap:
        return bapp("iindMap", {go(t->a[0]), go(t->a[1]), go(t->a[2]), go(t->a[3]), go(t->a[4]), go(t->a[5])});
      case K::LabelTy: {
        auto e = std::make_shared<Ext>();
        e->k = EK::PLabel;
        e->s = t->s;
        e->a.push_back(go(t->a[0]));
        for (size_t i = 1; i + 1 < t->a.size(); i += 2) e->a.push_back(go(t->a[i]));
        return e;
      }
      case K::LRet:
        return bapp("return", {go(t->a[0])});
      case K::LCall:
        return bapp("call", {go(t->a[0]), go(t->a[1])});
      case K::DLabelTy: {
        auto e = std::make_shared<Ext>();
        e->k = EK::DLabel;
        e->s = t->s;
        size_t j = 0;
        for (char c : t->tel) {
          if (c == 'p') {
            e->a.push_back(go(t->a[j]));
            e->names.push_back("p");
            j += 1;
          } else if (c == 'i') {
            e->a.push_back(go(t->a[j]));
            e->names.push_back("i");
            j += 2;
          } else {
            ExtP v = go(t->a[j]);
            e->a.push_back(go(t->a[j + 1]));
            e->names.push_back("c:" + (v->k == EK::Var ? v->s : printExt(v)));
            j += 3;
          }
        }
        return e;
      }
      case K::DRet:
        return bapp("return", {go(t->a[0]), go(t->a[1])});
      case K::DCall:
        return bapp("call", {go(t->a[0]), go(t->a[1])});
      case K::DecEnum:
        return bapp("decEnum", {go(t->a[0]), go(t->a[1]), go(t->a[2]), go(t->a[3]), go(t->a[4]), go(t->a[5])});
      case K::Ann:
        return emk(EK::Ann, {go(t->a[0]), go(t->a[1])});
      default:
        return evar(std::string("?") + kindName(t->k));
    }
  }

 private:
  std::vector<std::string> names_;
  PrintOptions opt_;

  std::string binder(const std::string& hint, const TermP& body) {
    if (!mentionsVar(body, 0)) return "_";
    std::string base = hint.empty() || hint == "_" ? "x" : hint;
    std::set<std::string> used;
    freeNames(body, 1, names_, used);
    std::string x = base;
    for (int k = 1; used.count(x); ++k) x = base + std::to_string(k);
    return x;
  }

  ExtP under(const std::string& x, const TermP& body) {
    names_.push_back(x);
    ExtP r = go(body);
    names_.pop_back();
    return r;
  }

  static std::optional<std::vector<std::string>> literalTags(const TermP& t) {
    std::vector<std::string> tags;
    const Term* p = t.get();
    while (p->k == K::ConsE && p->a[0]->k == K::Tag) {
      tags.push_back(p->a[0]->s);
      p = p->a[1].get();
    }
    if (p->k != K::NilE) return std::nullopt;
    return tags;
  }

  // \e. switch E P (b0, ..., ()) e with nothing else mentioning e.
  ExtP elimLiteral(const TermP& t) {
    const TermP& b = t->a[0];
    if (t->a.size() > 1 || b->k != K::Switch || b->a[3]->k != K::Var || b->a[3]->n != 0) return nullptr;
    auto tags = literalTags(b->a[0]);
    if (!tags) return nullptr;
    for (int i = 0; i < 3; ++i)
      if (mentionsVar(b->a[i], 0)) return nullptr;
    std::vector<TermP> branches;
    const Term* p = b->a[2].get();
    while (p->k == K::Pair) {
      branches.push_back(p->a[0]);
      p = p->a[1].get();
    }
    if (p->k != K::Void || branches.size() != tags->size()) return nullptr;
    auto e = std::make_shared<Ext>();
    e->k = EK::ElimLit;
    e->names = *tags;
    for (auto& br : branches) e->a.push_back(go(shift(br, -1, 0)));
    return e;
  }

  static std::optional<long> decimal(const TermP& t) {
    if (t->k != K::In) return std::nullopt;
    const TermP& d = t->a[0];
    if (d->k != K::Pair) return std::nullopt;
    if (t->s == "zero" && d->a[1]->k == K::Void) return 0;
    if (t->s == "suc" && d->a[1]->k == K::Pair && d->a[1]->a[1]->k == K::Void) {
      auto r = decimal(d->a[1]->a[0]);
      if (r) return *r + 1;
    }
    return std::nullopt;
  }

  ExtP constructorForm(const TermP& t) {
    if (t->s.empty()) return nullptr;
    if (opt_.natDecimal) {
      if (auto n = decimal(t)) {
        auto e = std::make_shared<Ext>();
        e->k = EK::Num;
        e->n = *n;
        return e;
      }
    }
    const Term* p = t->a[0].get();
    for (int layer = 0; layer < std::max(1, t->n); ++layer) {
      if (p->k != K::Pair) return nullptr;
      p = p->a[1].get();
    }
    std::vector<TermP> args;
    while (p->k == K::Pair) {
      args.push_back(p->a[0]);
      p = p->a[1].get();
    }
    if (p->k != K::Void) return nullptr;
    while (!args.empty() && args.back()->k == K::Refl) args.pop_back();
    ExtP e = evar(t->s);
    for (auto& a : args) e = eapp(e, go(a));
    return e;
  }
};

}  // namespace

ExtP toExt(const TermP& t, const std::vector<std::string>& names, const PrintOptions& opt) {
  return ToExt(names, opt).go(t);
}

std::string printTerm(const TermP& t, const std::vector<std::string>& names, const PrintOptions& opt) {
  return printExt(toExt(t, names, opt));
}

std::string printCode(const TermP& code, const std::vector<std::string>& names, bool unindexed) {
  PrintOptions o;
  o.unitVarI = unindexed;
  return printTerm(code, names, o);
}

}  // namespace idt

#include <algorithm>

#include "idt/surface.hpp"
#include "lexer.hpp"

namespace idt {

ExtP emk(EK k, std::vector<ExtP> a, std::string s, Span sp) {
  auto e = std::make_shared<Ext>();
  e->k = k;
  e->a = std::move(a);
  e->s = std::move(s);
  e->span = sp;
  return e;
}

ExtP evar(const std::string& x, Span sp) { return emk(EK::Var, {}, x, sp); }

namespace {

Span join(const Span& a, const Span& b) {
  if (!a.valid()) return b;
  if (!b.valid()) return a;
  return Span{a.line, a.col, b.endLine, b.endCol};
}

}  // namespace

ExtP eapp(ExtP f, ExtP x) {
  Span sp = join(f->span, x->span);
  return emk(EK::App, {std::move(f), std::move(x)}, {}, sp);
}

bool extEq(const ExtP& x, const ExtP& y) {
  if (x == y) return true;
  if (!x || !y) return false;
  if (x->k != y->k || x->s != y->s || x->n != y->n || x->names != y->names || x->a.size() != y->a.size())
    return false;
  for (size_t i = 0; i < x->a.size(); ++i)
    if (!extEq(x->a[i], y->a[i])) return false;
  return true;
}

std::pair<ExtP, std::vector<ExtP>> spine(const ExtP& e) {
  std::vector<ExtP> args;
  ExtP h = e;
  while (h->k == EK::App) {
    args.push_back(h->a[1]);
    h = h->a[0];
  }
  std::reverse(args.begin(), args.end());
  return {h, args};
}

namespace {

bool bindersEq(const std::vector<Binder>& x, const std::vector<Binder>& y) {
  if (x.size() != y.size()) return false;
  for (size_t i = 0; i < x.size(); ++i)
    if (x[i].name != y[i].name || !extEq(x[i].type, y[i].type)) return false;
  return true;
}

bool patEq(const Pattern& x, const Pattern& y) {
  if (x.head != y.head || x.args.size() != y.args.size()) return false;
  for (size_t i = 0; i < x.args.size(); ++i) {
    const auto &a = x.args[i], &b = y.args[i];
    if (a.kind != b.kind || a.var != b.var || !extEq(a.term, b.term)) return false;
  }
  return true;
}

bool entriesEq(const std::vector<DataEntry>& x, const std::vector<DataEntry>& y) {
  if (x.size() != y.size()) return false;
  for (size_t i = 0; i < x.size(); ++i) {
    const auto &a = x[i], &b = y[i];
    if (!patEq(a.pat, b.pat) || bool(a.con) != bool(b.con) || bool(a.by) != bool(b.by)) return false;
    if (a.con && (a.con->tag != b.con->tag || !bindersEq(a.con->args, b.con->args))) return false;
    if (a.by && (a.by->rec != b.by->rec || a.by->var != b.by->var || !entriesEq(a.by->body, b.by->body)))
      return false;
  }
  return true;
}

bool progEq(const Program& x, const Program& y) {
  if (!patEq(x.pat, y.pat) || !extEq(x.rhs, y.rhs) || x.rec != y.rec || x.var != y.var ||
      x.subs.size() != y.subs.size())
    return false;
  for (size_t i = 0; i < x.subs.size(); ++i)
    if (!progEq(x.subs[i], y.subs[i])) return false;
  return true;
}

}  // namespace

bool declEq(const Decl& x, const Decl& y) {
  if (x.index() != y.index()) return false;
  if (auto* d = std::get_if<DataDecl>(&x)) {
    auto& e = std::get<DataDecl>(y);
    return d->name == e.name && bindersEq(d->params, e.params) && bindersEq(d->indices, e.indices) &&
           entriesEq(d->body, e.body) && d->deriving == e.deriving;
  }
  auto& l = std::get<LetDecl>(x);
  auto& m = std::get<LetDecl>(y);
  return l.name == m.name && bindersEq(l.params, m.params) && extEq(l.result, m.result) && progEq(l.prog, m.prog);
}

namespace {

const char* kKeywords[] = {"data", "let", "where", "by", "deriving"};

bool isKeyword(const std::string& s) {
  for (auto* k : kKeywords)
    if (s == k) return true;
  return false;
}

bool isCodeName(const std::string& s) {
  return s == "var" || s == "1" || s == "varI" || s == "Pi" || s == "Sigma" || s == "sigma";
}

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(lex(text)) {}

  std::vector<Decl> file() {
    std::vector<Decl> out;
    while (!at(Tok::End)) {
      if (isIdent("data"))
        out.push_back(dataDecl());
      else if (isIdent("let"))
        out.push_back(letDecl());
      else
        fail({"data", "let"});
    }
    return out;
  }

  ExtP wholeTerm() {
    ExtP t = term();
    if (!at(Tok::End)) fail({"end of input"});
    return t;
  }

 private:
  std::vector<Token> toks_;
  size_t p_ = 0;

  const Token& cur() const { return toks_[p_]; }
  const Token& peek(size_t k) const { return toks_[std::min(p_ + k, toks_.size() - 1)]; }
  const Token& prev() const { return toks_[p_ ? p_ - 1 : 0]; }
  bool at(Tok t) const { return cur().t == t; }
  bool isSym(const char* s) const { return cur().t == Tok::Sym && cur().text == s; }
  bool isIdent(const char* s) const { return cur().t == Tok::Ident && cur().text == s; }
  bool isName() const { return cur().t == Tok::Ident && !isKeyword(cur().text); }

  [[noreturn]] void fail(std::set<std::string> expected) const {
    std::string msg = "unexpected ";
    if (cur().t == Tok::End)
      msg += "end of input";
    else
      msg += "'" + (cur().t == Tok::Tag ? "'" + cur().text : cur().text) + "'";
    if (!expected.empty()) {
      msg += ", expected ";
      bool first = true;
      for (auto& e : expected) {
        msg += (first ? "" : " or ") + e;
        first = false;
      }
    }
    throw SyntaxError(cur().span, std::move(expected), msg);
  }

  Token expectSym(const char* s) {
    if (!isSym(s)) fail({std::string("'") + s + "'"});
    return toks_[p_++];
  }

  void expectIdent(const char* s) {
    if (!isIdent(s)) fail({s});
    ++p_;
  }

  std::string name() {
    if (!isName()) fail({"identifier"});
    return toks_[p_++].text;
  }

  Span from(const Span& start) const { return join(start, prev().span); }

  // Terms --------------------------------------------------------------------

  bool atomStart() const {
    switch (cur().t) {
      case Tok::Ident:
        return !isKeyword(cur().text);
      case Tok::Num:
      case Tok::Tag:
        return true;
      case Tok::Sym:
        return isSym("(") || isSym("[") || isSym("{") || isSym("<");
      default:
        return false;
    }
  }

  // `(` ident+ `:` ... `)` followed by `->` or `*`
  bool binderAhead() const {
    if (!isSym("(")) return false;
    size_t k = 1;
    while (peek(k).t == Tok::Ident && !isKeyword(peek(k).text)) ++k;
    if (k == 1 || !(peek(k).t == Tok::Sym && peek(k).text == ":")) return false;
    int depth = 0;
    for (size_t j = p_; j < toks_.size(); ++j) {
      const Token& t = toks_[j];
      if (t.t == Tok::End) return false;
      if (t.t != Tok::Sym) continue;
      if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
      if (t.text == ")" || t.text == "]" || t.text == "}") {
        if (--depth == 0) {
          const Token& n = toks_[j + 1];
          return n.t == Tok::Sym && (n.text == "->" || n.text == "*");
        }
      }
    }
    return false;
  }

  ExtP term() {
    Span start = cur().span;
    if (isSym("\\")) {
      ++p_;
      std::vector<std::string> xs;
      while (isName()) xs.push_back(name());
      if (xs.empty()) fail({"binder name"});
      expectSym(".");
      ExtP body = term();
      for (auto it = xs.rbegin(); it != xs.rend(); ++it) body = emk(EK::Lam, {body}, *it, from(start));
      return body;
    }
    if (binderAhead()) {
      ++p_;
      std::vector<std::string> xs;
      while (isName()) xs.push_back(name());
      expectSym(":");
      ExtP dom = term();
      expectSym(")");
      EK k = isSym("->") ? EK::Pi : EK::Sigma;
      ++p_;
      ExtP body = term();
      for (auto it = xs.rbegin(); it != xs.rend(); ++it) body = emk(k, {dom, body}, *it, from(start));
      return body;
    }
    ExtP lhs = prod();
    if (isSym("->")) {
      ++p_;
      ExtP rhs = term();
      return emk(EK::Pi, {lhs, rhs}, "", from(start));
    }
    return lhs;
  }

  ExtP prod() {
    Span start = cur().span;
    ExtP lhs = eqn();
    if (isSym("*") || isSym("'*")) {
      EK k = isSym("*") ? EK::Sigma : EK::Times;
      ++p_;
      ExtP rhs = prod();
      return emk(k, {lhs, rhs}, "", from(start));
    }
    return lhs;
  }

  ExtP eqn() {
    Span start = cur().span;
    ExtP lhs = appl();
    if (isSym("==")) {
      ++p_;
      ExtP rhs = appl();
      return emk(EK::EqT, {lhs, rhs}, "", from(start));
    }
    return lhs;
  }

  ExtP appl() {
    ExtP f = atom();
    while (atomStart()) f = eapp(f, atom());
    return f;
  }

  ExtP atom() {
    Span start = cur().span;
    const Token& t = cur();
    switch (t.t) {
      case Tok::Ident:
        if (isKeyword(t.text)) break;
        ++p_;
        return evar(t.text, start);
      case Tok::Num: {
        ++p_;
        auto e = emk(EK::Num, {}, "", start);
        std::const_pointer_cast<Ext>(e)->n = t.num;
        return e;
      }
      case Tok::Tag:
        ++p_;
        if (isCodeName(t.text)) return evar("'" + t.text, start);
        return emk(EK::Tag, {}, t.text, start);
      case Tok::Sym:
        if (t.text == "(") return paren();
        if (t.text == "[") return bracket();
        if (t.text == "{") return braces();
        if (t.text == "<") return label();
        break;
      default:
        break;
    }
    fail({"identifier", "number", "tag", "'('", "'['", "'{'", "'<'"});
  }

  ExtP paren() {
    Span start = expectSym("(").span;
    if (isSym(")")) {
      ++p_;
      return emk(EK::UnitVal, {}, "", from(start));
    }
    ExtP first = term();
    if (isSym(":")) {
      ++p_;
      ExtP ty = term();
      expectSym(")");
      return emk(EK::Ann, {first, ty}, "", from(start));
    }
    std::vector<ExtP> comps{first};
    while (isSym(",")) {
      ++p_;
      comps.push_back(term());
    }
    expectSym(")");
    if (comps.size() == 1) return first;
    ExtP acc = comps.back();
    for (size_t i = comps.size() - 1; i-- > 0;) acc = emk(EK::Pair, {comps[i], acc}, "", from(start));
    return acc;
  }

  bool elimAhead() const {
    return (cur().t == Tok::Ident || cur().t == Tok::Tag) && peek(1).t == Tok::Sym && peek(1).text == "->";
  }

  ExtP bracket() {
    Span start = expectSym("[").span;
    if (isSym("]")) {
      ++p_;
      return emk(EK::ElimLit, {}, "", from(start));
    }
    if (elimAhead()) {
      auto e = std::make_shared<Ext>();
      e->k = EK::ElimLit;
      for (;;) {
        if (!(cur().t == Tok::Ident || cur().t == Tok::Tag)) fail({"tag name"});
        e->names.push_back(toks_[p_++].text);
        expectSym("->");
        e->a.push_back(term());
        if (!isSym(",")) break;
        ++p_;
      }
      expectSym("]");
      e->span = from(start);
      return e;
    }
    std::vector<ExtP> xs;
    while (atomStart()) xs.push_back(atom());
    if (xs.empty()) fail({"term", "']'"});
    expectSym("]");
    return emk(EK::Tuple, std::move(xs), "", from(start));
  }

  ExtP braces() {
    Span start = expectSym("{").span;
    auto e = std::make_shared<Ext>();
    e->k = EK::EnumLit;
    if (!isSym("}")) {
      for (;;) {
        if (!(cur().t == Tok::Ident || cur().t == Tok::Tag)) fail({"tag name"});
        e->names.push_back(toks_[p_++].text);
        if (!isSym(",")) break;
        ++p_;
      }
    }
    expectSym("}");
    e->span = from(start);
    return e;
  }

  ExtP label() {
    Span start = expectSym("<").span;
    auto e = std::make_shared<Ext>();
    e->s = name();
    std::vector<PatArg> args = patArgs(true);
    ExtP result;
    if (isSym(":")) {
      ++p_;
      result = term();
    }
    expectSym(">");
    if (result) {
      e->k = EK::PLabel;
      e->a.push_back(result);
      for (auto& a : args) {
        if (a.kind != PatArg::Plain) throw SyntaxError(a.span, {"argument"}, "program labels take plain arguments");
        e->a.push_back(a.term);
      }
    } else {
      e->k = EK::DLabel;
      for (auto& a : args) {
        e->a.push_back(a.term);
        e->names.push_back(a.kind == PatArg::Plain ? "p" : a.kind == PatArg::Index ? "i" : "c:" + a.var);
      }
    }
    e->span = from(start);
    return e;
  }

  // Patterns -----------------------------------------------------------------

  std::vector<PatArg> patArgs(bool inLabel) {
    std::vector<PatArg> args;
    for (;;) {
      Span start = cur().span;
      if (isSym("[")) {
        ++p_;
        PatArg a;
        if (isName() && peek(1).t == Tok::Sym && peek(1).text == "=") {
          a.kind = PatArg::Constraint;
          a.var = name();
          ++p_;
        } else {
          a.kind = PatArg::Index;
        }
        a.term = term();
        expectSym("]");
        a.span = from(start);
        args.push_back(std::move(a));
      } else if (atomStart() && !(inLabel && isSym("<"))) {
        PatArg a;
        a.term = atom();
        a.span = from(start);
        args.push_back(std::move(a));
      } else {
        return args;
      }
    }
  }

  Pattern pattern() {
    Pattern pt;
    Span start = cur().span;
    pt.head = name();
    pt.args = patArgs(false);
    pt.span = from(start);
    return pt;
  }

  // Declarations -------------------------------------------------------------

  void binderGroup(std::vector<Binder>& out, const char* open, const char* close) {
    Span start = expectSym(open).span;
    std::vector<std::string> xs;
    while (isName()) xs.push_back(name());
    if (xs.empty()) fail({"binder name"});
    expectSym(":");
    ExtP ty = term();
    expectSym(close);
    for (auto& x : xs) out.push_back(Binder{x, ty, from(start)});
  }

  DataDecl dataDecl() {
    DataDecl d;
    Span start = cur().span;
    expectIdent("data");
    d.name = name();
    while (isSym("(")) binderGroup(d.params, "(", ")");
    while (isSym("[")) binderGroup(d.indices, "[", "]");
    expectSym(":");
    expectIdent("Set");
    expectIdent("where");
    d.body = entries(d.name, 0);
    if (isIdent("deriving")) {
      ++p_;
      d.deriving.push_back(name());
      while (isSym(",") || isName()) {
        if (isSym(",")) ++p_;
        d.deriving.push_back(name());
      }
    }
    d.span = from(start);
    return d;
  }

  // Entries whose head starts strictly right of column `minCol`.
  std::vector<DataEntry> entries(const std::string& head, int minCol) {
    std::vector<DataEntry> out;
    while (isName() && cur().text == head && cur().span.col > minCol) {
      int col = cur().span.col;
      DataEntry e;
      e.pat = pattern();
      if (isSym("=>")) {
        ++p_;
        auto c = std::make_shared<Constructor>();
        Span cs = cur().span;
        c->tag = name();
        while (isSym("(")) binderGroup(c->args, "(", ")");
        c->span = from(cs);
        e.con = c;
      } else if (isIdent("by")) {
        ++p_;
        auto b = std::make_shared<ByBlock>();
        b->rec = byKind();
        b->var = name();
        b->body = entries(head, col);
        e.by = b;
      } else {
        fail({"'=>'", "by"});
      }
      out.push_back(std::move(e));
    }
    return out;
  }

  bool byKind() {
    if (isIdent("case")) {
      ++p_;
      return false;
    }
    if (isIdent("rec")) {
      ++p_;
      return true;
    }
    fail({"case", "rec"});
  }

  LetDecl letDecl() {
    LetDecl l;
    Span start = cur().span;
    expectIdent("let");
    l.name = name();
    while (isSym("(")) binderGroup(l.params, "(", ")");
    expectSym(":");
    l.result = term();
    expectIdent("where");
    l.prog = program();
    l.span = from(start);
    return l;
  }

  Program program() {
    Program pr;
    Span start = cur().span;
    pr.pat = pattern();
    if (isSym("=>")) {
      ++p_;
      pr.rhs = term();
    } else if (isIdent("by")) {
      ++p_;
      pr.rec = byKind();
      pr.var = name();
      expectSym("{");
      if (!isSym("}")) {
        pr.subs.push_back(program());
        while (isSym(";")) {
          ++p_;
          pr.subs.push_back(program());
        }
      }
      expectSym("}");
    } else {
      fail({"'=>'", "by"});
    }
    pr.span = from(start);
    return pr;
  }
};

}  // namespace

std::vector<Decl> parseFile(const std::string& text) { return Parser(text).file(); }

ExtP parseTerm(const std::string& text) { return Parser(text).wholeTerm(); }

}  // namespace idt

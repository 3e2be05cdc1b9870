#pragma once

#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "idt/desc.hpp"
#include "idt/session.hpp"

namespace idt::test {

inline std::string corpus(const std::string& file) { return std::string(IDT_CORPUS_DIR) + "/" + file; }

inline std::string readFile(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

/** A session with the given corpus files loaded; throws with the diagnostics on failure. */
inline Session loaded(const std::vector<std::string>& files, SessionOptions o = {}) {
  Session s(o);
  std::ostringstream out, err;
  std::vector<std::string> paths;
  for (auto& f : files) paths.push_back(corpus(f));
  if (s.loadFiles(paths, out, err) != Status::Ok) throw std::runtime_error(err.str());
  return s;
}

/** Loads declarations from source text into `s`; returns the diagnostics, empty on success. */
inline std::string declare(Session& s, const std::string& text) {
  std::ostringstream out, err;
  s.loadText(text, "test", out, err);
  return err.str();
}

/** Kind of the first elaboration error of `text`, or "" when it elaborates. */
inline std::string errorKind(Session& s, const std::string& text) {
  std::vector<Decl> ds = parseFile(text);
  try {
    std::ostringstream out;
    for (auto& d : ds) s.declare(d, out);
  } catch (const ElabError& e) {
    return errName(e.kind);
  }
  return "";
}

inline std::string evalKind(Session& s, const std::string& src) {
  try {
    s.evalExpr(src);
  } catch (const ElabError& e) {
    return errName(e.kind);
  }
  return "";
}

/** Natural number as a closed surface term in constructor form. */
inline std::string natTerm(int n) {
  std::string s = "zero";
  for (int i = 0; i < n; ++i) s = "(suc " + s + ")";
  return s;
}

/** All trees of depth at most `depth` with the given labels, as annotated surface terms, without repeats. */
inline std::vector<std::string> treeTerms(int depth, const std::vector<std::string>& labels = {"false", "true"},
                                          const std::string& type = "Tree Bool") {
  std::vector<std::string> ts{"leaf"};
  for (int d = 0; d < depth; ++d) {
    std::vector<std::string> next{"leaf"};
    for (auto& l : ts)
      for (auto& b : labels)
        for (auto& r : ts) next.push_back("(node " + l + " " + b + " " + r + ")");
    ts = std::move(next);
  }
  for (auto& t : ts) t = "(" + t + " : " + type + ")";
  return ts;
}

/** Closed value of a synthesizable surface term. */
inline V valueOf(const Session& s, const std::string& src) {
  Ctx ctx(&s.scope().g);
  return ctx.eval(elabSynth(s.scope(), ctx, parseTerm(src)).first);
}

inline TermP termOf(const Session& s, const std::string& src) {
  Ctx ctx(&s.scope().g);
  return elabSynth(s.scope(), ctx, parseTerm(src)).first;
}

/** `case_D ps (\\_. T) (\\d. m d) x` and `iinduction` on the code of D with motive `\\_ _. T`
 *  and method `\\_ d _. m d`, both kernel-checked at T and normalized. T is closed and `m`
 *  builds a body mentioning only the given variable. */
inline std::pair<TermP, TermP> caseAndInduction(const Session& s, const std::string& d, const std::vector<TermP>& ps,
                                                const TermP& T, const std::function<TermP(TermP)>& m,
                                                const TermP& x) {
  Ctx ctx(&s.scope().g);
  V D = ctx.eval(apps(cnst(d), ps));
  TermP R = ctx.quote(D->a[1]);
  TermP viaCase = apps(cnst(caseName(d)), ps);
  viaCase = apps(viaCase, {lam("_", T), lam("d", m(var(0))), x});
  TermP viaInd = mk(K::IInduction, {unit(), R, lam("i", lam("y", T)), lam("i", lam("d", lam("h", m(var(1))))), tt(), x});
  V Tv = ctx.eval(T);
  check(ctx, viaCase, Tv);
  check(ctx, viaInd, Tv);
  return {normalize(ctx, viaCase), normalize(ctx, viaInd)};
}

/** A generated code with the expected equality verdict, computed independently of the library. */
struct GenCode {
  V code;
  bool eq;
  bool pi;  // contains 'Pi
};

struct CodeDomain {
  V type;
  bool eq;
};

/** Every code of exactly `size` constructors over the given field domains. Choices use
 *  enumerations of up to two tags. */
class CodeEnumerator {
 public:
  explicit CodeEnumerator(std::vector<CodeDomain> doms) : doms_(std::move(doms)) {}

  const std::vector<GenCode>& exactly(int n) {
    if (auto it = memo_.find(n); it != memo_.end()) return it->second;
    std::vector<GenCode> out;
    if (n == 1) {
      out.push_back({vmk(K::DOne), true, false});
      out.push_back({vmk(K::DVarI, {vtt()}), true, false});
      out.push_back({choice({}), true, false});
    }
    for (int a = 1; a + 2 <= n; ++a)
      for (auto& l : exactly(a))
        for (auto& r : exactly(n - 1 - a)) out.push_back({vmk(K::DTimes, {l.code, r.code}), l.eq && r.eq, l.pi || r.pi});
    if (n >= 2)
      for (auto& c : exactly(n - 1)) {
        for (auto& d : doms_) {
          V body = c.code;
          V T = vlam("x", [body](V) { return body; });
          out.push_back({vmk(K::DSigma, {d.type, T}), d.eq && c.eq, c.pi});
          out.push_back({vmk(K::DPi, {d.type, T}), false, true});
        }
        out.push_back({choice({c.code}), c.eq, c.pi});
      }
    for (int a = 1; a + 2 <= n; ++a)
      for (auto& l : exactly(a))
        for (auto& r : exactly(n - 1 - a)) out.push_back({choice({l.code, r.code}), l.eq && r.eq, l.pi || r.pi});
    return memo_[n] = std::move(out);
  }

  std::vector<GenCode> upTo(int n) {
    std::vector<GenCode> all;
    for (int k = 1; k <= n; ++k) {
      auto& xs = exactly(k);
      all.insert(all.end(), xs.begin(), xs.end());
    }
    return all;
  }

 private:
  std::vector<CodeDomain> doms_;
  std::map<int, std::vector<GenCode>> memo_;

  static V choice(std::vector<V> cs) {
    std::vector<std::string> tags;
    for (size_t k = 0; k < cs.size(); ++k) tags.push_back("c" + std::to_string(k));
    V E = eval(Env{}, enumLit(tags));
    V T = vlam("k", [cs](V k) { return cs.at(static_cast<size_t>(numeralValue(k))); });
    return vmk(K::DSigmaE, {E, T});
  }
};

class Rng {
 public:
  explicit Rng(uint64_t seed) : g_(seed) {}
  int below(int n) { return std::uniform_int_distribution<int>(0, n - 1)(g_); }
  bool coin() { return below(2) == 1; }

 private:
  std::mt19937_64 g_;
};

}  // namespace idt::test

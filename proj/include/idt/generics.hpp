#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "idt/dataelab.hpp"

namespace idt {

inline std::string caseName(const std::string& d) { return "case_" + d; }
inline std::string noConfusionTypeName(const std::string& d) { return "NoConfusion_" + d; }
inline std::string noConfusionName(const std::string& d) { return "noConfusion_" + d; }

/** Adds `case_D : Π ps (P : D ps -> Set1). (Π d. P (In d)) -> Π x. P x`, induction with the
 *  hypotheses dropped. NotTagged unless the code is a 'sigma over constructor tags. */
void deriveCase(Scope& s, const std::string& d, bool recheck = true);

/** Adds `NoConfusion_D : Π ps. D ps -> D ps -> Set1` and
 *  `noConfusion_D : Π ps (x y : D ps). x == y -> NoConfusion_D ps x y`. */
void specializeNoConfusion(Scope& s, const std::string& d, bool recheck = true);

/** Code, tags and constructor codes of an unindexed datatype applied to parameters. */
struct DataView {
  V type;  // D ps
  V R;     // \_. code
  V X;     // \j. IMu Unit R j
  V code;
  V E;     // constructor enumeration
  V T;     // \k. constructor code
  std::vector<std::string> tags;
};
DataView viewData(const Scope& s, const std::string& d, const std::vector<V>& ps);

enum class Decision { Equal, NotEqual };

/** Runs the kernel's enumeration decision on two canonical indices. */
Decision decideEqEnum(const V& E, const V& x, const V& y);

// Deriving -------------------------------------------------------------------

/** Evidence that a code lies in the equality sub-universe. */
struct EqWitness {
  enum Kind { One, Times, Choice, Field, Rec } kind;
  std::vector<EqWitness> parts;  // Times: two; Choice: one per tag
  V domain;                      // Field: the type of the stored value
  std::string field;             // Field: binder name
  std::vector<std::string> tags; // Choice
};

struct Membership {
  std::optional<EqWitness> witness;
  std::string reason;  // set on refusal
};

/** Decides membership of a code under `depth` free variables. Accepts '1, '*, 'var, 'sigma over
 *  enumerations and 'Sigma whose domain has decidable equality; refuses 'Pi. */
Membership eqMembership(const Scope& s, const V& code, int depth = 0);

/** The same class of codes as a yes/no test, without building the membership witness. */
bool eqSubDesc(const Scope& s, const V& code, int depth = 0);

using EqProc = std::function<Decision(const V&, const V&)>;

/** Equality on canonical values of `type`, or nullopt when none is available. */
std::optional<EqProc> eqForType(const Scope& s, const V& type);

/** Equality on canonical inhabitants of the datatype applied to `ps`. */
EqProc deriveEq(const Scope& s, const std::string& d, const std::vector<V>& ps);

struct DerivableProperty {
  std::string name;
  std::function<bool(const Scope&, const V& code, int depth)> subDesc;
  std::function<Membership(const Scope&, const V& code, int depth)> membership;
  std::function<void(Scope&, const std::string& data, const EqWitness&)> derive;
};

class DerivingRegistry {
 public:
  /** Starts with Eq registered. */
  DerivingRegistry();
  void add(DerivableProperty p);
  const DerivableProperty& get(const std::string& name, Span sp = {}) const;
  bool has(const std::string& name) const { return props_.count(name) > 0; }
  std::vector<std::string> names() const;

 private:
  std::map<std::string, DerivableProperty> props_;
};

/** Runs every `deriving` clause of `d` (already elaborated into `s`). Errors are reported at
 *  the declaration. */
void runDeriving(Scope& s, const DataDecl& d, const DerivingRegistry& reg);

/** case_D, NoConfusion_D and noConfusion_D for an unindexed datatype. */
void addGenerics(Scope& s, const std::string& d, bool recheck = true);

}  // namespace idt

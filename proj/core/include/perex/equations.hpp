#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "perex/monoids.hpp"

namespace perex {

/// A constant of the group or an occurrence of X or X^-1.
struct EqToken {
  bool is_var = false;
  Element value;      // constants
  std::string var;    // variables
  bool inverse = false;

  static EqToken constant(Element v) { return EqToken{false, std::move(v), {}, false}; }
  static EqToken variable(std::string name, bool inv = false) { return EqToken{true, {}, std::move(name), inv}; }
  friend bool operator==(const EqToken&, const EqToken&) = default;
};
using Equation = std::vector<EqToken>;
using Assignment = std::map<std::string, Element>;

/// Homomorphism mu: G -> H onto a finite group H, given on the generators
/// of G; mu(g) is the product over the letters of nf(g).
struct Constraint {
  MonoidOracle h;
  std::vector<Element> mu_gen;

  Element mu(const MonoidOracle& group, const Element& g) const;
  /// Order of x in H.
  std::size_t order(const Element& x) const;
};

/// The trivial constraint (H = 1) for a group.
std::shared_ptr<const Constraint> trivial_constraint(const MonoidOracle& group);

struct QuadSystem {
  std::shared_ptr<const MonoidOracle> group;
  std::shared_ptr<const Constraint> constraint;
  std::vector<std::string> variables;
  std::vector<Equation> equations;
  /// mu_X per variable; a missing entry means all of H.
  std::map<std::string, std::set<Element>> targets;

  std::set<Element> target_set(const std::string& x) const;
  /// Every variable has a singleton target.
  bool is_split() const;
  Element target(const std::string& x) const;
};

/// {"group": oracle, "variables": [..], "equations": [[tokens]], "constraint":
///  {"table" | "cyclic", "names", "mu_gen": {gen: h}, "mu_var": {X: [h..]}}}.
/// Tokens: variable names with optional "^-1", or "g:<text>" constants parsed
/// by the group oracle ("g:<text>^-1" for inverses), or {"const": encoded}.
QuadSystem quad_system_from_json(const nlohmann::json& j);
nlohmann::json quad_system_to_json(const QuadSystem& sys);
nlohmann::json assignment_to_json(const QuadSystem& sys, const Assignment& a);
std::string equation_to_string(const QuadSystem& sys, const Equation& e);

/// sigma applied to an equation.
Element evaluate(const QuadSystem& sys, const Equation& e, const Assignment& sigma);
/// All equations evaluate to 1 and mu(sigma(X)) is in mu_X for every X.
/// Throws std::invalid_argument for a variable missing from sigma.
bool verify(const QuadSystem& sys, const Assignment& sigma);

/// Throws std::invalid_argument unless |S|_X + |S|_{X^-1} <= 2 for all X.
void check_quadratic(const QuadSystem& sys);

/// Free and cyclic reduction of every equation (merging constants) and
/// removal of equations that are constant 1. Returns nullopt if a constant
/// equation is not 1, i.e. the system has no solutions.
std::optional<QuadSystem> normalize(const QuadSystem& sys);

/// One system per choice of singleton targets. Throws std::length_error
/// beyond `cap` branches.
std::vector<QuadSystem> split_targets(const QuadSystem& sys, std::size_t cap = 4096);

struct Classification {
  int case_id = 0;        // 1..7
  std::string x;          // the matched variable
  std::string y;          // case 6: the second variable
  std::size_t eq_u = 0;   // cases 2, 3: equation indices
  std::size_t eq_v = 0;
  Equation u;             // case 5: W = X U X^-1 V
  Equation v;
  Element u_const;        // case 7: W = X u X v
  Element v_const;
};

/// First matching case in order 1..7 on a normalized, split system.
/// Throws std::invalid_argument if the system is not quadratic or not split.
Classification classify(const QuadSystem& sys);

struct Reduction {
  std::vector<QuadSystem> systems;
  /// Solutions of the reduced systems to a solution of the input.
  std::function<Assignment(const std::vector<Assignment>&)> back;
  /// A solution of the input to solutions of the reduced systems.
  std::function<std::vector<Assignment>(const Assignment&)> forward;
  /// Empty when the input has no solutions (a constraint check failed).
  bool feasible = true;
  std::string description;
};

/// Cases 2, 3 and 6. Throws std::invalid_argument for other cases.
Reduction reduce(const QuadSystem& sys, const Classification& c);

/// g0 k^m with mu(g0) = h and mu(k) = 1, k != 1.
struct ConstraintFamily {
  Element g0;
  Element k;
};
/// Breadth-first search through balls of radius <= budget. Throws
/// std::runtime_error("inconclusive: ...") when nothing is found.
ConstraintFamily constraint_family(const MonoidOracle& group, const Constraint& mu, const Element& h,
                                   std::size_t budget = 6);
/// g with mu(g) = h and exp(nf(g)) >= n.
Element constraint_element_with_exp(const MonoidOracle& group, const Constraint& mu, const Element& h,
                                    std::size_t n, std::size_t budget = 6);

/// Part of a witness template: value^(multiplicity * N), or a constant when
/// multiplicity is 0.
struct TemplatePart {
  Element value;
  std::int64_t multiplicity = 0;
};

struct PumpWitness {
  std::string variable;
  int origin_case = 0;
  std::vector<int> path;  // cases traversed from the outermost system
  std::vector<TemplatePart> tmpl;
  /// sigma_N for the parameter N.
  std::function<Assignment(std::int64_t)> at;

  /// sigma_N for the least N in [0, max_n] with exp(nf(sigma_N(variable))) >= n.
  /// Throws std::runtime_error if none is found.
  Assignment instantiate(const MonoidOracle& group, std::size_t n, std::int64_t max_n = 4096) const;
};

/// A base solution by backtracking over balls of radius `budget`, filtered by
/// the targets; gives up after `node_cap` partial assignments.
std::optional<Assignment> find_base_solution(const QuadSystem& sys, std::size_t budget,
                                             std::size_t node_cap = 2000000);

/// Cases 1, 4, 5, 6. Returns sigma_n (verified) and the family. Throws
/// std::domain_error("finite case") for case 7 and std::logic_error if
/// verification fails.
std::pair<Assignment, PumpWitness> pump(const QuadSystem& sys, const Assignment& sigma0,
                                        const Classification& c, std::size_t n);
/// The family itself, without instantiation.
PumpWitness pump_family(const QuadSystem& sys, const Assignment& sigma0, const Classification& c);

/// {X -> s u^-1 : s^2 = v^-1 u} filtered by the constraint. Throws
/// std::logic_error if the group has no square roots.
std::vector<Assignment> solve_case7(const QuadSystem& sys, const Classification& c);

enum class Verdict { Infinite, Finite, Inconclusive };

struct Report {
  Verdict verdict = Verdict::Inconclusive;
  std::optional<PumpWitness> witness;
  std::vector<Assignment> solutions;
  std::string reason;
  std::vector<std::string> transcript;
};

/// Recursive descent over the cases on every split branch.
Report analyze(const QuadSystem& sys, std::size_t budget = 3);

/// verdict, witness instances for n in `ns` (with exp and verification),
/// solutions, reason and transcript.
nlohmann::json report_to_json(const QuadSystem& sys, const Report& r,
                              const std::vector<std::size_t>& ns = {1, 5, 10, 20});

}  // namespace perex

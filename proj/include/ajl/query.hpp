#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "ajl/relation.hpp"

namespace ajl {

/// One body atom: a base relation name and the variables bound to its columns.
struct Atom {
  std::string relation;
  std::vector<std::string> vars;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Conjunctive natural-join query `head :- body`.
class Query {
 public:
  Query() = default;
  /// Throws SchemaError if an atom repeats a variable or a head variable is missing from the body.
  Query(std::vector<std::string> head, std::vector<Atom> body, std::string name = "Q");

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& head() const noexcept { return head_; }
  const std::vector<Atom>& body() const noexcept { return body_; }
  const Atom& atom(std::size_t i) const { return body_[i]; }
  std::size_t size() const noexcept { return body_.size(); }

  /// All variables in order of first appearance in the body.
  const std::vector<std::string>& variables() const noexcept { return variables_; }
  bool in_head(std::string_view var) const noexcept;

  /// Same body, different head (validated).
  Query with_head(std::vector<std::string> head) const;
  /// Same body with every variable in the head.
  Query full() const { return with_head(variables_); }

  friend bool operator==(const Query& a, const Query& b) {
    return a.head_ == b.head_ && a.body_ == b.body_;
  }

 private:
  std::string name_ = "Q";
  std::vector<std::string> head_;
  std::vector<Atom> body_;
  std::vector<std::string> variables_;
};

using Database = std::map<std::string, Relation, std::less<>>;

/// Resolves every atom and relabels the stored relation with the atom's variables.
/// Throws ContractError for unknown relations and SchemaError for arity mismatches.
std::vector<Relation> bind_atoms(const Query& q, const Database& db);

/// Variables of atoms `a` and `b` in common, in `a` order.
std::vector<std::string> shared_vars(const Atom& a, const Atom& b);

std::size_t total_size(std::span<const Relation> rels) noexcept;

}  // namespace ajl

#include "ajl/query.hpp"

#include <algorithm>

#include "ajl/errors.hpp"

namespace ajl {

Query::Query(std::vector<std::string> head, std::vector<Atom> body, std::string name)
    : name_(std::move(name)), head_(std::move(head)), body_(std::move(body)) {
  if (body_.empty()) throw SchemaError("query body is empty");
  for (const auto& atom : body_) {
    Schema check(atom.vars);  // rejects repeated variables
    for (const auto& v : atom.vars) {
      if (std::find(variables_.begin(), variables_.end(), v) == variables_.end()) {
        variables_.push_back(v);
      }
    }
  }
  Schema head_check(head_);
  for (const auto& h : head_) {
    if (std::find(variables_.begin(), variables_.end(), h) == variables_.end()) {
      throw SchemaError("head variable '" + h + "' does not occur in the body");
    }
  }
}

bool Query::in_head(std::string_view var) const noexcept {
  return std::find(head_.begin(), head_.end(), var) != head_.end();
}

Query Query::with_head(std::vector<std::string> head) const { return Query(std::move(head), body_, name_); }

std::vector<Relation> bind_atoms(const Query& q, const Database& db) {
  std::vector<Relation> out;
  out.reserve(q.size());
  for (const auto& atom : q.body()) {
    auto it = db.find(atom.relation);
    if (it == db.end()) throw ContractError("relation '" + atom.relation + "' is not in the database");
    if (it->second.schema().arity() != atom.vars.size()) {
      throw SchemaError("atom " + atom.relation + " has arity " + std::to_string(atom.vars.size()) +
                        " but the relation has arity " + std::to_string(it->second.schema().arity()));
    }
    out.push_back(it->second.renamed(Schema(atom.vars)));
  }
  return out;
}

std::vector<std::string> shared_vars(const Atom& a, const Atom& b) {
  std::vector<std::string> out;
  for (const auto& v : a.vars) {
    if (std::find(b.vars.begin(), b.vars.end(), v) != b.vars.end()) out.push_back(v);
  }
  return out;
}

std::size_t total_size(std::span<const Relation> rels) noexcept {
  std::size_t n = 0;
  for (const auto& r : rels) n += r.size();
  return n;
}

}  // namespace ajl

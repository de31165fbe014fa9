#include "ajl/csv.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "ajl/errors.hpp"

namespace ajl {

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        field_started = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        field_started = true;
        break;
      case '\r':
        break;
      case '\n':
        if (field_started || !field.empty() || !row.empty()) {
          row.push_back(std::move(field));
          rows.push_back(std::move(row));
        }
        row.clear();
        field.clear();
        field_started = false;
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (quoted) throw SchemaError("unterminated quoted CSV field");
  if (field_started || !field.empty() || !row.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

Relation read_relation_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  auto rows = parse_csv(buf.str());
  if (rows.empty()) throw SchemaError(path.string() + ": missing header row");
  Schema schema(rows.front());
  std::vector<Tuple> tuples;
  tuples.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != schema.arity()) {
      throw SchemaError(path.string() + ": row " + std::to_string(r + 1) + " has " + std::to_string(rows[r].size()) +
                        " fields, header has " + std::to_string(schema.arity()));
    }
    Tuple t;
    t.reserve(rows[r].size());
    for (const auto& f : rows[r]) t.push_back(parse_field(f));
    tuples.push_back(std::move(t));
  }
  return Relation(std::move(schema), std::move(tuples));
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos && !s.empty()) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_relation_csv(std::ostream& out, const Relation& rel) {
  const auto& names = rel.schema().names();
  for (std::size_t i = 0; i < names.size(); ++i) out << (i ? "," : "") << csv_field(names[i]);
  out << '\n';
  for (const auto& row : rel.sorted_rows()) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(to_string(row[i]));
    out << '\n';
  }
}

void write_relation_csv(const std::filesystem::path& path, const Relation& rel) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_relation_csv(out, rel);
  if (!out) throw IoError("failed writing " + path.string());
}

Database load_csv(const std::filesystem::path& dir, const Query& q) {
  Database db;
  for (const auto& atom : q.body()) {
    auto it = db.find(atom.relation);
    if (it == db.end()) {
      const auto path = dir / (atom.relation + ".csv");
      if (!std::filesystem::exists(path)) throw IoError("missing relation file " + path.string());
      it = db.emplace(atom.relation, read_relation_csv(path)).first;
    }
    if (it->second.schema().arity() != atom.vars.size()) {
      throw SchemaError(atom.relation + ".csv has " + std::to_string(it->second.schema().arity()) +
                        " columns but atom " + atom.relation + " binds " + std::to_string(atom.vars.size()) +
                        " variables");
    }
  }
  return db;
}

}  // namespace ajl

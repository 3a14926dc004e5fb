#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tablesem/value.hpp"

namespace tablesem {

struct Column {
  std::string id;      // normalized, unique within the table
  std::string header;  // original header text
};

struct NormalizedCell {
  std::optional<double> number;
  std::optional<Date> date;
};

// trim, collapse whitespace runs, lowercase
std::string normalize_text(const std::string& raw);
// normalized text -> identifier-safe slug ([a-z0-9_]+, never empty)
std::string slugify(const std::string& normalized);

// Extracts the first decimal number (commas stripped) and/or a date when the
// whole text matches one of: YYYY, YYYY-MM-DD, "Month D, YYYY". Multi-part
// date matches suppress number extraction; a bare year yields both.
NormalizedCell normalize_cell(const std::string& raw);

enum class TableFormat { Csv, Tsv };

// Knowledge base over a single table. Rows and distinct cells are entities;
// relations connect rows to cells (one per column), consecutive rows (Next),
// rows to their 1-based position (Index), and cells to their normalized
// number/date content (Num/Date props).
//
// Cells are assumed single-valued: one cell text is one entity, and two
// cells with equal normalized text are the same entity table-wide.
class KnowledgeBase {
 public:
  const std::vector<Column>& columns() const { return columns_; }
  int row_count() const { return row_count_; }

  // all relations in deterministic order: columns first, then builtins
  const std::vector<Relation>& relations() const { return relations_; }
  bool has_relation(const Relation& r) const;

  const ValueSet& image(const Relation& r, const Value& x) const;
  const ValueSet& preimage(const Relation& r, const Value& y) const;
  // forward source values of a relation, sorted
  const ValueSet& domain(const Relation& r) const;

  const ValueSet& all_rows() const { return all_rows_; }
  const ValueSet& all_cells() const { return all_cells_; }

  // Numbers reachable in this table: Num-prop values plus row indices.
  ValueSet numeric_universe() const;
  ValueSet date_universe() const;

  const Value* find_cell_by_normalized(const std::string& normalized) const;
  const Value& cell_at(int row, int col) const;  // row 1-based, col 0-based

 private:
  friend KnowledgeBase load_table(const std::string& text, TableFormat fmt);

  void add_pair(const Relation& r, const Value& x, const Value& y);
  void finalize();

  std::vector<Column> columns_;
  int row_count_ = 0;
  std::vector<Relation> relations_;
  std::vector<std::vector<Value>> grid_;  // grid_[row-1][col]
  std::map<std::string, Value> cells_by_text_;
  ValueSet all_rows_;
  ValueSet all_cells_;
  std::map<Relation, std::map<Value, ValueSet>> fwd_;
  std::map<Relation, std::map<Value, ValueSet>> rev_;
  std::map<Relation, ValueSet> domains_;
};

// Parses CSV (RFC-style quoting) or TSV (literal tabs, no quoting).
// Throws EmptyTable when there is no header or no data row, RaggedRows when
// row widths disagree with the header.
KnowledgeBase load_table(const std::string& text, TableFormat fmt);

// Union of images (reversed=false) or preimages (reversed=true) of the
// inputs. Unknown relations or values yield the empty set.
ValueSet relation_map(const KnowledgeBase& kb, const Relation& r, const ValueSet& inputs,
                      bool reversed);

}  // namespace tablesem

#include "tablesem/table.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdlib>
#include <set>
#include <sstream>

#include "tablesem/errors.hpp"

namespace tablesem {
namespace {

const ValueSet kEmptySet;

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (is_space(c)) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

const std::array<const char*, 12> kMonths = {"january", "february", "march",     "april",   "may",      "june",
                                             "july",    "august",   "september", "october", "november", "december"};

std::optional<int> month_from_name(const std::string& tok) {
  for (int i = 0; i < 12; ++i) {
    const std::string full = kMonths[static_cast<size_t>(i)];
    if (tok == full || (tok.size() == 3 && full.compare(0, 3, tok) == 0)) return i + 1;
  }
  return std::nullopt;
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

std::optional<double> first_decimal_token(const std::string& text) {
  const size_t n = text.size();
  for (size_t i = 0; i < n; ++i) {
    char c = text[i];
    bool neg = false;
    size_t start = i;
    if (c == '-' && i + 1 < n && std::isdigit(static_cast<unsigned char>(text[i + 1])) &&
        (i == 0 || is_space(text[i - 1]) || text[i - 1] == '(')) {
      neg = true;
      start = i + 1;
      c = text[start];
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) continue;
    std::string digits;
    size_t j = start;
    while (j < n && (std::isdigit(static_cast<unsigned char>(text[j])) || text[j] == ',')) {
      if (text[j] != ',') digits += text[j];
      ++j;
    }
    if (j + 1 < n && text[j] == '.' && std::isdigit(static_cast<unsigned char>(text[j + 1]))) {
      digits += '.';
      ++j;
      while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) {
        digits += text[j];
        ++j;
      }
    }
    double v = std::strtod(digits.c_str(), nullptr);
    return neg ? -v : v;
  }
  return std::nullopt;
}

// Full-text date patterns over the normalized text.
struct DateMatch {
  Date date;
  bool multi_part = false;  // suppresses number extraction
};

std::optional<DateMatch> match_date(const std::string& normalized) {
  // YYYY
  if (normalized.size() == 4 && all_digits(normalized)) {
    int y = std::atoi(normalized.c_str());
    if (y >= 1000 && y <= 2999) return DateMatch{Date{y, 0, 0}, false};
    return std::nullopt;
  }
  // YYYY-MM-DD
  {
    std::vector<std::string> parts;
    std::string cur;
    bool shape_ok = true;
    for (char c : normalized) {
      if (c == '-') {
        parts.push_back(cur);
        cur.clear();
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        cur += c;
      } else {
        shape_ok = false;
        break;
      }
    }
    parts.push_back(cur);
    if (shape_ok && parts.size() == 3 && parts[0].size() == 4 && !parts[1].empty() && parts[1].size() <= 2 &&
        !parts[2].empty() && parts[2].size() <= 2) {
      int y = std::atoi(parts[0].c_str());
      int m = std::atoi(parts[1].c_str());
      int d = std::atoi(parts[2].c_str());
      if (y >= 1000 && y <= 2999 && m >= 1 && m <= 12 && d >= 1 && d <= 31) {
        return DateMatch{Date{y, m, d}, true};
      }
    }
  }
  // Month D, YYYY  (comma optional after tokenization)
  {
    std::string cleaned;
    for (char c : normalized) cleaned += (c == ',') ? ' ' : c;
    auto toks = split_ws(cleaned);
    if (toks.size() == 3) {
      auto m = month_from_name(toks[0]);
      if (m && all_digits(toks[1]) && toks[1].size() <= 2 && toks[2].size() == 4 && all_digits(toks[2])) {
        int d = std::atoi(toks[1].c_str());
        int y = std::atoi(toks[2].c_str());
        if (d >= 1 && d <= 31 && y >= 1000 && y <= 2999) return DateMatch{Date{y, *m, d}, true};
      }
    }
  }
  return std::nullopt;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool any = false;
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        break;
      case ',':
        row.push_back(field);
        field.clear();
        any = true;
        break;
      case '\r':
        break;
      case '\n':
        row.push_back(field);
        field.clear();
        rows.push_back(row);
        row.clear();
        any = true;
        break;
      default:
        field += c;
    }
  }
  if (!field.empty() || !row.empty()) {
    row.push_back(field);
    rows.push_back(row);
    any = true;
  }
  if (!any) rows.clear();
  return rows;
}

std::vector<std::vector<std::string>> parse_tsv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::istringstream in(text);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.eof()) break;
    std::vector<std::string> row;
    std::string field;
    for (char c : line) {
      if (c == '\t') {
        row.push_back(field);
        field.clear();
      } else {
        field += c;
      }
    }
    row.push_back(field);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

std::string normalize_text(const std::string& raw) {
  std::string out;
  bool pending_space = false;
  for (char c : raw) {
    if (is_space(c)) {
      if (!out.empty()) pending_space = true;
      continue;
    }
    if (pending_space) {
      out += ' ';
      pending_space = false;
    }
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::string slugify(const std::string& normalized) {
  std::string out;
  bool pending = false;
  for (unsigned char c : normalized) {
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
      if (pending && !out.empty()) out += '_';
      pending = false;
      out += static_cast<char>(c);
    } else {
      pending = true;
    }
  }
  if (out.empty()) out = "c";
  return out;
}

NormalizedCell normalize_cell(const std::string& raw) {
  NormalizedCell out;
  const std::string normalized = normalize_text(raw);
  auto dm = match_date(normalized);
  if (dm) out.date = dm->date;
  if (!dm || !dm->multi_part) out.number = first_decimal_token(normalized);
  return out;
}

bool KnowledgeBase::has_relation(const Relation& r) const {
  return std::find(relations_.begin(), relations_.end(), r) != relations_.end();
}

const ValueSet& KnowledgeBase::image(const Relation& r, const Value& x) const {
  auto rit = fwd_.find(r);
  if (rit == fwd_.end()) return kEmptySet;
  auto it = rit->second.find(x);
  return it == rit->second.end() ? kEmptySet : it->second;
}

const ValueSet& KnowledgeBase::preimage(const Relation& r, const Value& y) const {
  auto rit = rev_.find(r);
  if (rit == rev_.end()) return kEmptySet;
  auto it = rit->second.find(y);
  return it == rit->second.end() ? kEmptySet : it->second;
}

const ValueSet& KnowledgeBase::domain(const Relation& r) const {
  auto it = domains_.find(r);
  return it == domains_.end() ? kEmptySet : it->second;
}

ValueSet KnowledgeBase::numeric_universe() const {
  std::vector<Value> vals;
  auto rit = rev_.find(Relation::num_prop());
  if (rit != rev_.end()) {
    for (const auto& [num, _] : rit->second) vals.push_back(num);
  }
  for (int i = 1; i <= row_count_; ++i) vals.push_back(Value::number(i));
  return make_set(std::move(vals));
}

ValueSet KnowledgeBase::date_universe() const {
  std::vector<Value> vals;
  auto rit = rev_.find(Relation::date_prop());
  if (rit != rev_.end()) {
    for (const auto& [d, _] : rit->second) vals.push_back(d);
  }
  return make_set(std::move(vals));
}

const Value* KnowledgeBase::find_cell_by_normalized(const std::string& normalized) const {
  auto it = cells_by_text_.find(normalized);
  return it == cells_by_text_.end() ? nullptr : &it->second;
}

const Value& KnowledgeBase::cell_at(int row, int col) const {
  return grid_.at(static_cast<size_t>(row - 1)).at(static_cast<size_t>(col));
}

void KnowledgeBase::add_pair(const Relation& r, const Value& x, const Value& y) {
  fwd_[r][x].push_back(y);
  rev_[r][y].push_back(x);
}

void KnowledgeBase::finalize() {
  for (auto& [r, m] : fwd_) {
    ValueSet dom;
    for (auto& [x, ys] : m) {
      sort_unique(ys);
      dom.push_back(x);
    }
    sort_unique(dom);
    domains_[r] = std::move(dom);
  }
  for (auto& [r, m] : rev_) {
    for (auto& [y, xs] : m) sort_unique(xs);
  }
}

KnowledgeBase load_table(const std::string& text, TableFormat fmt) {
  auto rows = fmt == TableFormat::Csv ? parse_csv(text) : parse_tsv(text);
  if (rows.size() < 2) throw EmptyTable("table needs a header row and at least one data row");

  KnowledgeBase kb;
  const auto& header = rows[0];
  std::set<std::string> used_ids;
  for (const auto& h : header) {
    std::string base = slugify(normalize_text(h));
    std::string id = base;
    int suffix = 2;
    while (used_ids.count(id)) id = base + "_" + std::to_string(suffix++);
    used_ids.insert(id);
    kb.columns_.push_back(Column{id, h});
  }

  const size_t width = header.size();
  kb.row_count_ = static_cast<int>(rows.size() - 1);

  for (const auto& c : kb.columns_) kb.relations_.push_back(Relation::col(c.id));
  kb.relations_.push_back(Relation::next());
  kb.relations_.push_back(Relation::index());
  kb.relations_.push_back(Relation::num_prop());
  kb.relations_.push_back(Relation::date_prop());

  std::set<std::string> used_cell_ids;
  std::vector<Value> row_vals;
  for (size_t ri = 1; ri < rows.size(); ++ri) {
    if (rows[ri].size() != width) {
      throw RaggedRows("row " + std::to_string(ri) + " has " + std::to_string(rows[ri].size()) +
                       " fields, header has " + std::to_string(width));
    }
    const int ordinal = static_cast<int>(ri);
    const Value row = Value::row_value(ordinal);
    row_vals.push_back(row);
    kb.grid_.emplace_back();
    for (size_t ci = 0; ci < width; ++ci) {
      const std::string& raw = rows[ri][ci];
      const std::string norm = normalize_text(raw);
      if (norm.empty()) {
        kb.grid_.back().push_back(Value::text(""));
        continue;
      }
      auto it = kb.cells_by_text_.find(norm);
      if (it == kb.cells_by_text_.end()) {
        std::string base = slugify(norm);
        std::string id = base;
        int suffix = 2;
        while (used_cell_ids.count(id)) id = base + "_" + std::to_string(suffix++);
        used_cell_ids.insert(id);
        Value cell = Value::cell(id, raw);
        it = kb.cells_by_text_.emplace(norm, std::move(cell)).first;
        auto props = normalize_cell(norm);
        if (props.number) kb.add_pair(Relation::num_prop(), it->second, Value::number(*props.number));
        if (props.date) kb.add_pair(Relation::date_prop(), it->second, Value::date_value(*props.date));
        kb.all_cells_.push_back(it->second);
      }
      kb.grid_.back().push_back(it->second);
      kb.add_pair(Relation::col(kb.columns_[ci].id), row, it->second);
    }
    kb.add_pair(Relation::index(), row, Value::number(ordinal));
    if (ordinal > 1) kb.add_pair(Relation::next(), Value::row_value(ordinal - 1), row);
  }

  kb.all_rows_ = make_set(std::move(row_vals));
  sort_unique(kb.all_cells_);
  kb.finalize();
  return kb;
}

ValueSet relation_map(const KnowledgeBase& kb, const Relation& r, const ValueSet& inputs, bool reversed) {
  std::vector<Value> out;
  for (const auto& v : inputs) {
    const ValueSet& hits = reversed ? kb.preimage(r, v) : kb.image(r, v);
    out.insert(out.end(), hits.begin(), hits.end());
  }
  return make_set(std::move(out));
}

}  // namespace tablesem

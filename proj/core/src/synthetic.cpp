#include "tablesem/synthetic.hpp"

#include <filesystem>
#include <random>
#include <sstream>
#include <vector>

#include "tablesem/dataset.hpp"
#include "tablesem/errors.hpp"
#include "tablesem/execute.hpp"
#include "tablesem/logical_form.hpp"
#include "tablesem/table.hpp"

namespace tablesem {
namespace {

// mt19937 output is pinned by the standard, so modulo keeps generation
// identical across compilers; the slight bias is irrelevant here.
size_t pick(std::mt19937& rng, size_t n) { return static_cast<size_t>(rng() % n); }

const std::vector<std::string> kNames = {
    "Arlen",  "Boris",   "Carmen", "Dmitri", "Elena",  "Farid",  "Greta",  "Hassan",
    "Ingrid", "Jonas",   "Katya",  "Lionel", "Marta",  "Nadia",  "Omar",   "Petra",
    "Rosa",   "Stefan",  "Tamara", "Viktor", "Wanda",  "Yusuf",  "Zelda",  "Anselm",
    "Bruna",  "Casimir", "Delia",  "Edgar",  "Fiona",  "Gustav", "Helga",  "Ivo",
    "Jolanta", "Kurt",   "Leonor", "Milos",  "Nestor", "Odette", "Pavel",  "Quinn"};

const std::vector<std::string> kNameHeaders = {"Player", "Athlete", "Driver", "Captain"};

struct CatPool {
  std::string header;
  std::vector<std::string> values;
};
const std::vector<CatPool> kCatPools = {
    {"Team", {"Falcons", "Tigers", "Wolves", "Ravens", "Comets", "Sharks"}},
    {"City", {"Oslo", "Lima", "Cairo", "Perth", "Quito", "Dakar"}},
    {"Division", {"North", "South", "East", "West"}},
};

const std::vector<std::string> kNumHeaders = {"Points", "Wins", "Goals", "Medals", "Laps"};

struct GenTable {
  std::vector<std::string> headers;
  std::vector<std::vector<std::string>> rows;  // rows[r][c]
  int name_col = 0;
  int cat_col = 1;
  int num_col = 2;

  std::string csv() const {
    std::ostringstream out;
    for (size_t c = 0; c < headers.size(); ++c) {
      if (c > 0) out << ',';
      out << headers[c];
    }
    out << '\n';
    for (const auto& row : rows) {
      for (size_t c = 0; c < row.size(); ++c) {
        if (c > 0) out << ',';
        out << row[c];
      }
      out << '\n';
    }
    return out.str();
  }
};

std::vector<size_t> sample_indices(std::mt19937& rng, size_t pool, size_t want) {
  std::vector<size_t> all(pool);
  for (size_t i = 0; i < pool; ++i) all[i] = i;
  for (size_t i = 0; i < want; ++i) {
    size_t j = i + pick(rng, pool - i);
    std::swap(all[i], all[j]);
  }
  all.resize(want);
  return all;
}

std::vector<std::string> distinct_numbers(std::mt19937& rng, size_t count) {
  std::vector<size_t> vals = sample_indices(rng, 60, count);
  std::vector<std::string> out;
  out.reserve(count);
  for (size_t v : vals) out.push_back(std::to_string(v));
  return out;
}

std::vector<std::string> category_values(std::mt19937& rng, const CatPool& pool, size_t count) {
  std::vector<std::string> out(count);
  for (auto& v : out) v = pool.values[pick(rng, pool.values.size())];
  bool varied = false;
  for (const auto& v : out)
    if (v != out[0]) varied = true;
  if (!varied) {
    size_t alt = pick(rng, pool.values.size() - 1);
    if (pool.values[alt] == out[0]) ++alt;
    out[count - 1] = pool.values[alt];
  }
  return out;
}

GenTable make_table(std::mt19937& rng) {
  GenTable t;
  const size_t rows = 4 + pick(rng, 3);
  t.headers.push_back(kNameHeaders[pick(rng, kNameHeaders.size())]);
  const CatPool& cat = kCatPools[pick(rng, kCatPools.size())];
  t.headers.push_back(cat.header);
  size_t num_idx = pick(rng, kNumHeaders.size());
  t.headers.push_back(kNumHeaders[num_idx]);

  std::vector<std::vector<std::string>> cols;
  std::vector<size_t> names = sample_indices(rng, kNames.size(), rows);
  std::vector<std::string> name_vals;
  for (size_t i : names) name_vals.push_back(kNames[i]);
  cols.push_back(name_vals);
  cols.push_back(category_values(rng, cat, rows));
  cols.push_back(distinct_numbers(rng, rows));

  const size_t extras = pick(rng, 3);
  for (size_t e = 0; e < extras; ++e) {
    if (e == 0) {
      size_t other = pick(rng, kNumHeaders.size() - 1);
      if (other >= num_idx) ++other;
      t.headers.push_back(kNumHeaders[other]);
      cols.push_back(distinct_numbers(rng, rows));
    } else {
      const CatPool& extra = &cat == &kCatPools[0] ? kCatPools[1] : kCatPools[0];
      t.headers.push_back(extra.header);
      cols.push_back(category_values(rng, extra, rows));
    }
  }

  t.rows.assign(rows, std::vector<std::string>(t.headers.size()));
  for (size_t r = 0; r < rows; ++r)
    for (size_t c = 0; c < t.headers.size(); ++c) t.rows[r][c] = cols[c][r];
  return t;
}

std::string lower(const std::string& s) { return normalize_text(s); }

LfPtr cell_lf(const KnowledgeBase& kb, const std::string& raw) {
  const Value* v = kb.find_cell_by_normalized(normalize_text(raw));
  if (v == nullptr) throw Error("generated cell missing from table: " + raw);
  return lf::entity(*v);
}

LfPtr col_lf(const KnowledgeBase& kb, int col) {
  return lf::rel(Relation::col(kb.columns()[static_cast<size_t>(col)].id));
}

// key(row) = the numeric reading of the row's cell in the given column
LfPtr numeric_key(const KnowledgeBase& kb, int col) {
  return lf::lambda(
      0, lf::join(lf::reverse(lf::rel(Relation::num_prop())),
                  lf::join(lf::reverse(col_lf(kb, col)), lf::var(0))));
}

struct Instance {
  std::string utterance;
  LfPtr gold;
};

Instance make_lookup(std::mt19937& rng, const GenTable& t, const KnowledgeBase& kb) {
  const size_t r = pick(rng, t.rows.size());
  const std::string& name = t.rows[r][static_cast<size_t>(t.name_col)];
  const std::string cat_h = lower(t.headers[static_cast<size_t>(t.cat_col)]);
  std::string u = pick(rng, 2) == 0
                      ? "what is the " + cat_h + " of " + name
                      : "which " + cat_h + " is " + name + " listed under";
  LfPtr gold = lf::join(lf::reverse(col_lf(kb, t.cat_col)),
                        lf::join(col_lf(kb, t.name_col), cell_lf(kb, name)));
  return {u, gold};
}

Instance make_count_filter(std::mt19937& rng, const GenTable& t, const KnowledgeBase& kb) {
  const size_t r = pick(rng, t.rows.size());
  const std::string& val = t.rows[r][static_cast<size_t>(t.cat_col)];
  const std::string cat_h = lower(t.headers[static_cast<size_t>(t.cat_col)]);
  std::string u = pick(rng, 2) == 0 ? "how many entries have " + cat_h + " " + val
                                    : "how many rows show " + cat_h + " " + val;
  LfPtr gold = lf::count(lf::join(col_lf(kb, t.cat_col), cell_lf(kb, val)));
  return {u, gold};
}

Instance make_next_row(std::mt19937& rng, const GenTable& t, const KnowledgeBase& kb) {
  const size_t r = pick(rng, t.rows.size() - 1);  // never the last row
  const std::string& name = t.rows[r][static_cast<size_t>(t.name_col)];
  const std::string name_h = lower(t.headers[static_cast<size_t>(t.name_col)]);
  std::string u = pick(rng, 2) == 0 ? "which " + name_h + " comes right after " + name
                                    : "who is listed right after " + name;
  LfPtr gold = lf::join(
      lf::reverse(col_lf(kb, t.name_col)),
      lf::join(lf::reverse(lf::rel(Relation::next())),
               lf::join(col_lf(kb, t.name_col), cell_lf(kb, name))));
  return {u, gold};
}

Instance make_argmax_column(std::mt19937& rng, const GenTable& t, const KnowledgeBase& kb) {
  const bool want_max = pick(rng, 2) == 0;
  const std::string num_h = lower(t.headers[static_cast<size_t>(t.num_col)]);
  const std::string name_h = lower(t.headers[static_cast<size_t>(t.name_col)]);
  std::string u;
  if (want_max) {
    u = pick(rng, 2) == 0 ? "which " + name_h + " has the most " + num_h
                          : "who recorded the highest " + num_h;
  } else {
    u = pick(rng, 2) == 0 ? "which " + name_h + " has the fewest " + num_h
                          : "who recorded the lowest " + num_h;
  }
  LfPtr sup = lf::superlative(want_max ? SupKind::ArgMax : SupKind::ArgMin, lf::all_rows(),
                              numeric_key(kb, t.num_col));
  return {u, lf::join(lf::reverse(col_lf(kb, t.name_col)), sup)};
}

Instance make_comparison(std::mt19937& rng, const GenTable& t, const KnowledgeBase& kb) {
  std::vector<size_t> two = sample_indices(rng, t.rows.size(), 2);
  const std::string& a = t.rows[two[0]][static_cast<size_t>(t.name_col)];
  const std::string& b = t.rows[two[1]][static_cast<size_t>(t.name_col)];
  const std::string num_h = lower(t.headers[static_cast<size_t>(t.num_col)]);
  std::string u = pick(rng, 2) == 0
                      ? "who has more " + num_h + ", " + a + " or " + b
                      : "which of " + a + " and " + b + " has more " + num_h;
  LfPtr rows = lf::set_union(lf::join(col_lf(kb, t.name_col), cell_lf(kb, a)),
                             lf::join(col_lf(kb, t.name_col), cell_lf(kb, b)));
  LfPtr sup = lf::superlative(SupKind::ArgMax, rows, numeric_key(kb, t.num_col));
  return {u, lf::join(lf::reverse(col_lf(kb, t.name_col)), sup)};
}

Instance make_diff_counts(std::mt19937& rng, const GenTable& t, const KnowledgeBase& kb) {
  std::vector<std::string> present;
  for (const auto& row : t.rows) {
    const std::string& v = row[static_cast<size_t>(t.cat_col)];
    bool seen = false;
    for (const auto& p : present) seen = seen || p == v;
    if (!seen) present.push_back(v);
  }
  std::vector<size_t> two = sample_indices(rng, present.size(), 2);
  const std::string& v1 = present[two[0]];
  const std::string& v2 = present[two[1]];
  const std::string cat_h = lower(t.headers[static_cast<size_t>(t.cat_col)]);
  std::string u = pick(rng, 2) == 0
                      ? "how many more entries have " + cat_h + " " + v1 + " than " + cat_h +
                            " " + v2
                      : "how many more rows show " + cat_h + " " + v1 + " than " + v2;
  LfPtr gold = lf::sub(lf::count(lf::join(col_lf(kb, t.cat_col), cell_lf(kb, v1))),
                       lf::count(lf::join(col_lf(kb, t.cat_col), cell_lf(kb, v2))));
  return {u, gold};
}

Instance make_first_last(std::mt19937& rng, const GenTable& t, const KnowledgeBase& kb) {
  const bool first = pick(rng, 2) == 0;
  const std::string name_h = lower(t.headers[static_cast<size_t>(t.name_col)]);
  std::string u;
  if (first) {
    u = pick(rng, 2) == 0 ? "which " + name_h + " is listed first"
                          : "who appears first in the table";
  } else {
    u = pick(rng, 2) == 0 ? "which " + name_h + " is listed last"
                          : "who appears last in the table";
  }
  LfPtr key = lf::lambda(0, lf::join(lf::reverse(lf::rel(Relation::index())), lf::var(0)));
  LfPtr sup =
      lf::superlative(first ? SupKind::ArgMin : SupKind::ArgMax, lf::all_rows(), key);
  return {u, lf::join(lf::reverse(col_lf(kb, t.name_col)), sup)};
}

}  // namespace

SyntheticStats gen_synthetic(const SyntheticConfig& cfg) {
  if (cfg.size < 1) throw ConfigError("synthetic size must be at least 1");
  if (cfg.examples_per_table < 1) throw ConfigError("examples_per_table must be at least 1");
  if (cfg.out_dir.empty()) throw ConfigError("synthetic output directory is required");

  namespace fs = std::filesystem;
  fs::create_directories(fs::path(cfg.out_dir) / "tables");

  std::mt19937 rng(cfg.seed);
  SyntheticStats stats;

  using Maker = Instance (*)(std::mt19937&, const GenTable&, const KnowledgeBase&);
  const std::vector<std::pair<std::string, Maker>> templates = {
      {"lookup", make_lookup},
      {"count-filter", make_count_filter},
      {"next-row", make_next_row},
      {"argmax-column", make_argmax_column},
      {"comparison-of-two", make_comparison},
      {"difference-of-counts", make_diff_counts},
      {"first-last-row", make_first_last},
  };

  std::ostringstream examples;
  GenTable table;
  KnowledgeBase kb;
  std::string table_rel_path;

  for (long i = 0; i < cfg.size; ++i) {
    if (i % cfg.examples_per_table == 0) {
      table = make_table(rng);
      long tn = stats.tables++;
      table_rel_path = "tables/t" + std::to_string(tn) + ".csv";
      const std::string csv = table.csv();
      write_text_file((fs::path(cfg.out_dir) / table_rel_path).string(), csv);
      kb = load_table(csv, TableFormat::Csv);
    }
    const auto& [tname, maker] = templates[static_cast<size_t>(i) % templates.size()];
    Instance inst = maker(rng, table, kb);

    ValueSet answer = execute(inst.gold, kb);
    if (answer.empty()) throw Error("synthetic answer is empty for template " + tname);
    std::vector<std::string> targets = denotation_strings(answer);
    if (!is_consistent(answer, targets))
      throw Error("synthetic self-check failed for template " + tname);

    examples << "syn-" << i << '\t' << inst.utterance << '\t' << table_rel_path << '\t';
    for (size_t k = 0; k < targets.size(); ++k) {
      if (k > 0) examples << '|';
      examples << targets[k];
    }
    examples << '\n';
    ++stats.per_template[tname];
    ++stats.examples;
  }

  write_text_file((fs::path(cfg.out_dir) / "examples.tsv").string(), examples.str());
  return stats;
}

}  // namespace tablesem

#pragma once

#include <map>
#include <string>

namespace tablesem {

struct SyntheticConfig {
  long size = 500;
  unsigned seed = 7;
  std::string out_dir;
  long examples_per_table = 5;
};

struct SyntheticStats {
  long examples = 0;
  long tables = 0;
  std::map<std::string, long> per_template;
};

// Writes out_dir/examples.tsv plus out_dir/tables/tN.csv: random small
// tables with question/answer pairs drawn from a fixed template inventory
// (lookup, count-filter, next-row, argmax-column, comparison-of-two,
// difference-of-counts, first-last-row). Answers come from executing the
// template's logical form against the generated table; the forms themselves
// are never written out. Every pair is re-checked against the loaded table
// before it is emitted.
SyntheticStats gen_synthetic(const SyntheticConfig& cfg);

}  // namespace tablesem

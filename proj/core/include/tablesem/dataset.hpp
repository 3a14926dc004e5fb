#pragma once

#include <map>
#include <string>
#include <vector>

#include "tablesem/table.hpp"

namespace tablesem {

struct Example {
  std::string id;
  std::string utterance;
  std::string table_path;  // as written in the examples file
  std::vector<std::string> targets;
};

struct Dataset {
  std::vector<Example> examples;
  std::string base_dir;  // table paths resolve against this
};

// examples file: one example per line, id TAB utterance TAB table path TAB
// pipe-separated target values. Throws Error on malformed lines, duplicate
// ids, or empty targets.
Dataset load_dataset(const std::string& examples_path, const std::string& tables_dir);

// Loads and caches tables by path. Format by extension: .tsv is tab
// separated, anything else parses as CSV.
class TableRegistry {
 public:
  explicit TableRegistry(std::string base_dir) : base_(std::move(base_dir)) {}

  const KnowledgeBase& get(const std::string& table_path);

 private:
  std::string base_;
  std::map<std::string, KnowledgeBase> cache_;
};

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace tablesem

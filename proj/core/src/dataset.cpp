#include "tablesem/dataset.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "tablesem/errors.hpp"

namespace tablesem {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path);
  out << content;
}

Dataset load_dataset(const std::string& examples_path, const std::string& tables_dir) {
  std::ifstream in(examples_path);
  if (!in) throw Error("cannot read examples file: " + examples_path);
  Dataset ds;
  ds.base_dir = tables_dir;
  std::set<std::string> ids;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    size_t start = 0;
    while (fields.size() < 3) {
      size_t tab = line.find('\t', start);
      if (tab == std::string::npos) break;
      fields.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    fields.push_back(line.substr(start));
    if (fields.size() != 4) {
      throw Error("examples line " + std::to_string(lineno) + " needs 4 tab-separated fields");
    }
    Example ex;
    ex.id = fields[0];
    ex.utterance = fields[1];
    ex.table_path = fields[2];
    std::string targets = fields[3];
    size_t pos = 0;
    while (true) {
      size_t pipe = targets.find('|', pos);
      std::string t = targets.substr(pos, pipe == std::string::npos ? pipe : pipe - pos);
      if (!t.empty()) ex.targets.push_back(t);
      if (pipe == std::string::npos) break;
      pos = pipe + 1;
    }
    if (ex.id.empty() || !ids.insert(ex.id).second) {
      throw Error("examples line " + std::to_string(lineno) + " has a missing or duplicate id");
    }
    if (ex.targets.empty()) {
      throw Error("examples line " + std::to_string(lineno) + " has no target values");
    }
    ds.examples.push_back(std::move(ex));
  }
  return ds;
}

const KnowledgeBase& TableRegistry::get(const std::string& table_path) {
  auto it = cache_.find(table_path);
  if (it != cache_.end()) return it->second;
  std::string full = table_path;
  if (!base_.empty() && !table_path.empty() && table_path.front() != '/') {
    full = base_ + "/" + table_path;
  }
  TableFormat fmt = TableFormat::Csv;
  if (full.size() >= 4 && full.compare(full.size() - 4, 4, ".tsv") == 0) {
    fmt = TableFormat::Tsv;
  }
  KnowledgeBase kb = load_table(read_text_file(full), fmt);
  auto [slot, inserted] = cache_.emplace(table_path, std::move(kb));
  return slot->second;
}

}  // namespace tablesem

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "tablesem/dataset.hpp"
#include "tablesem/errors.hpp"
#include "tablesem/synthetic.hpp"

using namespace tablesem;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
  std::string file(const std::string& rel, const std::string& content) const {
    fs::path p = path / rel;
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p.string();
  }
};

}  // namespace

TEST_CASE("examples files parse ids, utterances, tables, and targets") {
  TempDir tmp("dataset_parse_tmp");
  std::string path = tmp.file("examples.tsv",
                              "ex1\thow many gold\tm.csv\t6\r\n"
                              "\n"
                              "ex2\twho won\tm.csv\tFrance|Ukraine\n"
                              "ex3\tpipes\tsub/t.tsv\t|a||b|\n");
  Dataset ds = load_dataset(path, tmp.str());
  CHECK(ds.base_dir == tmp.str());
  REQUIRE(ds.examples.size() == 3);
  CHECK(ds.examples[0].id == "ex1");
  CHECK(ds.examples[0].utterance == "how many gold");
  CHECK(ds.examples[0].table_path == "m.csv");
  CHECK(ds.examples[0].targets == std::vector<std::string>{"6"});
  CHECK(ds.examples[1].targets == std::vector<std::string>{"France", "Ukraine"});
  CHECK(ds.examples[2].targets == std::vector<std::string>{"a", "b"});
}

TEST_CASE("examples files reject structural problems") {
  TempDir tmp("dataset_reject_tmp");
  CHECK_THROWS_AS(load_dataset(tmp.str() + "/missing.tsv", tmp.str()), Error);

  std::string three = tmp.file("three.tsv", "ex1\tonly\tthree fields\n");
  CHECK_THROWS_AS(load_dataset(three, tmp.str()), Error);

  std::string dup = tmp.file("dup.tsv", "ex1\ta\tt.csv\t1\nex1\tb\tt.csv\t2\n");
  CHECK_THROWS_AS(load_dataset(dup, tmp.str()), Error);

  std::string noid = tmp.file("noid.tsv", "\ta\tt.csv\t1\n");
  CHECK_THROWS_AS(load_dataset(noid, tmp.str()), Error);

  std::string notargets = tmp.file("notargets.tsv", "ex1\ta\tt.csv\t\n");
  CHECK_THROWS_AS(load_dataset(notargets, tmp.str()), Error);

  std::string pipesonly = tmp.file("pipes.tsv", "ex1\ta\tt.csv\t||\n");
  CHECK_THROWS_AS(load_dataset(pipesonly, tmp.str()), Error);
}

TEST_CASE("table registry resolves, caches, and picks formats by extension") {
  TempDir tmp("dataset_registry_tmp");
  tmp.file("m.csv", testutil::kMedalCsv);
  tmp.file("sub/t.tsv", "Name\tColor\nAlice\tred\nBob\tblue\n");

  TableRegistry reg(tmp.str());
  const KnowledgeBase& a = reg.get("m.csv");
  CHECK(a.all_cells().size() == 11);
  const KnowledgeBase& b = reg.get("m.csv");
  CHECK(&a == &b);

  const KnowledgeBase& t = reg.get("sub/t.tsv");
  CHECK(t.find_cell_by_normalized("alice") != nullptr);
  CHECK(t.find_cell_by_normalized("red") != nullptr);

  // Absolute paths skip the base directory.
  std::string abs = fs::absolute(tmp.path / "m.csv").string();
  TableRegistry other("no_such_base");
  CHECK(other.get(abs).all_cells().size() == 11);

  CHECK_THROWS_AS(reg.get("nope.csv"), Error);
}

TEST_CASE("text files round trip bytes") {
  TempDir tmp("dataset_io_tmp");
  std::string path = (tmp.path / "blob.txt").string();
  write_text_file(path, "line1\nline2\t tab\n");
  CHECK(read_text_file(path) == "line1\nline2\t tab\n");
  CHECK_THROWS_AS(read_text_file(tmp.str() + "/absent.txt"), Error);
}

TEST_CASE("synthetic generation validates its configuration") {
  CHECK_THROWS_AS(gen_synthetic({0, 7, "x", 5}), ConfigError);
  CHECK_THROWS_AS(gen_synthetic({10, 7, "x", 0}), ConfigError);
  CHECK_THROWS_AS(gen_synthetic({10, 7, "", 5}), ConfigError);
}

TEST_CASE("synthetic output is deterministic and loadable") {
  TempDir a("synth_a_tmp");
  TempDir b("synth_b_tmp");
  TempDir c("synth_c_tmp");

  SyntheticConfig cfg;
  cfg.size = 21;
  cfg.seed = 11;
  cfg.examples_per_table = 5;

  cfg.out_dir = a.str();
  SyntheticStats s1 = gen_synthetic(cfg);
  cfg.out_dir = b.str();
  SyntheticStats s2 = gen_synthetic(cfg);

  CHECK(s1.examples == 21);
  CHECK(s1.tables == 5);
  REQUIRE(s1.per_template.size() == 7);
  for (const auto& [tname, n] : s1.per_template) {
    CAPTURE(tname);
    CHECK(n == 3);
  }

  CHECK(read_text_file(a.str() + "/examples.tsv") == read_text_file(b.str() + "/examples.tsv"));
  CHECK(read_text_file(a.str() + "/tables/t0.csv") == read_text_file(b.str() + "/tables/t0.csv"));
  CHECK(s2.per_template == s1.per_template);

  // A different seed draws different tables and questions.
  cfg.out_dir = c.str();
  cfg.seed = 12;
  gen_synthetic(cfg);
  CHECK(read_text_file(c.str() + "/examples.tsv") != read_text_file(a.str() + "/examples.tsv"));

  // Everything written is loadable, and answers check out against the table.
  Dataset ds = load_dataset(a.str() + "/examples.tsv", a.str());
  REQUIRE(ds.examples.size() == 21);
  TableRegistry reg(a.str());
  for (const auto& ex : ds.examples) {
    CAPTURE(ex.id);
    const KnowledgeBase& kb = reg.get(ex.table_path);
    CHECK(kb.columns().size() >= 3);
    CHECK_FALSE(ex.targets.empty());
  }
}

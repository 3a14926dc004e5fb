#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace tablesem {

struct Neighbor {
  size_t distance = 0;
  std::string id;
};

// Exact all-pairs nearest neighbors over token sequences, each list sorted
// by (distance, id) and capped at k_max, self excluded.
class KnnIndex {
 public:
  static KnnIndex build(const std::map<std::string, std::vector<std::string>>& corpus,
                        int k_max = 100);

  // Empty for unknown ids.
  const std::vector<Neighbor>& neighbors(const std::string& id) const;
  size_t size() const { return lists_.size(); }

 private:
  std::map<std::string, std::vector<Neighbor>> lists_;
  static const std::vector<Neighbor> kEmpty;
};

// Walks id's precomputed neighbor list and keeps the first k members of s.
std::vector<std::string> nearest_in_set(const KnnIndex& index, const std::string& id,
                                        const std::set<std::string>& s, int k);

// Query-time variant for utterances outside the index: ranks the candidate
// token sequences by (distance, id) and returns the first k ids.
std::vector<std::string> nearest_by_tokens(
    const std::vector<std::string>& query,
    const std::map<std::string, std::vector<std::string>>& candidates, int k);

}  // namespace tablesem

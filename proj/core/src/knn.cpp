#include "tablesem/knn.hpp"

#include <algorithm>

#include "tablesem/text.hpp"

namespace tablesem {

const std::vector<Neighbor> KnnIndex::kEmpty;

KnnIndex KnnIndex::build(const std::map<std::string, std::vector<std::string>>& corpus,
                         int k_max) {
  KnnIndex index;
  for (const auto& [id, tokens] : corpus) {
    std::vector<Neighbor> list;
    list.reserve(corpus.size() > 0 ? corpus.size() - 1 : 0);
    for (const auto& [other_id, other_tokens] : corpus) {
      if (other_id == id) continue;
      list.push_back(Neighbor{levenshtein_tokens(tokens, other_tokens), other_id});
    }
    std::sort(list.begin(), list.end(), [](const Neighbor& a, const Neighbor& b) {
      if (a.distance != b.distance) return a.distance < b.distance;
      return a.id < b.id;
    });
    if (static_cast<int>(list.size()) > k_max) list.resize(static_cast<size_t>(k_max));
    index.lists_.emplace(id, std::move(list));
  }
  return index;
}

const std::vector<Neighbor>& KnnIndex::neighbors(const std::string& id) const {
  auto it = lists_.find(id);
  return it == lists_.end() ? kEmpty : it->second;
}

std::vector<std::string> nearest_in_set(const KnnIndex& index, const std::string& id,
                                        const std::set<std::string>& s, int k) {
  std::vector<std::string> out;
  if (k < 1) return out;
  for (const Neighbor& n : index.neighbors(id)) {
    if (s.count(n.id) == 0) continue;
    out.push_back(n.id);
    if (static_cast<int>(out.size()) >= k) break;
  }
  return out;
}

std::vector<std::string> nearest_by_tokens(
    const std::vector<std::string>& query,
    const std::map<std::string, std::vector<std::string>>& candidates, int k) {
  std::vector<Neighbor> ranked;
  ranked.reserve(candidates.size());
  for (const auto& [id, tokens] : candidates) {
    ranked.push_back(Neighbor{levenshtein_tokens(query, tokens), id});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Neighbor& a, const Neighbor& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.id < b.id;
  });
  std::vector<std::string> out;
  for (const Neighbor& n : ranked) {
    if (static_cast<int>(out.size()) >= k) break;
    out.push_back(n.id);
  }
  return out;
}

}  // namespace tablesem

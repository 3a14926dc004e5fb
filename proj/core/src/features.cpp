#include "tablesem/features.hpp"

#include <algorithm>
#include <set>

namespace tablesem {

void add_feature(FeatureVector& f, std::string name, double value) {
  f.emplace_back(std::move(name), value);
}

void finalize_features(FeatureVector& f) {
  std::sort(f.begin(), f.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  FeatureVector merged;
  for (auto& [name, value] : f) {
    if (!merged.empty() && merged.back().first == name) {
      merged.back().second += value;
    } else {
      merged.emplace_back(std::move(name), value);
    }
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const auto& kv) { return kv.second == 0.0; }),
               merged.end());
  f = std::move(merged);
}

double feature_dot(const std::map<std::string, double>& weights, const FeatureVector& f) {
  double total = 0.0;
  for (const auto& [name, value] : f) {
    auto it = weights.find(name);
    if (it != weights.end()) total += it->second * value;
  }
  return total;
}

FeatureVector feature_diff(const FeatureVector& a, const FeatureVector& b) {
  FeatureVector out = a;
  for (const auto& [name, value] : b) out.emplace_back(name, -value);
  finalize_features(out);
  return out;
}

FeatureVector feature_scale(const FeatureVector& a, double s) {
  FeatureVector out;
  out.reserve(a.size());
  for (const auto& [name, value] : a) {
    if (value * s != 0.0) out.emplace_back(name, value * s);
  }
  return out;
}

FeatureVector feature_sum(const std::vector<FeatureVector>& fs, const std::vector<double>& coef) {
  FeatureVector out;
  for (size_t i = 0; i < fs.size(); ++i) {
    for (const auto& [name, value] : fs[i]) out.emplace_back(name, value * coef[i]);
  }
  finalize_features(out);
  return out;
}

namespace {

void collect_rules_and_spans(const Derivation& d, FeatureVector& f) {
  if (d.rule != nullptr) add_feature(f, "rule|" + d.rule->id, 1.0);
  if (d.span_begin >= 0 && d.category == kCatEnt && !d.span_text.empty()) {
    add_feature(f, "span|" + d.span_text + "|entity", 1.0);
  }
  for (const auto& c : d.children) collect_rules_and_spans(*c, f);
}

std::string denotation_type(const ValueSet& s) {
  if (s.empty()) return "empty";
  bool mixed = false;
  for (const Value& v : s) {
    if (!(v.kind == s[0].kind)) mixed = true;
  }
  if (mixed) return "mixed";
  switch (s[0].kind) {
    case Value::Kind::Cell:
      return "cell";
    case Value::Kind::Row:
      return "row";
    case Value::Kind::Number:
      return "number";
    case Value::Kind::Date:
      return "date";
    case Value::Kind::Text:
      return "text";
  }
  return "mixed";
}

std::string size_bucket(size_t n) {
  if (n >= 3) return "3+";
  return std::to_string(n);
}

}  // namespace

FeatureVector featurize(const std::vector<std::string>& lemmas, const Derivation& d) {
  FeatureVector f;
  std::set<std::string> preds;
  for (const auto& p : lf_predicates(d.lf)) preds.insert(p);
  std::set<std::string> lemma_set(lemmas.begin(), lemmas.end());
  for (const auto& lemma : lemma_set) {
    for (const auto& pred : preds) {
      add_feature(f, "lex|" + lemma + "|" + pred, 1.0);
    }
  }
  collect_rules_and_spans(d, f);
  if (d.exec_ok) {
    add_feature(f, "den|type|" + denotation_type(d.denotation), 1.0);
    add_feature(f, "den|size|" + size_bucket(d.denotation.size()), 1.0);
  }
  add_feature(f, "lf|size", static_cast<double>(lf_node_count(d.lf)));
  finalize_features(f);
  return f;
}

}  // namespace tablesem

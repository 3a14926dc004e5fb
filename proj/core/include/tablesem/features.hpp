#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tablesem/derivation.hpp"

namespace tablesem {

// Sparse feature vector kept sorted by name with no zero entries, so that
// dot products and updates iterate in one fixed order.
using FeatureVector = std::vector<std::pair<std::string, double>>;

void add_feature(FeatureVector& f, std::string name, double value);

// Sorts by name, merges duplicates, drops zeros.
void finalize_features(FeatureVector& f);

double feature_dot(const std::map<std::string, double>& weights, const FeatureVector& f);

// a - b.
FeatureVector feature_diff(const FeatureVector& a, const FeatureVector& b);
FeatureVector feature_scale(const FeatureVector& a, double s);
FeatureVector feature_sum(const std::vector<FeatureVector>& fs, const std::vector<double>& coef);

// Deterministic feature map over a finished derivation: lemma/predicate
// co-occurrence, rule counts, denotation type and size bucket, anchored
// entity spans, and logical form size.
FeatureVector featurize(const std::vector<std::string>& lemmas, const Derivation& d);

}  // namespace tablesem

#pragma once

#include <map>
#include <string>
#include <vector>

#include "tablesem/features.hpp"

namespace tablesem {

// Sparse log-linear model trained online with per-coordinate AdaGrad steps
// and proximal L1 shrinkage.
struct Model {
  std::map<std::string, double> weights;
  std::map<std::string, double> accum;  // squared-gradient sums, only grow
  double lambda = 1e-5;
  double eta = 0.1;

  double score(const FeatureVector& f) const { return feature_dot(weights, f); }
};

// Log-softmax of raw scores, max-subtracted. Throws EmptyCandidates.
std::vector<double> log_probabilities(const std::vector<double>& scores);

// Ascends the objective along grad: AdaGrad step per touched coordinate,
// then proximal L1; exact zeros are dropped from the weight map.
void ascend(Model& model, const FeatureVector& grad);

// Gradient of log(p+/p-) under the two-candidate softmax: (1-q)(f+ - f-)
// with q = sigmoid(s+ - s-).
FeatureVector pairwise_gradient(const FeatureVector& pos_f, double pos_score,
                                const FeatureVector& neg_f, double neg_score);

// Gradient of log of the total consistent probability:
// E_consistent[f] - E_all[f]. consistent must contain at least one true.
FeatureVector marginal_gradient(const std::vector<FeatureVector>& feats,
                                const std::vector<double>& scores,
                                const std::vector<bool>& consistent);

// Versioned text format: feature TAB weight TAB accumulator.
void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);

}  // namespace tablesem

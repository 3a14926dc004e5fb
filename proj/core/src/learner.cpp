#include "tablesem/learner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "tablesem/errors.hpp"

namespace tablesem {

std::vector<double> log_probabilities(const std::vector<double>& scores) {
  if (scores.empty()) throw EmptyCandidates("no candidates to normalize");
  double mx = *std::max_element(scores.begin(), scores.end());
  double z = 0.0;
  for (double s : scores) z += std::exp(s - mx);
  double log_z = std::log(z);
  std::vector<double> out;
  out.reserve(scores.size());
  for (double s : scores) out.push_back(s - mx - log_z);
  return out;
}

void ascend(Model& model, const FeatureVector& grad) {
  for (const auto& [name, g] : grad) {
    if (g == 0.0) continue;
    double& acc = model.accum[name];
    acc += g * g;
    double step = model.eta / std::sqrt(acc);
    double w = 0.0;
    auto it = model.weights.find(name);
    if (it != model.weights.end()) w = it->second;
    w += step * g;
    // proximal L1 with the same per-coordinate step
    double shrink = step * model.lambda;
    if (w > shrink) {
      w -= shrink;
    } else if (w < -shrink) {
      w += shrink;
    } else {
      w = 0.0;
    }
    if (w == 0.0) {
      if (it != model.weights.end()) model.weights.erase(it);
    } else if (it != model.weights.end()) {
      it->second = w;
    } else {
      model.weights.emplace(name, w);
    }
  }
}

FeatureVector pairwise_gradient(const FeatureVector& pos_f, double pos_score,
                                const FeatureVector& neg_f, double neg_score) {
  double q = 1.0 / (1.0 + std::exp(neg_score - pos_score));
  return feature_scale(feature_diff(pos_f, neg_f), 1.0 - q);
}

FeatureVector marginal_gradient(const std::vector<FeatureVector>& feats,
                                const std::vector<double>& scores,
                                const std::vector<bool>& consistent) {
  std::vector<double> logp = log_probabilities(scores);
  double cons_mass = 0.0;
  for (size_t i = 0; i < feats.size(); ++i) {
    if (consistent[i]) cons_mass += std::exp(logp[i]);
  }
  std::vector<double> coef(feats.size(), 0.0);
  for (size_t i = 0; i < feats.size(); ++i) {
    double p = std::exp(logp[i]);
    double c = consistent[i] ? p / cons_mass : 0.0;
    coef[i] = c - p;
  }
  return feature_sum(feats, coef);
}

namespace {

std::string format_weight(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void save_model(const Model& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write model: " + path);
  out << "tablesem-model\t1\t" << format_weight(model.lambda) << "\t"
      << format_weight(model.eta) << "\n";
  for (const auto& [name, w] : model.weights) {
    auto it = model.accum.find(name);
    double acc = it == model.accum.end() ? 0.0 : it->second;
    out << name << "\t" << format_weight(w) << "\t" << format_weight(acc) << "\n";
  }
  // accumulators of features whose weights shrank back to zero
  for (const auto& [name, acc] : model.accum) {
    if (model.weights.count(name) == 0) {
      out << name << "\t0\t" << format_weight(acc) << "\n";
    }
  }
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingModel("cannot read model: " + path);
  std::string header;
  if (!std::getline(in, header)) throw MissingModel("empty model file: " + path);
  std::istringstream head(header);
  std::string magic, version, lambda_s, eta_s;
  std::getline(head, magic, '\t');
  std::getline(head, version, '\t');
  std::getline(head, lambda_s, '\t');
  std::getline(head, eta_s, '\t');
  if (magic != "tablesem-model" || version != "1") {
    throw MissingModel("unrecognized model header: " + path);
  }
  Model model;
  model.lambda = std::strtod(lambda_s.c_str(), nullptr);
  model.eta = std::strtod(eta_s.c_str(), nullptr);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    size_t t1 = line.find('\t');
    size_t t2 = line.find('\t', t1 == std::string::npos ? t1 : t1 + 1);
    if (t1 == std::string::npos || t2 == std::string::npos) {
      throw MissingModel("malformed model line: " + line);
    }
    std::string name = line.substr(0, t1);
    double w = std::strtod(line.substr(t1 + 1, t2 - t1 - 1).c_str(), nullptr);
    double acc = std::strtod(line.substr(t2 + 1).c_str(), nullptr);
    if (w != 0.0) model.weights[name] = w;
    if (acc != 0.0) model.accum[name] = acc;
  }
  return model;
}

}  // namespace tablesem

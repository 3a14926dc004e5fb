#include "tablesem/text.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "lemma_rules_data.hpp"

namespace tablesem {
namespace {

const std::map<std::string, std::string>& irregular_table() {
  static const std::map<std::string, std::string> table = [] {
    std::map<std::string, std::string> t;
    std::istringstream in(embedded::lemma_rules_tsv);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      size_t tab = line.find('\t');
      if (tab == std::string::npos) continue;
      t[line.substr(0, tab)] = line.substr(tab + 1);
    }
    return t;
  }();
  return table;
}

bool ends_with(const std::string& s, const std::string& suf) {
  return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

// b, d, g, m, n, p, r, t double before -ing/-ed (planned, winning).
bool undoubles(char c) {
  switch (c) {
    case 'b':
    case 'd':
    case 'g':
    case 'm':
    case 'n':
    case 'p':
    case 'r':
    case 't':
      return true;
    default:
      return false;
  }
}

std::string strip_doubled(std::string stem) {
  size_t n = stem.size();
  if (n >= 3 && stem[n - 1] == stem[n - 2] && undoubles(stem[n - 1])) stem.pop_back();
  return stem;
}

const std::set<std::string>& function_words() {
  static const std::set<std::string> words = {
      "a",     "an",    "the",   "this",  "that",  "these", "those", "i",    "you",  "he",
      "she",   "it",    "we",    "they",  "who",   "whom",  "whose", "what", "which", "when",
      "where", "why",   "how",   "be",    "am",    "is",    "are",   "was",  "were", "been",
      "do",    "does",  "did",   "have",  "has",   "had",   "will",  "would", "can", "could",
      "shall", "should", "may",  "might", "must",  "of",    "in",    "on",   "at",   "to",
      "from",  "by",    "with",  "about", "than",  "as",    "for",   "and",  "or",   "but",
      "not",   "no",    "nor",   "so",    "if",    "then",  "there", "here", "up",   "down",
      "out",   "over",  "under", "after", "before", "between", "during", "per", "each", "every",
      "all",   "any",   "some",  "most",  "more",  "less",  "least", "many", "much", "few",
      "other", "same",  "only",  "also",  "both",  "its",   "their", "his",  "her",  "my",
      "your",  "our",   "s",     "_"};
  return words;
}

}  // namespace

std::vector<std::string> tokenize(const std::string& utterance) {
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    size_t b = 0;
    size_t e = cur.size();
    while (b < e && std::ispunct(static_cast<unsigned char>(cur[b]))) ++b;
    while (e > b && std::ispunct(static_cast<unsigned char>(cur[e - 1]))) --e;
    if (e > b) tokens.push_back(cur.substr(b, e - b));
    cur.clear();
  };
  for (char raw : utterance) {
    unsigned char c = static_cast<unsigned char>(raw);
    if (std::isspace(c) || c == '\'') {
      flush();
    } else {
      cur += static_cast<char>(std::tolower(c));
    }
  }
  flush();
  return tokens;
}

std::string lemmatize(const std::string& token) {
  const auto& irregular = irregular_table();
  auto it = irregular.find(token);
  if (it != irregular.end()) return it->second;
  const size_t n = token.size();
  if (n >= 5 && ends_with(token, "ies")) return token.substr(0, n - 3) + "y";
  if (n >= 5 && (ends_with(token, "ses") || ends_with(token, "xes") || ends_with(token, "zes") ||
                 ends_with(token, "ches") || ends_with(token, "shes"))) {
    return token.substr(0, n - 2);
  }
  if (n >= 5 && ends_with(token, "ing")) {
    std::string stem = strip_doubled(token.substr(0, n - 3));
    return stem.size() >= 3 ? stem : token;
  }
  if (n >= 4 && ends_with(token, "ied")) return token.substr(0, n - 3) + "y";
  if (n >= 4 && ends_with(token, "ed")) {
    std::string stem = strip_doubled(token.substr(0, n - 2));
    return stem.size() >= 3 ? stem : token;
  }
  if (n >= 4 && token.back() == 's' && !ends_with(token, "ss") && !ends_with(token, "us") &&
      !ends_with(token, "is")) {
    return token.substr(0, n - 1);
  }
  return token;
}

bool is_determiner(const std::string& token) {
  return token == "a" || token == "an" || token == "the" || token == "this" || token == "that" ||
         token == "these" || token == "those";
}

bool is_function_word(const std::string& token) { return function_words().count(token) > 0; }

bool is_number_token(const std::string& token) {
  bool digit = false;
  for (char c : token) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digit = true;
    } else if (c != '.' && c != ',' && c != '-') {
      return false;
    }
  }
  return digit;
}

std::map<std::string, double> compute_doc_freq(const std::vector<std::vector<std::string>>& docs) {
  std::map<std::string, int> counts;
  for (const auto& doc : docs) {
    std::set<std::string> seen;
    for (const auto& tok : doc) seen.insert(lemmatize(tok));
    for (const auto& lemma : seen) ++counts[lemma];
  }
  std::map<std::string, double> freq;
  if (docs.empty()) return freq;
  for (const auto& [lemma, c] : counts) {
    freq[lemma] = static_cast<double>(c) / static_cast<double>(docs.size());
  }
  return freq;
}

std::vector<std::string> feature_lemmas(const std::vector<std::string>& tokens) {
  std::vector<std::string> out;
  for (const auto& tok : tokens) {
    if (is_determiner(tok)) continue;
    out.push_back(lemmatize(tok));
  }
  return out;
}

std::vector<std::string> trigger_tokens(const std::vector<std::string>& tokens,
                                        const std::map<std::string, double>& doc_freq,
                                        double min_doc_freq) {
  std::vector<std::string> out;
  for (const auto& tok : tokens) {
    if (is_determiner(tok)) continue;
    std::string lemma = lemmatize(tok);
    bool noun = !is_function_word(lemma) && !is_number_token(lemma);
    if (noun) {
      auto it = doc_freq.find(lemma);
      double f = it == doc_freq.end() ? 0.0 : it->second;
      if (f < min_doc_freq) continue;
    }
    out.push_back(std::move(lemma));
  }
  if (out.empty()) out.push_back("_");
  return out;
}

namespace {

template <typename Seq>
size_t edit_distance(const Seq& a, const Seq& b) {
  const size_t n = a.size();
  const size_t m = b.size();
  std::vector<size_t> prev(m + 1);
  std::vector<size_t> cur(m + 1);
  for (size_t j = 0; j <= m; ++j) prev[j] = j;
  for (size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (size_t j = 1; j <= m; ++j) {
      size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

}  // namespace

size_t levenshtein_str(const std::string& a, const std::string& b) { return edit_distance(a, b); }

size_t levenshtein_tokens(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  return edit_distance(a, b);
}

}  // namespace tablesem

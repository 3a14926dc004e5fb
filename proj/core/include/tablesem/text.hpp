#pragma once

#include <map>
#include <string>
#include <vector>

namespace tablesem {

// Lowercased word/number tokens with edge punctuation stripped.
std::vector<std::string> tokenize(const std::string& utterance);

// Rule-table lemmatizer: embedded irregular table plus suffix rules for
// plural -s/-es and -ing/-ed with doubled-consonant handling.
std::string lemmatize(const std::string& token);

bool is_determiner(const std::string& token);
bool is_function_word(const std::string& token);
bool is_number_token(const std::string& token);

// Fraction of docs whose token set contains each lemmatized token.
std::map<std::string, double> compute_doc_freq(const std::vector<std::vector<std::string>>& docs);

// Lemmas with determiners removed; the token stream scoring features see.
std::vector<std::string> feature_lemmas(const std::vector<std::string>& tokens);

// Retrieval-side stream: lemmas minus determiners minus nouns rarer than
// min_doc_freq; a lone "_" sentinel when everything is removed.
std::vector<std::string> trigger_tokens(const std::vector<std::string>& tokens,
                                        const std::map<std::string, double>& doc_freq,
                                        double min_doc_freq = 0.02);

size_t levenshtein_str(const std::string& a, const std::string& b);
size_t levenshtein_tokens(const std::vector<std::string>& a, const std::vector<std::string>& b);

}  // namespace tablesem

#include <doctest.h>

#include "tablesem/text.hpp"

using namespace tablesem;
using V = std::vector<std::string>;

TEST_CASE("tokenizer lowercases and strips edge punctuation") {
  CHECK(tokenize("Which Nation won the most GOLD?") ==
        V{"which", "nation", "won", "the", "most", "gold"});
  CHECK(tokenize("  spaced\tout\nwords ") == V{"spaced", "out", "words"});
  CHECK(tokenize("who's first?") == V{"who", "s", "first"});
  CHECK(tokenize("(2,000)") == V{"2,000"});
  CHECK(tokenize("a-b") == V{"a-b"});
  CHECK(tokenize("!!!") == V{});
  CHECK(tokenize("") == V{});
}

TEST_CASE("lemmatizer irregulars") {
  CHECK(lemmatize("was") == "be");
  CHECK(lemmatize("were") == "be");
  CHECK(lemmatize("has") == "have");
  CHECK(lemmatize("did") == "do");
  CHECK(lemmatize("went") == "go");
  CHECK(lemmatize("won") == "win");
  CHECK(lemmatize("held") == "hold");
  CHECK(lemmatize("written") == "write");
}

TEST_CASE("lemmatizer suffix rules") {
  CHECK(lemmatize("countries") == "country");
  CHECK(lemmatize("ties") == "tie");  // too short for -ies, plain -s applies
  CHECK(lemmatize("buses") == "bus");
  CHECK(lemmatize("boxes") == "box");
  CHECK(lemmatize("churches") == "church");
  CHECK(lemmatize("wishes") == "wish");
  CHECK(lemmatize("running") == "run");
  CHECK(lemmatize("scoring") == "scor");
  CHECK(lemmatize("sing") == "sing");    // too short for -ing
  CHECK(lemmatize("bring") == "bring");  // stem would be too short
  CHECK(lemmatize("tried") == "try");
  CHECK(lemmatize("planned") == "plan");
  CHECK(lemmatize("ranked") == "rank");
  CHECK(lemmatize("red") == "red");  // too short for -ed
  CHECK(lemmatize("medals") == "medal");
  CHECK(lemmatize("gas") == "gas");      // too short for -s
  CHECK(lemmatize("glass") == "glass");  // -ss keeps its s
  CHECK(lemmatize("status") == "status");
  CHECK(lemmatize("tennis") == "tennis");
  CHECK(lemmatize("gold") == "gold");
}

TEST_CASE("word classes") {
  CHECK(is_determiner("the"));
  CHECK(is_determiner("those"));
  CHECK_FALSE(is_determiner("gold"));
  CHECK(is_function_word("most"));
  CHECK(is_function_word("s"));
  CHECK(is_function_word("_"));
  CHECK_FALSE(is_function_word("nation"));
  CHECK(is_number_token("2,000"));
  CHECK(is_number_token("3.5"));
  CHECK(is_number_token("-4"));
  CHECK_FALSE(is_number_token("4th"));
  CHECK_FALSE(is_number_token("-"));
  CHECK_FALSE(is_number_token(""));
}

TEST_CASE("document frequency is per-document and lemmatized") {
  std::vector<V> docs = {{"gold", "medals"}, {"medal", "medal"}, {"silver"}};
  auto freq = compute_doc_freq(docs);
  CHECK(freq["medal"] == doctest::Approx(2.0 / 3.0));
  CHECK(freq["gold"] == doctest::Approx(1.0 / 3.0));
  CHECK(freq["silver"] == doctest::Approx(1.0 / 3.0));
  CHECK(freq.count("medals") == 0);
  CHECK(compute_doc_freq({}).empty());
}

TEST_CASE("feature lemmas drop determiners only") {
  CHECK(feature_lemmas({"the", "nations", "won", "a", "medal"}) == V{"nation", "win", "medal"});
}

TEST_CASE("trigger tokens drop rare nouns and never go empty") {
  std::map<std::string, double> freq = {{"nation", 0.5}, {"win", 0.9}, {"gold", 0.01}};
  CHECK(trigger_tokens({"which", "nations", "won", "the", "gold"}, freq, 0.02) ==
        V{"which", "nation", "win"});
  // Function words and numbers survive regardless of frequency.
  CHECK(trigger_tokens({"more", "than", "2"}, {}, 0.02) == V{"more", "than", "2"});
  CHECK(trigger_tokens({"the", "zyzzyva"}, {}, 0.02) == V{"_"});
  CHECK(trigger_tokens({}, {}, 0.02) == V{"_"});
  // Threshold is strict: exactly-at-threshold lemmas stay.
  CHECK(trigger_tokens({"gold"}, {{"gold", 0.02}}, 0.02) == V{"gold"});
}

TEST_CASE("edit distances") {
  CHECK(levenshtein_str("", "") == 0);
  CHECK(levenshtein_str("abc", "abc") == 0);
  CHECK(levenshtein_str("kitten", "sitting") == 3);
  CHECK(levenshtein_str("turkey", "turke") == 1);
  CHECK(levenshtein_str("", "abc") == 3);
  CHECK(levenshtein_tokens({"how", "many", "golds"}, {"how", "many", "silvers"}) == 1);
  CHECK(levenshtein_tokens({}, {"a"}) == 1);
  CHECK(levenshtein_tokens({"a", "b"}, {"b", "a"}) == 2);
}

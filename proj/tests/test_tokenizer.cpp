#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "parrot/tokenizer.hpp"
#include "synthetic.hpp"

using namespace parrot;

namespace {

std::vector<std::string> texts(std::string_view s) {
  std::vector<std::string> out;
  for (auto& span : SentenceTokenizer{}.split(s)) out.push_back(span.text);
  return out;
}

std::multiset<std::string> tokens(const std::string& s) {
  std::istringstream in(s);
  std::multiset<std::string> out;
  for (std::string w; in >> w;) out.insert(w);
  return out;
}

}  // namespace

TEST_CASE("figure example splits into four sentences") {
  std::ifstream in(PARROT_TEST_DATA "/parrots.txt");
  std::stringstream buf;
  buf << in.rdbuf();
  const auto s = split_sentences(PlainText{buf.str()});
  REQUIRE(s.size() == 4);
  CHECK(s[0].text == "When parrots do it, it's parroting.");
  CHECK(s[3].text == s[0].text);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i].startOffset == i);
}

TEST_CASE("tokenizer basics") {
  CHECK(texts("").empty());
  CHECK(texts("   \n\n  ").empty());
  CHECK(texts("Dr. Smith arrived. He left.") == std::vector<std::string>{"Dr. Smith arrived.", "He left."});
  CHECK(texts("No terminator") == std::vector<std::string>{"No terminator"});
  CHECK(texts("See Fig. 2 for details. Then go.") ==
        std::vector<std::string>{"See Fig. 2 for details.", "Then go."});
  CHECK(texts("Really? Yes! Ok.") == std::vector<std::string>{"Really?", "Yes!", "Ok."});
  CHECK(texts("He said \"Stop.\" Then left.") == std::vector<std::string>{"He said \"Stop.\"", "Then left."});
  CHECK(texts("It costs 3.5 dollars. Fine.") == std::vector<std::string>{"It costs 3.5 dollars.", "Fine."});
  CHECK(texts("lower. case stays together.") == std::vector<std::string>{"lower. case stays together."});
  CHECK(texts("Wait... what. Go... Now.") == std::vector<std::string>{"Wait... what.", "Go...", "Now."});
  CHECK(texts("Smith et al. Showed it. Then.") == std::vector<std::string>{"Smith et al. Showed it.", "Then."});
  CHECK(texts("A line\nbreak joins. Next") == std::vector<std::string>{"A line break joins.", "Next"});
  CHECK(texts("First para\n\nsecond para") == std::vector<std::string>{"First para", "second para"});
  CHECK(texts("Items 1. 2. 3.") == std::vector<std::string>{"Items 1.", "2.", "3."});
}

TEST_CASE("custom abbreviation list") {
  const auto list = AbbreviationList::parse("# c\nAbc.\nx.y.\n");
  CHECK(list.contains("Abc."));
  const SentenceTokenizer tok(list);
  CHECK(tok.split("See Abc. Next.").size() == 1);
  CHECK(tok.split("See Dr. Next.").size() == 2);
}

TEST_CASE("boundary soundness on synthesized text") {
  std::mt19937_64 rng(19);
  for (int iter = 0; iter < 300; ++iter) {
    std::uniform_int_distribution<int> n(1, 30);
    std::vector<std::string> sentences;
    std::string joined;
    for (int k = n(rng); k > 0; --k) {
      sentences.push_back(testing::make_sentence(rng));
      joined += (joined.empty() ? "" : " ") + sentences.back();
    }
    CHECK(texts(joined) == sentences);
  }
}

TEST_CASE("word conservation and determinism") {
  std::mt19937_64 rng(23);
  const std::string pieces[] = {"Dr.", "Mr.", "word", "x.", "A", "B.", "?", "!", "\"Q.\"", "(p.", "3.", "e.g.", "\n", "\n\n", "...", "é."};
  std::uniform_int_distribution<std::size_t> pick(0, std::size(pieces) - 1), len(0, 40);
  for (int iter = 0; iter < 2000; ++iter) {
    std::string s;
    for (auto k = len(rng); k > 0; --k) s += pieces[pick(rng)] + " ";
    const auto out = SentenceTokenizer{}.split(s);
    std::string rejoined;
    for (const auto& sp : out) {
      CHECK_FALSE(sp.text.empty());
      rejoined += sp.text + " ";
    }
    CHECK(tokens(rejoined) == tokens(s));
    CHECK(SentenceTokenizer{}.split(s) == out);
  }
}

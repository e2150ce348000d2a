#include "synthetic.hpp"

#include <cmath>

#include "parrot/memory_repository.hpp"
#include "parrot/sqlite_repository.hpp"

namespace parrot::testing {

namespace {

constexpr const char* kConsonants = "bdfklmnprstvz";
constexpr const char* kVowels = "aeiou";

std::string make_word(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> syl(2, 4), c(0, 12), v(0, 4);
  std::string w;
  for (int i = syl(rng); i > 0; --i) {
    w.push_back(kConsonants[c(rng)]);
    w.push_back(kVowels[v(rng)]);
  }
  return w;
}

// Base-13 index rendered as consonant-vowel syllables.
std::string tag_word(std::size_t index) {
  std::string w = "ta";
  do {
    w.push_back(kConsonants[index % 13]);
    w.push_back(kVowels[(index / 13) % 5]);
    index /= 13;
  } while (index);
  return w;
}

}  // namespace

std::string make_sentence(std::mt19937_64& rng, std::size_t minWords, std::size_t maxWords) {
  std::uniform_int_distribution<std::size_t> len(minWords, maxWords);
  const auto n = len(rng);
  std::string s;
  for (std::size_t i = 0; i < n; ++i) {
    auto w = make_word(rng);
    if (i == 0) w[0] = static_cast<char>(w[0] - 'a' + 'A');
    if (i) s.push_back(' ');
    s += w;
  }
  s.push_back('.');
  return s;
}

std::vector<std::string> sentence_pool(std::uint64_t seed, std::size_t size) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> pool;
  pool.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    auto s = make_sentence(rng, 3, 13);
    s.insert(s.size() - 1, " " + tag_word(i));
    pool.push_back(std::move(s));
  }
  return pool;
}

std::string garbage_sentence(std::size_t index) {
  std::string s = "s c [ 3 v";
  for (char d : std::to_string(index)) {
    s.push_back(' ');
    s.push_back(d);
  }
  return s + " 0 0 .";
}

std::vector<SyntheticDocument> zipf_corpus(const CorpusSpec& spec, const std::vector<std::string>& pool) {
  std::mt19937_64 rng(spec.seed);
  std::vector<double> weights(pool.size());
  for (std::size_t r = 0; r < pool.size(); ++r) weights[r] = 1.0 / std::pow(static_cast<double>(r + 1), spec.zipfExponent);
  // shuffle so frequency rank is unrelated to pool order
  std::vector<std::size_t> perm(pool.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  std::uniform_int_distribution<std::size_t> count(spec.minSentences, spec.maxSentences);

  std::vector<SyntheticDocument> docs;
  docs.reserve(spec.documents);
  for (std::size_t d = 0; d < spec.documents; ++d) {
    SyntheticDocument doc;
    doc.meta.sourceTag = spec.sourceTag;
    doc.meta.name = "doc-" + std::to_string(d) + ".txt";
    const auto n = count(rng);
    std::string text;
    for (std::size_t i = 0; i < n; ++i) {
      const auto idx = perm[pick(rng)];
      doc.poolIndices.push_back(idx);
      if (i) text += (i % spec.sentencesPerParagraph == 0) ? "\n\n" : " ";
      text += pool[idx];
    }
    text.push_back('\n');
    doc.content.text = std::move(text);
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<SyntheticDocument> zipf_corpus(const CorpusSpec& spec) {
  return zipf_corpus(spec, sentence_pool(spec.seed ^ 0x9e3779b97f4a7c15ull, spec.poolSize));
}

std::unique_ptr<Repository> make_repository(const std::string& kind) {
  if (kind == "sqlite") return std::make_unique<SqliteRepository>(":memory:");
  return std::make_unique<MemoryRepository>();
}

}  // namespace parrot::testing

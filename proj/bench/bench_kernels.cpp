// Serial reference vs OpenMP kernels. Run with --benchmark_filter to pick one.

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "parrot/kernels.hpp"

using namespace parrot;

namespace {

std::vector<SentenceId> occurrences(std::size_t n) {
  std::mt19937_64 rng(42);
  std::geometric_distribution<std::int64_t> dist(1e-5);
  std::vector<SentenceId> out(n);
  for (auto& id : out) id = SentenceId{dist(rng) + 1};
  return out;
}

std::string word(std::mt19937_64& rng) {
  static const char* syllables[] = {"ka", "lo", "mi", "ter", "sun", "pa", "ri", "do", "ve", "an"};
  std::uniform_int_distribution<int> len(1, 4), pick(0, 9);
  std::string w;
  for (int i = len(rng); i > 0; --i) w += syllables[pick(rng)];
  return w;
}

std::string sentence(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> words(4, 20);
  std::string s;
  for (int i = words(rng); i > 0; --i) s += (s.empty() ? "" : " ") + word(rng);
  s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s + ".";
}

std::vector<Sentence> sentences(std::size_t n) {
  std::mt19937_64 rng(7);
  std::vector<Sentence> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {SentenceId{std::int64_t(i + 1)}, sentence(rng), {}, "en"};
  return out;
}

struct Docs {
  std::vector<DocumentMeta> metas;
  std::vector<PlainText> contents;
};

Docs documents(std::size_t n) {
  std::mt19937_64 rng(3);
  Docs d;
  for (std::size_t i = 0; i < n; ++i) {
    std::string text;
    for (int k = 0; k < 200; ++k) text += sentence(rng) + (k % 6 == 5 ? "\n\n" : " ");
    d.metas.push_back({"bench", "doc" + std::to_string(i)});
    d.contents.push_back({text});
  }
  return d;
}

void BM_summarize_serial(benchmark::State& state) {
  const auto occ = occurrences(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::summarize_occurrences(occ));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_summarize_parallel(benchmark::State& state) {
  const auto occ = occurrences(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::parallel::summarize_occurrences(occ));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_distinct_serial(benchmark::State& state) {
  const auto occ = occurrences(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::distinct_ids(occ));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_distinct_parallel(benchmark::State& state) {
  const auto occ = occurrences(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::parallel::distinct_ids(occ));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_validate_serial(benchmark::State& state) {
  const auto s = sentences(state.range(0));
  const auto rules = RuleSet::defaults();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::validate_batch(s, rules));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_validate_parallel(benchmark::State& state) {
  const auto s = sentences(state.range(0));
  const auto rules = RuleSet::defaults();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::parallel::validate_batch(s, rules));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_prepare_serial(benchmark::State& state) {
  const auto d = documents(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::prepare_batch(d.metas, d.contents));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_prepare_parallel(benchmark::State& state) {
  const auto d = documents(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::parallel::prepare_batch(d.metas, d.contents));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_summarize_serial)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_summarize_parallel)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_distinct_serial)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_distinct_parallel)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_validate_serial)->Arg(10000);
BENCHMARK(BM_validate_parallel)->Arg(10000);
BENCHMARK(BM_prepare_serial)->Arg(64);
BENCHMARK(BM_prepare_parallel)->Arg(64);

BENCHMARK_MAIN();

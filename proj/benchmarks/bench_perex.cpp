#include <benchmark/benchmark.h>

#include <memory>
#include <random>
#include <string>

#include "perex/bs.hpp"
#include "perex/graph_product.hpp"
#include "perex/trace_pump.hpp"
#include "perex/traces.hpp"
#include "perex/words.hpp"

using namespace perex;

namespace {

std::string random_word(std::mt19937_64& rng, const std::string& alphabet, std::size_t len) {
  std::string w(len, ' ');
  for (auto& c : w) c = alphabet[rng() % alphabet.size()];
  return w;
}

IndepAlphabet example_alphabet() { return IndepAlphabet("abcd", {{'a', 'b'}, {'b', 'd'}, {'a', 'c'}, {'c', 'd'}}); }

void BM_ExponentRandom(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto w = random_word(rng, "ab", static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(exponent_of_periodicity(std::string_view(w)));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ExponentRandom)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_ExponentRuns(benchmark::State& state) {
  std::vector<Run> runs;
  for (int i = 0; i < state.range(0); ++i) runs.push_back({i % 2 ? 'b' : 'a', 1000000007ULL + static_cast<std::uint64_t>(i % 3)});
  for (auto _ : state) benchmark::DoNotOptimize(exponent_of_periodicity_rle(runs));
}
BENCHMARK(BM_ExponentRuns)->Range(8, 512);

void BM_ThueMorsePrefixExponents(benchmark::State& state) {
  const auto tm = thue_morse_prefix(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(prefix_exponents(tm));
}
BENCHMARK(BM_ThueMorsePrefixExponents)->Range(256, 4096);

void BM_LexNormalForm(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto alph = example_alphabet();
  const auto w = random_word(rng, "abcd", static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lex_nf(w, alph));
}
BENCHMARK(BM_LexNormalForm)->Range(16, 1024);

void BM_PumpingCertificate(benchmark::State& state) {
  const auto a = std::make_shared<const IndepAlphabet>(example_alphabet());
  const Trace u(a, "b"), p(a, "abcd"), v(a, "c");
  for (auto _ : state) {
    benchmark::DoNotOptimize(certify_pumping_family(u, p, v, static_cast<std::size_t>(state.range(0))));
  }
}
BENCHMARK(BM_PumpingCertificate)->Arg(6)->Arg(24);

void BM_BSRewrite(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const BSSpec spec(2, 3);
  const auto w = parse_bs_word(random_word(rng, "aAtT", static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(rewrite_s(spec, w));
}
BENCHMARK(BM_BSRewrite)->Range(8, 128);

void BM_GraphProductMultiply(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const GPSpec spec = raag_spec(IndepAlphabet("abcde", {{'a', 'b'}, {'b', 'c'}, {'c', 'd'}, {'d', 'e'}, {'e', 'a'}}));
  auto element = [&]() {
    GPWord w(static_cast<std::size_t>(state.range(0)));
    for (auto& l : w) l = GPLetter{rng() % spec.size(), static_cast<int>(rng() % 2)};
    return evaluate(spec, w);
  };
  const auto x = element(), y = element();
  for (auto _ : state) benchmark::DoNotOptimize(gp_multiply(spec, x, y));
}
BENCHMARK(BM_GraphProductMultiply)->Range(8, 256);

}  // namespace

BENCHMARK_MAIN();

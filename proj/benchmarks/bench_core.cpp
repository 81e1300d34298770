#include <benchmark/benchmark.h>

#include <vector>

#include "notecrack/cipher.hpp"
#include "notecrack/lm.hpp"
#include "notecrack/rng.hpp"
#include "notecrack/solver.hpp"
#include "notecrack/symbols.hpp"

using namespace notecrack;

namespace {

// Random-walk corpus over the melody alphabet, roughly the entropy regime
// the solver is tuned for.
std::vector<Sequence> walk_corpus(int sequences, int length, std::uint64_t seed) {
    const auto melody = melody_alphabet();
    Rng rng(mix_seed(seed, 0x62656eULL));
    std::vector<Sequence> out;
    out.reserve(static_cast<std::size_t>(sequences));
    for (int s = 0; s < sequences; ++s) {
        std::vector<std::int32_t> tokens;
        tokens.reserve(static_cast<std::size_t>(length));
        int position = 12;
        for (int i = 0; i < length; ++i) {
            tokens.push_back(position);
            const int step = static_cast<int>(rng.below(7)) - 3;
            position = std::min(23, std::max(0, position + step));
        }
        out.emplace_back(melody, std::move(tokens));
    }
    return out;
}

const std::vector<Sequence>& corpus() {
    static const std::vector<Sequence> c = walk_corpus(300, 110, 1);
    return c;
}

const NgramModel& model() {
    static const NgramModel m = NgramModel::train(corpus(), melody_alphabet());
    return m;
}

void BM_train(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(NgramModel::train(corpus(), melody_alphabet()));
    }
}
BENCHMARK(BM_train);

void BM_log_prob_87(benchmark::State& state) {
    const Sequence x = walk_corpus(1, 87, 2)[0];
    for (auto _ : state) {
        benchmark::DoNotOptimize(model().log_prob(x));
    }
}
BENCHMARK(BM_log_prob_87);

void BM_encipher_10k(benchmark::State& state) {
    const Sequence x = walk_corpus(1, 10000, 3)[0];
    const Key key = random_key(melody_alphabet(), 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(encipher(key, x));
    }
}
BENCHMARK(BM_encipher_10k);

void BM_solve_restart_87(benchmark::State& state) {
    const Sequence plaintext = walk_corpus(1, 87, 5)[0];
    const Sequence ciphertext = encipher(random_key(melody_alphabet(), dorabella_alphabet(), 6), plaintext);
    SolverConfig config;
    config.restarts = 1;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        config.seed = seed++;
        benchmark::DoNotOptimize(solve(ciphertext, model(), config));
    }
}
BENCHMARK(BM_solve_restart_87);

void BM_solve_full_dorabella(benchmark::State& state) {
    const Sequence plaintext = walk_corpus(1, 87, 7)[0];
    const Sequence ciphertext = encipher(random_key(melody_alphabet(), dorabella_alphabet(), 8), plaintext);
    SolverConfig config;  // 4000 iterations, 90 restarts
    config.seed = 9;
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve(ciphertext, model(), config));
    }
}
BENCHMARK(BM_solve_full_dorabella)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include <map>

#include "anybn/archive.hpp"
#include "anybn/exact.hpp"
#include "anybn/genetic.hpp"
#include "anybn/netgen.hpp"
#include "anybn/samplers.hpp"

namespace {

using namespace anybn;

struct Fixture {
  Network net;
  Evidence ev;
};

const Fixture& fixture(std::size_t nodes) {
  static std::map<std::size_t, Fixture> cache;
  auto it = cache.find(nodes);
  if (it == cache.end()) {
    for (std::uint64_t seed = 1;; ++seed) {
      NetGenConfig cfg;
      cfg.node_count = nodes;
      cfg.seed = seed;
      Rng rng(seed);
      auto net = generate_network(cfg, rng);
      try {
        auto ev = select_low_prior_evidence(net, cfg, rng);
        it = cache.emplace(nodes, Fixture{std::move(net), std::move(ev)}).first;
        break;
      } catch (const TooFewLeaves&) {
      }
    }
  }
  return it->second;
}

void BM_LogicSample(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(logic_sample(f.net, rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_LogicSample)->Arg(12)->Arg(32)->Arg(128);

void BM_ForwardSample(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(forward_sample(f.net, f.ev, rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ForwardSample)->Arg(12)->Arg(32)->Arg(128);

void BM_BackwardSample(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  const auto plan = backward_plan(f.net, f.ev);
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(backward_sample(f.net, f.ev, plan, rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_BackwardSample)->Arg(12)->Arg(32)->Arg(128);

void BM_ArchiveInsert(benchmark::State& state) {
  const auto& f = fixture(32);
  Rng rng(1);
  std::vector<Trial> trials;
  for (int i = 0; i < 4096; ++i) trials.push_back(logic_sample(f.net, rng));
  for (auto _ : state) {
    state.PauseTiming();
    Archive archive(f.net);
    archive.set_evidence(f.ev);
    state.ResumeTiming();
    for (const auto& t : trials) archive.insert(t);
    benchmark::DoNotOptimize(archive.evidence_mass());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(trials.size()));
}
BENCHMARK(BM_ArchiveInsert);

void BM_BreedGeneration(benchmark::State& state) {
  const auto& f = fixture(32);
  const GaParams params;
  const Simulator sim(f.net, f.ev, SamplingMethod::forward);
  Rng rng(1);
  Archive archive(f.net);
  archive.set_evidence(f.ev);
  auto pop = init_breeders(archive, f.net, f.ev, params, sim, rng).population;
  for (auto _ : state) benchmark::DoNotOptimize(breed_generation(pop, archive, f.net, f.ev, params, rng));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(params.generation_size));
}
BENCHMARK(BM_BreedGeneration);

void BM_ExactPosterior(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(exact_posterior(f.net, f.ev));
  state.counters["joint_states"] = f.net.joint_state_count();
}
BENCHMARK(BM_ExactPosterior)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

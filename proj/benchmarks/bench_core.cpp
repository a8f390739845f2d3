#include <benchmark/benchmark.h>

#include <string>

#include "delayrobust/delayrobust.hpp"
#include "delayrobust/io/bundle.hpp"
#include "delayrobust/io/pipeline.hpp"

using namespace delayrobust;

namespace {

const io::ProjectBundle& workcell() {
  static const io::ProjectBundle b = io::parse_bundle(std::string(DELAYROBUST_FIXTURES_DIR) + "/workcell.drb");
  return b;
}

void BM_SyncPlant(benchmark::State& state) {
  PlantModel m = workcell().plant_model();
  for (auto _ : state) benchmark::DoNotOptimize(m.plant());
}
BENCHMARK(BM_SyncPlant);

void BM_SupconWorkcell(benchmark::State& state) {
  PlantModel m = workcell().plant_model();
  Generator plant = m.plant(), spec = m.spec();
  for (auto _ : state) benchmark::DoNotOptimize(supcon(plant, spec));
}
BENCHMARK(BM_SupconWorkcell)->Unit(benchmark::kMillisecond);

void BM_LocalizeWorkcell(benchmark::State& state) {
  PlantModel m = workcell().plant_model();
  Generator sup = supcon(m.plant(), m.spec());
  for (auto _ : state) benchmark::DoNotOptimize(localize(m, sup));
}
BENCHMARK(BM_LocalizeWorkcell)->Unit(benchmark::kMillisecond);

void BM_SupqcCaseOne(benchmark::State& state) {
  Generator sup = io::reference_supervisor(workcell());
  io::Controllers c = io::obtain_controllers(workcell(), sup, false);
  ChanneledSystem sys = build_channeled(c.behaviors, io::resolve_channels(workcell(), "case1", c.locals));
  for (auto _ : state) benchmark::DoNotOptimize(supqc(sys.sup_prime, {sys.nulled}));
}
BENCHMARK(BM_SupqcCaseOne)->Unit(benchmark::kMillisecond);

void BM_VerdictCaseThree(benchmark::State& state) {
  Generator sup = io::reference_supervisor(workcell());
  io::Controllers c = io::obtain_controllers(workcell(), sup, false);
  ChanneledSystem sys = build_channeled(c.behaviors, io::resolve_channels(workcell(), "case3", c.locals));
  for (auto _ : state) benchmark::DoNotOptimize(check_delay_robustness(sup, sys));
}
BENCHMARK(BM_VerdictCaseThree)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();

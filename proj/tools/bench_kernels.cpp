// Throughput benchmark for RR-set batch generation: the OpenMP kernel at
// several thread counts against the serial reference, verifying that every
// variant produces an identical pool.

#include <chrono>
#include <cstdio>
#include <functional>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "stopstare/pool.hpp"
#include "stopstare/synth.hpp"

namespace ss = stopstare;

namespace {

double time_ms(const std::function<void()>& fn) {
  auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RR-set generation kernel benchmark (serial vs OpenMP)"};
  uint32_t n = 20000;
  double p = 0.0005;
  uint64_t count = 200000;
  uint64_t seed = 1;
  std::vector<int> thread_counts = {1, 2, 4, 8};
  bool quick = false;
  app.add_option("--n", n, "nodes in the synthetic graph");
  app.add_option("--p", p, "arc probability");
  app.add_option("--count", count, "RR sets per measurement");
  app.add_option("--seed", seed);
  app.add_option("--threads", thread_counts, "thread counts to measure")
      ->delimiter(',');
  app.add_flag("--quick", quick, "tiny sizes, for smoke testing");
  CLI11_PARSE(app, argc, argv);

  if (quick) {
    n = 500;
    p = 0.01;
    count = 2000;
  }

  ss::SyntheticSpec spec;
  spec.family = ss::SyntheticSpec::Family::ErdosRenyi;
  spec.n = n;
  spec.p = p;
  spec.seed = seed;
  spec.weight_rule = ss::SyntheticSpec::WeightRule::UniformInverseInDegree;
  ss::Graph g = ss::generate(spec);
  std::printf("graph: n=%u m=%llu, %llu RR sets per run\n", g.n(),
              (unsigned long long)g.m(), (unsigned long long)count);
  std::printf(
      "hardware threads: %u (thread counts beyond this only add scheduling "
      "overhead)\n",
      std::thread::hardware_concurrency());

  ss::RootSampler roots = ss::RootSampler::uniform(g.n());
  for (ss::DiffusionModel model :
       {ss::DiffusionModel::IC, ss::DiffusionModel::LT}) {
    ss::RRCollection reference(g.n());
    double serial_ms = time_ms([&] {
      ss::append_batch_serial(reference, g, model, roots, seed, 0, count);
    });
    std::printf("%s  serial reference: %9.1f ms  (%.0f sets/s, %llu items)\n",
                ss::model_name(model), serial_ms, 1000.0 * count / serial_ms,
                (unsigned long long)reference.total_items());
    for (int t : thread_counts) {
      ss::RRCollection pool(g.n());
      double ms = time_ms(
          [&] { ss::append_batch(pool, g, model, roots, seed, 0, count, t); });
      bool same = pool == reference;
      std::printf(
          "%s  omp %2d thread%s: %9.1f ms  (%.0f sets/s, speedup %.2fx, "
          "output %s)\n",
          ss::model_name(model), t, t == 1 ? " " : "s", ms,
          1000.0 * count / ms, serial_ms / ms,
          same ? "identical" : "MISMATCH");
      if (!same) return 1;
    }
  }
  return 0;
}

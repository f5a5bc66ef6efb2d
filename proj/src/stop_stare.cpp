#include "stopstare/stop_stare.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace stopstare {

const char* algo_name(Algo a) { return a == Algo::SSA ? "ssa" : "dssa"; }

Algo algo_from_name(const std::string& name) {
  if (name == "ssa" || name == "SSA") return Algo::SSA;
  if (name == "dssa" || name == "DSSA") return Algo::DSSA;
  throw std::invalid_argument("unknown algorithm: " + name);
}

const char* stop_reason_name(StopReason r) {
  return r == StopReason::CapReached ? "CapReached" : "ConditionsMet";
}

double epsilon_t(double eps1, double eps2, double eps3, double eps) {
  return (eps1 + eps2 + eps1 * eps2) * (bounds::kOneMinusInvE - eps) +
         bounds::kOneMinusInvE * eps3;
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void validate_common(const Graph& g, const StopStareConfig& cfg) {
  if (cfg.k < 1 || cfg.k > g.n())
    throw std::invalid_argument("k must satisfy 1 <= k <= n");
  if (!(cfg.eps > 0.0 && cfg.eps < 1.0))
    throw std::invalid_argument("eps must lie in (0,1)");
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0))
    throw std::invalid_argument("delta must lie in (0,1)");
}

std::vector<uint8_t> membership_bitmap(uint32_t n, std::span<const NodeId> S) {
  std::vector<uint8_t> in_s(n, 0);
  for (NodeId v : S) {
    if (v >= n) throw std::out_of_range("seed node out of range");
    in_s[v] = 1;
  }
  return in_s;
}

}  // namespace

namespace detail {

EstimateOutcome estimate_inf_core(const SampleSpace& space,
                                  std::span<const NodeId> S, double eps_prime,
                                  double delta_prime, uint64_t t_max,
                                  uint64_t seed, uint64_t first_stream,
                                  int threads) {
  const Graph& g = *space.graph;
  if (S.empty()) throw std::invalid_argument("estimate_inf: empty seed set");
  if (t_max < 1) throw std::invalid_argument("estimate_inf: t_max must be >= 1");
  if (threads < 1) threads = 1;
  const double lambda2 =
      1.0 + (1.0 + eps_prime) * bounds::upsilon(eps_prime, delta_prime);
  const std::vector<uint8_t> in_s = membership_bitmap(g.n(), S);

  // Drawn in deterministic chunks; RR set i (sequence id) comes from
  // RngStream(seed, first_stream + i), so the stopping index T — the first
  // prefix whose covered count reaches lambda2 — does not depend on the
  // chunk policy or thread count.
  uint64_t drawn = 0;
  uint64_t cov = 0;
  uint64_t chunk = 256;
  std::vector<uint8_t> covered;
  while (drawn < t_max) {
    uint64_t len = std::min(chunk, t_max - drawn);
    covered.assign(len, 0);
#pragma omp parallel num_threads(threads)
    {
      RRSampler sampler(g);
#pragma omp for schedule(dynamic, 64)
      for (int64_t i = 0; i < (int64_t)len; ++i) {
        RngStream rng(seed, first_stream + drawn + (uint64_t)i);
        NodeId root = space.roots.draw(rng);
        auto nodes = sampler.sample_into(space.model, root, rng);
        for (NodeId u : nodes)
          if (in_s[u]) {
            covered[i] = 1;
            break;
          }
      }
    }
    for (uint64_t i = 0; i < len; ++i) {
      cov += covered[i];
      if ((double)cov >= lambda2) {
        uint64_t t = drawn + i + 1;
        return {false, space.scale * lambda2 / (double)t, t};
      }
    }
    drawn += len;
    chunk = std::min<uint64_t>(chunk * 2, 65536);
  }
  return {true, 0.0, t_max};
}

RunDetail ssa_core(const SampleSpace& space, const StopStareConfig& cfg) {
  const Graph& g = *space.graph;
  validate_common(g, cfg);
  if (space.model == DiffusionModel::LT) g.require_lt_feasible();
  bounds::EpsilonSplit split;
  if (cfg.split) {
    split = *cfg.split;
    if (!(split.eps1 > 0.0) || !(split.eps2 > 0.0 && split.eps2 < 1.0) ||
        !(split.eps3 > 0.0 && split.eps3 < 1.0) ||
        !bounds::check_epsilon_constraint(split, cfg.eps))
      throw std::invalid_argument(
          "epsilon split violates the stopping-rule constraint");
  } else {
    split = bounds::default_epsilon_split(cfg.eps);
  }
  const bounds::Caps caps = cfg.caps_override
                                ? *cfg.caps_override
                                : bounds::caps_for(g.n(), cfg.k, cfg.eps, cfg.delta);
  const double lambda1 = bounds::split_lambda1(split, cfg.delta, caps.i_max);
  const double delta_iter = cfg.delta / (3.0 * caps.i_max);
  const auto t0 = Clock::now();

  RRCollection pool(g.n());
  uint64_t stream = 0;
  const auto initial = (uint64_t)std::ceil(caps.lambda);
  append_batch(pool, g, space.model, space.roots, cfg.seed, stream, initial,
               cfg.threads);
  stream += initial;

  GreedyResult gr;
  double est = 0.0;
  uint64_t verify_total = 0;
  uint32_t iter = 0;
  StopReason reason;
  while (true) {
    ++iter;
    const uint64_t add = pool.size();  // doubling step
    append_batch(pool, g, space.model, space.roots, cfg.seed, stream, add,
                 cfg.threads);
    stream += add;

    gr = pool.max_coverage_greedy(cfg.k);
    est = space.scale * (double)gr.coverage / (double)pool.size();

    bool done = false;
    if ((double)gr.coverage >= lambda1) {  // coverage precondition
      const double ratio = (1.0 + split.eps2) / (1.0 - split.eps2) *
                           (split.eps3 * split.eps3) /
                           (split.eps2 * split.eps2);
      const auto verify_cap =
          (uint64_t)std::ceil(2.0 * (double)pool.size() * ratio);
      EstimateOutcome out =
          estimate_inf_core(space, gr.seeds, split.eps2, delta_iter,
                            verify_cap, cfg.seed, stream, cfg.threads);
      stream += verify_cap;  // reserve the whole id range, used or not
      verify_total += out.draws;
      if (!out.exceeded && est <= (1.0 + split.eps1) * out.value) {
        reason = StopReason::ConditionsMet;  // estimate confirmed
        done = true;
      }
    }
    if (!done && (double)pool.size() >= caps.n_max) {
      reason = StopReason::CapReached;
      done = true;
    }
    if (done) break;
  }

  RunDetail detail{
      {std::move(gr.seeds), est, pool.size(), verify_total, iter, reason,
       ms_since(t0), cfg.seed},
      std::move(pool),
      caps,
      {}};
  return detail;
}

RunDetail dssa_core(const SampleSpace& space, const StopStareConfig& cfg) {
  const Graph& g = *space.graph;
  validate_common(g, cfg);
  if (!(cfg.eps < bounds::kOneMinusInvE))
    throw std::invalid_argument(
        "the dynamic algorithm needs eps < 1 - 1/e");
  if (cfg.split)
    throw std::invalid_argument(
        "the dynamic algorithm chooses its own epsilon split; none may be "
        "supplied");
  if (space.model == DiffusionModel::LT) g.require_lt_feasible();
  const bounds::Caps caps = cfg.caps_override
                                ? *cfg.caps_override
                                : bounds::caps_for(g.n(), cfg.k, cfg.eps, cfg.delta);
  const double eps = cfg.eps;
  const auto t0 = Clock::now();

  RRCollection pool(g.n());
  std::vector<DssaIterationTrace> traces;
  uint64_t stream = 0;
  const auto unit = (uint64_t)std::ceil(caps.lambda);

  GreedyResult gr;
  double est = 0.0;
  uint32_t t = 0;
  StopReason reason;
  while (true) {
    ++t;
    const uint64_t total = unit << t;  // stream length after this iteration
    const uint64_t half = unit << (t - 1);
    append_batch(pool, g, space.model, space.roots, cfg.seed, stream,
                 total - pool.size(), cfg.threads);
    stream = total;

    gr = pool.max_coverage_greedy(cfg.k, 0, half);
    est = space.scale * (double)gr.coverage / (double)half;
    const uint64_t cov_check = pool.cov(gr.seeds, half, total);

    DssaIterationTrace tr{t, half, 0.0, 0.0, 0.0, 0.0, cov_check, false, false};
    if ((double)cov_check >= caps.lambda1) {  // verification coverage floor
      tr.passed_d1 = true;
      const double i_check =
          space.scale * (double)cov_check / (double)(total - half);
      const double pow2 = std::ldexp(1.0, (int)t - 1);  // literal 2^(t-1)
      tr.eps1 = est / i_check - 1.0;  // may be negative; used raw
      tr.eps2 = eps * std::sqrt(space.scale * (1.0 + eps) / (pow2 * i_check));
      tr.eps3 = eps * std::sqrt(space.scale * (1.0 + eps) *
                                (bounds::kOneMinusInvE - eps) /
                                ((1.0 + eps / 3.0) * pow2 * i_check));
      tr.eps_t = epsilon_t(tr.eps1, tr.eps2, tr.eps3, eps);
      tr.passed_d2 = tr.eps_t <= eps;
    }
    traces.push_back(tr);

    if (tr.passed_d1 && tr.passed_d2) {
      reason = StopReason::ConditionsMet;
      break;
    }
    if ((double)half >= caps.n_max) {
      reason = StopReason::CapReached;
      break;
    }
  }

  RunDetail detail{
      {std::move(gr.seeds), est, pool.size(), 0, t, reason, ms_since(t0),
       cfg.seed},
      std::move(pool),
      caps,
      std::move(traces)};
  return detail;
}

}  // namespace detail

EstimateOutcome estimate_inf(const Graph& g, DiffusionModel model,
                             std::span<const NodeId> S, double eps_prime,
                             double delta_prime, uint64_t t_max, uint64_t seed,
                             int threads) {
  if (model == DiffusionModel::LT) g.require_lt_feasible();
  detail::SampleSpace space{&g, model, RootSampler::uniform(g.n()),
                            (double)g.n()};
  return detail::estimate_inf_core(space, S, eps_prime, delta_prime, t_max,
                                   seed, 0, threads);
}

RunDetail ssa_run(const Graph& g, const StopStareConfig& cfg) {
  detail::SampleSpace space{&g, cfg.model, RootSampler::uniform(g.n()),
                            (double)g.n()};
  return detail::ssa_core(space, cfg);
}

SeedResult ssa(const Graph& g, const StopStareConfig& cfg) {
  return ssa_run(g, cfg).result;
}

RunDetail dssa_run(const Graph& g, const StopStareConfig& cfg) {
  detail::SampleSpace space{&g, cfg.model, RootSampler::uniform(g.n()),
                            (double)g.n()};
  return detail::dssa_core(space, cfg);
}

SeedResult dssa(const Graph& g, const StopStareConfig& cfg) {
  return dssa_run(g, cfg).result;
}

}  // namespace stopstare

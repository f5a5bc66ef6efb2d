// Command-line front end: graph conversion, the two stopping algorithms,
// targeted (weighted-root) runs, Monte-Carlo evaluation, exact oracles, and
// benchmarking.  Machine-readable output: one JSON object per record (JSON
// Lines for multi-record commands), or CSV with --csv.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "stopstare/bounds.hpp"
#include "stopstare/graph.hpp"
#include "stopstare/oracle.hpp"
#include "stopstare/stop_stare.hpp"
#include "stopstare/synth.hpp"
#include "stopstare/tvm.hpp"

namespace ss = stopstare;
using ordered_json = nlohmann::ordered_json;

namespace {

// Thrown for bad argument values (exit code 2, like grammar errors).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ss::Graph load_graph(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  char magic[4] = {};
  in.read(magic, 4);
  in.clear();
  in.seekg(0);
  if (std::string(magic, 4) == "SSAG") return ss::Graph::read_binary(in);
  try {
    return ss::Graph::parse_edge_list(in);
  } catch (const ss::ParseError& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

double resolve_delta(const std::string& spec, uint32_t n) {
  if (spec == "auto") return 1.0 / (double)n;
  double d;
  try {
    size_t pos;
    d = std::stod(spec, &pos);
    if (pos != spec.size()) throw std::invalid_argument(spec);
  } catch (const std::exception&) {
    throw UsageError("--delta must be a number or 'auto', got: " + spec);
  }
  if (!(d > 0.0 && d < 1.0))
    throw UsageError("--delta must lie in (0,1), got: " + spec);
  return d;
}

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("SSA_THREADS")) {
    int t = std::atoi(env);
    if (t > 0) return t;
  }
  return 1;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open output file: " + out_path);
  out << text;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

// Flattens JSON records into CSV: header from the first record's keys
// (stable order), arrays joined with ';'.
std::string to_csv(const std::vector<ordered_json>& records) {
  std::ostringstream out;
  if (records.empty()) return "";
  bool first = true;
  for (const auto& [key, value] : records.front().items()) {
    (void)value;
    if (!first) out << ",";
    out << csv_escape(key);
    first = false;
  }
  out << "\n";
  for (const auto& rec : records) {
    first = true;
    for (const auto& [key, value] : rec.items()) {
      (void)key;
      if (!first) out << ",";
      first = false;
      if (value.is_array()) {
        std::string joined;
        for (const auto& v : value) {
          if (!joined.empty()) joined += ";";
          joined += v.dump();
        }
        out << csv_escape(joined);
      } else if (value.is_string()) {
        out << csv_escape(value.get<std::string>());
      } else {
        out << value.dump();
      }
    }
    out << "\n";
  }
  return out.str();
}

std::string render(const std::vector<ordered_json>& records, bool csv) {
  if (csv) return to_csv(records);
  std::string out;
  for (const auto& rec : records) out += rec.dump() + "\n";
  return out;
}

struct RunFlags {
  std::string graph_path;
  std::string model = "ic";
  std::string algo = "ssa";
  uint32_t k = 1;
  double eps = 0.1;
  std::string delta = "auto";
  uint64_t seed = 1;
  int threads = 0;  // 0 = unset, fall back to SSA_THREADS then 1
  double eps1 = 0.0, eps2 = 0.0, eps3 = 0.0;
  std::string out_path;
  bool no_timing = false;
  bool csv = false;
};

void add_run_flags(CLI::App* cmd, RunFlags& f, bool with_algo) {
  cmd->add_option("--graph", f.graph_path, "graph file (text edge list or binary)")
      ->required();
  cmd->add_option("--model", f.model, "diffusion model: ic | lt")
      ->check(CLI::IsMember({"ic", "lt"}));
  if (with_algo)
    cmd->add_option("--algo", f.algo, "algorithm: ssa | dssa")
        ->check(CLI::IsMember({"ssa", "dssa"}));
  cmd->add_option("--k", f.k, "seed-set size")->required();
  cmd->add_option("--eps", f.eps, "approximation parameter (default 0.1)");
  cmd->add_option("--delta", f.delta, "failure probability, or 'auto' for 1/n");
  cmd->add_option("--seed", f.seed, "RNG seed");
  cmd->add_option("--threads", f.threads,
                  "sampler threads (default: SSA_THREADS env, else 1)");
  cmd->add_option("--eps1", f.eps1, "static-algorithm split component 1");
  cmd->add_option("--eps2", f.eps2, "static-algorithm split component 2");
  cmd->add_option("--eps3", f.eps3, "static-algorithm split component 3");
  cmd->add_option("--out", f.out_path, "write output here instead of stdout");
  cmd->add_flag("--no-timing", f.no_timing, "omit wall-clock field");
  cmd->add_flag("--csv", f.csv, "flatten records to CSV");
}

ss::StopStareConfig make_config(const RunFlags& f, const ss::Graph& g,
                                CLI::App* cmd) {
  if (f.k < 1 || f.k > g.n())
    throw UsageError("--k must satisfy 1 <= k <= n (n = " +
                     std::to_string(g.n()) + ")");
  if (!(f.eps > 0.0 && f.eps < 1.0))
    throw UsageError("--eps must lie in (0,1)");
  ss::StopStareConfig cfg;
  cfg.k = f.k;
  cfg.eps = f.eps;
  cfg.delta = resolve_delta(f.delta, g.n());
  cfg.model = ss::model_from_name(f.model);
  cfg.seed = f.seed;
  cfg.threads = resolve_threads(f.threads);
  auto given = [&](const char* name) {
    const CLI::Option* o = cmd->get_option_no_throw(name);
    return o && o->count() > 0;
  };
  bool any_split = given("--eps1") || given("--eps2") || given("--eps3");
  if (any_split) {
    if (!(given("--eps1") && given("--eps2") && given("--eps3")))
      throw UsageError("--eps1/--eps2/--eps3 must be given together");
    ss::bounds::EpsilonSplit split{f.eps1, f.eps2, f.eps3};
    if (!ss::bounds::check_epsilon_constraint(split, f.eps))
      throw UsageError("epsilon split violates the stopping-rule constraint");
    cfg.split = split;
  }
  return cfg;
}

ordered_json run_record(const std::string& algo, const RunFlags& f,
                        const ss::Graph& g, const ss::StopStareConfig& cfg,
                        const ss::RunDetail& detail) {
  const ss::SeedResult& r = detail.result;
  ordered_json rec;
  rec["schema"] = "stopstare-run-v1";
  rec["algo"] = algo;
  rec["model"] = ss::model_name(cfg.model);
  rec["graph"] = f.graph_path;
  rec["n"] = g.n();
  rec["m"] = g.m();
  rec["k"] = cfg.k;
  rec["eps"] = cfg.eps;
  rec["delta"] = cfg.delta;
  rec["seeds"] = r.seeds;
  rec["est_influence"] = r.est_influence;
  rec["rr_count_main"] = r.rr_count_main;
  rec["rr_count_verify"] = r.rr_count_verify;
  rec["iterations"] = r.iterations;
  rec["stop_reason"] = ss::stop_reason_name(r.stop_reason);
  rec["rng_seed"] = r.rng_seed;
  rec["threads"] = cfg.threads;
  rec["rr_pool_peak_bytes"] = detail.pool.total_items() * sizeof(ss::NodeId);
  if (!f.no_timing) rec["wall_ms"] = r.wall_ms;
  return rec;
}

int cmd_convert(const std::string& input, const std::string& output,
                bool undirected, bool auto_weight, const std::string& to) {
  std::ifstream in(input, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open graph file: " + input);
  char magic[4] = {};
  in.read(magic, 4);
  in.clear();
  in.seekg(0);
  ss::Graph g;
  ss::LoadStats stats;
  bool binary_in = std::string(magic, 4) == "SSAG";
  if (binary_in) {
    if (undirected)
      throw UsageError("--undirected applies only to text edge lists");
    g = ss::Graph::read_binary(in);
    if (auto_weight) g = g.with_uniform_in_weights();
  } else {
    ss::LoadOptions opts;
    opts.undirected = undirected;
    opts.auto_weight = auto_weight;
    try {
      g = ss::Graph::parse_edge_list(in, opts, &stats);
    } catch (const ss::ParseError& e) {
      throw std::runtime_error(input + ": " + e.what());
    }
  }
  if (to == "bin") {
    std::ofstream out(output, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + output);
    g.write_binary(out);
  } else {
    std::ofstream out(output);
    if (!out) throw std::runtime_error("cannot open output file: " + output);
    out << g.n() << " " << g.m() << "\n";
    out.precision(17);
    for (ss::NodeId u = 0; u < g.n(); ++u) {
      auto tgts = g.out_neighbors(u);
      auto ws = g.out_weights(u);
      for (size_t i = 0; i < tgts.size(); ++i)
        out << u << " " << tgts[i] << " " << ws[i] << "\n";
    }
  }
  std::cerr << "converted " << input << " -> " << output << " (n=" << g.n()
            << ", m=" << g.m() << ", self-loops dropped "
            << stats.self_loops_dropped << ", parallel merged "
            << stats.parallel_edges_merged << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stop-and-stare influence maximization"};
  app.require_subcommand(1);

  // convert
  auto* convert = app.add_subcommand("convert", "convert graphs text <-> binary");
  std::string cv_in, cv_out, cv_to = "bin";
  bool cv_undirected = false, cv_auto_weight = false;
  convert->add_option("--input", cv_in, "input graph (text or binary)")->required();
  convert->add_option("--output", cv_out, "output path")->required();
  convert->add_flag("--undirected", cv_undirected,
                    "treat each text edge as two arcs");
  convert->add_flag("--auto-weight", cv_auto_weight,
                    "replace weights with 1/in-degree");
  convert->add_option("--to", cv_to, "output format: bin | txt")
      ->check(CLI::IsMember({"bin", "txt"}));

  // im
  auto* im = app.add_subcommand("im", "influence maximization (ssa or dssa)");
  RunFlags imf;
  add_run_flags(im, imf, /*with_algo=*/true);

  // tvm
  auto* tvm = app.add_subcommand("tvm", "targeted run with node weights");
  RunFlags tvf;
  std::string tv_weights;
  add_run_flags(tvm, tvf, /*with_algo=*/true);
  tvm->add_option("--weights", tv_weights, "per-node weight file")->required();

  // eval
  auto* eval = app.add_subcommand("eval", "Monte-Carlo influence of a seed set");
  std::string ev_graph, ev_model = "ic", ev_out;
  std::vector<uint32_t> ev_seeds;
  uint64_t ev_runs = 10000, ev_seed = 1;
  int ev_threads = 0;
  bool ev_no_timing = false;
  eval->add_option("--graph", ev_graph)->required();
  eval->add_option("--model", ev_model)->check(CLI::IsMember({"ic", "lt"}));
  eval->add_option("--seeds", ev_seeds, "seed nodes, comma separated")
      ->required()
      ->delimiter(',');
  eval->add_option("--runs", ev_runs, "cascade count");
  eval->add_option("--seed", ev_seed, "RNG seed");
  eval->add_option("--threads", ev_threads);
  eval->add_option("--out", ev_out);
  eval->add_flag("--no-timing", ev_no_timing);

  // exact
  auto* exact = app.add_subcommand("exact", "enumeration oracles (tiny graphs)");
  exact->require_subcommand(1);
  auto* exact_inf = exact->add_subcommand("influence", "exact influence of --seeds");
  auto* exact_opt_cmd = exact->add_subcommand("opt", "exhaustive OPT_k");
  std::string ex_graph, ex_model = "ic", ex_out;
  std::vector<uint32_t> ex_seeds;
  uint32_t ex_k = 1;
  for (auto* sub : {exact_inf, exact_opt_cmd}) {
    sub->add_option("--graph", ex_graph)->required();
    sub->add_option("--model", ex_model)->check(CLI::IsMember({"ic", "lt"}));
    sub->add_option("--out", ex_out);
  }
  exact_inf->add_option("--seeds", ex_seeds)->required()->delimiter(',');
  exact_opt_cmd->add_option("--k", ex_k)->required();

  // bench
  auto* bench = app.add_subcommand("bench", "paired algorithm comparison");
  RunFlags bf;
  std::vector<uint32_t> bench_ks;
  std::vector<std::string> bench_algos = {"ssa", "dssa"};
  std::string bench_suite;
  uint32_t bench_trials = 200;
  bench->add_option("--graph", bf.graph_path, "graph file");
  bench->add_option("--model", bf.model)->check(CLI::IsMember({"ic", "lt"}));
  bench->add_option("--ks", bench_ks, "seed-set sizes, comma separated")
      ->delimiter(',');
  bench->add_option("--algos", bench_algos)->delimiter(',');
  bench->add_option("--eps", bf.eps);
  bench->add_option("--delta", bf.delta);
  bench->add_option("--seed", bf.seed);
  bench->add_option("--threads", bf.threads);
  bench->add_option("--out", bf.out_path);
  bench->add_flag("--no-timing", bf.no_timing);
  bench->add_flag("--csv", bf.csv);
  bench->add_option("--suite", bench_suite,
                    "named suite instead of a graph run: guarantees")
      ->check(CLI::IsMember({"guarantees"}));
  bench->add_option("--trials", bench_trials, "trials per algorithm (suites)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(convert))
      return cmd_convert(cv_in, cv_out, cv_undirected, cv_auto_weight, cv_to);

    if (app.got_subcommand(im)) {
      ss::Graph g = load_graph(imf.graph_path);
      ss::StopStareConfig cfg = make_config(imf, g, im);
      ss::Algo algo = ss::algo_from_name(imf.algo);
      ss::RunDetail detail = algo == ss::Algo::SSA ? ss::ssa_run(g, cfg)
                                                   : ss::dssa_run(g, cfg);
      emit(render({run_record(imf.algo, imf, g, cfg, detail)}, imf.csv),
           imf.out_path);
      return 0;
    }

    if (app.got_subcommand(tvm)) {
      ss::Graph g = load_graph(tvf.graph_path);
      ss::StopStareConfig cfg = make_config(tvf, g, tvm);
      ss::Algo algo = ss::algo_from_name(tvf.algo);
      std::ifstream win(tv_weights);
      if (!win)
        throw std::runtime_error("cannot open weights file: " + tv_weights);
      ss::TargetWeights tw;
      try {
        tw = ss::TargetWeights::load(win, g.n());
      } catch (const ss::ParseError& e) {
        throw std::runtime_error(tv_weights + ": " + e.what());
      }
      ss::RunDetail detail = ss::tvm_run_detail(g, tw, algo, cfg);
      ordered_json rec = run_record(tvf.algo, tvf, g, cfg, detail);
      rec["gamma"] = tw.gamma;  // appended: scale of est_influence
      emit(render({rec}, tvf.csv), tvf.out_path);
      return 0;
    }

    if (app.got_subcommand(eval)) {
      ss::Graph g = load_graph(ev_graph);
      auto t0 = std::chrono::steady_clock::now();
      ss::McEstimate mc =
          ss::mc_influence(g, ev_seeds, ss::model_from_name(ev_model), ev_runs,
                           ev_seed, resolve_threads(ev_threads));
      double wall = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
      ordered_json rec;
      rec["schema"] = "stopstare-eval-v1";
      rec["graph"] = ev_graph;
      rec["model"] = ev_model;
      rec["seeds"] = ev_seeds;
      rec["runs"] = ev_runs;
      rec["mean"] = mc.mean;
      rec["std_error"] = mc.std_error;
      rec["rng_seed"] = ev_seed;
      if (!ev_no_timing) rec["wall_ms"] = wall;
      emit(rec.dump() + "\n", ev_out);
      return 0;
    }

    if (app.got_subcommand(exact)) {
      ss::Graph g = load_graph(ex_graph);
      ss::DiffusionModel model = ss::model_from_name(ex_model);
      ordered_json rec;
      rec["schema"] = "stopstare-exact-v1";
      rec["graph"] = ex_graph;
      rec["model"] = ex_model;
      if (exact->got_subcommand(exact_inf)) {
        ss::ExactInfluenceReport rep = ss::exact_influence(g, ex_seeds, model);
        rec["mode"] = "influence";
        rec["seeds"] = ex_seeds;
        rec["influence"] = rep.influence;
        rec["outcomes_enumerated"] = rep.outcomes_enumerated;
      } else {
        ss::OptResult opt = ss::exact_opt(g, ex_k, model);
        rec["mode"] = "opt";
        rec["k"] = ex_k;
        rec["seeds"] = opt.seeds;
        rec["opt"] = opt.opt;
      }
      emit(rec.dump() + "\n", ex_out);
      return 0;
    }

    if (app.got_subcommand(bench)) {
      if (bench_suite == "guarantees") {
        // Fixed protocol: small random graph, exact oracles, both algorithms.
        ss::SyntheticSpec spec;
        spec.family = ss::SyntheticSpec::Family::ErdosRenyi;
        spec.n = 8;
        spec.p = 0.3;
        spec.weight_rule = ss::SyntheticSpec::WeightRule::UniformInverseInDegree;
        spec.seed = 9;
        ss::Graph g = ss::generate(spec);
        double eps = 0.3, delta = 0.2;
        double slack = 3.0 * std::sqrt(delta * (1 - delta) / bench_trials);
        std::vector<ordered_json> records;
        for (const char* algo : {"ssa", "dssa"}) {
          double frac = ss::guarantee_trial(
              g, 2, eps, delta, ss::algo_from_name(algo),
              ss::model_from_name(bf.model), bench_trials, bf.seed,
              resolve_threads(bf.threads));
          ordered_json rec;
          rec["schema"] = "stopstare-guarantee-v1";
          rec["algo"] = algo;
          rec["model"] = bf.model;
          rec["n"] = spec.n;
          rec["k"] = 2;
          rec["eps"] = eps;
          rec["delta"] = delta;
          rec["trials"] = bench_trials;
          rec["pass_fraction"] = frac;
          rec["threshold"] = 1.0 - delta - slack;
          rec["passed"] = frac >= 1.0 - delta - slack;
          records.push_back(rec);
        }
        emit(render(records, bf.csv), bf.out_path);
        return 0;
      }
      if (bf.graph_path.empty())
        throw UsageError("bench needs --graph (or --suite guarantees)");
      if (bench_ks.empty()) throw UsageError("bench needs --ks");
      ss::Graph g = load_graph(bf.graph_path);
      std::vector<ordered_json> records;
      for (uint32_t k : bench_ks) {
        for (const std::string& algo_name : bench_algos) {
          RunFlags f = bf;
          f.k = k;
          ss::StopStareConfig cfg = make_config(f, g, bench);
          ss::Algo algo = ss::algo_from_name(algo_name);
          ss::RunDetail detail = algo == ss::Algo::SSA ? ss::ssa_run(g, cfg)
                                                       : ss::dssa_run(g, cfg);
          records.push_back(run_record(algo_name, f, g, cfg, detail));
        }
      }
      emit(render(records, bf.csv), bf.out_path);
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

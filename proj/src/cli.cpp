#include "twsplit/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <future>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "twsplit/decomposition.hpp"
#include "twsplit/driver.hpp"
#include "twsplit/graph.hpp"
#include "twsplit/oracle.hpp"

namespace twsplit {
namespace {

constexpr int kExitValid = 0;
constexpr int kExitInvalid = 1;    // validate: decomposition rejected
constexpr int kExitAboveK = 2;     // certified width above the parameter
constexpr int kExitUsage = 64;     // bad invocation or unusable request
constexpr int kExitParse = 65;     // unreadable or malformed input data
constexpr int kExitInternal = 70;  // broken internal invariant

// Options shared by the subcommands that run the decision procedure.
struct TuningOpts {
  std::string mode = "auto";
  std::uint64_t seed = 0;
  double c_alpha = RunConfig{}.c_alpha;
  double c_beta = RunConfig{}.c_beta;
  double c_gamma = RunConfig{}.c_gamma;
  double c_delta = RunConfig{}.c_delta;
  std::int64_t max_table_entries = RunConfig{}.max_table_entries;
  std::int64_t max_table_bytes = RunConfig{}.max_total_table_bytes;
};

void add_tuning_options(CLI::App* cmd, TuningOpts& o) {
  cmd->add_option("--mode", o.mode, "table mode: auto, 3 or 4")
      ->check(CLI::IsMember({"auto", "3", "4"}))
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "seed for sampled diagnostics")
      ->capture_default_str();
  cmd->add_option("--c-alpha", o.c_alpha, "potential constant c_alpha")
      ->capture_default_str();
  cmd->add_option("--c-beta", o.c_beta, "potential constant c_beta")
      ->capture_default_str();
  cmd->add_option("--c-gamma", o.c_gamma, "potential constant c_gamma")
      ->capture_default_str();
  cmd->add_option("--c-delta", o.c_delta, "potential constant c_delta")
      ->capture_default_str();
  cmd->add_option("--max-table-entries", o.max_table_entries,
                  "bootstrap cap on entries per table")
      ->capture_default_str();
  cmd->add_option("--max-table-bytes", o.max_table_bytes,
                  "bootstrap cap on total table bytes")
      ->capture_default_str();
}

RunConfig make_config(const TuningOpts& o, int k, bool telemetry) {
  RunConfig cfg;
  cfg.k = k;
  cfg.forced_mode = o.mode == "3" ? 3 : o.mode == "4" ? 4 : 0;
  cfg.telemetry = telemetry;
  cfg.seed = o.seed;
  cfg.c_alpha = o.c_alpha;
  cfg.c_beta = o.c_beta;
  cfg.c_gamma = o.c_gamma;
  cfg.c_delta = o.c_delta;
  cfg.max_table_entries = o.max_table_entries;
  cfg.max_total_table_bytes = o.max_table_bytes;
  return cfg;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  return f;
}

nlohmann::ordered_json round_json(const RoundReport& r) {
  nlohmann::ordered_json j;
  j["component"] = r.component;
  j["w"] = r.w;
  j["k"] = r.k;
  j["mode"] = r.mode;
  j["max_table_entries"] = r.max_table_entries;
  j["alpha"] = r.meter.alpha;
  j["beta"] = r.meter.beta;
  j["gamma"] = r.meter.gamma;
  j["delta"] = r.meter.delta;
  j["phi"] = r.meter.phi;
  j["dp_recomputes"] = r.meter.dp_recomputes;
  j["rotations"] = r.meter.rotations;
  j["merges"] = r.meter.merges;
  j["splits"] = r.meter.splits;
  j["dfs_steps"] = r.meter.dfs_steps;
  j["tables_fused"] = r.meter.tables_fused;
  j["entries_visited"] = r.meter.entries_visited;
  j["xp_parent_bag_events"] = r.meter.xp_parent_bag_events;
  return j;
}

void write_rounds_jsonl(std::ostream& os,
                        const std::vector<RoundReport>& rounds) {
  for (const RoundReport& r : rounds) os << round_json(r).dump() << '\n';
}

// %g keeps integral potentials free of trailing zeros while staying
// deterministic for the byte-stable CSV contract.
std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Mirror of the sequential component join: preorder copy with remapped
// bags, the first component's root becoming the root of the whole tree.
void append_component(TreeDecomposition& dst, const TreeDecomposition& src,
                      const std::vector<VertexId>& vmap) {
  if (src.root == -1) return;
  std::vector<int> map(src.nodes.size(), -1);
  int copied_root = -1;
  for (int id : subtree_nodes(src, src.root)) {
    const Node& n = src.node(id);
    std::vector<VertexId> bag;
    bag.reserve(n.bag.size());
    for (VertexId v : n.bag) bag.push_back(vmap[static_cast<std::size_t>(v)]);
    const int nid = dst.add_node(std::move(bag), n.kind);
    map[static_cast<std::size_t>(id)] = nid;
    if (n.parent != -1)
      dst.link(map[static_cast<std::size_t>(n.parent)], nid);
    else
      copied_root = nid;
  }
  if (dst.root == -1)
    dst.root = copied_root;
  else
    dst.link(dst.root, copied_root);
}

// Per-component decision runs launched concurrently, results joined in
// component order so the output is identical to the sequential run.
DriveResult decide_parallel(const Graph& g, int k, const RunConfig& cfg) {
  const std::vector<std::vector<VertexId>> comps = connected_components(g);
  std::vector<std::future<DriveResult>> futures;
  futures.reserve(comps.size());
  for (const std::vector<VertexId>& vs : comps) {
    Graph gc = induced_subgraph(g, vs);
    futures.push_back(std::async(
        std::launch::async,
        [gc = std::move(gc), k, cfg]() { return decide_treewidth(gc, k, cfg); }));
  }
  DriveResult out;
  TreeDecomposition joined;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    DriveResult r = futures[i].get();
    for (RoundReport& rr : r.rounds) {
      rr.component = static_cast<int>(i);
      out.rounds.push_back(std::move(rr));
    }
    out.totals.dp_recomputes += r.totals.dp_recomputes;
    out.totals.rotations += r.totals.rotations;
    out.totals.merges += r.totals.merges;
    out.totals.splits += r.totals.splits;
    out.totals.dfs_steps += r.totals.dfs_steps;
    out.totals.tables_fused += r.totals.tables_fused;
    out.totals.entries_visited += r.totals.entries_visited;
    out.totals.xp_parent_bag_events += r.totals.xp_parent_bag_events;
    if (!r.success) {
      out.success = false;
      out.fail_width = r.fail_width;
      out.fail_k = r.fail_k;
      return out;
    }
    append_component(joined, r.td, comps[i]);
  }
  out.success = true;
  out.td = std::move(joined);
  return out;
}

// The PACE format needs at least one bag, so the empty graph is written as
// a single empty bag, which is a valid decomposition of it.
TreeDecomposition empty_graph_decomposition() {
  TreeDecomposition t;
  t.root = t.add_node({}, NodeKind::kMain);
  return t;
}

struct DecomposeOpts {
  std::string input;
  std::string output;
  int k = 0;
  std::string telemetry_path;
  bool parallel = false;
  TuningOpts tuning;
};

int run_decompose(const DecomposeOpts& o, std::ostream& out,
                  std::ostream& err) {
  const Graph g = parse_graph_file(o.input);
  const RunConfig cfg = make_config(o.tuning, o.k, !o.telemetry_path.empty());
  const DriveResult r = o.parallel ? decide_parallel(g, o.k, cfg)
                                   : decide_treewidth(g, o.k, cfg);
  if (!o.telemetry_path.empty()) {
    std::ofstream tf = open_output(o.telemetry_path);
    write_rounds_jsonl(tf, r.rounds);
  }
  if (!r.success) {
    err << "tw > " << o.k << '\n';
    return kExitAboveK;
  }
  const TreeDecomposition& td =
      g.num_vertices() == 0 ? empty_graph_decomposition() : r.td;
  if (g.num_vertices() > 0) {
    const ValidationReport rep = validate_td(g, td);
    if (!rep.valid())
      throw std::logic_error("decompose: produced decomposition is invalid: " +
                             rep.violations.front());
    if (td.width() > 2 * o.k + 1)
      throw std::logic_error("decompose: produced width " +
                             std::to_string(td.width()) + " exceeds 2k+1");
  }
  std::ofstream of = open_output(o.output);
  write_td(of, td, g.num_vertices());
  out << "width " << td.width() << '\n';
  return kExitValid;
}

struct ValidateOpts {
  std::string graph_path;
  std::string td_path;
  int k = -1;  // -1: width check skipped
};

int run_validate(const ValidateOpts& o, std::ostream& out) {
  const Graph g = parse_graph_file(o.graph_path);
  const TreeDecomposition t = parse_td_file(o.td_path);
  const ValidationReport rep = validate_td(g, t);
  if (!rep.valid()) {
    out << rep.violations.front() << '\n';
    return kExitInvalid;
  }
  if (o.k >= 0 && t.width() > 2 * o.k + 1) {
    out << "width " << t.width() << " exceeds 2k+1 = " << 2 * o.k + 1 << '\n';
    return kExitInvalid;
  }
  out << "valid width " << t.width() << '\n';
  return kExitValid;
}

struct BenchOpts {
  std::string family = "partial-k-tree";
  int k = 0;
  std::vector<int> sizes;
  double keep = 1.0;
  std::string output;  // empty: stdout
  TuningOpts tuning;   // tuning.seed doubles as the generator seed
};

void run_bench_stream(const BenchOpts& o, std::ostream& os) {
  os << "n,width_out,rounds,dp_recomputes,phi_start,wall_ms\n";
  for (int n : o.sizes) {
    GeneratorSpec spec;
    spec.family = o.family;
    spec.n = n;
    spec.k = o.k;
    spec.edge_keep = o.keep;
    spec.seed = o.tuning.seed;
    const GeneratedInstance inst = generate(spec);
    const RunConfig cfg = make_config(o.tuning, o.k, true);
    const auto t0 = std::chrono::steady_clock::now();
    const DriveResult r = decide_treewidth(inst.graph, o.k, cfg);
    const auto wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
    const int width_out = r.success ? r.td.width() : -1;
    const double phi_start =
        r.rounds.empty() ? 0.0 : r.rounds.front().meter.phi;
    os << n << ',' << width_out << ',' << r.rounds.size() << ','
       << r.totals.dp_recomputes << ',' << format_double(phi_start) << ','
       << wall_ms << '\n';
  }
}

int run_bench(const BenchOpts& o, std::ostream& out) {
  if (o.output.empty()) {
    run_bench_stream(o, out);
  } else {
    std::ofstream of = open_output(o.output);
    run_bench_stream(o, of);
  }
  return kExitValid;
}

struct StatsOpts {
  std::string input;
  int k = 0;
  std::string histogram_path;
  TuningOpts tuning;
};

int run_stats(const StatsOpts& o, std::ostream& out, std::ostream& err) {
  const Graph g = parse_graph_file(o.input);
  const RunConfig cfg = make_config(o.tuning, o.k, true);
  const DriveResult r = decide_treewidth(g, o.k, cfg);
  write_rounds_jsonl(out, r.rounds);
  if (!r.success) {
    err << "tw > " << o.k << '\n';
    return kExitAboveK;
  }
  if (!o.histogram_path.empty()) {
    // Bag-size histogram of the final decomposition with the table entry
    // counts a run at that bag size would allocate per mode.
    std::map<std::size_t, std::int64_t> counts;
    for (int id : r.td.alive_ids()) ++counts[r.td.node(id).bag.size()];
    std::ofstream hf = open_output(o.histogram_path);
    hf << "bag_size,nodes,entries_mode3,entries_mode4\n";
    for (const auto& [size, cnt] : counts) {
      std::int64_t e3 = 1, e4 = 1;
      for (std::size_t i = 0; i < size; ++i) {
        e3 *= 3;
        e4 *= 4;
      }
      hf << size << ',' << cnt << ',' << e3 << ',' << e4 << '\n';
    }
  }
  return kExitValid;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{
      "tree decomposition toolkit: width 2k+1 decompositions with certified "
      "rejections"};
  app.name("twsplit");
  app.require_subcommand(1);

  DecomposeOpts dec;
  CLI::App* decompose = app.add_subcommand(
      "decompose", "decompose a graph to width <= 2k+1 or certify tw > k");
  decompose->add_option("-i,--input", dec.input, "graph file (.gr)")
      ->required();
  decompose->add_option("-o,--output", dec.output, "decomposition file (.td)")
      ->required();
  decompose->add_option("--k", dec.k, "width parameter")
      ->required()
      ->check(CLI::NonNegativeNumber);
  decompose->add_option("--telemetry", dec.telemetry_path,
                        "write per-round JSON lines to this file");
  decompose->add_flag("--parallel-components", dec.parallel,
                      "process connected components concurrently");
  add_tuning_options(decompose, dec.tuning);

  ValidateOpts val;
  CLI::App* validate = app.add_subcommand(
      "validate", "check a decomposition against its graph");
  validate->add_option("-i,--input", val.graph_path, "graph file (.gr)")
      ->required();
  validate->add_option("-t,--td", val.td_path, "decomposition file (.td)")
      ->required();
  validate->add_option("--k", val.k, "also require width <= 2k+1")
      ->check(CLI::NonNegativeNumber);

  std::string exact_input;
  CLI::App* exact = app.add_subcommand(
      "exact", "print the exact treewidth (n <= 20)");
  exact->add_option("-i,--input", exact_input, "graph file (.gr)")->required();

  BenchOpts ben;
  CLI::App* bench = app.add_subcommand(
      "bench", "generate instances and emit a CSV of run measurements");
  bench->add_option("--family", ben.family, "instance family")
      ->check(CLI::IsMember(
          {"partial-k-tree", "grid", "path", "cycle", "complete", "tree"}))
      ->capture_default_str();
  bench->add_option("--k", ben.k, "width parameter (also family parameter)")
      ->required()
      ->check(CLI::NonNegativeNumber);
  bench->add_option("--sizes", ben.sizes, "comma-separated instance sizes")
      ->required()
      ->delimiter(',');
  bench->add_option("--keep", ben.keep, "edge keep probability")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  bench->add_option("-o,--output", ben.output, "CSV file (default: stdout)");
  add_tuning_options(bench, ben.tuning);

  StatsOpts sta;
  CLI::App* stats = app.add_subcommand(
      "stats", "run the decision procedure and print per-round JSON lines");
  stats->add_option("-i,--input", sta.input, "graph file (.gr)")->required();
  stats->add_option("--k", sta.k, "width parameter")
      ->required()
      ->check(CLI::NonNegativeNumber);
  stats->add_option("--histogram", sta.histogram_path,
                    "write a bag-size histogram CSV on success");
  add_tuning_options(stats, sta.tuning);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitValid : kExitUsage;
  }

  try {
    if (app.got_subcommand(decompose)) return run_decompose(dec, out, err);
    if (app.got_subcommand(validate)) return run_validate(val, out);
    if (app.got_subcommand(exact)) {
      out << exact_treewidth(parse_graph_file(exact_input)) << '\n';
      return kExitValid;
    }
    if (app.got_subcommand(bench)) return run_bench(ben, out);
    if (app.got_subcommand(stats)) return run_stats(sta, out, err);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::logic_error& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  }
  return kExitUsage;
}

}  // namespace twsplit

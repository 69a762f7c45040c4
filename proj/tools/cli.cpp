#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "detuf/contention.hpp"
#include "detuf/edge_file.hpp"
#include "detuf/errors.hpp"
#include "detuf/forest.hpp"
#include "detuf/graph.hpp"
#include "detuf/kruskal.hpp"
#include "detuf/lowerbound.hpp"
#include "detuf/random_process.hpp"
#include "detuf/rng.hpp"
#include "detuf/stats.hpp"
#include "detuf/windowed.hpp"

namespace detuf::cli {
namespace {

// Rng labels, split from the master seed:
//   graph       random graph generation
//   priorities  linking-order tie breaks
//   shuffle     edge order (process: then split by trial index)
//   weights     random edge weights
//   trial       per-seed experiments (split by seed index)
//   minima, prefix  lower-bound experiments (split by N or W)

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Echo {
 public:
  explicit Echo(std::string command) : text_("detuf " + std::move(command)) {}
  Echo& add(const std::string& flag) {
    text_ += " " + flag;
    return *this;
  }
  template <class T>
  Echo& add(const std::string& flag, const T& value) {
    std::ostringstream s;
    if constexpr (std::is_floating_point_v<T>) {
      s << format_double(value);
    } else {
      s << value;
    }
    text_ += " " + flag + " " + s.str();
    return *this;
  }
  template <class T>
  Echo& add_list(const std::string& flag, const std::vector<T>& values) {
    std::string joined;
    for (std::size_t i = 0; i < values.size(); ++i) {
      joined += (i ? "," : "") + std::to_string(values[i]);
    }
    text_ += " " + flag + " " + joined;
    return *this;
  }
  const std::string& text() const noexcept { return text_; }

 private:
  std::string text_;
};

struct SeedOption {
  std::optional<std::uint64_t> value;

  void attach(CLI::App* app) {
    app->add_option("--seed", value, "master seed (default: $DETUF_SEED, else 1)");
  }
  std::uint64_t resolve() const {
    if (value) return *value;
    const char* env = std::getenv("DETUF_SEED");
    if (env == nullptr || *env == '\0') return 1;
    std::uint64_t seed = 0;
    const char* end = env + std::char_traits<char>::length(env);
    const auto [ptr, ec] = std::from_chars(env, end, seed);
    if (ec != std::errc() || ptr != end) throw UsageError("DETUF_SEED is not an unsigned integer");
    return seed;
  }
};

struct SourceOptions {
  std::string input;
  std::string type;
  std::uint64_t n = 0;
  std::optional<double> p;

  void attach(CLI::App* app) {
    app->add_option("--input", input, "edge-list file");
    app->add_option("--type", type, "generator: cycle, star, path, erdos-renyi, complete");
    app->add_option("--n", n, "vertex count for the generator");
    app->add_option("--p", p, "edge probability (erdos-renyi)");
  }

  void echo(Echo& e) const {
    if (!input.empty()) {
      e.add("--input", input);
      return;
    }
    e.add("--type", type).add("--n", n);
    if (p) e.add("--p", *p);
  }

  EdgeSequence load(const Rng& master) const {
    if (!input.empty()) {
      if (!type.empty()) throw UsageError("use either --input or --type, not both");
      return parse_edge_file(input);
    }
    if (type.empty()) throw UsageError("a graph source is required: --input or --type");
    return generate(spec(), master);
  }

  GeneratorSpec spec() const {
    const auto kind = parse_graph_kind(type);
    if (!kind) throw UsageError("unknown graph type '" + type + "'");
    if (n == 0) throw UsageError("--n is required");
    if (*kind == GraphKind::erdos_renyi && !p) throw UsageError("erdos-renyi needs --p");
    return {*kind, static_cast<std::size_t>(n), p.value_or(1.0)};
  }

  static EdgeSequence generate(const GeneratorSpec& spec, const Rng& master) {
    Rng rng = master.split("graph");
    return detuf::generate(spec, rng);
  }
};

struct StrategyOptions {
  std::string link = "size";
  std::string priorities = "random";

  void attach(CLI::App* app) {
    app->add_option("--link", link, "linking strategy: size, rank, priority")->capture_default_str();
    app->add_option("--priorities", priorities, "tie-break priorities: random, id")
        ->capture_default_str();
  }
  void echo(Echo& e) const { e.add("--link", link).add("--priorities", priorities); }

  LinkingStrategy make(std::size_t n, Rng rng) const {
    const auto kind = parse_link_kind(link);
    if (!kind) throw UsageError("unknown linking strategy '" + link + "'");
    if (priorities == "id") return LinkingStrategy::by_vertex_id(*kind, n);
    if (priorities != "random") throw UsageError("--priorities must be random or id");
    return LinkingStrategy::random(*kind, n, rng);
  }
  LinkingStrategy from_master(std::size_t n, const Rng& master) const {
    return make(n, master.split("priorities"));
  }
};

struct WindowOptions {
  std::uint64_t window = 64;
  bool adaptive = false;
  std::uint64_t min_window = 1;
  std::uint64_t max_window = 1 << 20;

  void attach(CLI::App* app) {
    app->add_option("--window", window, "window size S (initial size when adaptive)")
        ->capture_default_str();
    app->add_flag("--adaptive", adaptive, "double/halve the window between iterations");
    app->add_option("--min-window", min_window, "adaptive lower bound")->capture_default_str();
    app->add_option("--max-window", max_window, "adaptive upper bound")->capture_default_str();
  }
  void echo(Echo& e) const {
    e.add("--window", window);
    if (adaptive) e.add("--adaptive").add("--min-window", min_window).add("--max-window", max_window);
  }
  WindowPolicy policy() const {
    WindowPolicy p = adaptive ? WindowPolicy::adaptive(window, min_window, max_window)
                              : WindowPolicy::fixed(window);
    p.validate();
    return p;
  }
};

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      stream_ = &fallback;
      return;
    }
    file_.open(path, std::ios::binary);
    if (!file_) throw IoError("cannot open '" + path + "' for writing");
    stream_ = &file_;
  }
  std::ostream& get() { return *stream_; }
  void finish(const std::string& path) {
    stream_->flush();
    if (!*stream_) throw IoError("write to '" + (path.empty() ? std::string("stdout") : path) + "' failed");
  }

 private:
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

double log2_of(std::size_t x) { return std::log2(static_cast<double>(std::max<std::size_t>(x, 2))); }

// ---- gen -------------------------------------------------------------------

struct GenCommand {
  SourceOptions src;
  SeedOption seed;
  bool shuffled = false;
  bool weights = false;
  std::string out_path;

  void attach(CLI::App* app) {
    app->add_option("--type", src.type, "cycle, star, path, erdos-renyi, complete")->required();
    app->add_option("--n", src.n, "vertex count")->required();
    app->add_option("--p", src.p, "edge probability (erdos-renyi)");
    seed.attach(app);
    app->add_flag("--shuffle", shuffled, "uniformly shuffle the edge order");
    app->add_flag("--weights", weights, "attach distinct random weights in [0, 1)");
    app->add_option("--out", out_path, "output file (default: stdout)");
  }

  int run(std::ostream& out) {
    const Rng master(seed.resolve());
    Echo echo("gen");
    src.echo(echo);
    echo.add("--seed", master.seed());
    if (shuffled) echo.add("--shuffle");
    if (weights) echo.add("--weights");

    EdgeSequence seq = SourceOptions::generate(src.spec(), master);
    if (shuffled) {
      Rng rng = master.split("shuffle");
      seq = shuffle(std::move(seq), rng);
    }
    if (weights) {
      Rng rng = master.split("weights");
      seq = assign_random_weights(std::move(seq), rng);
    }
    Output o(out_path, out);
    write_edge_list(seq, o.get(), echo.text());
    o.finish(out_path);
    if (!out_path.empty()) out << seq.vertex_count << ' ' << seq.size() << '\n';
    return kSuccess;
  }
};

// ---- process ---------------------------------------------------------------

struct ProcessCommand {
  SourceOptions src;
  StrategyOptions strategy;
  SeedOption seed;
  std::uint64_t trials = 1;
  std::string definition = "strict";
  std::string out_path;

  void attach(CLI::App* app) {
    src.attach(app);
    strategy.attach(app);
    seed.attach(app);
    app->add_option("--trials", trials, "independent shuffles")->capture_default_str();
    app->add_option("--definition", definition, "collision definition: strict, simplified")
        ->capture_default_str();
    app->add_option("--out", out_path, "output CSV (default: stdout)");
  }

  int run(std::ostream& out) {
    const Rng master(seed.resolve());
    const auto def = parse_collision_definition(definition);
    if (!def) throw UsageError("unknown collision definition '" + definition + "'");
    if (trials == 0) throw UsageError("--trials must be positive");
    Echo echo("process");
    src.echo(echo);
    strategy.echo(echo);
    echo.add("--seed", master.seed()).add("--trials", trials).add("--definition", definition);

    const EdgeSequence seq = src.load(master);
    const LinkingStrategy order = strategy.from_master(seq.vertex_count, master);
    const Rng shuffles = master.split("shuffle");

    Output o(out_path, out);
    std::ostream& csv = o.get();
    csv << "# " << echo.text() << '\n' << kTraceCsvHeader << '\n';
    std::vector<double> sums;
    for (std::uint64_t k = 0; k < trials; ++k) {
      Rng rng = shuffles.split(k);
      const ProcessTrace trace = run_random_process(seq, order, rng);
      if (trials > 1) csv << "# trial " << k << '\n';
      write_trace_rows(trace, csv, *def);
      const double sum_p = *def == CollisionDefinition::strict ? trace.sum_p : trace.sum_p_simplified;
      sums.push_back(sum_p);
      csv << "# summary trial=" << k << " sum_p=" << format_double(sum_p)
          << " sum_p_first_half=" << format_double(trace.sum_p_first_half)
          << " phi_final=" << format_double(trace.phi_final) << " max_depth=" << trace.max_depth
          << '\n';
    }
    if (trials > 1) {
      csv << "# summary trials=" << trials << " mean_sum_p=" << format_double(mean(sums))
          << " stddev_sum_p=" << format_double(sample_stddev(sums)) << '\n';
    }
    o.finish(out_path);
    return kSuccess;
  }
};

// ---- parallel --------------------------------------------------------------

struct ParallelCommand {
  SourceOptions src;
  StrategyOptions strategy;
  WindowOptions window;
  SeedOption seed;
  std::string compaction = "full";
  int threads = 1;
  bool verify = false;
  bool no_detach = false;
  bool keep_order = false;
  std::string out_path;

  void attach(CLI::App* app) {
    src.attach(app);
    strategy.attach(app);
    window.attach(app);
    seed.attach(app);
    app->add_option("--compaction", compaction, "none, full, splitting")->capture_default_str();
    app->add_option("--threads", threads, "worker threads")->capture_default_str();
    app->add_flag("--verify-determinism", verify, "compare with the sequential run");
    app->add_flag("--no-detach", no_detach, "do not apply the stop edge on its own");
    app->add_flag("--keep-order", keep_order, "use the input order instead of a shuffle");
    app->add_option("--out", out_path, "output CSV (default: stdout)");
  }

  int run(std::ostream& out, std::ostream& err) {
    const Rng master(seed.resolve());
    const auto comp = parse_compaction(compaction);
    if (!comp) throw UsageError("unknown compaction '" + compaction + "'");
    const WindowPolicy policy = window.policy();
    Echo echo("parallel");
    src.echo(echo);
    strategy.echo(echo);
    window.echo(echo);
    echo.add("--compaction", compaction).add("--threads", threads).add("--seed", master.seed());
    if (verify) echo.add("--verify-determinism");
    if (no_detach) echo.add("--no-detach");
    if (keep_order) echo.add("--keep-order");

    EdgeSequence seq = src.load(master);
    if (!keep_order) {
      Rng rng = master.split("shuffle");
      seq = shuffle(std::move(seq), rng);
    }
    const LinkingStrategy order = strategy.from_master(seq.vertex_count, master);
    WindowedOptions options;
    options.detach_stop_edge = !no_detach;
    options.compaction = *comp;
    const WindowedRun run = run_windowed(seq, order, policy, threads, options);
    const RunStats& s = run.stats;

    Output o(out_path, out);
    std::ostream& csv = o.get();
    csv << "# " << echo.text() << '\n' << kRunCsvHeader << '\n';
    write_run_rows(s, csv);
    csv << "# summary iterations=" << s.iterations;
    if (!window.adaptive) {
      const std::size_t ideal = (seq.size() + window.window - 1) / window.window;
      csv << " extra_iterations=" << s.iterations - std::min(s.iterations, ideal);
    }
    csv << " failed_reservations=" << s.failed_reservation_events
        << " successes=" << s.success_set.size() << " finds=" << s.work.finds
        << " parent_reads=" << s.work.parent_reads << " link_writes=" << s.work.link_writes
        << " max_depth=" << run.forest.max_uncompressed_depth() << '\n';

    int code = kSuccess;
    if (verify) {
      const std::vector<std::size_t> expected = run_sequential(seq, order, *comp).success_set;
      if (expected == s.success_set) {
        csv << "# determinism ok successes=" << expected.size() << '\n';
      } else {
        const auto [a, b] = std::mismatch(expected.begin(), expected.end(), s.success_set.begin(),
                                          s.success_set.end());
        const std::size_t at = static_cast<std::size_t>(a - expected.begin());
        err << "determinism check failed at success #" << at << ": sequential "
            << (a == expected.end() ? std::string("<end>") : std::to_string(*a)) << ", parallel "
            << (b == s.success_set.end() ? std::string("<end>") : std::to_string(*b)) << " ("
            << expected.size() << " vs " << s.success_set.size() << " successes)\n";
        code = kVerification;
      }
    }
    o.finish(out_path);
    return code;
  }
};

// ---- contention ------------------------------------------------------------

struct ContentionCommand {
  SourceOptions src;
  StrategyOptions strategy;
  SeedOption seed;
  std::vector<std::size_t> threads{2};
  std::uint64_t trials = 100;
  std::string out_path;

  void attach(CLI::App* app) {
    src.attach(app);
    strategy.attach(app);
    seed.attach(app);
    app->add_option("--threads", threads, "simulated thread counts, comma separated")
        ->delimiter(',');
    app->add_option("--trials", trials, "seeds per thread count")->capture_default_str();
    app->add_option("--out", out_path, "output CSV (default: stdout)");
  }

  int run(std::ostream& out) {
    const Rng master(seed.resolve());
    if (trials == 0) throw UsageError("--trials must be positive");
    Echo echo("contention");
    src.echo(echo);
    strategy.echo(echo);
    echo.add_list("--threads", threads).add("--trials", trials).add("--seed", master.seed());

    const EdgeSequence seq = src.load(master);
    const LinkingStrategy order = strategy.from_master(seq.vertex_count, master);
    const auto rows = sweep_contention(seq, order, threads, trials, master.split("trial"));

    Output o(out_path, out);
    std::ostream& csv = o.get();
    csv << "# " << echo.text() << '\n' << kContentionCsvHeader << '\n';
    write_contention_rows(rows, csv);
    const double scale = log2_of(seq.vertex_count) * log2_of(seq.size());
    for (const ContentionSweepRow& row : rows) {
      csv << "# summary T=" << row.T << " mean_events=" << format_double(row.mean_events)
          << " per_T_squared=" << format_double(row.per_T_squared)
          << " c=" << format_double(row.per_T_squared / scale) << '\n';
    }
    o.finish(out_path);
    return kSuccess;
  }
};

// ---- lowerbound ------------------------------------------------------------

struct LowerboundCommand {
  SeedOption seed;
  StrategyOptions strategy;
  std::vector<std::size_t> n;
  std::vector<std::size_t> windows;
  std::uint64_t trials = 0;
  bool no_detach = false;
  int threads = 1;
  std::string out_path;
  std::string which;

  void attach_minima(CLI::App* app) {
    seed.attach(app);
    app->add_option("--n", n, "permutation lengths, comma separated")->delimiter(',')->required();
    app->add_option("--trials", trials, "permutations per length")->required();
    app->add_option("--out", out_path, "output CSV (default: stdout)");
  }
  void attach_prefix(CLI::App* app) {
    seed.attach(app);
    strategy.attach(app);
    app->add_option("--n", n, "cycle length")->delimiter(',')->required();
    app->add_option("--window", windows, "prefix sizes W, comma separated")->delimiter(',')->required();
    app->add_option("--trials", trials, "shuffles per W")->required();
    app->add_option("--out", out_path, "output CSV (default: stdout)");
  }
  void attach_iterations(CLI::App* app) {
    seed.attach(app);
    strategy.attach(app);
    app->add_option("--n", n, "cycle lengths, comma separated")->delimiter(',')->required();
    app->add_option("--trials", trials, "seeds per length")->required();
    app->add_flag("--no-detach", no_detach, "do not apply the stop edge on its own");
    app->add_option("--threads", threads, "worker threads")->capture_default_str();
    app->add_option("--out", out_path, "output CSV (default: stdout)");
  }

  int run(std::ostream& out) {
    const Rng master(seed.resolve());
    if (trials == 0) throw UsageError("--trials must be positive");
    Echo echo("lowerbound " + which);
    echo.add_list("--n", n);
    if (which != "minima") strategy.echo(echo);
    if (which == "prefix") echo.add_list("--window", windows);
    echo.add("--trials", trials);
    if (which == "iterations") {
      if (no_detach) echo.add("--no-detach");
      echo.add("--threads", threads);
    }
    echo.add("--seed", master.seed());

    Output o(out_path, out);
    std::ostream& csv = o.get();
    csv << "# " << echo.text() << '\n';
    if (which == "minima") {
      csv << kMinimaCsvHeader << '\n';
      for (std::size_t N : n) {
        Rng rng = master.split("minima").split(N);
        const MinimaStats s = minima_experiment(N, trials, rng);
        csv << s.N << ',' << s.trials << ',' << format_double(s.mean_M) << ','
            << format_double(s.tail_prob) << '\n';
      }
    } else if (which == "prefix") {
      csv << kPrefixCsvHeader << '\n';
      for (std::size_t N : n) {
        const LinkingStrategy order = strategy.make(N, master.split("priorities").split(N));
        for (std::size_t W : windows) {
          Rng rng = master.split("prefix").split(N).split(W);
          csv << N << ',' << W << ','
              << format_double(prefix_no_collision_prob(N, W, trials, order, rng)) << '\n';
        }
      }
    } else {
      csv << kIterationsCsvHeader << '\n';
      std::vector<double> xs, medians;
      for (std::size_t N : n) {
        const LinkingStrategy order = strategy.make(N, master.split("priorities").split(N));
        Rng rng = master.split("trial").split(N);
        const auto counts = maximal_window_iterations(N, trials, order, rng, !no_detach, threads);
        std::vector<double> values;
        for (std::size_t k = 0; k < counts.size(); ++k) {
          csv << N << ',' << k << ',' << counts[k] << '\n';
          values.push_back(static_cast<double>(counts[k]));
        }
        xs.push_back(static_cast<double>(N));
        medians.push_back(median(values));
        csv << "# summary N=" << N << " median=" << format_double(medians.back()) << '\n';
      }
      if (xs.size() >= 2) {
        csv << "# fit exponent=" << format_double(fit_power_law(xs, medians).exponent) << '\n';
      }
    }
    o.finish(out_path);
    return kSuccess;
  }
};

// ---- mst -------------------------------------------------------------------

struct MstCommand {
  SourceOptions src;
  StrategyOptions strategy;
  WindowOptions window;
  SeedOption seed;
  int threads = 1;
  bool verify = false;
  std::string out_path;

  void attach(CLI::App* app) {
    src.attach(app);
    strategy.attach(app);
    window.attach(app);
    seed.attach(app);
    app->add_option("--threads", threads, "worker threads")->capture_default_str();
    app->add_flag("--verify", verify, "compare with sequential Kruskal");
    app->add_option("--out", out_path, "MST edge-list file (default: stdout)");
  }

  int run(std::ostream& out, std::ostream& err) {
    const Rng master(seed.resolve());
    const WindowPolicy policy = window.policy();
    Echo echo("mst");
    src.echo(echo);
    strategy.echo(echo);
    window.echo(echo);
    echo.add("--threads", threads).add("--seed", master.seed());
    if (verify) echo.add("--verify");

    EdgeSequence seq = src.load(master);
    if (src.input.empty()) {
      Rng rng = master.split("weights");
      seq = assign_random_weights(std::move(seq), rng);
    }
    const LinkingStrategy order = strategy.from_master(seq.vertex_count, master);
    const MstResult mst = parallel_kruskal(seq, order, policy, threads);

    int code = kSuccess;
    std::string verdict;
    if (verify) {
      const MstResult expected = sequential_kruskal(seq, order);
      if (expected.mst_edges == mst.mst_edges && expected.total_weight == mst.total_weight) {
        verdict = "verify ok";
      } else {
        err << "MST mismatch: sequential " << expected.mst_edges.size() << " edges, weight "
            << format_double(expected.total_weight) << "; parallel " << mst.mst_edges.size()
            << " edges, weight " << format_double(mst.total_weight) << '\n';
        code = kVerification;
      }
    }

    EdgeSequence tree;
    tree.vertex_count = seq.vertex_count;
    for (std::size_t pos : mst.mst_edges) tree.edges.push_back(seq.edges[pos]);
    std::string header = echo.text() + "\nedges=" + std::to_string(tree.size()) +
                         " weight=" + format_double(mst.total_weight);
    if (!verdict.empty()) header += "\n" + verdict;
    Output o(out_path, out);
    write_edge_list(tree, o.get(), header);
    o.finish(out_path);
    if (!out_path.empty()) {
      out << "edges=" << tree.size() << " weight=" << format_double(mst.total_weight) << '\n';
    }
    return code;
  }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deterministic parallel union-find experiments", "detuf"};
  app.require_subcommand(1);

  GenCommand gen;
  ProcessCommand process;
  ParallelCommand parallel;
  ContentionCommand contention;
  MstCommand mst;
  LowerboundCommand minima, prefix, iterations;
  minima.which = "minima";
  prefix.which = "prefix";
  iterations.which = "iterations";

  gen.attach(app.add_subcommand("gen", "write a generated edge list"));
  process.attach(app.add_subcommand("process", "sequential random process trace"));
  parallel.attach(app.add_subcommand("parallel", "windowed parallel run"));
  contention.attach(app.add_subcommand("contention", "synchronous contention model"));
  mst.attach(app.add_subcommand("mst", "parallel Kruskal"));
  CLI::App* lb = app.add_subcommand("lowerbound", "lower-bound experiments");
  lb->require_subcommand(1);
  minima.attach_minima(lb->add_subcommand("minima", "circular local minima"));
  prefix.attach_prefix(lb->add_subcommand("prefix", "prefix no-collision probability"));
  iterations.attach_iterations(lb->add_subcommand("iterations", "maximal-window iterations"));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (app.got_subcommand("gen")) return gen.run(out);
    if (app.got_subcommand("process")) return process.run(out);
    if (app.got_subcommand("parallel")) return parallel.run(out, err);
    if (app.got_subcommand("contention")) return contention.run(out);
    if (app.got_subcommand("mst")) return mst.run(out, err);
    if (lb->got_subcommand("minima")) return minima.run(out);
    if (lb->got_subcommand("prefix")) return prefix.run(out);
    if (lb->got_subcommand("iterations")) return iterations.run(out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << '\n';
    return kIo;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const ContractError& e) {
    err << "internal error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace detuf::cli

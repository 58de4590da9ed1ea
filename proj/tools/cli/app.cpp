#include "app.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11/CLI11.hpp>
#include <nlohmann/json.hpp>

#include "config.hpp"
#include "output.hpp"
#include "schedsim/analytic.hpp"
#include "schedsim/coded.hpp"
#include "schedsim/dgd.hpp"
#include "schedsim/error.hpp"
#include "schedsim/monte_carlo.hpp"
#include "schedsim/oracle.hpp"
#include "schedsim/schedule.hpp"

namespace schedsim::cli {

namespace {

using nlohmann::json;

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::string out_path;
  std::string format;
  std::optional<int> precision;
  std::optional<unsigned> threads;
};

// Options shared by the experiment subcommands. Empty strings mean "not given".
struct Flags {
  std::optional<int> n;
  std::string r;
  std::string k;
  std::string schemes;
  std::string scenario;
  std::optional<std::uint64_t> scenario_seed;
  std::string schedule_file;
  std::string raw_path;
  std::string curve_path;
  std::string svg_path;
  std::string input_path;
  std::optional<int> grid_points;
  std::optional<double> abs_tol;
  std::optional<int> lattice_cells;
  std::optional<int> perm_seeds;
  std::optional<int> dim;
  std::optional<int> samples;
  std::optional<int> iterations;
  std::optional<double> eta;
  std::optional<std::uint64_t> data_seed;
  std::optional<int> reshuffle_every;
};

class Context {
 public:
  Context(const Globals& g, const Flags& f) : g_(g), f_(f) {
    if (!g.config_path.empty()) cfg_ = ConfigView(load_document(g.config_path));
  }

  const ConfigView& cfg() const { return cfg_; }
  const Flags& flags() const { return f_; }

  int n(std::optional<int> fallback = std::nullopt) const {
    if (f_.n) return *f_.n;
    if (auto v = cfg_.integer("n")) return *v;
    if (fallback) return *fallback;
    throw ConfigError("n is required (--n or config key n)");
  }
  std::vector<int> list(const std::string& flag, const std::string& key, std::vector<int> fallback) const {
    if (!flag.empty()) return parse_int_list(flag);
    if (auto v = cfg_.integer_list(key)) return *v;
    return fallback;
  }
  std::vector<int> loads(int n) const { return list(f_.r, "r", {n}); }
  std::vector<int> targets(int n) const { return list(f_.k, "k", {n}); }
  std::uint64_t seed() const { return g_.seed ? *g_.seed : cfg_.unsigned_integer("seed").value_or(1); }
  std::size_t reps() const {
    const std::size_t reps = g_.reps ? *g_.reps : cfg_.unsigned_integer("reps").value_or(10000);
    if (reps < 1) throw ConfigError("reps must be at least 1");
    return reps;
  }
  int precision() const {
    const int p = g_.precision ? *g_.precision : cfg_.integer("precision").value_or(3);
    if (p < 1 || p > 17) throw ConfigError("precision must lie in [1, 17]");
    return p;
  }
  std::string format(const std::string& fallback = "csv") const {
    if (!g_.format.empty()) return g_.format;
    return cfg_.string("format").value_or(fallback);
  }
  MonteCarloOptions mc() const {
    MonteCarloOptions o;
    o.reps = reps();
    o.seed = seed();
    o.threads = g_.threads ? *g_.threads : static_cast<unsigned>(cfg_.integer("threads").value_or(0));
    return o;
  }
  std::string path(const std::string& flag, const std::string& key) const {
    if (!flag.empty()) return flag;
    return cfg_.string(key).value_or("");
  }

  DelayModel model(int n) const {
    if (!f_.scenario.empty()) {
      Rng rng(f_.scenario_seed ? *f_.scenario_seed : cfg_.unsigned_integer("delay.preset_seed").value_or(1));
      return scenario_preset(normalize_scenario(f_.scenario), n, rng);
    }
    return delay_model_from_config(cfg_, n);
  }

  static std::string normalize_scenario(const std::string& s) {
    parse_scenario(s);  // throws on unknown names
    return s;
  }

  std::vector<SchemeSpec> schemes(const std::string& fallback) const {
    std::vector<std::string> names;
    if (!f_.schemes.empty())
      names = split_list(f_.schemes);
    else if (auto v = cfg_.string_list("schemes"))
      names = *v;
    else
      names = split_list(fallback);
    std::vector<SchemeSpec> out;
    for (const auto& name : names) {
      if (name == "custom" || name == "CUSTOM")
        out.push_back(SchemeSpec::with_matrix(read_matrix_file(path(f_.schedule_file, "schedule.file"))));
      else
        out.push_back(SchemeSpec::parse(name));
    }
    return out;
  }

  static TaskOrderMatrix read_matrix_file(const std::string& path) {
    if (path.empty()) throw ConfigError("the custom scheme needs --schedule FILE (or config key schedule.file)");
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open schedule file '" + path + "'");
    try {
      return read_schedule(in);
    } catch (const InvalidArgument& e) {
      throw ConfigError(path + ": " + e.what());
    }
  }

 private:
  const Globals& g_;
  const Flags& f_;
  ConfigView cfg_;
};

void check_format(const std::string& format, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (format == a) return;
  throw ConfigError("format '" + format + "' is not supported by this subcommand");
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write '" + path + "'");
  file << contents;
  if (!file) throw std::runtime_error("failed writing '" + path + "'");
}

// ---- subcommands ----------------------------------------------------------

int cmd_schedule(const Context& ctx, const std::string& scheme, std::ostream& out, std::ostream& err) {
  const auto format = ctx.format("text");
  check_format(format, {"text", "csv", "json"});
  TaskOrderMatrix matrix;
  int k = 0;
  const bool from_file = !ctx.flags().input_path.empty();
  if (from_file) {
    matrix = Context::read_matrix_file(ctx.flags().input_path);
    k = ctx.targets(matrix.workers()).front();
  } else {
    const int n = ctx.n();
    const auto name = scheme.empty() ? ctx.cfg().string("scheme").value_or("cs") : scheme;
    const auto spec = SchemeSpec::parse(name);
    int r = ctx.loads(n).front();
    if (spec.kind == SchemeKind::Cyclic) {
      matrix = cyclic_schedule(n, r);
    } else if (spec.kind == SchemeKind::Staircase) {
      matrix = staircase_schedule(n, r);
    } else if (spec.kind == SchemeKind::RandomAssignment) {
      Rng rng(ctx.seed());
      matrix = random_assignment_schedule(n, rng);
    } else {
      throw ConfigError("schedule prints cs, ss or ra matrices");
    }
    k = ctx.targets(n).front();
  }

  if (format == "json") {
    json rows = json::array();
    for (int i = 0; i < matrix.workers(); ++i) rows.push_back(matrix.row(i));
    out << json{{"n", matrix.workers()}, {"r", matrix.load()}, {"rows", rows}}.dump(2) << '\n';
  } else if (format == "csv") {
    for (int i = 0; i < matrix.workers(); ++i) {
      for (int j = 0; j < matrix.load(); ++j) out << (j ? "," : "") << matrix.at(i, j);
      out << '\n';
    }
  } else {
    write_schedule(out, matrix);
  }

  if (!from_file) return kOk;
  const auto report = validate(matrix, {matrix.workers(), matrix.load(), k});
  for (const auto& lint : report.lints) err << "lint: " << lint << '\n';
  for (const auto& e : report.errors) err << "error: " << e << '\n';
  if (report.ok()) return kOk;
  const bool only_target = report.errors.size() == 1 && report.errors.front().starts_with("only ");
  return only_target ? kInfeasible : kConfigError;
}

std::vector<SimulationReport> run_sweep(const Context& ctx, const std::vector<SchemeSpec>& schemes, bool keep) {
  const int n = ctx.n();
  const auto loads = ctx.loads(n);
  const auto targets = ctx.targets(n);
  const auto model = ctx.model(n);
  auto options = ctx.mc();
  options.keep_samples = keep;
  std::vector<SimulationReport> reports;
  for (int k : targets)
    for (auto& row : load_sweep(schemes, model, n, k, loads, options))
      for (auto& r : row) reports.push_back(std::move(r));
  return reports;
}

int cmd_compare(const Context& ctx, const std::string& fallback_schemes, std::ostream& out) {
  const auto format = ctx.format();
  check_format(format, {"csv", "json"});
  const auto schemes = ctx.schemes(fallback_schemes);
  const auto raw = ctx.path(ctx.flags().raw_path, "output.raw");
  const int n = ctx.n();
  if (!raw.empty() && (ctx.loads(n).size() != 1 || ctx.targets(n).size() != 1))
    throw ConfigError("--raw needs a single r and k");
  const auto reports = run_sweep(ctx, schemes, !raw.empty());
  if (format == "json")
    write_summary_json(out, reports);
  else
    write_summary_csv(out, reports, ctx.precision());
  if (!raw.empty()) {
    std::ostringstream buf;
    write_raw_csv(buf, reports);
    write_file(raw, buf.str());
  }
  return kOk;
}

int cmd_analyze(const Context& ctx, std::ostream& out) {
  const auto format = ctx.format();
  check_format(format, {"csv", "json"});
  const int n = ctx.n();
  const auto loads = ctx.loads(n);
  const auto targets = ctx.targets(n);
  const auto model = ctx.model(n);
  const auto schemes = ctx.schemes("cs");
  AnalyticOptions options;
  options.abs_tol = ctx.flags().abs_tol ? *ctx.flags().abs_tol : ctx.cfg().number("analytic.abs_tol").value_or(1e-7);
  options.lattice_cells =
      ctx.flags().lattice_cells ? *ctx.flags().lattice_cells : ctx.cfg().integer("analytic.lattice_cells").value_or(128);
  const int points =
      ctx.flags().grid_points ? *ctx.flags().grid_points : ctx.cfg().integer("analytic.grid_points").value_or(201);
  const auto curve_path = ctx.path(ctx.flags().curve_path, "output.curve");

  struct Row {
    std::string scheme;
    int r, k;
    double mean;
  };
  std::vector<Row> rows;
  std::ostringstream curve;
  int curves = 0;
  for (const auto& spec : schemes) {
    for (int r : loads) {
      TaskOrderMatrix matrix;
      if (spec.kind == SchemeKind::Cyclic)
        matrix = cyclic_schedule(n, r);
      else if (spec.kind == SchemeKind::Staircase)
        matrix = staircase_schedule(n, r);
      else if (spec.kind == SchemeKind::Custom)
        matrix = *spec.custom;
      else
        throw ConfigError("analyze supports cs, ss and custom schedules");
      for (int k : targets) {
        const CompletionConfig config{n, matrix.load(), k};
        spec.check(config);
        SurvivalEvaluator eval(matrix, model, k, options);
        rows.push_back({spec.label(), matrix.load(), k, eval.mean()});
        if (!curve_path.empty()) {
          if (++curves > 1) throw ConfigError("--curve needs a single scheme, r and k");
          const auto c = eval.curve(default_grid(matrix, model, points));
          curve << "t_seconds,survival\n";
          for (std::size_t i = 0; i < c.grid.size(); ++i) curve << full(c.grid[i]) << ',' << full(c.values[i]) << '\n';
        }
      }
    }
  }
  if (format == "json") {
    json arr = json::array();
    for (const auto& r : rows)
      arr.push_back({{"scheme", r.scheme}, {"n", n}, {"r", r.r}, {"k", r.k}, {"mean_ms", r.mean * 1e3}});
    out << arr.dump(2) << '\n';
  } else {
    out << "scheme,n,r,k,mean_ms\n";
    for (const auto& r : rows)
      out << r.scheme << ',' << n << ',' << r.r << ',' << r.k << ',' << significant(r.mean * 1e3, ctx.precision())
          << '\n';
  }
  if (!curve_path.empty()) write_file(curve_path, curve.str());
  return kOk;
}

int cmd_coded(const Context& ctx, std::ostream& out) {
  const auto format = ctx.format();
  check_format(format, {"csv", "json"});
  const int dim = ctx.flags().dim ? *ctx.flags().dim : ctx.cfg().integer("coded.dim").value_or(8);
  const int samples = ctx.flags().samples ? *ctx.flags().samples : ctx.cfg().integer("coded.samples").value_or(32);
  if (dim < 1 || samples < 4) throw ConfigError("coded demo needs dim >= 1 and samples >= 4");
  const auto report = run_coded_demo(dim, samples, ctx.seed());
  if (format == "json") {
    out << json::array({{{"code", "PC"}, {"subsets", report.pc_subsets},
                         {"max_relative_error", report.pc_max_relative_error}},
                        {{"code", "PCMM"}, {"subsets", report.pcmm_subsets},
                         {"max_relative_error", report.pcmm_max_relative_error}}})
               .dump(2)
        << '\n';
  } else {
    char buf[64];
    out << "code,subsets,max_relative_error\n";
    std::snprintf(buf, sizeof buf, "%.3e", report.pc_max_relative_error);
    out << "PC," << report.pc_subsets << ',' << buf << '\n';
    std::snprintf(buf, sizeof buf, "%.3e", report.pcmm_max_relative_error);
    out << "PCMM," << report.pcmm_subsets << ',' << buf << '\n';
  }
  return kOk;
}

int cmd_dgd(const Context& ctx, std::ostream& out) {
  const auto format = ctx.format();
  check_format(format, {"csv", "json"});
  const auto& f = ctx.flags();
  const auto& cfg = ctx.cfg();
  const int n = ctx.n(5);
  const int r = ctx.loads(n).front();
  const int k = ctx.targets(n).front();
  const int dim = f.dim ? *f.dim : cfg.integer("dgd.dim").value_or(10);
  const int samples = f.samples ? *f.samples : cfg.integer("dgd.samples").value_or(100);
  DgdOptions options;
  options.iterations = f.iterations ? *f.iterations : cfg.integer("dgd.iterations").value_or(200);
  options.eta = f.eta ? *f.eta : cfg.number("dgd.eta").value_or(0.01);
  options.seed = ctx.seed();
  if (f.reshuffle_every)
    options.reshuffle_every = *f.reshuffle_every;
  else if (auto v = cfg.integer("dgd.reshuffle_every"))
    options.reshuffle_every = *v;
  const std::uint64_t data_seed = f.data_seed ? *f.data_seed : cfg.unsigned_integer("dgd.data_seed").value_or(options.seed);
  if (dim < 1 || samples < 1) throw ConfigError("dgd needs positive dim and samples");
  const auto data = generate_dataset(samples, dim, n, data_seed);
  const auto model = ctx.model(n);

  std::vector<std::string> names =
      !f.schemes.empty() ? split_list(f.schemes) : cfg.string_list("schemes").value_or(std::vector<std::string>{"cs"});
  std::vector<DgdRun> runs;
  for (const auto& name : names) {
    if (name == "gd" || name == "GD") {
      runs.push_back(run_centralized(data, options));
      continue;
    }
    SchemeSpec spec = (name == "custom") ? SchemeSpec::with_matrix(Context::read_matrix_file(
                                                ctx.path(f.schedule_file, "schedule.file")))
                                          : SchemeSpec::parse(name);
    runs.push_back(run_dgd(spec, model, {n, r, k}, data, options));
  }

  const int digits = std::max(ctx.precision(), 6);
  if (format == "json") {
    json arr = json::array();
    for (const auto& run : runs)
      for (const auto& it : run.iterations)
        arr.push_back({{"iteration", it.iteration},
                       {"loss", it.loss},
                       {"iteration_completion_ms", it.completion_seconds * 1e3},
                       {"cumulative_ms", it.elapsed_seconds * 1e3},
                       {"scheme", run.scheme}});
    out << arr.dump(2) << '\n';
  } else {
    out << "iteration,loss,iteration_completion_ms,cumulative_ms,scheme\n";
    char buf[64];
    for (const auto& run : runs)
      for (const auto& it : run.iterations) {
        std::snprintf(buf, sizeof buf, "%.10g", it.loss);
        out << it.iteration << ',' << buf << ',' << significant(it.completion_seconds * 1e3, digits) << ','
            << significant(it.elapsed_seconds * 1e3, digits) << ',' << run.scheme << '\n';
      }
  }
  return kOk;
}

int cmd_figure3(const Context& ctx, std::ostream& out) {
  const auto format = ctx.format();
  check_format(format, {"csv", "json"});
  const auto& f = ctx.flags();
  const std::string scenario_name =
      !f.scenario.empty() ? f.scenario : ctx.cfg().string("delay.preset").value_or("1");
  const Scenario scenario = parse_scenario(scenario_name);
  const int n = ctx.n(16);
  const int k = ctx.targets(n).front();
  std::vector<int> loads = ctx.list(f.r, "r", {});
  if (loads.empty())
    for (int r = 2; r <= n; ++r) loads.push_back(r);
  const int perms = f.perm_seeds ? *f.perm_seeds
                                 : ctx.cfg().integer("figure3.perm_seeds").value_or(scenario == Scenario::Two ? 20 : 1);
  if (perms < 1) throw ConfigError("--perm-seeds must be at least 1");
  const std::uint64_t base =
      f.scenario_seed ? *f.scenario_seed : ctx.cfg().unsigned_integer("delay.preset_seed").value_or(1);
  std::vector<DelayModel> models;
  for (int p = 0; p < perms; ++p) {
    Rng rng(base + p);
    models.push_back(scenario_preset(scenario, n, rng));
  }
  const std::vector<SchemeSpec> schemes{SchemeSpec::cyclic(), SchemeSpec::staircase(), SchemeSpec::pc(),
                                        SchemeSpec::pcmm(),   SchemeSpec::lower_bound(), SchemeSpec::random_assignment()};
  const auto table = averaged_load_sweep(schemes, models, n, k, loads, ctx.mc());

  static const char* columns[] = {"cs_ms", "ss_ms", "pc_ms", "pcmm_ms", "lb_ms", "ra_ms"};
  if (format == "json") {
    json arr = json::array();
    for (std::size_t l = 0; l < loads.size(); ++l) {
      json row{{"r", loads[l]}};
      for (std::size_t s = 0; s < schemes.size(); ++s) row[columns[s]] = table[l][s].mean_seconds * 1e3;
      arr.push_back(row);
    }
    out << arr.dump(2) << '\n';
  } else {
    out << "r";
    for (const char* c : columns) out << ',' << c;
    out << '\n';
    for (std::size_t l = 0; l < loads.size(); ++l) {
      out << loads[l];
      for (std::size_t s = 0; s < schemes.size(); ++s) out << ',' << significant(table[l][s].mean_seconds * 1e3, ctx.precision());
      out << '\n';
    }
  }

  const auto svg = ctx.path(f.svg_path, "output.svg");
  if (!svg.empty()) {
    std::vector<double> x(loads.begin(), loads.end());
    std::vector<Series> series;
    for (std::size_t s = 0; s < schemes.size(); ++s) {
      Series line{schemes[s].label(), {}};
      for (std::size_t l = 0; l < loads.size(); ++l) line.y.push_back(table[l][s].mean_seconds * 1e3);
      series.push_back(std::move(line));
    }
    std::ostringstream buf;
    write_line_chart_svg(buf, "Average completion time, scenario " + std::string(scenario == Scenario::One ? "1" : "2"),
                         "computation load r", "mean completion (ms)", x, series);
    write_file(svg, buf.str());
  }
  return kOk;
}

int cmd_oracle(const Context& ctx, std::ostream& out) {
  const int n = ctx.n();
  const int r = ctx.loads(n).front();
  const int k = ctx.targets(n).front();
  const auto model = ctx.model(n);
  out << "scheme,n,r,k,outcomes,exact_mean_seconds\n";
  for (const auto& spec : ctx.schemes("cs")) {
    spec.check({n, r, k});
    double mean = 0.0;
    int load = spec.load({n, r, k});
    switch (spec.kind) {
      case SchemeKind::Cyclic: mean = exact_mean(cyclic_schedule(n, r), model, k); break;
      case SchemeKind::Staircase: mean = exact_mean(staircase_schedule(n, r), model, k); break;
      case SchemeKind::Custom: mean = exact_mean(*spec.custom, model, k); break;
      case SchemeKind::LowerBound: mean = exact_mean_lower_bound(model, k, r); break;
      case SchemeKind::PolynomialCoded: mean = exact_mean_pc(model, r); break;
      case SchemeKind::PolynomialCodedMultiMessage: mean = exact_mean_pcmm(model, r); break;
      case SchemeKind::RandomAssignment: throw ConfigError("the oracle does not enumerate random schedules");
    }
    out << spec.label() << ',' << n << ',' << load << ',' << spec.target({n, r, k}) << ','
        << enumerate_outcomes(model, load).size() << ',' << full(mean) << '\n';
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Schedule, simulate and analyze straggler-tolerant task assignments", "schedsim"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", "schedsim 0.1.0");

  Globals g;
  Flags f;
  std::string scheme;
  app.add_option("--config", g.config_path, "TOML or JSON experiment file");
  app.add_option("--seed", g.seed, "Base random seed");
  app.add_option("--reps", g.reps, "Monte Carlo replications");
  app.add_option("--out", g.out_path, "Write primary output here instead of stdout");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json", "text"}));
  app.add_option("--precision", g.precision, "Significant figures for millisecond columns (default 3)");
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores); results do not depend on it");

  auto experiment = [&](CLI::App* sub) {
    sub->add_option("--n", f.n, "Worker count");
    sub->add_option("--r", f.r, "Computation load: value, list 2,4,8 or range 2:16");
    sub->add_option("--k", f.k, "Computation target: value, list or range");
    sub->add_option("--scenario", f.scenario, "Delay preset: 1 or 2 (overrides the config delay block)");
    sub->add_option("--scenario-seed", f.scenario_seed, "Seed for the scenario 2 mean permutation");
    sub->add_option("--schedule", f.schedule_file, "Matrix file for the custom scheme");
  };

  auto* schedule = app.add_subcommand("schedule", "Print a task-ordering matrix, or validate one with --input");
  schedule->add_option("--scheme", scheme, "cs, ss or ra");
  schedule->add_option("--n", f.n, "Worker count");
  schedule->add_option("--r", f.r, "Computation load");
  schedule->add_option("--k", f.k, "Computation target used for validation");
  schedule->add_option("--input", f.input_path, "Matrix file to print and validate");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate for one scheme");
  experiment(simulate);
  simulate->add_option("--scheme", f.schemes, "cs, ss, ra, pc, pcmm, lb or custom")->required();
  simulate->add_option("--raw", f.raw_path, "Per-replication completion times (CSV)");

  auto* compare = app.add_subcommand("compare", "Several schemes on common delay traces");
  experiment(compare);
  compare->add_option("--schemes", f.schemes, "Comma-separated scheme list");
  compare->add_option("--raw", f.raw_path, "Per-replication completion times (CSV)");

  auto* analyze = app.add_subcommand("analyze", "Exact survival curve and mean for CS/SS/custom schedules");
  experiment(analyze);
  analyze->add_option("--schemes,--scheme", f.schemes, "cs, ss or custom");
  analyze->add_option("--grid-points", f.grid_points, "Survival curve points (default 201)");
  analyze->add_option("--abs-tol", f.abs_tol, "Integration tolerance in seconds (default 1e-7)");
  analyze->add_option("--lattice-cells", f.lattice_cells, "Cells per continuous computation law (default 128)");
  analyze->add_option("--curve", f.curve_path, "Write the survival curve CSV here");

  auto* lower = app.add_subcommand("lower-bound", "Monte Carlo estimate of the genie lower bound");
  experiment(lower);

  auto* coded = app.add_subcommand("coded-demo", "Encode/decode check of the four-worker polynomial codes");
  coded->add_option("--dim", f.dim, "Feature dimension (default 8)");
  coded->add_option("--samples", f.samples, "Sample count (default 32)");

  auto* dgd = app.add_subcommand("dgd", "Distributed gradient descent driven by a schedule");
  experiment(dgd);
  dgd->add_option("--schemes,--scheme", f.schemes, "Comma-separated schemes; gd adds the centralized reference");
  dgd->add_option("--iterations", f.iterations, "Iterations (default 200)");
  dgd->add_option("--eta", f.eta, "Learning rate (default 0.01)");
  dgd->add_option("--samples", f.samples, "Sample count N (default 100)");
  dgd->add_option("--dim", f.dim, "Feature dimension d (default 10)");
  dgd->add_option("--data-seed", f.data_seed, "Dataset seed (default: --seed)");
  dgd->add_option("--reshuffle-every", f.reshuffle_every, "Relabel partitions every this many iterations");

  auto* figure = app.add_subcommand("figure3", "Mean completion versus load for every scheme, wide CSV");
  experiment(figure);
  figure->add_option("--perm-seeds", f.perm_seeds, "Scenario 2 mean permutations to average (default 20)");
  figure->add_option("--svg", f.svg_path, "Also draw the curves as SVG");

  auto* oracle = app.add_subcommand("oracle", "Exact means by enumeration (finite-support delays)");
  oracle->group("");
  experiment(oracle);
  oracle->add_option("--schemes,--scheme", f.schemes, "cs, ss, custom, lb, pc or pcmm");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    Context ctx(g, f);
    std::ostringstream buffer;
    int code = kOk;
    if (*schedule)
      code = cmd_schedule(ctx, scheme, buffer, err);
    else if (*simulate)
      code = cmd_compare(ctx, "cs", buffer);
    else if (*compare)
      code = cmd_compare(ctx, "cs,ss,pc,pcmm,lb", buffer);
    else if (*analyze)
      code = cmd_analyze(ctx, buffer);
    else if (*lower) {
      Flags lb = f;
      lb.schemes = "lb";
      code = cmd_compare(Context(g, lb), "lb", buffer);
    } else if (*coded)
      code = cmd_coded(ctx, buffer);
    else if (*dgd)
      code = cmd_dgd(ctx, buffer);
    else if (*figure)
      code = cmd_figure3(ctx, buffer);
    else if (*oracle)
      code = cmd_oracle(ctx, buffer);
    if (g.out_path.empty())
      out << buffer.str();
    else
      write_file(g.out_path, buffer.str());
    return code;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const Infeasible& e) {
    err << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

}  // namespace schedsim::cli

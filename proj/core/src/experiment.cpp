#include "mctsvs/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>

#include "mctsvs/baselines.hpp"
#include "mctsvs/errors.hpp"
#include "mctsvs/mcts.hpp"
#include "mctsvs/parallel.hpp"
#include "mctsvs/vs_core.hpp"

namespace mctsvs {

namespace {

ProposeOptions propose_options(const RunConfig& c) {
  ProposeOptions p;
  p.fit.restarts = c.gp_restarts;
  p.fit.max_iterations = c.gp_max_iterations;
  p.candidates = c.candidates;
  return p;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

RunTrace run_seed(const RunConfig& c, const ObjectiveSpec& spec, std::uint64_t seed) {
  switch (c.method) {
    case Method::mcts_vs: {
      mcts::MctsVsConfig m;
      m.n_v = c.n_v;
      m.n_s = c.n_s;
      m.n_e = c.budget;
      m.n_bad = c.n_bad;
      m.n_split = c.n_split;
      m.k = c.k;
      m.cp = c.cp_for_problem();
      m.optimizer = c.optimizer;
      m.fill = c.fill;
      m.seed = seed;
      m.propose = propose_options(c);
      return mcts::mcts_vs_run(spec, m).trace;
    }
    case Method::dropout: {
      DropoutConfig d;
      d.subset_size = c.d;
      d.budget = c.budget;
      d.optimizer = c.optimizer;
      d.fill = c.fill;
      d.k = c.k;
      d.batch = c.n_s;
      d.initial_points = c.initial_points();
      d.seed = seed;
      d.propose = propose_options(c);
      return dropout_run(spec, d);
    }
    case Method::vanilla_bo: {
      VanillaBoConfig v;
      v.budget = c.budget;
      v.batch = c.n_s;
      v.initial_points = c.initial_points();
      v.seed = seed;
      v.propose = propose_options(c);
      return vanilla_bo_run(spec, v);
    }
    case Method::random_search:
      return random_search_run(spec, c.budget, seed);
  }
  throw ConfigError("unknown value for key 'method'");
}

ExperimentSummary summarize(const RunConfig& c, const std::vector<RunTrace>& traces) {
  if (traces.empty()) throw ArgumentError("nothing to summarize");
  ExperimentSummary s;
  s.problem = c.problem;
  s.method = traces.front().method;
  s.seeds = c.seeds;
  std::vector<double> recalls;
  std::vector<double> times;
  for (const auto& t : traces) {
    s.final_best.push_back(t.final_best());
    const double r = t.mean_recall();
    if (std::isfinite(r)) recalls.push_back(r);
    if (!t.records.empty()) {
      times.push_back(t.records.back().elapsed_ms / static_cast<double>(t.records.size()));
    }
  }
  s.mean_final_best = mean_of(s.final_best);
  if (s.final_best.size() > 1) {
    double ss = 0.0;
    for (double v : s.final_best) ss += (v - s.mean_final_best) * (v - s.mean_final_best);
    s.std_final_best = std::sqrt(ss / static_cast<double>(s.final_best.size() - 1));
  }
  s.mean_recall = recalls.empty() ? std::numeric_limits<double>::quiet_NaN() : mean_of(recalls);
  s.has_timing = c.record_timing && !times.empty();
  if (s.has_timing) s.mean_time_per_eval_ms = mean_of(times);
  return s;
}

std::string trace_file_name(const RunTrace& trace) {
  return trace.method + "_seed" + std::to_string(trace.seed) + ".csv";
}

ExperimentResult run_experiment(const RunConfig& config) {
  config.validate();
  const ObjectiveSpec spec = make_problem(config.problem);
  ExperimentResult result;
  result.traces.resize(config.seeds.size());
  parallel_for(config.seeds.size(), config.threads, [&](std::size_t i) {
    result.traces[i] = run_seed(config, spec, config.seeds[i]);
  });
  result.summary = summarize(config, result.traces);

  if (!config.output_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec) {
      throw IoError("cannot create directory '" + config.output_dir.string() + "': " + ec.message());
    }
    for (const auto& t : result.traces) {
      const auto path = config.output_dir / trace_file_name(t);
      write_trace_csv(t, path, config.record_timing);
      result.csv_files.push_back(path);
    }
    write_text(config.output_dir / (result.summary.method + "_summary.json"),
               summary_json(result.summary));
  }
  return result;
}

std::string summary_json(const ExperimentSummary& s) {
  nlohmann::json doc = {
      {"problem", s.problem},
      {"method", s.method},
      {"seeds", s.seeds},
      {"final_best", s.final_best},
      {"mean_final_best", s.mean_final_best},
      {"std_final_best", s.std_final_best},
      {"mean_recall", number_or_null(s.mean_recall)},
      {"mean_time_per_eval_ms",
       s.has_timing ? nlohmann::json(s.mean_time_per_eval_ms) : nlohmann::json(nullptr)},
  };
  return doc.dump(2) + "\n";
}

TimingReport compare_timing(const ExperimentResult& a, const ExperimentResult& b, std::int64_t at) {
  if (a.traces.empty() || b.traces.empty()) throw ArgumentError("timing needs completed runs");
  if (at < 2) throw ArgumentError("timing index must be at least 2");
  auto mean_at = [at](const ExperimentResult& r) {
    std::vector<double> v;
    for (const auto& t : r.traces) {
      if (static_cast<std::int64_t>(t.records.size()) < at) {
        throw ArgumentError("run '" + t.method + "' has fewer than " + std::to_string(at) +
                            " evaluations");
      }
      v.push_back(t.mean_time_per_eval_ms(at));
    }
    return mean_of(v);
  };
  TimingReport rep;
  rep.label_a = a.traces.front().method;
  rep.label_b = b.traces.front().method;
  rep.at = at;
  rep.ms_a = mean_at(a);
  rep.ms_b = mean_at(b);
  return rep;
}

std::string timing_json(const TimingReport& r) {
  nlohmann::json doc = {
      {"at", r.at},
      {"a", {{"method", r.label_a}, {"mean_ms_per_eval", r.ms_a}}},
      {"b", {{"method", r.label_b}, {"mean_ms_per_eval", r.ms_b}}},
      {"ratio_a_over_b", number_or_null(r.ratio())},
      {"faster", r.a_faster() ? r.label_a : r.label_b},
  };
  return doc.dump(2) + "\n";
}

RecallReport recall_from_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw IoError("'" + dir.string() + "' is not a directory");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  if (files.empty()) throw IoError("no trace CSVs in '" + dir.string() + "'");
  std::sort(files.begin(), files.end());

  RecallReport rep;
  std::vector<double> means;
  for (const auto& path : files) {
    RecallEntry e{path, 0.0, 0};
    double sum = 0.0;
    for (const auto& row : read_trace_csv(path)) {
      if (std::find(row.events.begin(), row.events.end(), event::init) != row.events.end()) continue;
      sum += row.recall;
      ++e.rows;
    }
    e.mean_recall = e.rows > 0 ? sum / static_cast<double>(e.rows)
                               : std::numeric_limits<double>::quiet_NaN();
    if (e.rows > 0) means.push_back(e.mean_recall);
    rep.files.push_back(e);
  }
  rep.mean_recall = means.empty() ? std::numeric_limits<double>::quiet_NaN() : mean_of(means);
  return rep;
}

std::string recall_json(const RecallReport& r) {
  nlohmann::json files = nlohmann::json::array();
  for (const auto& e : r.files) {
    files.push_back({{"file", e.file.filename().string()},
                     {"rows", e.rows},
                     {"mean_recall", number_or_null(e.mean_recall)}});
  }
  nlohmann::json doc = {{"files", files}, {"mean_recall", number_or_null(r.mean_recall)}};
  return doc.dump(2) + "\n";
}

std::vector<std::string> bench_suite_names() {
  return {"smoke", "hartmann", "levy", "fill_in", "optimizer", "mixed"};
}

std::vector<RunConfig> bench_suite(const std::string& name, const std::filesystem::path& root) {
  const std::filesystem::path out = root / name;
  auto make = [&](const std::string& problem, Method method, OptimizerKind opt,
                  std::int64_t budget, std::vector<std::uint64_t> seeds) {
    RunConfig c;
    c.problem = problem;
    c.method = method;
    c.optimizer = opt;
    c.budget = budget;
    c.seeds = std::move(seeds);
    c.output_dir = out / problem;
    return c;
  };
  const std::vector<std::uint64_t> five{1, 2, 3, 4, 5};
  std::vector<RunConfig> suite;
  if (name == "smoke") {
    for (Method m : {Method::mcts_vs, Method::dropout, Method::vanilla_bo, Method::random_search}) {
      suite.push_back(make("hartmann6_100", m, OptimizerKind::gp_bo, 60, {1}));
    }
  } else if (name == "hartmann" || name == "levy") {
    const std::vector<std::string> problems = name == "hartmann"
                                                  ? std::vector<std::string>{"hartmann6_300", "hartmann6_500"}
                                                  : std::vector<std::string>{"levy10_100", "levy10_300"};
    for (const auto& p : problems) {
      for (Method m : {Method::mcts_vs, Method::dropout, Method::vanilla_bo, Method::random_search}) {
        suite.push_back(make(p, m, OptimizerKind::gp_bo, 600, five));
      }
    }
  } else if (name == "fill_in") {
    for (FillStrategy f :
         {FillStrategy::best_k, FillStrategy::average_best_k, FillStrategy::random_uniform}) {
      RunConfig c = make("hartmann6_300", Method::mcts_vs, OptimizerKind::gp_bo, 600, five);
      c.fill = f;
      c.output_dir = out / to_string(f);
      suite.push_back(c);
    }
  } else if (name == "optimizer") {
    suite.push_back(make("hartmann6_300", Method::mcts_vs, OptimizerKind::gp_bo, 600, five));
    suite.push_back(make("hartmann6_300", Method::mcts_vs, OptimizerKind::random_search, 600, five));
    suite.push_back(make("hartmann6_300", Method::dropout, OptimizerKind::random_search, 600, five));
    suite.push_back(make("hartmann6_300", Method::random_search, OptimizerKind::gp_bo, 600, five));
  } else if (name == "mixed") {
    for (const char* p : {"hartmann6_5_500", "hartmann6_10_500", "hartmann6_5_500_v"}) {
      suite.push_back(make(p, Method::mcts_vs, OptimizerKind::gp_bo, 600, five));
    }
  } else {
    throw ConfigError("unknown bench suite '" + name + "'");
  }
  return suite;
}

}  // namespace mctsvs

#include "turnover/cli.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "turnover/continuous.hpp"
#include "turnover/equilibria.hpp"
#include "turnover/exclusion.hpp"
#include "turnover/io.hpp"
#include "turnover/periodic.hpp"
#include "turnover/simulate.hpp"

namespace turnover {

namespace {

struct ModelFlags {
  std::string config_path;
  std::optional<std::vector<double>> b;
  std::optional<std::vector<double>> d;
  std::optional<std::string> kernel;
  std::optional<double> K;
  std::optional<double> c;
  std::optional<std::vector<double>> weights;
};

struct OutputFlags {
  std::string out;   // primary artifact; empty means the `out` stream
  std::string json;  // secondary JSON artifact, optional
};

/// Document fields first, then command-line overrides.
RunConfig resolve_config(const ModelFlags& flags, bool force_continuous) {
  if (flags.config_path.empty()) throw Error(ErrorKind::InvalidArgument, "--config is required");
  auto config = load_config_file(flags.config_path);
  auto& m = config.model;
  if (flags.b) m.strategies.b = *flags.b;
  if (flags.d) m.strategies.d = *flags.d;
  if (flags.b || flags.d) m.k = m.strategies.b.size();
  if (flags.kernel) m.kernel.family = kernel_family_from_string(*flags.kernel);
  if (flags.K) m.kernel.K = *flags.K;
  if (flags.c) m.kernel.c = *flags.c;
  if (flags.weights) m.kernel.weights = *flags.weights;
  if (force_continuous) config.continuous = true;
  return validated(std::move(config));
}

std::string fmt17(double v) { return fmt::format("{:.17g}", v); }

StateVector initial_state(const std::vector<double>& given, std::size_t k) {
  if (given.empty()) return StateVector(k, 0.1);
  if (given.size() != k) throw Error(ErrorKind::DimensionMismatch, "--x0 must have k entries");
  return given;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  f << content;
}

/// Applies outputs only after all computation succeeded.
void emit(const OutputFlags& flags, std::ostream& out, const std::string& primary,
          const std::optional<std::string>& secondary) {
  if (flags.out.empty()) {
    out << primary;
  } else {
    write_file(flags.out, primary);
  }
  if (secondary && !flags.json.empty()) write_file(flags.json, *secondary);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// Sweep ---------------------------------------------------------------------

struct SweepAxis {
  std::string name;
  double from = 0.0;
  double to = 0.0;
  std::size_t n = 1;

  double value(std::size_t i) const {
    return n == 1 ? from : from + (to - from) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
};

void apply_parameter(CompetitionModel& m, const std::string& name, double value) {
  auto indexed = [&](std::vector<double>& vec, char prefix) {
    if (name.size() < 2 || name[0] != prefix) return false;
    std::size_t idx = 0;
    try {
      idx = std::stoul(name.substr(1));
    } catch (const std::exception&) {
      return false;
    }
    if (idx == 0 || idx > vec.size()) {
      throw Error(ErrorKind::IndexOutOfRange, "sweep parameter " + name + " out of range");
    }
    vec[idx - 1] = value;
    return true;
  };
  if (name == "K") {
    m.kernel.K = value;
  } else if (name == "c") {
    m.kernel.c = value;
  } else if (indexed(m.strategies.b, 'b') || indexed(m.strategies.d, 'd')) {
  } else if (name.size() >= 2 && name[0] == 'w') {
    if (m.kernel.weights.empty()) m.kernel.weights.assign(m.k, 1.0);
    if (!indexed(m.kernel.weights, 'w')) {
      throw Error(ErrorKind::InvalidArgument, "unknown sweep parameter " + name);
    }
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown sweep parameter " + name);
  }
}

std::string sweep_row(const RunConfig& base, const std::vector<SweepAxis>& axes,
                      const std::vector<double>& values, std::size_t index) {
  std::string row = std::to_string(index);
  for (double v : values) row += "," + fmt17(v);
  try {
    CompetitionModel m = base.model;
    for (std::size_t a = 0; a < axes.size(); ++a) apply_parameter(m, axes[a].name, values[a]);
    m = validate_model(std::move(m), base.continuous ? RateMode::Continuous : RateMode::Discrete);
    const auto report = exclusion_predicate(m);
    bool all_excluded = true;
    for (const auto& p : report.pairs) all_excluded = all_excluded && p.excluded;
    const auto& first = report.pairs.front().coeff;
    std::string orbit = "", theta = "", c1 = "", c2 = "";
    if (m.k == 2) {
      const auto p2 = construct_period2(m);
      orbit = p2.orbit ? "1" : "0";
      if (p2.theta) theta = fmt17(*p2.theta);
      if (p2.orbit) {
        c1 = fmt17(p2.orbit->c1);
        c2 = fmt17(p2.orbit->c2);
      }
    }
    const auto cls = classify(m, report.dominant + 1);
    row += fmt::format(",{},{},{},{},{},{},{},{},", all_excluded ? 1 : 0, fmt17(first.alpha),
                       fmt17(first.beta), orbit, theta, c1, c2, to_string(cls.stability));
  } catch (const Error& e) {
    std::string msg = e.what();
    for (char& ch : msg) {
      if (ch == ',' || ch == '\n') ch = ';';
    }
    row += ",,,,,,,,," + msg;
  }
  return row + "\n";
}

std::string run_sweep(const RunConfig& base, const std::vector<SweepAxis>& axes,
                      unsigned threads) {
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.n;
  std::vector<std::string> rows(total);
  auto values_at = [&](std::size_t idx) {
    std::vector<double> v(axes.size());
    for (std::size_t a = axes.size(); a-- > 0;) {
      v[a] = axes[a].value(idx % axes[a].n);
      idx /= axes[a].n;
    }
    return v;
  };
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) rows[i] = sweep_row(base, axes, values_at(i), i);
  };
  const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(total)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::string csv = "index";
  for (const auto& a : axes) csv += "," + a.name;
  csv += ",excluded,alpha,beta,orbit,theta,c1,c2,dominant_class,error\n";
  for (const auto& r : rows) csv += r;
  return csv;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete-time competition model laboratory", "turnover"};
  app.require_subcommand(1);

  ModelFlags mf;
  OutputFlags of;
  auto add_model_flags = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", mf.config_path, "Model config JSON document");
    if (config_required) opt->required();
    sub->add_option("--b", mf.b, "Override birth rates")->delimiter(',');
    sub->add_option("--d", mf.d, "Override death rates")->delimiter(',');
    sub->add_option("--kernel", mf.kernel, "Override kernel type");
    sub->add_option("--K", mf.K, "Override carrying scale K");
    sub->add_option("--c", mf.c, "Override kernel scale c");
    sub->add_option("--weights", mf.weights, "Override kernel weights")->delimiter(',');
    sub->add_option("--out", of.out, "Primary output file (default: stdout)");
  };

  std::size_t steps = 1000;
  std::vector<double> x0;
  double tol = kDefaultExtinctionTol;
  auto* simulate = app.add_subcommand("simulate", "Trajectory CSV and extinction verdicts");
  add_model_flags(simulate, true);
  simulate->add_option("--steps", steps, "Number of map iterations");
  simulate->add_option("--x0", x0, "Initial state")->delimiter(',');
  simulate->add_option("--tol", tol, "Extinction tolerance");
  simulate->add_option("--json", of.json, "Extinction JSON output file");

  auto* exclusion = app.add_subcommand("exclusion", "Pairwise exclusion report");
  add_model_flags(exclusion, true);

  bool search = false;
  std::size_t grid = 30;
  std::uint64_t seed = 0;
  auto* periodic = app.add_subcommand("periodic", "Closed-form period-two orbit");
  add_model_flags(periodic, true);
  periodic->add_flag("--search", search, "Also run the Newton search oracle");
  periodic->add_option("--grid", grid, "Search grid resolution");
  periodic->add_option("--seed", seed, "Search jitter seed");

  auto* equilibria = app.add_subcommand("equilibria", "Fixed points and their stability");
  add_model_flags(equilibria, true);

  double t_max = 100.0;
  double dt = 0.01;
  auto* continuous = app.add_subcommand("continuous", "RK4 trajectory of the ODE counterpart");
  add_model_flags(continuous, true);
  continuous->add_option("--t-max", t_max, "Integration horizon");
  continuous->add_option("--dt", dt, "RK4 step");
  continuous->add_option("--x0", x0, "Initial state")->delimiter(',');
  continuous->add_option("--json", of.json, "Slope-check JSON output file");

  double h = 0.5;
  auto* consistency = app.add_subcommand("consistency", "Euler scheme vs ODE comparison");
  add_model_flags(consistency, true);
  consistency->set_help_flag("--help", "Print this help message and exit");
  consistency->add_option("--h", h, "Euler step");
  consistency->add_option("--t-max", t_max, "Horizon in continuous time");
  consistency->add_option("--dt", dt, "RK4 step");
  consistency->add_option("--x0", x0, "Initial state")->delimiter(',');
  consistency->add_option("--tol", tol, "Extinction tolerance");

  std::optional<double> alpha;
  std::optional<double> beta;
  double c1 = 1.0;
  double c2 = 1.0;
  std::size_t length = 20;
  auto* seqlab = app.add_subcommand("seqlab", "Period-two counterexample sequences");
  add_model_flags(seqlab, false);
  seqlab->add_option("--alpha", alpha, "alpha (overrides the config pair)");
  seqlab->add_option("--beta", beta, "beta (overrides the config pair)");
  seqlab->add_option("--c1", c1, "Scale of u");
  seqlab->add_option("--c2", c2, "Scale of v");
  seqlab->add_option("--n", length, "Sequence length");
  seqlab->add_option("--json", of.json, "Residual JSON output file");

  std::vector<SweepAxis> axes(2);
  std::size_t n1 = 11;
  std::optional<std::size_t> n2;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  auto* sweep = app.add_subcommand("sweep", "Verdict grid over one or two parameters");
  add_model_flags(sweep, true);
  sweep->add_option("--param", axes[0].name, "Parameter name (b1, d2, K, c, w1, ...)")->required();
  sweep->add_option("--from", axes[0].from)->required();
  sweep->add_option("--to", axes[0].to)->required();
  sweep->add_option("--n", n1, "Grid points");
  auto* second = sweep->add_option("--param2", axes[1].name, "Second parameter");
  sweep->add_option("--from2", axes[1].from)->needs(second);
  sweep->add_option("--to2", axes[1].to)->needs(second);
  sweep->add_option("--n2", n2, "Grid points of the second parameter")->needs(second);
  sweep->add_option("--threads", threads, "Worker threads");

  std::vector<const char*> argv{"turnover"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInvalidInput;
  }

  try {
    if (simulate->parsed()) {
      const auto config = resolve_config(mf, false);
      const auto traj = trajectory(config.model, initial_state(x0, config.model.k), steps);
      std::ostringstream csv;
      write_trajectory_csv(csv, traj);
      std::vector<bool> ext = extinction_diagnostics(traj, tol);
      Json extinct = Json::array();
      for (bool e : ext) extinct.push_back(e);
      Json report{{"steps", steps},
                  {"tol", tol},
                  {"extinct", extinct},
                  {"final", traj.states.back()},
                  {"config", to_json(config)}};
      emit(of, out, csv.str(), dump(report));
    } else if (exclusion->parsed()) {
      const auto config = resolve_config(mf, false);
      auto report = to_json(exclusion_predicate(config.model));
      report["config"] = to_json(config);
      emit(of, out, dump(report), std::nullopt);
    } else if (periodic->parsed()) {
      const auto config = resolve_config(mf, false);
      auto report = to_json(construct_period2(config.model));
      report["feasibility"] = to_json(asymptotic_feasibility(config.model));
      if (search) {
        Json found = Json::array();
        for (const auto& pair : search_period2(config.model, grid, seed)) found.push_back(to_json(pair));
        report["search"] = {{"grid", grid}, {"seed", seed}, {"orbits", found}};
      }
      report["config"] = to_json(config);
      emit(of, out, dump(report), std::nullopt);
    } else if (equilibria->parsed()) {
      const auto config = resolve_config(mf, false);
      Json points = Json::array();
      for (std::size_t r = 0; r <= config.model.k; ++r) {
        points.push_back(to_json(analyze_fixed_point(config.model, r)));
      }
      emit(of, out, dump(Json{{"fixed_points", points}, {"config", to_json(config)}}), std::nullopt);
    } else if (continuous->parsed()) {
      const auto config = resolve_config(mf, true);
      const auto& m = config.model;
      const auto traj = integrate(m, initial_state(x0, m.k), t_max, dt);
      std::ostringstream csv;
      write_continuous_csv(csv, traj);
      const auto order = turnover_order(m.strategies);
      Json slopes = Json::array();
      for (std::size_t n = 1; n < order.size(); ++n) {
        Json entry{{"i", order[n] + 1},
                   {"slope", log_ratio_slope(m.strategies.b, m.strategies.d, order[0], order[n])}};
        try {
          entry["max_deviation"] =
              monotone_ratio_check(traj, m.strategies.b, m.strategies.d, order[n], order[0]);
        } catch (const Error& e) {
          entry["max_deviation"] = nullptr;
          entry["error"] = e.what();
        }
        slopes.push_back(entry);
      }
      Json report{{"dominant", order[0] + 1}, {"dt", dt}, {"t_max", t_max}, {"slopes", slopes},
                  {"config", to_json(config)}};
      emit(of, out, csv.str(), dump(report));
    } else if (consistency->parsed()) {
      const auto config = resolve_config(mf, true);
      const auto& m = config.model;
      CompareOptions options;
      options.x0 = initial_state(x0, m.k);
      options.dt = dt;
      options.extinction_tol = tol;
      auto report = to_json(
          compare_discrete_continuous(m.strategies.b, m.strategies.d, m.kernel, h, t_max, options));
      report["config"] = to_json(config);
      emit(of, out, dump(report), std::nullopt);
    } else if (seqlab->parsed()) {
      std::optional<RunConfig> config;
      PairCoefficients coeff;
      if (!mf.config_path.empty()) {
        config = resolve_config(mf, false);
        const auto report = exclusion_predicate(config->model);
        coeff = report.pairs.front().coeff;
      }
      if (alpha) coeff.alpha = *alpha;
      if (beta) coeff.beta = *beta;
      if (!config && (!alpha || !beta)) {
        throw Error(ErrorKind::InvalidArgument, "seqlab needs --config or both --alpha and --beta");
      }
      coeff.gamma = coeff.beta + 1.0 - coeff.alpha;
      const auto seq = counterexample_sequences(coeff, c1, c2, length);
      std::string csv = "n,u,v\n";
      for (std::size_t j = 0; j < seq.u.size(); ++j) {
        csv += fmt::format("{},{},{}\n", j + 1, fmt17(seq.u[j]), fmt17(seq.v[j]));
      }
      Json report{{"alpha", coeff.alpha},
                   {"beta", coeff.beta},
                   {"gamma", coeff.gamma},
                   {"theta", seq.theta},
                   {"residual", length >= 2 ? Json(recurrence_residual(seq.u, seq.v, coeff.alpha,
                                                                      coeff.beta))
                                            : Json(nullptr)}};
      report["config"] = config ? to_json(*config) : Json(nullptr);
      emit(of, out, csv, dump(report));
    } else if (sweep->parsed()) {
      const auto config = resolve_config(mf, false);
      axes[0].n = n1;
      if (axes[1].name.empty()) {
        axes.pop_back();
      } else {
        axes[1].n = n2.value_or(n1);
      }
      for (const auto& a : axes) {
        if (a.n == 0) throw Error(ErrorKind::InvalidArgument, "grid sizes must be positive");
      }
      emit(of, out, run_sweep(config, axes, threads), std::nullopt);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.is_numerical() ? kExitNumerical : kExitInvalidInput;
  }
  return kExitOk;
}

}  // namespace turnover

// Command-line front end: wave, evolve, front, selfsim, bbm, compare, reproduce.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "cascade/bbm.hpp"
#include "cascade/cascade_solver.hpp"
#include "cascade/error.hpp"
#include "cascade/front_analysis.hpp"
#include "cascade/io.hpp"
#include "cascade/kpp_core.hpp"
#include "cascade/recipes.hpp"
#include "cascade/self_similar.hpp"
#include "cascade/traveling_wave.hpp"

namespace fs = std::filesystem;
using namespace cascade;

namespace {

enum ExitCode { kOk = 0, kCriterionFailed = 1, kSchema = 2, kNumerical = 3, kIo = 4 };

struct Globals {
  std::uint64_t seed = 20240611;
  std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  std::string out;
  std::string config;
};

/// Binds each parameter to both a command-line flag and a key of the JSON config file.
/// Flags given explicitly win over the file; unknown file keys are rejected.
class Params {
 public:
  explicit Params(CLI::App* app) : app_(app) {}

  template <class T>
  void add(const std::string& key, T& ref, const std::string& help, std::string flag = "") {
    if (flag.empty()) {
      flag = key;
      for (char& ch : flag)
        if (ch == '_') ch = '-';
    }
    CLI::Option* opt = app_->add_option("--" + flag, ref, help)->capture_default_str();
    bind(key, ref, opt);
  }

  /// Registers a value owned by a parent command (the global flags).
  template <class T>
  void bind(const std::string& key, T& ref, CLI::Option* opt) {
    entries_.push_back({key, opt, [&ref](const Json& j) { ref = j.get<T>(); }, [&ref] { return Json(ref); }});
  }

  void resolve(const std::string& config_path) {
    if (config_path.empty()) return;
    const Json doc = read_json(config_path);
    require(doc.is_object(), ErrorKind::configuration, "config file must hold a JSON object");
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      Entry* e = find(it.key());
      require(e != nullptr, ErrorKind::configuration, "unknown config key '" + it.key() + "'");
      if (e->option->count() > 0) continue;
      try {
        e->set(it.value());
      } catch (const nlohmann::json::exception&) {
        throw Error(ErrorKind::configuration, "config key '" + it.key() + "' has the wrong type");
      }
    }
  }

  Json resolved() const {
    Json out = Json::object();
    for (const auto& e : entries_) out[e.key] = e.get();
    return out;
  }

 private:
  struct Entry {
    std::string key;
    CLI::Option* option;
    std::function<void(const Json&)> set;
    std::function<Json()> get;
  };

  Entry* find(const std::string& key) {
    for (auto& e : entries_)
      if (e.key == key) return &e;
    return nullptr;
  }

  CLI::App* app_;
  std::vector<Entry> entries_;
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!item.empty()) out.push_back(parse_double(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

/// "a,b,c" or "begin:end:step".
std::vector<double> parse_times(const std::string& text) {
  if (text.find(':') == std::string::npos) return parse_list(text);
  std::vector<double> parts;
  std::size_t start = 0;
  for (;;) {
    const auto colon = text.find(':', start);
    parts.push_back(parse_double(text.substr(start, colon == std::string::npos ? std::string::npos : colon - start)));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  require(parts.size() == 3 && parts[2] > 0.0 && parts[1] >= parts[0], ErrorKind::configuration,
          "time range must read begin:end:step");
  std::vector<double> out;
  const auto count = static_cast<std::size_t>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
  for (std::size_t j = 0; j <= count; ++j) out.push_back(parts[0] + static_cast<double>(j) * parts[2]);
  return out;
}

TimeWindow parse_window(const std::string& text) {
  const auto colon = text.find(':');
  require(colon != std::string::npos, ErrorKind::configuration, "window must read begin:end");
  return {parse_double(text.substr(0, colon)), parse_double(text.substr(colon + 1))};
}

/// "quadratic", "polynomial:c0,c1,..." or "mckean:beta,p1,p2,...".
KppNonlinearity parse_nonlinearity(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  std::vector<double> coeffs;
  if (colon != std::string::npos) coeffs = parse_list(text.substr(colon + 1));
  try {
    return KppNonlinearity::from_spec(kind, coeffs);
  } catch (const Error& e) {
    throw Error(ErrorKind::configuration, e.what());
  }
}

std::string output_path(const Globals& g, const std::string& fallback) { return g.out.empty() ? fallback : g.out; }

// ---------------------------------------------------------------------------

struct WaveArgs {
  double c = 2.0;
  std::string f = "quadratic";
  double half_width = 40.0;
  double tol = 1e-10;
  double dx = 0.01;
};

int run_wave(const WaveArgs& a, const Json& config, const Globals& g) {
  const auto f = parse_nonlinearity(a.f);
  const auto profile = solve_profile(f, a.c, a.half_width, a.tol, {a.dx});
  const auto disp = dispersion(f, a.c);
  const auto fit = tail_fit(profile, tail_window(profile), disp.cstar);
  CsvTable t;
  t.comments = config_comments(config);
  t.comments.push_back("ode_residual = " + format_double(profile_residual(profile, f)));
  t.comments.push_back("lambda_est = " + format_double(fit.lambda_est));
  t.comments.push_back("lambda_c = " + format_double(*disp.lambda_c));
  t.columns = {"x", "U"};
  for (std::size_t j = 0; j < profile.grid.n; ++j) t.add_row({profile.grid.x(j), profile.values[j]});
  const auto path = output_path(g, "profile.csv");
  emit_csv(path, t);
  std::printf("c=%g lambda_est=%.6f lambda_c=%.6f residual=%.3g -> %s\n", a.c, fit.lambda_est, *disp.lambda_c,
              profile_residual(profile, f), path.c_str());
  return kOk;
}

struct EvolveArgs {
  std::size_t k = 1;
  double alpha = 1.0;
  std::string f = "quadratic";
  double x_min = -50.0;
  double x_max = 150.0;
  double dx = 0.05;
  double dt = 5e-3;
  double t_end = 50.0;
  std::string frames = "none";
  double t0 = 10.0;
  std::string window_policy = "fixed";
  std::string boundary = "heaviside_clamp";
  std::string snapshot_times;
  double cfl_safety = 10.0;
  double follow_trigger = 0.8;
  double follow_target = 0.3;
};

EvolveConfig build_evolve(const EvolveArgs& a) {
  EvolveConfig cfg;
  cfg.k = a.k;
  cfg.alpha = a.alpha;
  cfg.f = parse_nonlinearity(a.f);
  cfg.grid = Grid1D::covering(a.x_min, a.x_max, a.dx);
  cfg.dt = a.dt;
  cfg.t_end = a.t_end;
  if (a.frames == "cascade")
    cfg.frames = FrameSpec::cascade(a.k, dispersion(cfg.f).lambdastar, a.t0);
  else
    require(a.frames == "none", ErrorKind::configuration, "frames must be 'none' or 'cascade'");
  if (a.window_policy == "follow_front")
    cfg.window_policy = WindowPolicy::follow_front;
  else
    require(a.window_policy == "fixed", ErrorKind::configuration, "window_policy must be 'fixed' or 'follow_front'");
  if (a.boundary == "dirichlet_zero")
    cfg.boundary = Boundary::dirichlet_zero;
  else
    require(a.boundary == "heaviside_clamp", ErrorKind::configuration,
            "boundary must be 'heaviside_clamp' or 'dirichlet_zero'");
  cfg.snapshot_times = a.snapshot_times.empty() ? std::vector<double>{a.t_end} : parse_times(a.snapshot_times);
  cfg.cfl_safety = a.cfl_safety;
  cfg.follow_trigger = a.follow_trigger;
  cfg.follow_target = a.follow_target;
  return cfg;
}

int run_evolve(const EvolveArgs& a, const Json& config, const Globals& g) {
  EvolveConfig cfg = build_evolve(a);
  const bool moving = cfg.frames.has_value();
  // The zero-Dirichlet half-line problem is linear and needs non-Heaviside data.
  require(cfg.boundary == Boundary::heaviside_clamp, ErrorKind::configuration,
          "evolve starts from Heaviside data; dirichlet_zero is available through the library only");
  FieldStack init = heaviside_stack(cfg.k, cfg.grid);
  const Trajectory traj = moving ? evolve_moving_frame(cfg, init) : evolve_lab(cfg, init);
  CsvTable t;
  t.comments = config_comments(config);
  t.comments.push_back("coordinates = " + std::string(moving ? "frame" : "lab"));
  t.columns = {"t", "component", "x", "value"};
  for (const auto& s : traj.snapshots)
    for (std::size_t i = 0; i < s.k(); ++i)
      for (std::size_t j = 0; j < s.grid().n; ++j) t.add_row({s.time(), double(i + 1), s.grid().x(j), s(i, j)});
  const auto path = output_path(g, "traj.csv");
  emit_csv(path, t);
  std::printf("steps=%zu clamps=%zu window_shifts=%zu snapshots=%zu -> %s\n", traj.diagnostics.steps,
              traj.diagnostics.total_clamps(), traj.diagnostics.window_shifts, traj.snapshots.size(), path.c_str());
  return kOk;
}

/// Snapshots of a long-format trajectory CSV, keyed by time then component.
struct LoadedTrajectory {
  Json config;
  std::map<double, std::map<std::size_t, std::pair<Grid1D, std::vector<double>>>> fields;
};

LoadedTrajectory load_trajectory(const std::string& path) {
  const CsvTable table = read_csv(path);
  const std::size_t ct = table.column("t"), cc = table.column("component"), cx = table.column("x"),
                    cv = table.column("value");
  std::map<double, std::map<std::size_t, std::pair<std::vector<double>, std::vector<double>>>> raw;
  for (const auto& row : table.rows) {
    auto& slot = raw[row[ct]][static_cast<std::size_t>(row[cc])];
    slot.first.push_back(row[cx]);
    slot.second.push_back(row[cv]);
  }
  LoadedTrajectory out;
  out.config = config_from_comments(table.comments);
  for (auto& [t, comps] : raw)
    for (auto& [i, xv] : comps) {
      const auto& xs = xv.first;
      require(xs.size() >= 3, ErrorKind::invalid_input, "trajectory snapshot has fewer than 3 points");
      const double dx = (xs.back() - xs.front()) / double(xs.size() - 1);
      for (std::size_t j = 0; j < xs.size(); ++j)
        require(std::abs(xs[j] - (xs.front() + double(j) * dx)) < 1e-6 * (1.0 + std::abs(xs[j])),
                ErrorKind::invalid_input, "trajectory grid is not uniform");
      out.fields[t][i] = {Grid1D(xs.front(), dx, xs.size()), std::move(xv.second)};
    }
  require(!out.fields.empty(), ErrorKind::no_data, path + " holds no trajectory rows");
  return out;
}

struct FrontArgs {
  std::string in = "traj.csv";
  double level = 0.5;
  double cstar = 2.0;
  std::string window = "100:1000";
  std::string which = "max";
};

int run_front(const FrontArgs& a, const Json& config, const Globals& g) {
  const auto traj = load_trajectory(a.in);
  require(a.which == "max" || a.which == "min", ErrorKind::configuration, "which must be 'max' or 'min'");
  const LevelSelect which = a.which == "max" ? LevelSelect::max_level_set : LevelSelect::min_level_set;
  // Trajectories written in moving frames are shifted back to the lab frame.
  std::optional<std::vector<FrameSpec>> frames;
  if (traj.config.value("frames", std::string("none")) == "cascade") {
    const auto f = parse_nonlinearity(traj.config.value("f", std::string("quadratic")));
    frames = FrameSpec::cascade(traj.config.at("k").get<std::size_t>(), dispersion(f).lambdastar,
                                traj.config.at("t0").get<double>());
  }
  std::map<std::size_t, FrontTrace> traces;
  for (const auto& [t, comps] : traj.fields)
    for (const auto& [i, field] : comps) {
      const auto crossings = extract_level_set(field.second, field.first, a.level);
      double x = which == LevelSelect::max_level_set ? crossings.max() : crossings.min();
      if (frames) x += (*frames).at(i - 1).position(t);
      auto& tr = traces.try_emplace(i, FrontTrace{a.level, which, {}}).first->second;
      tr.push(t, x);
    }
  const TimeWindow window = parse_window(a.window);
  Json fits = Json::array();
  for (const auto& [i, tr] : traces) {
    const auto fit = fit_log_correction(tr, a.cstar, window);
    fits.push_back({{"component", i},
                    {"c_hat", fit.c_hat},
                    {"a_hat", fit.a_hat},
                    {"b_hat", fit.b_hat},
                    {"rms_residual", fit.rms_residual},
                    {"window", {fit.window.begin, fit.window.end}},
                    {"samples", fit.samples}});
    std::printf("component %zu: a_hat=%.4f b_hat=%.4f rms=%.3g samples=%zu\n", i, fit.a_hat, fit.b_hat,
                fit.rms_residual, fit.samples);
  }
  Json seps = Json::array();
  for (std::size_t i = 1; traces.count(i) && traces.count(i + 1); ++i) {
    const auto sep = front_separation(restrict_trace(traces.at(i), window), restrict_trace(traces.at(i + 1), window));
    seps.push_back({{"components", {i, i + 1}}, {"slope_vs_ln_t", sep.slope_vs_ln_t}});
  }
  const auto path = output_path(g, "fit.json");
  emit_json(path, Json{{"config", config}, {"fits", fits}, {"separations", seps}});
  return kOk;
}

struct SelfSimArgs {
  std::size_t k = 2;
  double alpha = 1.0;
  double t0 = 100.0;
  double tau_end = 12.0;
  double dtau = 2e-3;
  double eta_max = 12.0;
  double deta = 0.02;
  double output_every = 0.05;
};

int run_selfsim(const SelfSimArgs& a, const Json& config, const Globals& g) {
  require(a.t0 > 0.0, ErrorKind::configuration, "t0 must be positive");
  WSystemConfig cfg;
  cfg.k = a.k;
  cfg.alpha = a.alpha;
  cfg.lambdastar = 1.0;
  cfg.epsilon = 1.0 / std::sqrt(a.t0);
  cfg.eta_grid = Grid1D::covering(0.0, a.eta_max, a.deta);
  cfg.dtau = a.dtau;
  cfg.tau_end = a.tau_end;
  cfg.output_every = a.output_every;
  const auto series = evolve_w_system(cfg, Reproducer::bump_rows(a.k, cfg.eta_grid));
  CsvTable t;
  t.comments = config_comments(config);
  t.comments.push_back("initial_data = eta (4 - eta)^2 on [0, 4], every component");
  t.columns = {"tau", "component", "q", "remainder_norm"};
  for (const auto& d : series)
    for (std::size_t i = 0; i < d.q.size(); ++i) t.add_row({d.tau, double(i + 1), d.q[i], d.remainder_norm[i]});
  const auto path = output_path(g, "q_series.csv");
  emit_csv(path, t);
  std::printf("q1(0)=%.6f q1(%g)=%.6f q%zu(0)=%.6f -> %s\n", series.front().q[0], series.back().tau,
              series.back().q[0], a.k, series.front().q[a.k - 1], path.c_str());
  return kOk;
}

struct BbmArgs {
  std::size_t k = 1;
  double alpha = 1.0;
  double t = 5.0;
  std::size_t replicas = 1000;
  double binary_rate = 1.0;
  std::size_t max_particles = 5'000'000;
};

int run_bbm(const BbmArgs& a, const Json& config, const Globals& g) {
  BbmConfig cfg;
  cfg.k = a.k;
  cfg.alpha = a.alpha;
  cfg.t_max = a.t;
  cfg.binary_rate = a.binary_rate;
  cfg.max_particles = a.max_particles;
  cfg.seed = g.seed;
  const auto reps = simulate_replicas(cfg, a.replicas, g.threads);
  CsvTable t = Reproducer::replica_table(reps);
  t.comments = config_comments(config);
  const auto path = output_path(g, "maxima.csv");
  emit_csv(path, t);
  const auto cdf = empirical_max_cdf(reps, 1);
  std::printf("replicas=%zu truncated=%zu median_max=%.4f -> %s\n", reps.size(), cdf.truncated(), cdf.median(),
              path.c_str());
  return kOk;
}

struct CompareArgs {
  std::string bbm = "maxima.csv";
  std::string pde = "traj.csv";
  double t = 7.0;
  std::size_t component = 1;
};

int run_compare(const CompareArgs& a, const Json& config, const Globals& g) {
  const CsvTable maxima = read_csv(a.bbm);
  const std::size_t cm = maxima.column("max_position"), ctr = maxima.column("truncated");
  std::vector<double> samples;
  std::size_t truncated = 0;
  for (const auto& row : maxima.rows) {
    if (row[ctr] != 0.0)
      ++truncated;
    else
      samples.push_back(row[cm]);
  }
  const EmpiricalCdf cdf(std::move(samples), truncated);
  const auto traj = load_trajectory(a.pde);
  require(traj.config.value("frames", std::string("none")) == "none", ErrorKind::configuration,
          "compare needs a lab-frame PDE trajectory");
  const std::pair<Grid1D, std::vector<double>>* field = nullptr;
  for (const auto& [t, comps] : traj.fields)
    if (std::abs(t - a.t) < 1e-9 && comps.count(a.component)) field = &comps.at(a.component);
  require(field != nullptr, ErrorKind::invalid_input,
          a.pde + " has no snapshot of component " + std::to_string(a.component) + " at t=" + format_double(a.t));
  const auto cmp = compare_bbm_pde(cdf, field->second, field->first);
  const auto path = output_path(g, "ks.json");
  emit_json(path, Json{{"config", config},
                       {"distance", cmp.distance},
                       {"at_x", cmp.at_x},
                       {"points", cmp.points},
                       {"samples", cmp.samples},
                       {"truncated", cmp.truncated},
                       {"median_max", cdf.median()}});
  std::printf("sup|P(M_t >= x) - v(t,x)| = %.4g at x=%.3f (%zu samples) -> %s\n", cmp.distance, cmp.at_x,
              cmp.samples, path.c_str());
  return kOk;
}

int run_reproduce(const std::string& name, const Globals& g) {
  ReproduceOptions opt;
  opt.seed = g.seed;
  opt.threads = g.threads;
  Reproducer rep(opt);
  std::vector<std::string> names;
  if (name == "all")
    names = Reproducer::names();
  else
    names = {name};
  const bool many = names.size() > 1;
  const fs::path base = g.out.empty() ? fs::path(many ? "reproduce" : name + ".json") : fs::path(g.out);
  bool all_passed = true;
  for (const auto& n : names) {
    const auto r = rep.run(n);
    std::cout << r.line() << std::endl;
    Json doc = r.to_json();
    doc["config"] = {{"recipe", n}, {"seed", g.seed}};
    emit_json(many ? base / (n + ".json") : base, doc);
    all_passed = all_passed && r.passed;
  }
  return all_passed ? kOk : kCriterionFailed;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::configuration:
    case ErrorKind::invalid_input:
    case ErrorKind::subcritical_speed: return kSchema;
    case ErrorKind::io: return kIo;
    default: return kNumerical;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cascade KPP fronts: PDE solvers, self-similar analysis and branching Brownian motion"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  auto* o_seed = app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  auto* o_threads = app.add_option("--threads", g.threads, "Worker threads")->capture_default_str();
  app.add_option("--out", g.out, "Output path");
  app.add_option("--config", g.config, "JSON config file; explicit flags take precedence");

  std::vector<std::pair<CLI::App*, std::unique_ptr<Params>>> subs;
  auto sub = [&](const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    subs.emplace_back(s, std::make_unique<Params>(s));
    return subs.back().second.get();
  };

  WaveArgs wave;
  Params* p = sub("wave", "Traveling-wave profile U'' + cU' + f(U) = 0");
  p->add("c", wave.c, "Wave speed (>= c*)");
  p->add("f", wave.f, "Nonlinearity: quadratic | polynomial:c0,c1,... | mckean:beta,p1,...");
  p->add("half_width", wave.half_width, "Profile half-width");
  p->add("tol", wave.tol, "ODE tolerance");
  p->add("dx", wave.dx, "Output spacing");

  EvolveArgs ev;
  p = sub("evolve", "Evolve the cascade system from Heaviside data");
  p->add("k", ev.k, "Number of components");
  p->add("alpha", ev.alpha, "Coupling strength");
  p->add("f", ev.f, "Nonlinearity");
  p->add("x_min", ev.x_min, "Left end of the grid");
  p->add("x_max", ev.x_max, "Right end of the grid");
  p->add("dx", ev.dx, "Grid spacing");
  p->add("dt", ev.dt, "Time step");
  p->add("t_end", ev.t_end, "Final time");
  p->add("frames", ev.frames, "none | cascade (component-wise log-corrected frames)");
  p->add("t0", ev.t0, "Frame time offset");
  p->add("window_policy", ev.window_policy, "fixed | follow_front");
  p->add("boundary", ev.boundary, "heaviside_clamp | dirichlet_zero");
  p->add("snapshot_times", ev.snapshot_times, "Snapshot times: a,b,c or begin:end:step", "snap");
  p->add("cfl_safety", ev.cfl_safety, "Bound on dt / dx^2");
  p->add("follow_trigger", ev.follow_trigger, "Recentre when the front passes this window fraction");
  p->add("follow_target", ev.follow_target, "Window fraction of the front after recentring");

  FrontArgs fr;
  p = sub("front", "Fit c t - a ln t + b to level-set traces of a trajectory CSV");
  p->add("in", fr.in, "Trajectory CSV from evolve");
  p->add("level", fr.level, "Level m");
  p->add("cstar", fr.cstar, "Frozen linear speed");
  p->add("window", fr.window, "Fit window begin:end");
  p->add("which", fr.which, "max | min level-set point");

  SelfSimArgs ss;
  p = sub("selfsim", "Self-similar w-system and its projection on the principal eigenfunction");
  p->add("k", ss.k, "Number of components");
  p->add("alpha", ss.alpha, "Coupling strength");
  p->add("t0", ss.t0, "Time offset (epsilon = 1/sqrt(t0))");
  p->add("tau_end", ss.tau_end, "Final tau");
  p->add("dtau", ss.dtau, "tau step");
  p->add("eta_max", ss.eta_max, "Truncation of the eta half-line");
  p->add("deta", ss.deta, "eta spacing");
  p->add("output_every", ss.output_every, "tau between output rows");

  BbmArgs bb;
  p = sub("bbm", "Multitype branching Brownian motion maxima");
  p->add("k", bb.k, "Number of types");
  p->add("alpha", bb.alpha, "Mutation rate");
  p->add("t", bb.t, "Observation time");
  p->add("replicas", bb.replicas, "Independent replicas");
  p->add("binary_rate", bb.binary_rate, "Same-type branching rate");
  p->add("max_particles", bb.max_particles, "Population cap per replica");

  CompareArgs cmp;
  p = sub("compare", "Sup distance between BBM maxima and a PDE snapshot");
  p->add("bbm", cmp.bbm, "Maxima CSV from bbm");
  p->add("pde", cmp.pde, "Lab-frame trajectory CSV from evolve");
  p->add("t", cmp.t, "Snapshot time");
  p->add("component", cmp.component, "PDE component (1-based)");

  std::string recipe;
  CLI::App* rep = app.add_subcommand("reproduce", "Run a named check, or 'all'");
  std::string recipe_help = "Recipe: all";
  for (const auto& n : Reproducer::names()) recipe_help += " | " + n;
  rep->add_option("recipe", recipe, recipe_help)->required();

  for (auto& [s, params] : subs) {
    params->bind("seed", g.seed, o_seed);
    params->bind("threads", g.threads, o_threads);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kSchema;
  }

  try {
    require(g.threads >= 1, ErrorKind::configuration, "--threads must be at least 1");
    if (rep->parsed()) {
      require(g.config.empty(), ErrorKind::configuration, "reproduce takes no config file");
      return run_reproduce(recipe, g);
    }
    for (auto& [s, params] : subs) {
      if (!s->parsed()) continue;
      params->resolve(g.config);
      const Json config = params->resolved();
      const std::string name = s->get_name();
      if (name == "wave") return run_wave(wave, config, g);
      if (name == "evolve") return run_evolve(ev, config, g);
      if (name == "front") return run_front(fr, config, g);
      if (name == "selfsim") return run_selfsim(ss, config, g);
      if (name == "bbm") return run_bbm(bb, config, g);
      if (name == "compare") return run_compare(cmp, config, g);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: configuration: " << e.what() << "\n";
    return kSchema;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kSchema;
}

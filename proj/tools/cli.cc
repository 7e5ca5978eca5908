#include "cli.h"

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sha256.h"
#include "srgkit/errors.h"
#include "srgkit/export.h"
#include "srgkit/fixtures.h"
#include "srgkit/gains_data.h"
#include "srgkit/gains_robust.h"
#include "srgkit/io.h"
#include "srgkit/srg.h"

namespace srgkit::cli {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code_for(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const ProfileError& pe) {
    return pe.cause() ? exit_code_for(pe.cause()) : kExitFailure;
  } catch (const SchemaError&) {
    return kExitSchema;
  } catch (const SolverInconclusiveError&) {
    return kExitInconclusive;
  } catch (const PreconditionError&) {
    return kExitPrecondition;
  } catch (const std::invalid_argument&) {
    // Includes DimensionError: inconsistent inputs or flags.
    return kExitSchema;
  } catch (...) {
    return kExitFailure;
  }
}

namespace {

// Values that JSON cannot hold are written as strings, as in the CSVs.
json Number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

json ProfileJson(const GainProfile& p) {
  json rows = json::array();
  for (const GainBounds& e : p.entries) {
    rows.push_back({{"alpha", e.alpha},
                    {"zeta", Number(e.zeta)},
                    {"gamma", Number(e.gamma)},
                    {"zeta_tol", e.zeta_tol},
                    {"gamma_tol", e.gamma_tol},
                    {"settled", e.settled}});
  }
  return rows;
}

json WindowJson(const Window& w) {
  return {{"re_min", w.re_min}, {"re_max", w.re_max}, {"im_min", w.im_min},
          {"im_max", w.im_max}};
}

OperatorKind ParseKind(const std::string& s) {
  if (s == "trunc") return OperatorKind::kTruncatedLimit;
  if (s == "l2") return OperatorKind::kL2;
  throw SchemaError("--kind must be trunc or l2, got \"" + s + "\"");
}

std::pair<int, int> ParseRes(const std::string& s) {
  int w = 0;
  int h = 0;
  char x = 0;
  std::istringstream is(s);
  if (!(is >> w >> x >> h) || x != 'x' || w < 1 || h < 1 || !is.eof()) {
    throw SchemaError("--res must look like 400x400, got \"" + s + "\"");
  }
  return {w, h};
}

StateSpace Example(const std::string& name) {
  if (name == "low-pass") return fixtures::low_pass();
  if (name == "high-pass") return fixtures::high_pass();
  if (name == "unstable-mimo") return fixtures::unstable_mimo();
  throw SchemaError("--example must be low-pass, high-pass or unstable-mimo");
}

// Writes outputs and remembers their hashes for the run report.
class OutputDir {
 public:
  explicit OutputDir(std::string dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw std::runtime_error(dir_ + ": " + ec.message());
  }

  std::string Write(const std::string& name, const std::string& content) {
    const std::string path = (fs::path(dir_) / name).string();
    write_text_file(path, content);
    hashes_[name] = sha256_hex(content);
    return path;
  }

  template <typename Fn>
  std::string WriteWith(const std::string& name, Fn&& fn) {
    std::ostringstream os;
    fn(os);
    return Write(name, os.str());
  }

  json Hashes() const { return hashes_; }

 private:
  std::string dir_;
  std::map<std::string, std::string> hashes_;
};

void WriteRegionFiles(OutputDir& dir, const std::string& prefix,
                      const SrgRegion& region, const std::string& title) {
  dir.WriteWith(prefix + "region.csv",
                [&](std::ostream& os) { write_region_csv(os, region); });
  dir.WriteWith(prefix + "region.pgm",
                [&](std::ostream& os) { write_region_pgm(os, region); });
  SvgOptions svg;
  svg.title = title;
  dir.WriteWith(prefix + "region.svg",
                [&](std::ostream& os) { write_region_svg(os, region, svg); });
}

GainOptions Options(double rel_tol) {
  GainOptions opts;
  opts.rel_tol = rel_tol;
  return opts;
}

json OptionsJson(const GainOptions& o) {
  return {{"rel_tol", o.rel_tol},
          {"settle_rel_tol", o.settle_rel_tol},
          {"rel_margin", o.rel_margin},
          {"cap", o.cap},
          {"solver", default_solver().name()}};
}

double Seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- simulate ------------------------------------------------------------

struct SimulateArgs {
  std::string model;
  std::string example;
  std::string input = "gaussian";
  int N = 200;
  std::string noise;
  std::uint64_t seed = 0;
  int l = -1;
  std::string out;
};

int Simulate(const SimulateArgs& a, std::ostream& out) {
  if (a.model.empty() == a.example.empty()) {
    throw SchemaError("simulate needs exactly one of --model and --example");
  }
  const StateSpace ss = a.model.empty() ? Example(a.example) : load_model(a.model);
  const int m = ss.num_channels();
  const Eigen::MatrixXd u = make_input(a.input, a.N, m, a.seed);
  Trajectory traj;
  if (a.noise.empty()) {
    traj = simulate(ss, u);
  } else {
    const NoiseSpec spec = parse_noise_flag(a.noise);
    if (!spec.ball_v_bar) {
      throw SchemaError("--noise: only ball noise can be sampled");
    }
    const Eigen::MatrixXd v =
        sample_ball_noise(m, static_cast<int>(u.rows()), *spec.ball_v_bar, a.seed + 1);
    traj = simulate_noisy(ss, u, v, Eigen::MatrixXd::Identity(m, m),
                          a.l >= 0 ? a.l : lag(ss));
  }
  const bool csv = a.out.size() >= 4 && a.out.substr(a.out.size() - 4) == ".csv";
  const std::string text = csv ? trajectory_to_csv(traj) : trajectory_to_json(traj);
  write_text_file(a.out, text);
  out << "wrote " << a.out << " (N = " << traj.length() << ", m = " << m
      << ", sha256 " << sha256_hex(text) << ")\n";
  return kExitOk;
}

// ---- check ---------------------------------------------------------------

struct CheckArgs {
  std::string trajectory;
  std::string model;
  int l = -1;
  int n = -1;
  int order = -1;
  bool json_out = false;
};

int Check(const CheckArgs& a, std::ostream& out) {
  if (a.trajectory.empty() && a.model.empty()) {
    throw SchemaError("check needs --trajectory and/or --model");
  }
  json report;
  std::ostringstream text;
  if (!a.model.empty()) {
    const StateSpace ss = load_model(a.model);
    report["n"] = ss.num_states();
    try {
      const int l = lag(ss);
      report["lag"] = l;
      text << "model: n = " << ss.num_states() << ", lag = " << l << "\n";
    } catch (const NotObservableError& e) {
      report["lag"] = nullptr;
      text << "model: n = " << ss.num_states() << ", not observable (" << e.what()
           << ")\n";
    }
  }
  if (!a.trajectory.empty()) {
    const Trajectory t = load_trajectory(a.trajectory);
    const int achieved = persistent_excitation_order(t.u);
    report["N"] = t.length();
    report["m"] = t.channels();
    report["pe_order"] = achieved;
    text << "trajectory: N = " << t.length() << ", m = " << t.channels()
         << ", input persistently exciting up to order " << achieved << "\n";
    auto verdict = [&](int order, const std::string& label) {
      const bool ok = order <= t.length() && is_persistently_exciting(t.u, order);
      text << label << order << ": " << (ok ? "yes" : "no") << "\n";
      return ok;
    };
    if (a.order > 0) report["pe_requested"] = verdict(a.order, "PE of order ");
    if (a.n >= 0) {
      const int l = a.l >= 0 ? a.l : a.n;
      report["pe_required_order"] = a.n + l + 1;
      report["pe_required"] = verdict(a.n + l + 1, "PE of order n + l + 1 = ");
      if (a.l < 0) text << "using l = n = " << a.n << " (the state count bounds the lag)\n";
    } else {
      text << "state count unknown: the number of states of any realization is an "
              "upper bound on the lag, so l = n is a safe choice; pass --n to "
              "check excitation of order n + l + 1\n";
    }
  }
  if (a.json_out) {
    out << report.dump(2) << "\n";
  } else {
    out << text.str();
  }
  return kExitOk;
}

// ---- srg -----------------------------------------------------------------

struct SrgArgs {
  std::string mode;
  std::string model;
  std::string example;
  std::string trajectory;
  std::string kind = "l2";
  int alpha_count = 101;
  std::vector<double> alpha_window;
  std::vector<double> alphas;
  std::vector<double> window;
  std::string res = "400x400";
  int l = -1;
  int n = -1;
  bool l_from_n = false;
  std::string noise;
  std::uint64_t seed = 0;
  double rel_tol = 1e-6;
  bool conservative = false;
  std::string out = "srg_out";
  int threads = 0;
};

using KindFunction = std::function<GainFunction(OperatorKind)>;

int Srg(const SrgArgs& a, const std::vector<std::string>& argv, std::ostream& out,
        std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  const OperatorKind kind = ParseKind(a.kind);
  const auto [width, height] = ParseRes(a.res);
  const GainOptions opts = Options(a.rel_tol);
  json report;
  report["command"] = argv;
  report["mode"] = a.mode;
  report["kind"] = to_string(kind);
  report["seed"] = a.seed;
  report["options"] = OptionsJson(opts);
  json inputs = json::object();

  KindFunction make_fn;
  std::optional<StateSpace> ss;
  std::optional<DataMatrices> dm;
  std::optional<NoiseModel> noise;
  if (a.mode == "ss") {
    if (a.model.empty() == a.example.empty()) {
      throw SchemaError("--mode ss needs exactly one of --model and --example");
    }
    if (!a.model.empty()) {
      inputs["model"] = sha256_hex(read_text_file(a.model));
      ss = load_model(a.model);
    } else {
      inputs["example"] = a.example;
      ss = Example(a.example);
    }
    try {
      report["lag"] = lag(*ss);
    } catch (const NotObservableError&) {
      report["lag"] = nullptr;
    }
    make_fn = [&](OperatorKind k) -> GainFunction {
      return [&, k](double x) { return gain_annulus(*ss, x, k, opts); };
    };
  } else if (a.mode == "data" || a.mode == "robust") {
    if (a.trajectory.empty()) throw SchemaError("--mode " + a.mode + " needs --trajectory");
    if (a.mode == "robust" && a.noise.empty()) throw SchemaError("--mode robust needs --noise");
    int l = a.l;
    if (a.l_from_n) {
      if (a.n < 0) throw SchemaError("--l-from-n needs --n");
      l = a.n;
    }
    if (l < 0) throw SchemaError("data modes need --l (or --n with --l-from-n)");
    inputs["trajectory"] = sha256_hex(read_text_file(a.trajectory));
    const Trajectory traj = load_trajectory(a.trajectory);
    dm = build_data_matrices(traj, l);
    report["l"] = l;
    report["N"] = traj.length();
    report["pe_order"] = persistent_excitation_order(traj.u);
    if (a.n >= 0) {
      report["n"] = a.n;
      report["pe_required_order"] = a.n + l + 1;
      check_excitation(*dm, a.n);
    }
    if (a.mode == "data") {
      make_fn = [&](OperatorKind k) -> GainFunction {
        return [&, k](double x) { return gain_annulus_data(*dm, x, k, opts); };
      };
    } else {
      const NoiseSpec spec = parse_noise_flag(a.noise);
      noise = spec.Resolve(traj.length(), l, traj.channels());
      std::ostringstream nm;
      nm.precision(17);
      nm << noise->Q << noise->S << noise->R << noise->Bv;
      report["noise"] = {{"spec", spec.Describe()}, {"sha256", sha256_hex(nm.str())}};
      // Fail early, before the sweep, on degenerate data.
      const ConsistencySet cs = build_consistency_set(*dm, *noise);
      report["inverse_residual"] = cs.inverse_residual;
      make_fn = [&](OperatorKind k) -> GainFunction {
        return [&, k](double x) { return robust_gain_annulus(*dm, *noise, x, k, opts); };
      };
    }
  } else {
    throw SchemaError("--mode must be ss, data or robust");
  }
  report["inputs"] = inputs;

  // Reference gain at alpha = 0; the L2 one stands in when this kind is
  // unbounded (unstable system, truncated operator).
  std::optional<double> l2_gamma0;
  auto reference_gamma = [&]() {
    double g0 = make_fn(kind)(0.0).gamma;
    if (std::isinf(g0) && kind != OperatorKind::kL2) {
      g0 = make_fn(OperatorKind::kL2)(0.0).gamma;
      l2_gamma0 = g0;
    }
    return g0;
  };

  std::vector<double> alphas = a.alphas;
  if (alphas.empty()) {
    if (!a.alpha_window.empty()) {
      alphas = default_alpha_grid(kInfinity, a.alpha_count,
                                  std::make_pair(a.alpha_window[0], a.alpha_window[1]));
    } else {
      alphas = default_alpha_grid(reference_gamma(), a.alpha_count);
    }
  }
  report["alphas"] = alphas;

  OutputDir dir(a.out);
  GainProfile profile;
  try {
    profile = compute_profile(make_fn(kind), alphas, kind, a.threads);
  } catch (const ProfileError& e) {
    dir.WriteWith("profile.partial.csv",
                  [&](std::ostream& os) { write_profile_csv(os, e.partial()); });
    err << "error: " << e.what() << "\n(partial profile in "
        << (fs::path(a.out) / "profile.partial.csv").string() << ")\n";
    return exit_code_for(std::current_exception());
  }
  report["profile"] = ProfileJson(profile);
  report["lipschitz_violation"] = Number(lipschitz_violation(profile));
  report["settled_entries"] = std::count_if(
      profile.entries.begin(), profile.entries.end(),
      [](const GainBounds& e) { return e.settled; });

  Window window;
  if (!a.window.empty()) {
    window = Window{a.window[0], a.window[1], a.window[2], a.window[3]};
  } else if (!profile.all_infinite()) {
    window = default_window(profile);
  } else {
    const double g0 = l2_gamma0 ? *l2_gamma0 : make_fn(OperatorKind::kL2)(0.0).gamma;
    if (!std::isfinite(g0)) throw SchemaError("unbounded gains: give --window");
    const double half = 1.2 * g0;
    window = Window{-half, half, -half, half};
  }
  const RasterMode mode = a.conservative ? RasterMode::kConservative : RasterMode::kCenter;
  const SrgRegion region = rasterize(profile, window, width, height, mode);
  report["window"] = WindowJson(window);
  report["resolution"] = {width, height};
  report["conservative"] = a.conservative;
  report["includes_infinity"] = region.includes_infinity;
  report["cells_inside"] = region.count();

  dir.WriteWith("profile.csv", [&](std::ostream& os) { write_profile_csv(os, profile); });
  WriteRegionFiles(dir, "", region, std::string("srg, ") + to_string(kind));
  report["outputs"] = dir.Hashes();
  report["seconds"] = Seconds(t0);
  dir.Write("report.json", report.dump(2) + "\n");
  out << "alpha grid " << alphas.size() << " points, " << region.count()
      << " cells inside" << (region.includes_infinity ? ", includes infinity" : "")
      << "; outputs in " << a.out << "\n";
  return kExitOk;
}

// ---- reproduce -----------------------------------------------------------

struct ReproduceArgs {
  std::string example;
  std::string out = "reproduce_out";
  std::string res = "400x400";
  int alpha_count = 101;
  double v_bar = 0.05;
  int N = 200;
  std::uint64_t seed = 1;
  int threads = 0;
};

struct Panel {
  GainProfile nominal;
  GainProfile data;
  GainProfile robust;
};

Panel ComputePanel(const StateSpace& ss, const DataMatrices& clean,
                   const DataMatrices& noisy, const NoiseModel& noise,
                   OperatorKind kind, const std::vector<double>& alphas, int threads) {
  Panel p;
  p.nominal = compute_profile([&](double x) { return gain_annulus(ss, x, kind); },
                              alphas, kind, threads);
  p.data = compute_profile([&](double x) { return gain_annulus_data(clean, x, kind); },
                           alphas, kind, threads);
  p.robust = compute_profile(
      [&](double x) { return robust_gain_annulus(noisy, noise, x, kind); }, alphas,
      kind, threads);
  return p;
}

double MaxRelDiff(const GainProfile& a, const GainProfile& b) {
  double worst = 0.0;
  for (size_t k = 0; k < a.entries.size(); ++k) {
    for (auto [x, y] : {std::pair{a.entries[k].gamma, b.entries[k].gamma},
                        std::pair{a.entries[k].zeta, b.entries[k].zeta}}) {
      if (std::isinf(x) || std::isinf(y)) {
        if (x != y) return kInfinity;
        continue;
      }
      worst = std::max(worst, std::abs(x - y) / std::max(1.0, std::abs(x)));
    }
  }
  return worst;
}

int Reproduce(const ReproduceArgs& a, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto [width, height] = ParseRes(a.res);
  StateSpace ss;
  std::vector<OperatorKind> kinds{OperatorKind::kL2};
  if (a.example == "fig2") {
    ss = fixtures::unstable_mimo();
    kinds.push_back(OperatorKind::kTruncatedLimit);
  } else if (a.example == "fig3-low") {
    ss = fixtures::low_pass();
  } else if (a.example == "fig3-high") {
    ss = fixtures::high_pass();
  } else {
    throw SchemaError("--example must be fig2, fig3-low or fig3-high");
  }
  const int m = ss.num_channels();
  const int l = lag(ss);
  const Eigen::MatrixXd u = make_input("gaussian", a.N, m, a.seed);
  const Eigen::MatrixXd v = sample_ball_noise(m, a.N, a.v_bar, a.seed + 1);
  const DataMatrices clean = build_data_matrices(simulate(ss, u), l);
  const DataMatrices noisy = build_data_matrices(
      simulate_noisy(ss, u, v, Eigen::MatrixXd::Identity(m, m), l), l);
  const NoiseModel noise = ball_noise_model(a.v_bar, a.N, l, m);

  OutputDir dir(a.out);
  json verdicts;
  verdicts["example"] = a.example;
  verdicts["seed"] = a.seed;
  verdicts["v_bar"] = a.v_bar;
  verdicts["N"] = a.N;
  verdicts["l"] = l;
  verdicts["alpha_count"] = a.alpha_count;
  verdicts["resolution"] = {width, height};

  const double g0 = max_gain(ss, OperatorKind::kL2);
  const std::vector<double> alphas = default_alpha_grid(g0, a.alpha_count);
  std::optional<Window> window;
  for (OperatorKind kind : kinds) {
    const std::string prefix =
        kind == OperatorKind::kL2 ? std::string("l2_") : std::string("trunc_");
    const Panel p = ComputePanel(ss, clean, noisy, noise, kind, alphas, a.threads);
    // The L2 robust region fixes the window for every panel.
    if (!window) window = default_window(p.robust);
    const SrgRegion nominal = rasterize(p.nominal, *window, width, height);
    const SrgRegion robust = rasterize(p.robust, *window, width, height);
    const SrgRegion nominal_c =
        rasterize(p.nominal, *window, width, height, RasterMode::kConservative);
    const SrgRegion robust_c =
        rasterize(p.robust, *window, width, height, RasterMode::kConservative);
    for (const auto& [name, prof] : {std::pair{"nominal", &p.nominal},
                                     std::pair{"data", &p.data},
                                     std::pair{"robust", &p.robust}}) {
      dir.WriteWith(prefix + name + "_profile.csv",
                    [&](std::ostream& os) { write_profile_csv(os, *prof); });
    }
    dir.WriteWith(prefix + "nominal.pgm",
                  [&](std::ostream& os) { write_region_pgm(os, nominal); });
    dir.WriteWith(prefix + "robust.pgm",
                  [&](std::ostream& os) { write_region_pgm(os, robust); });
    SvgOptions svg;
    svg.title = a.example + ", " + to_string(kind);
    dir.WriteWith(prefix + "figure.svg", [&](std::ostream& os) {
      write_region_svg(os, {SvgLayer{&robust, "#5b9bd5"}, SvgLayer{&nominal, "#f4a340"}},
                       svg);
    });
    verdicts[to_string(kind)] = {
        {"robust_contains_nominal", region_contains(robust_c, nominal_c)},
        {"nominal_contains_robust", region_contains(nominal_c, robust_c)},
        {"nominal_cells", nominal.count()},
        {"robust_cells", robust.count()},
        {"nominal_includes_infinity", nominal.includes_infinity},
        {"robust_includes_infinity", robust.includes_infinity},
        {"data_vs_model_max_rel_diff", Number(MaxRelDiff(p.nominal, p.data))}};
  }
  verdicts["window"] = WindowJson(*window);
  verdicts["outputs"] = dir.Hashes();
  verdicts["seconds"] = Seconds(t0);
  dir.Write("verdicts.json", verdicts.dump(2) + "\n");
  out << verdicts.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"srgkit: scaled relative graphs of discrete-time LTI systems"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "simulate a model and write a trajectory");
  s->add_option("--model", sim.model, "model JSON");
  s->add_option("--example", sim.example, "built-in model: low-pass, high-pass, unstable-mimo");
  s->add_option("--input", sim.input, "prbs, gaussian, impulse or file:PATH");
  s->add_option("--N", sim.N, "trajectory length")->check(CLI::PositiveNumber);
  s->add_option("--noise", sim.noise, "ball:V_BAR adds sampled output noise");
  s->add_option("--seed", sim.seed, "RNG seed (noise uses seed + 1)");
  s->add_option("--l", sim.l, "lag used by the noisy recursion (default: model lag)");
  s->add_option("--out", sim.out, "output .json or .csv")->required();

  CheckArgs chk;
  auto* c = app.add_subcommand("check", "excitation and lag diagnostics");
  c->add_option("--trajectory", chk.trajectory, "trajectory JSON or CSV");
  c->add_option("--model", chk.model, "model JSON");
  c->add_option("--l", chk.l, "lag bound");
  c->add_option("--n", chk.n, "state count");
  c->add_option("--order", chk.order, "check persistent excitation of this order");
  c->add_flag("--json", chk.json_out, "print a JSON report");

  SrgArgs srg;
  auto* g = app.add_subcommand("srg", "gain profile and SRG region");
  g->add_option("--mode", srg.mode, "ss, data or robust")->required();
  g->add_option("--model", srg.model, "model JSON (ss)");
  g->add_option("--example", srg.example, "built-in model (ss)");
  g->add_option("--trajectory", srg.trajectory, "trajectory (data, robust)");
  g->add_option("--kind", srg.kind, "trunc or l2");
  g->add_option("--alpha-count", srg.alpha_count, "alpha grid size")
      ->check(CLI::PositiveNumber);
  g->add_option("--alpha-window", srg.alpha_window, "a,b")->delimiter(',')->expected(2);
  g->add_option("--alphas", srg.alphas, "explicit alpha list")->delimiter(',');
  g->add_option("--window", srg.window, "re0,re1,im0,im1")->delimiter(',')->expected(4);
  g->add_option("--res", srg.res, "WxH raster resolution");
  g->add_option("--l", srg.l, "lag bound (data, robust)");
  g->add_option("--n", srg.n, "state count: enables the excitation check");
  g->add_flag("--l-from-n", srg.l_from_n, "use l = n");
  g->add_option("--noise", srg.noise, "ball:V_BAR or file:PATH (robust)");
  g->add_option("--seed", srg.seed, "recorded in the report");
  g->add_option("--rel-tol", srg.rel_tol, "relative bisection tolerance");
  g->add_flag("--conservative", srg.conservative, "mark cells the region may touch");
  g->add_option("--out", srg.out, "output directory");
  g->add_option("--threads", srg.threads, "workers for the alpha sweep (0: all cores)");

  ReproduceArgs rep;
  auto* r = app.add_subcommand("reproduce", "regenerate an example figure bundle");
  r->add_option("--example", rep.example, "fig2, fig3-low or fig3-high")->required();
  r->add_option("--out", rep.out, "output directory");
  r->add_option("--res", rep.res, "WxH raster resolution");
  r->add_option("--alpha-count", rep.alpha_count, "alpha grid size")
      ->check(CLI::PositiveNumber);
  r->add_option("--v-bar", rep.v_bar, "noise ball radius")->check(CLI::PositiveNumber);
  r->add_option("--N", rep.N, "trajectory length")->check(CLI::PositiveNumber);
  r->add_option("--seed", rep.seed, "RNG seed");
  r->add_option("--threads", rep.threads, "workers for the alpha sweep");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitSchema;
  }

  try {
    if (s->parsed()) return Simulate(sim, out);
    if (c->parsed()) return Check(chk, out);
    if (g->parsed()) {
      return Srg(srg, std::vector<std::string>(argv, argv + argc), out, err);
    }
    if (r->parsed()) return Reproduce(rep, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(std::current_exception());
  }
  return kExitFailure;
}

}  // namespace srgkit::cli

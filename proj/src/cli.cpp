#include "lrdmd/cli.hpp"
#include "lrdmd/errors.hpp"
#include "lrdmd/io.hpp"
#include "lrdmd/physical.hpp"
#include "lrdmd/reduced_models.hpp"
#include "lrdmd/rng.hpp"
#include "lrdmd/solver.hpp"
#include "lrdmd/svg.hpp"
#include "lrdmd/sweep.hpp"
#include "lrdmd/toy.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

namespace lrdmd::cli {

namespace {

class VerificationFailed : public Error {
 public:
  using Error::Error;
};

struct Globals {
  std::uint64_t seed = 0;
  double rank_tol = default_rank_tol;
  std::string out = ".";
  bool quiet = false;
};

// Noise draws use a stream separate from the clean data.
constexpr std::uint64_t noise_stream = 0x9e3779b97f4a7c15ULL;

const std::vector<std::string> generator_names = {"toy-i",  "toy-ii", "toy-iii",      "rb-iv",
                                                  "rb-v",   "rb-vi",  "spectral-vii", "spectral-viii"};

std::vector<Index> parse_k_range(const std::string& text, Index m) {
  std::vector<Index> ks;
  auto to_index = [&](const std::string& s) -> Index {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw InvalidInput("bad k value '" + s + "'");
    return static_cast<Index>(v);
  };
  if (text.empty()) {
    for (Index k = 1; k <= m; ++k) ks.push_back(k);
  } else if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() < 2 || parts.size() > 3) throw InvalidInput("k range must be a:b or a:b:step");
    const Index a = to_index(parts[0]), b = to_index(parts[1]);
    const Index step = parts.size() == 3 ? to_index(parts[2]) : 1;
    if (step < 1) throw InvalidInput("k range step must be positive");
    for (Index k = a; k <= b; k += step) ks.push_back(k);
  } else {
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) ks.push_back(to_index(p));
  }
  if (ks.empty()) throw InvalidInput("empty k range '" + text + "'");
  for (Index k : ks)
    if (k < 1 || k > m)
      throw InvalidRank("k = " + std::to_string(k) + " outside [1, " + std::to_string(m) + "]");
  return ks;
}

std::vector<Method> parse_methods(const std::string& text) {
  std::vector<Method> ms;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ',');) ms.push_back(parse_method(p));
  if (ms.empty()) throw InvalidInput("no methods given");
  return ms;
}

json preset_json(const PhysicalPreset& p) {
  return json{{"setting", to_string(p.setting)},
              {"prandtl", p.rb.prandtl},
              {"rayleigh", p.rb.rayleigh},
              {"grid", {p.rb.grid.n1, p.rb.grid.n2}},
              {"dt", p.rb.dt},
              {"sample_stride", p.rb.sample_stride},
              {"trajectories", p.trajectories},
              {"length", p.length},
              {"linear", p.linear},
              {"a_tau", "2 pi {1, 2, 3}, uniform"},
              {"amplitude_scale", p.amplitude_scale},
              {"perturbation_scale", p.perturbation_scale}};
}

json rb_scheme_json(const PhysicalPreset& p) {
  return json{{"description", rb_scheme_description()},
              {"dt", p.rb.dt},
              {"sample_stride", p.rb.sample_stride},
              {"sample_interval", p.rb.dt * static_cast<double>(p.rb.sample_stride)}};
}

struct GenerateArgs {
  std::string name;
  Index n = 50, m = 40, r = 30;
  double psnr = 20.0;
};

void cmd_generate(const GenerateArgs& a, const Globals& g, std::ostream& out) {
  json manifest{{"generator", a.name}, {"seed", g.seed}, {"rng", Rng::algorithm}};
  std::optional<SnapshotPair> data;
  std::optional<SpectralModel> truth;

  if (a.name.rfind("toy-", 0) == 0) {
    ToyConfig cfg{parse_toy_setting(a.name.substr(4)), a.n, a.m, a.r, g.seed};
    data = gen_toy(cfg);
    manifest["config"] = json{{"setting", to_string(cfg.setting)}, {"n", cfg.n}, {"m", cfg.m}, {"r", cfg.r}};
    manifest["scheme"] = json{{"description", "independent standard normal states, one step each"}};
  } else if (a.name.rfind("rb-", 0) == 0) {
    const PhysicalDataset ds = gen_physical_dataset(parse_physical_setting(a.name.substr(3)), g.seed);
    data = ds.data;
    manifest["config"] = preset_json(ds.preset);
    manifest["config"]["hypercube_samples"] = ds.samples;
    manifest["scheme"] = rb_scheme_json(ds.preset);
  } else if (a.name == "spectral-vii" || a.name == "spectral-viii") {
    truth = spectral_truth_base(g.seed);
    data = gen_spectral_truth(*truth, 5, 11, g.seed);
    manifest["config"] = json{{"base", "orthonormal rank-3 optimal basis of rb-vi data, eigenvalues 0.95, 0.85, 0.75"},
                              {"base_seed", g.seed},
                              {"trajectories", 5},
                              {"length", 11}};
    const PhysicalPreset vi = physical_preset(PhysicalSetting::vi);
    manifest["scheme"] = rb_scheme_json(vi);
    if (a.name == "spectral-viii") {
      const double sigma = psnr_noise_sigma(*data, a.psnr);
      data = add_noise_psnr(*data, a.psnr, g.seed ^ noise_stream);
      manifest["config"]["psnr_db"] = a.psnr;
      manifest["config"]["noise_sigma"] = sigma;
      manifest["config"]["noise_seed"] = g.seed ^ noise_stream;
    }
  } else {
    throw InvalidInput("unknown generator '" + a.name + "'");
  }

  const fs::path dir(g.out);
  save_dataset(dir, *data, manifest);
  if (truth) save_json(dir / "truth-spectral.json", spectral_to_json(*truth, ModelProvenance{"", "optimal", 3, g.rank_tol}));
  if (!g.quiet)
    out << "generated " << a.name << ": n = " << data->n() << ", m = " << data->m() << ", N = "
        << data->trajectories() << ", T = " << data->length() << " -> " << dir.string() << "\n";
}

struct FitArgs {
  std::string data;
  std::string method = "optimal";
  Index k = 0;
};

void cmd_fit(const FitArgs& a, const Globals& g, std::ostream& out) {
  const Dataset ds = load_dataset(a.data);
  const SolverOptions opts{g.rank_tol};
  if (a.k < 1 || a.k > ds.data.m())
    throw InvalidRank("k = " + std::to_string(a.k) + " outside [1, " + std::to_string(ds.data.m()) + "]");
  const Method method = parse_method(a.method);

  const FactoredOperator op = solve(method, ds.data, a.k, opts);
  std::optional<double> cf;
  if (method == Method::optimal) cf = optimal_error_closed_form(ds.data, a.k, opts);
  const ErrorReport rep = evaluate(op, ds.data, cf);

  const ModelProvenance prov{ds.manifest_hash, to_string(method), a.k, g.rank_tol};
  const fs::path dir(g.out);
  save_json(dir / (to_string(method) + "-factored.json"), factored_to_json(op, prov));

  if (!g.quiet) {
    out << "method: " << to_string(method) << "\nk: " << a.k << "\neffective_rank: " << op.rank()
        << "\ndirect_error: " << format_double(rep.direct_error)
        << "\nnormalized_error: " << format_double(rep.normalized) << "\n";
    if (rep.closed_form_error) {
      const double ny = ds.data.Y().norm();
      out << "closed_form_error: " << format_double(*rep.closed_form_error)
          << "\nclosed_form_normalized: " << format_double(ny > 0 ? *rep.closed_form_error / ny : 0.0) << "\n";
    }
    const std::string flags = describe_flags(op.flags);
    out << "flags: " << (flags.empty() ? "none" : flags) << "\n";
  }

  if (method != Method::optimal || op.rank() == 0) return;
  save_json(dir / "optimal-reduced.json", reduced_to_json(build_svd_reduced_model(op), prov));
  const SpectralModel sm = build_spectral_model(op);
  save_json(dir / "optimal-spectral.json", spectral_to_json(sm, prov));
  if (!g.quiet) {
    out << "eigenvalues:";
    for (Index i = 0; i < sm.rank(); ++i)
      out << " " << format_double(sm.eigvals(i).real()) << (sm.eigvals(i).imag() < 0 ? "-" : "+")
          << format_double(std::abs(sm.eigvals(i).imag())) << "i";
    out << "\ndiagonalisability_warning: " << (sm.diagonalisability_warning ? "yes" : "no")
        << " (eigenvector condition " << format_double(sm.eigvec_condition) << ")\n";
  }
}

struct SweepArgs {
  std::string data;
  std::string ks;
  std::string methods = "optimal,truncated,projected";
};

std::string csv_field(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

void cmd_sweep(const SweepArgs& a, const Globals& g, std::ostream& out) {
  const Dataset ds = load_dataset(a.data);
  const std::vector<Index> ks = parse_k_range(a.ks, ds.data.m());
  const std::vector<Method> methods = parse_methods(a.methods);
  const ErrorCurve curve = error_sweep(ds.data, ks, methods, SolverOptions{g.rank_tol});

  std::ostringstream csv;
  csv << "k,method,normalized_error,closed_form_error,flags\n";
  std::size_t ok = 0;
  for (const SweepCell& c : curve.cells) {
    csv << c.k << ',' << to_string(c.method) << ',';
    if (c.ok) csv << format_double(c.normalized);
    csv << ',';
    if (c.closed_form) csv << format_double(*c.closed_form);
    csv << ',' << csv_field(c.flags) << '\n';
    ok += c.ok ? 1 : 0;
  }

  std::vector<Series> series;
  for (Method m : methods) {
    Series s{to_string(m), {}, curve.column(m)};
    for (Index k : ks) s.x.push_back(static_cast<double>(k));
    series.push_back(std::move(s));
  }
  ChartOptions chart;
  chart.title = "error sweep: " + ds.manifest.value("generator", std::string("dataset"));

  const fs::path dir(g.out);
  write_text_file(dir / "sweep.csv", csv.str());
  write_text_file(dir / "sweep.svg", render_log_chart(series, chart));
  if (!g.quiet) out << "sweep: " << ok << " of " << curve.cells.size() << " cells succeeded -> " << dir.string() << "\n";
  if (ok == 0) throw InvalidInput("every sweep cell failed");
}

struct SimulateArgs {
  std::string model;
  std::string theta;
  std::string data;
  Index column = -1;
  Index T = 11;
  std::string output;
};

Vector load_theta(const SimulateArgs& a) {
  if (!a.theta.empty()) {
    const Matrix M = load_matrix_csv(a.theta);
    if (M.cols() == 1) return M.col(0);
    if (M.rows() == 1) return M.row(0).transpose();
    throw DimensionMismatch("theta file must hold a single row or column");
  }
  if (a.data.empty() || a.column < 0) throw InvalidInput("simulate needs --theta or --data with --column");
  const Dataset ds = load_dataset(a.data);
  if (a.column >= ds.data.m())
    throw InvalidInput("column " + std::to_string(a.column) + " outside the dataset's " +
                       std::to_string(ds.data.m()) + " columns");
  return ds.data.X().col(a.column);
}

void cmd_simulate(const SimulateArgs& a, const Globals& g, std::ostream& out) {
  if (a.T < 1) throw InvalidInput("T must be at least 1");
  const json doc = load_json(a.model);
  const Vector theta = load_theta(a);
  const ModelKind kind = model_kind(doc);

  auto check_dim = [&](Index n) {
    if (theta.size() != n)
      throw DimensionMismatch("theta has " + std::to_string(theta.size()) + " entries, model dimension is " +
                              std::to_string(n));
  };
  Matrix states;
  switch (kind) {
    case ModelKind::factored: {
      const FactoredOperator op = factored_from_json(doc);
      check_dim(op.dim());
      states = simulate_operator(op, theta, a.T);
      break;
    }
    case ModelKind::reduced: {
      const ReducedModel m = reduced_from_json(doc);
      check_dim(m.dim());
      states = simulate_reduced(m, theta, a.T);
      break;
    }
    case ModelKind::spectral: {
      const SpectralModel m = spectral_from_json(doc);
      check_dim(m.dim());
      states = simulate_spectral(m, theta, a.T);
      break;
    }
  }
  std::ostringstream os;
  write_trajectory_csv(os, states);
  const fs::path path = a.output.empty() ? fs::path(g.out) / "trajectory.csv" : fs::path(a.output);
  write_text_file(path, os.str());
  if (!g.quiet) out << "simulated " << to_string(kind) << " model for T = " << a.T << " -> " << path.string() << "\n";
}

struct VerifyArgs {
  std::string data;
  Index k = 0;
  std::string model;
};

struct Check {
  std::string name;
  double value;
  double tol;
  bool pass() const { return std::isfinite(value) && value <= tol; }
};

void cmd_verify(const VerifyArgs& a, const Globals& g, std::ostream& out) {
  const Dataset ds = load_dataset(a.data);
  const SnapshotPair& data = ds.data;
  const SolverOptions opts{g.rank_tol};

  std::optional<json> model;
  Index k = a.k;
  if (!a.model.empty()) {
    model = load_json(a.model);
    if (k == 0) k = provenance_from_json(*model).k;
  }
  if (k < 1 || k > data.m())
    throw InvalidRank("k = " + std::to_string(k) + " outside [1, " + std::to_string(data.m()) + "]");

  const FactoredOperator ref = optimal_lowrank(data, k, opts);
  FactoredOperator op = ref;
  std::optional<SpectralModel> spectral;
  if (model) {
    switch (model_kind(*model)) {
      case ModelKind::factored: op = factored_from_json(*model); break;
      case ModelKind::reduced: {
        const ReducedModel rm = reduced_from_json(*model);
        op = FactoredOperator{rm.R, rm.L, rm.rank(), {}};
        break;
      }
      case ModelKind::spectral: spectral = spectral_from_json(*model); break;
    }
    if (op.dim() != data.n()) throw DimensionMismatch("model dimension differs from the dataset's");
    if (spectral && spectral->dim() != data.n()) throw DimensionMismatch("model dimension differs from the dataset's");
  }
  if (!spectral && op.rank() > 0) spectral = build_spectral_model(op);

  // Errors formed through X^+ carry roundoff of order eps * cond(X).
  const ThinSVD sx = thin_svd(data.X());
  const ThinSVD sy = thin_svd(data.Y());
  const Index rx = numerical_rank(sx, g.rank_tol), ry = numerical_rank(sy, g.rank_tol);
  const double cond = rx > 0 ? sx.S(0) / sx.S(rx - 1) : 1.0;
  const double eps = std::numeric_limits<double>::epsilon();
  const double round_tol = 1e-8 + 10.0 * eps * cond;

  const double ny = data.Y().norm();
  const double scale = ny > 0 ? ny : 1.0;
  const double direct = direct_error(op, data);
  const double cf = optimal_error_closed_form(data, k, opts);
  const double second = row_space_residual(data, opts);

  std::vector<Check> checks;
  double kappa = 0.0;
  checks.push_back({"closed_form_gap", std::abs(direct - cf) / scale, round_tol});
  checks.push_back({"first_order_residual", op.rank() > 0 ? first_order_residual(op, data) : 0.0, round_tol});
  const Index bound = std::min({k, rx, ry});
  checks.push_back({"rank_bound", static_cast<double>(std::max<Index>(0, op.rank() - bound)), 0.0});
  if (spectral && spectral->rank() > 0) {
    const FactoredOperator& a_op = model && model_kind(*model) == ModelKind::spectral ? ref : op;
    const double lmax = spectral->eigvals.cwiseAbs().maxCoeff();
    checks.push_back({"eigen_residual_right", right_eigen_residual(a_op, *spectral), 1e-8});
    checks.push_back({"eigen_residual_left", left_eigen_residual(a_op, *spectral), 1e-8});
    // xi^T zeta and xi^T A zeta carry roundoff of order eps * kappa for an
    // eigenvalue with condition number kappa
    kappa = max_eigen_condition(*spectral);
    const double kappa_tol = 1e-8 + 10.0 * eps * kappa;
    const double anorm = operator_norm_fro(a_op);
    checks.push_back({"eigen_rayleigh", rayleigh_residual(a_op, *spectral) / std::max({1.0, lmax, anorm}),
                      kappa_tol});
    checks.push_back({"eigen_biorthonormality", normalization_residual(*spectral), kappa_tol});
  }

  if (!g.quiet) {
    out << "k: " << k << "\nrank_x: " << rx << "\nrank_y: " << ry << "\neffective_rank: " << op.rank()
        << "\ncond_x: " << format_double(cond) << "\ndirect_error_normalized: " << format_double(direct / scale)
        << "\nclosed_form_normalized: " << format_double(cf / scale)
        << "\nsecond_error_term: " << format_double(second) << "\neigen_condition_max: " << format_double(kappa)
        << "\n";
    for (const Check& c : checks)
      out << "check " << c.name << ": " << format_double(c.value) << " (tol " << format_double(c.tol) << ") "
          << (c.pass() ? "PASS" : "FAIL") << "\n";
  }
  std::string failed;
  for (const Check& c : checks)
    if (!c.pass()) failed += (failed.empty() ? "" : ", ") + c.name;
  if (!failed.empty()) throw VerificationFailed("verification failed: " + failed);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Low-rank dynamic mode decomposition: data generation, fitting, sweeps and simulation", "lrdmd"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--rank-tol", g.rank_tol, "Relative singular value cutoff")->capture_default_str();
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_flag("--quiet", g.quiet, "Suppress reports");

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "Write a dataset (manifest.json, X.csv, Y.csv)");
  gen->add_option("generator", ga.name, "Generator name")->required()->check(CLI::IsMember(generator_names));
  gen->add_option("--n", ga.n, "Toy state dimension")->capture_default_str();
  gen->add_option("--m", ga.m, "Toy snapshot count")->capture_default_str();
  gen->add_option("--r", ga.r, "Toy driver rank")->capture_default_str();
  gen->add_option("--psnr", ga.psnr, "Noise level in dB for spectral-viii")->capture_default_str();

  FitArgs fa;
  auto* fit = app.add_subcommand("fit", "Fit a rank-k operator and write model files");
  fit->add_option("--data", fa.data, "Dataset directory")->required();
  fit->add_option("--method", fa.method, "optimal, truncated or projected")->capture_default_str();
  fit->add_option("--k", fa.k, "Rank")->required();

  SweepArgs sa;
  auto* sweep = app.add_subcommand("sweep", "Error against k for several methods (sweep.csv, sweep.svg)");
  sweep->add_option("--data", sa.data, "Dataset directory")->required();
  sweep->add_option("--k-range", sa.ks, "a:b, a:b:step or a comma list (default 1:m)");
  sweep->add_option("--methods", sa.methods, "Comma-separated methods")->capture_default_str();

  SimulateArgs ma;
  auto* sim = app.add_subcommand("simulate", "Run a model from an initial state");
  sim->add_option("--model", ma.model, "Model file")->required();
  sim->add_option("--theta", ma.theta, "Initial state as a single-row or single-column matrix file");
  sim->add_option("--data", ma.data, "Dataset directory providing the initial state");
  sim->add_option("--column", ma.column, "Column of the dataset's X used as initial state");
  sim->add_option("--T", ma.T, "Number of states")->capture_default_str();
  sim->add_option("--output", ma.output, "Output file (default <out>/trajectory.csv)");

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "Consistency checks of the optimal solution");
  ver->add_option("--data", va.data, "Dataset directory")->required();
  ver->add_option("--k", va.k, "Rank (default: the model's)");
  ver->add_option("--model", va.model, "Model file to check instead of a fresh fit");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }

  try {
    if (*gen) cmd_generate(ga, g, out);
    else if (*fit) cmd_fit(fa, g, out);
    else if (*sweep) cmd_sweep(sa, g, out);
    else if (*sim) cmd_simulate(ma, g, out);
    else if (*ver) cmd_verify(va, g, out);
    return ok;
  } catch (const VerificationFailed& e) {
    err << e.what() << "\n";
    return verification_failure;
  } catch (const SimulationBlowup& e) {
    err << "simulation failed: " << e.what() << "\n";
    return simulation_failure;
  } catch (const PairingFailure& e) {
    err << "spectral pairing failed: " << e.what() << "\n";
    return pairing_failure;
  } catch (const EigFailure& e) {
    err << "eigensolver failed: " << e.what() << "\n";
    return pairing_failure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace lrdmd::cli

#include "drbm/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <memory>
#include <ostream>

#include <CLI11.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "drbm/checks.hpp"
#include "drbm/error.hpp"

namespace drbm::cli {

namespace {

using Settings = std::map<std::string, std::string>;

const std::vector<std::string> kModelKeys = {"mu1", "mu2", "sigma1", "sigma2", "r1", "r2"};
const std::vector<std::string> kSimulationKeys = {"dt",     "horizon", "burn_in", "paths",
                                                  "seed",   "blocks",  "bins",    "quantile",
                                                  "estimator"};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

void check_key(const std::string& key, std::string_view origin) {
  const auto& keys = config_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
    throw Error(ErrorCode::Config, fmt::format("unknown key '{}' in {}", key, origin));
  }
}

// Shared by every subcommand: where parameters and knobs come from.
struct Sources {
  std::string preset;
  std::string config;
  std::string output;
  std::vector<std::string> overrides;
  std::map<std::string, std::string> flags;
  std::map<std::string, CLI::Option*> flag_options;

  void attach(CLI::App& app, const std::vector<std::string>& keys) {
    app.add_option("--preset", preset, "Named parameter set")
        ->check(CLI::IsMember(preset_names()));
    app.add_option("--config", config, "Flat key = value file");
    app.add_option("--set", overrides, "key=value override (repeatable)");
    app.add_option("-o,--output", output, "Output file (default: stdout)");
    for (const auto& key : keys) {
      std::string flag = key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      flag_options[key] = app.add_option("--" + flag, flags[key]);
    }
  }

  // Preset, then config file, then --set, then explicit flags.
  Settings resolve() const {
    Settings s;
    if (!preset.empty()) {
      const ModelParams p = *cli::preset(preset);
      s["mu1"] = format_rational(p.mu1);
      s["mu2"] = format_rational(p.mu2);
      s["sigma1"] = format_rational(p.sigma1);
      s["sigma2"] = format_rational(p.sigma2);
      s["r1"] = format_rational(p.r1);
      s["r2"] = format_rational(p.r2);
    }
    if (!config.empty()) {
      for (const auto& [k, v] : read_config(config)) s[k] = v;
    }
    for (const auto& o : overrides) {
      const auto eq = o.find('=');
      if (eq == std::string::npos) {
        throw Error(ErrorCode::Config, fmt::format("override '{}' is not key=value", o));
      }
      const std::string key = trim(std::string_view(o).substr(0, eq));
      check_key(key, "--set");
      s[key] = trim(std::string_view(o).substr(eq + 1));
    }
    for (const auto& [key, option] : flag_options) {
      if (option->count() > 0) s[key] = flags.at(key);
    }
    return s;
  }
};

Rational rational_setting(const Settings& s, const std::string& key,
                          std::optional<Rational> fallback = std::nullopt) {
  const auto it = s.find(key);
  if (it == s.end()) {
    if (fallback) return *fallback;
    throw Error(ErrorCode::Config, fmt::format("missing parameter '{}'", key));
  }
  const auto q = parse_rational(it->second);
  if (!q) {
    throw Error(ErrorCode::Config,
                fmt::format("'{}' = '{}' is not an exact rational p/q", key, it->second));
  }
  return *q;
}

ModelParams model_from(const Settings& s) {
  ModelParams p;
  p.mu1 = rational_setting(s, "mu1");
  p.mu2 = rational_setting(s, "mu2");
  p.sigma1 = rational_setting(s, "sigma1", Rational{1});
  p.sigma2 = rational_setting(s, "sigma2", Rational{1});
  p.r1 = rational_setting(s, "r1");
  p.r2 = rational_setting(s, "r2");
  return p;
}

// Validates and reports the first violated hypothesis by name.
ModelParams checked_model(const Settings& s) {
  const ModelParams p = model_from(s);
  normalize(p);
  return p;
}

double number_setting(const Settings& s, const std::string& key, double fallback) {
  const auto it = s.find(key);
  if (it == s.end()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::Config, fmt::format("'{}' = '{}' is not a number", key, it->second));
  }
}

SimConfig simulation_from(const Settings& s, const ModelParams& params) {
  SimConfig c;
  c.params = params;
  c.dt = number_setting(s, "dt", c.dt);
  c.horizon = number_setting(s, "horizon", c.horizon);
  if (s.count("burn_in")) c.burn_in = number_setting(s, "burn_in", 0.0);
  c.paths = static_cast<int>(number_setting(s, "paths", c.paths));
  c.seed = static_cast<std::uint64_t>(number_setting(s, "seed", static_cast<double>(c.seed)));
  c.blocks = static_cast<int>(number_setting(s, "blocks", c.blocks));
  c.bins = static_cast<int>(number_setting(s, "bins", c.bins));
  c.upper_quantile = number_setting(s, "quantile", c.upper_quantile);
  if (const auto it = s.find("estimator"); it != s.end()) {
    if (it->second == "time-average") {
      c.estimator = Estimator::TimeAverage;
    } else if (it->second == "ensemble") {
      c.estimator = Estimator::EnsembleAtHorizon;
    } else {
      throw Error(ErrorCode::Config, "estimator must be time-average or ensemble");
    }
  }
  return c;
}

// Writes to the requested file, or to `fallback` when none was given.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw Error(ErrorCode::Config, "cannot open output file " + path);
      out_ = file_.get();
    }
  }
  std::ostream& operator*() { return *out_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* out_;
};

nlohmann::ordered_json optional_rational(const std::optional<Rational>& q) {
  if (!q) return nullptr;
  return format_rational(*q);
}

int classify_command(const Sources& src, std::ostream& out) {
  const ModelParams p = checked_model(src.resolve());
  const DerivedConstants c = derive(normalize(p));
  const NatureClass nature = classify(c);
  nlohmann::ordered_json j;
  j["gamma"] = optional_rational(c.gamma);
  j["gamma1"] = optional_rational(c.gamma1);
  j["gamma2"] = optional_rational(c.gamma2);
  j["s1"] = optional_rational(c.s1);
  j["s2"] = optional_rational(c.s2);
  j["verdict"] = to_string(nature.verdict);
  j["trigger"] = to_string(nature.trigger);
  j["transform_case"] = to_string(build_case(c));
  Sink sink(src.output, out);
  *sink << j.dump(2) << '\n';
  return kOk;
}

struct LaplaceOptions {
  std::string function = "phi1";
  double from = -5.0;
  double to = 0.0;
  int points = 101;
  double imag = 0.0;
};

int eval_laplace_command(const Sources& src, const LaplaceOptions& o, std::ostream& out) {
  const Transforms t(checked_model(src.resolve()));
  if (o.points < 1) throw Error(ErrorCode::Config, "points must be positive");
  auto node = [&](int i) {
    return o.points == 1 ? o.from : o.from + (o.to - o.from) * i / (o.points - 1);
  };
  Sink sink(src.output, out);
  if (o.function == "phi") {
    *sink << "x,y,re,im\n";
    for (int i = 0; i < o.points; ++i) {
      for (int k = 0; k < o.points; ++k) {
        const Complex x{node(i), o.imag};
        const Complex y{node(k), o.imag};
        const Complex v = t.bivariate(x, y);
        *sink << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", x.real(), y.real(), v.real(),
                             v.imag());
      }
    }
    return kOk;
  }
  const bool first = o.function == "phi1";
  *sink << (first ? "y" : "x") << ",re,im\n";
  for (int i = 0; i < o.points; ++i) {
    const Complex arg{node(i), o.imag};
    const Complex v = first ? t.phi1(arg) : t.phi2(arg);
    *sink << fmt::format("{:.17g},{:.17g},{:.17g}\n", arg.real(), v.real(), v.imag());
  }
  return kOk;
}

struct DensityOptions {
  int axis = 1;
  double vmax = 20.0;
  int points = 400;
};

// Rows (v, density, cumulative mass) on an even grid of (0, vmax].
void write_density(const BoundaryDensity& d, double vmax, int points, std::ostream& out,
                   const std::string& prefix = {}) {
  using Quadrature = boost::math::quadrature::gauss_kronrod<double, 31>;
  auto f = [&](double v) { return d(v); };
  double mass = 0.0;
  double previous = 0.0;
  for (int i = 1; i <= points; ++i) {
    const double v = vmax * i / points;
    mass += Quadrature::integrate(f, previous, v, 10, 1e-12);
    previous = v;
    out << prefix << fmt::format("{:.17g},{:.17g},{:.17g}\n", v, d(v), mass);
  }
}

int eval_density_command(const Sources& src, const DensityOptions& o, std::ostream& out) {
  const ModelParams p = checked_model(src.resolve());
  if (o.points < 1 || !(o.vmax > 0.0)) {
    throw Error(ErrorCode::Config, "need points >= 1 and vmax > 0");
  }
  const BoundaryDensity d(p, o.axis == 1 ? Axis::Phi1 : Axis::Phi2);
  Sink sink(src.output, out);
  *sink << "v,density,mass\n";
  write_density(d, o.vmax, o.points, *sink);
  return kOk;
}

int simulate_command(const Sources& src, const std::string& histograms, std::ostream& out) {
  const Settings s = src.resolve();
  const SimConfig config = simulation_from(s, checked_model(s));
  const EmpiricalSummary summary = simulate(config);
  Sink sink(src.output, out);
  write_summary_json(summary, *sink);
  if (!histograms.empty()) {
    for (int face : {1, 2}) {
      std::ofstream file(fmt::format("{}{}.csv", histograms, face));
      if (!file) throw Error(ErrorCode::Config, "cannot write histogram to " + histograms);
      write_histogram_csv(face == 1 ? summary.boundary1 : summary.boundary2, file);
    }
  }
  return kOk;
}

int validate_command(const Sources& src, bool no_simulation, std::ostream& out) {
  const Settings s = src.resolve();
  const ModelParams p = checked_model(s);
  SuiteOptions options;
  options.simulation = !no_simulation;
  options.simulation_config = simulation_from(s, p);
  const auto results = validation_suite(p, options);
  Sink sink(src.output, out);
  bool ok = true;
  for (const auto& r : results) {
    const char* status = !r.applicable ? "SKIP" : (r.passed ? "PASS" : "FAIL");
    ok = ok && r.passed;
    if (r.applicable) {
      *sink << fmt::format("{} {}: {:.3g} (limit {:.3g}) {}\n", status, r.name, r.value,
                           r.tolerance, r.detail);
    } else {
      *sink << fmt::format("{} {}: {}\n", status, r.name, r.detail);
    }
  }
  return ok ? kOk : kValidationFailed;
}

struct PlotOptions {
  int curves = 5;
  double vmax = 10.0;
  int points = 200;
};

// nu1 across mu1 in the recurrence interval (r2/(1+r2), 1/(1+r1)), mu2 = 1 - mu1.
int export_plots_command(const Sources& src, const PlotOptions& o, std::ostream& out,
                         std::ostream& err) {
  const Settings s = src.resolve();
  Settings base = s;
  if (!base.count("mu1")) base["mu1"] = "1/2";
  if (!base.count("mu2")) base["mu2"] = "1/2";
  const ModelParams p = model_from(base);
  const Rational one{1};
  Rational lo{0};
  Rational hi{1};
  if (p.r2 + one > Rational{0}) lo = std::max(lo, p.r2 / (one + p.r2));
  if (p.r1 + one > Rational{0}) hi = std::min(hi, one / (one + p.r1));
  if (!(lo < hi)) throw Error(ErrorCode::Config, "empty recurrence interval for mu1");

  Sink sink(src.output, out);
  *sink << "mu1,v,density,mass\n";
  int written = 0;
  for (int k = 1; k <= o.curves; ++k) {
    ModelParams q = p;
    q.mu1 = lo + (hi - lo) * Rational(k, o.curves + 1);
    q.mu2 = one - q.mu1;
    if (!validate(q).passed()) {
      err << fmt::format("mu1 = {}: hypotheses fail, skipped\n", format_rational(q.mu1));
      continue;
    }
    try {
      const BoundaryDensity d(q, Axis::Phi1);
      write_density(d, o.vmax, o.points, *sink, format_rational(q.mu1) + ",");
      ++written;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::UnsupportedCase) throw;
      err << fmt::format("mu1 = {}: {}\n", format_rational(q.mu1), e.what());
    }
  }
  return written > 0 ? kOk : kUnsupported;
}

}  // namespace

std::optional<ModelParams> preset(std::string_view name) {
  ModelParams p;
  if (name == "symmetric") {
    p.r1 = Rational(-1, 2);
    p.r2 = Rational(-1, 2);
  } else if (name == "skew") {
    p.mu1 = Rational(1, 4);
    p.mu2 = Rational(3, 4);
    p.r1 = Rational(1);
    p.r2 = Rational(-3);
  } else if (name == "appendix-r1") {
    // r1 = -1 with gamma2 = 2.
    p.r1 = Rational(-1);
    p.r2 = Rational(-1, 5);
  } else if (name == "transcendental") {
    p.r1 = Rational(1, 2);
    p.r2 = Rational(1, 3);
  } else {
    return std::nullopt;
  }
  return p;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"symmetric", "skew", "appendix-r1",
                                                 "transcendental"};
  return names;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> all = kModelKeys;
    all.insert(all.end(), kSimulationKeys.begin(), kSimulationKeys.end());
    return all;
  }();
  return keys;
}

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot read config file " + path);
  std::map<std::string, std::string> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string content = trim(line.substr(0, line.find('#')));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::Config, fmt::format("{}:{}: expected key = value", path, number));
    }
    const std::string key = trim(std::string_view(content).substr(0, eq));
    check_key(key, path);
    out[key] = trim(std::string_view(content).substr(eq + 1));
  }
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stationary boundary measures of a degenerate reflected Brownian motion"};
  app.require_subcommand(1);

  Sources classify_src;
  auto* classify_cmd = app.add_subcommand("classify", "Decoupling constants and verdict (JSON)");
  classify_src.attach(*classify_cmd, kModelKeys);

  Sources laplace_src;
  LaplaceOptions laplace_opts;
  auto* laplace_cmd = app.add_subcommand("eval-laplace", "Evaluate phi1, phi2 or phi (CSV)");
  laplace_src.attach(*laplace_cmd, kModelKeys);
  laplace_cmd->add_option("--function", laplace_opts.function)
      ->check(CLI::IsMember({"phi1", "phi2", "phi"}));
  laplace_cmd->add_option("--from", laplace_opts.from);
  laplace_cmd->add_option("--to", laplace_opts.to);
  laplace_cmd->add_option("--points", laplace_opts.points);
  laplace_cmd->add_option("--imag", laplace_opts.imag, "Imaginary part of every argument");

  Sources density_src;
  DensityOptions density_opts;
  auto* density_cmd = app.add_subcommand("eval-density", "Boundary density on a grid (CSV)");
  density_src.attach(*density_cmd, kModelKeys);
  density_cmd->add_option("--axis", density_opts.axis)->check(CLI::IsMember({1, 2}));
  density_cmd->add_option("--vmax", density_opts.vmax);
  density_cmd->add_option("--points", density_opts.points);

  Sources sim_src;
  std::string histograms;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo summary (JSON) and histograms");
  sim_src.attach(*sim_cmd, config_keys());
  sim_cmd->add_option("--histograms", histograms, "Prefix for <prefix>1.csv, <prefix>2.csv");

  Sources validate_src;
  bool no_simulation = false;
  auto* validate_cmd = app.add_subcommand("validate", "Run every applicable check");
  validate_src.attach(*validate_cmd, config_keys());
  validate_cmd->add_flag("--no-simulation", no_simulation, "Skip the Monte Carlo checks");

  Sources plot_src;
  PlotOptions plot_opts;
  auto* plot_cmd = app.add_subcommand("export-plots", "nu1 family over the admissible mu1 range");
  plot_src.attach(*plot_cmd, kModelKeys);
  plot_cmd->add_option("--curves", plot_opts.curves)->check(CLI::PositiveNumber);
  plot_cmd->add_option("--vmax", plot_opts.vmax);
  plot_cmd->add_option("--points", plot_opts.points)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*classify_cmd) return classify_command(classify_src, out);
    if (*laplace_cmd) return eval_laplace_command(laplace_src, laplace_opts, out);
    if (*density_cmd) return eval_density_command(density_src, density_opts, out);
    if (*sim_cmd) return simulate_command(sim_src, histograms, out);
    if (*validate_cmd) return validate_command(validate_src, no_simulation, out);
    if (*plot_cmd) return export_plots_command(plot_src, plot_opts, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::Config:
      case ErrorCode::Hypothesis: return kConfigError;
      case ErrorCode::UnsupportedCase: return kUnsupported;
      default: return kFailure;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}

}  // namespace drbm::cli

#include "unimix/commands.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "unimix/calibration.hpp"
#include "unimix/circles.hpp"
#include "unimix/dataset.hpp"
#include "unimix/io.hpp"
#include "unimix/lt_theory.hpp"
#include "unimix/mixing.hpp"

namespace unimix {

using nlohmann::json;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename T>
T get_as(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

std::string csv_line(std::initializer_list<std::string> fields) {
  std::string line;
  bool first = true;
  for (const auto& f : fields) {
    if (!first) line += ',';
    line += f;
    first = false;
  }
  line += '\n';
  return line;
}

std::string fmt(double v) { return format_double(v); }

/// Class prior proportional to rho^{-(i-1)/(C-1)}; rho < 1 gives a reversed tail.
ClassPrior prior_from_rho(int num_classes, double rho) {
  if (!(rho > 0.0)) throw ConfigError("target_rho must be > 0");
  Eigen::VectorXd w(num_classes);
  for (int i = 0; i < num_classes; ++i) w[i] = std::pow(rho, -static_cast<double>(i) / (num_classes - 1));
  return ClassPrior::from_weights(w);
}

std::vector<int> class_counts_for(const json& cfg) {
  const int classes = get_as<int>(cfg, "classes");
  std::vector<int> counts = lt_class_counts(classes, get_as<double>(cfg, "rho"), get_as<int>(cfg, "n_max"));
  if (cfg.contains("reverse") && cfg.at("reverse").get<bool>()) std::reverse(counts.begin(), counts.end());
  return counts;
}

}  // namespace

json merge_strict(json base, const json& overrides, const std::string& context) {
  if (!overrides.is_object()) throw ConfigError(context + ": expected a JSON object");
  for (auto it = overrides.begin(); it != overrides.end(); ++it) {
    if (!base.contains(it.key())) throw ConfigError(context + ": unknown key '" + it.key() + "'");
    if (base[it.key()].is_object() && it.value().is_object()) {
      base[it.key()] = merge_strict(base[it.key()], it.value(), context + "." + it.key());
    } else {
      base[it.key()] = it.value();
    }
  }
  return base;
}

// ---------------------------------------------------------------------------
// defaults

json gen_data_defaults() {
  return {{"command", "gen-data"}, {"classes", 10},         {"rho", 100.0},
          {"n_max", 500},          {"dims", 16},            {"cluster_spread", 1.0},
          {"reverse", false},      {"seed", 0}};
}

json verify_dist_defaults() {
  return {{"command", "verify-dist"}, {"classes", 100}, {"rho", 200.0},     {"tau", -1.0},
          {"alpha", 0.5},             {"trials", 0},    {"resolution", nullptr}, {"mode", nullptr},
          {"seed", 7}};
}

json train_defaults() {
  return {{"command", "train"},
          {"classes", 10},
          {"rho", 100.0},
          {"n_max", 500},
          {"dims", 16},
          {"cluster_spread", 1.0},
          {"train_csv", nullptr},
          {"alpha", 0.5},
          {"tau", -1.0},
          {"mix_mode", "full"},
          {"loss", "bayias_ce"},
          {"loss_params", {{"gamma", 1.0}, {"beta", 0.9999}, {"ldam_c", 0.5}, {"la_tau", 1.0}}},
          {"target_rho", 1.0},
          {"t1_steps", nullptr},
          {"t2_steps", 2000},
          {"batch_size", 128},
          {"lr", 0.1},
          {"warmup_steps", nullptr},
          {"decay_steps", nullptr},
          {"decay_factor", 0.01},
          {"momentum", 0.9},
          {"weight_decay", 2e-4},
          {"hidden", {64, 64}},
          {"seed", 0}};
}

json eval_defaults() {
  return {{"command", "eval"},  {"model", nullptr},     {"data", nullptr},       {"bins", 15},
          {"ranges", 15},       {"tace_threshold", 1e-3}, {"density_batch", 100}};
}

json circles_defaults() {
  return {{"command", "circles-demo"}, {"x0", 2.0},  {"y0", 2.0},    {"radius", 1.5}, {"m", 500},
          {"n", 10},                   {"seed", 0},  {"steps", 400}, {"lr", 0.1},     {"batch_size", 64}};
}

// ---------------------------------------------------------------------------
// model serialization

json model_to_json(const Mlp& params) {
  json layers = json::array();
  for (const auto& l : params.layers) {
    std::vector<double> w;
    w.reserve(l.weight.size());
    for (Eigen::Index i = 0; i < l.weight.rows(); ++i) {
      for (Eigen::Index j = 0; j < l.weight.cols(); ++j) w.push_back(l.weight(i, j));
    }
    layers.push_back({{"weight", w}, {"bias", std::vector<double>(l.bias.data(), l.bias.data() + l.bias.size())}});
  }
  return {{"layer_dims", params.layer_dims()}, {"activation", "relu"}, {"layers", layers}};
}

Mlp model_from_json(const json& j) {
  const auto dims = get_as<std::vector<int>>(j, "layer_dims");
  const json& layers = j.at("layers");
  if (dims.size() < 2 || layers.size() != dims.size() - 1) throw ConfigError("model: layer count mismatch");
  Mlp params;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const auto w = layers[l].at("weight").get<std::vector<double>>();
    const auto b = layers[l].at("bias").get<std::vector<double>>();
    const int in = dims[l];
    const int out = dims[l + 1];
    if (static_cast<int>(w.size()) != in * out || static_cast<int>(b.size()) != out) {
      throw ConfigError("model: layer " + std::to_string(l) + " has wrong parameter count");
    }
    DenseLayer<double> layer{Eigen::MatrixXd(out, in), Eigen::VectorXd(out)};
    for (int i = 0; i < out; ++i) {
      for (int k = 0; k < in; ++k) layer.weight(i, k) = w[static_cast<std::size_t>(i) * in + k];
      layer.bias[i] = b[i];
    }
    params.layers.push_back(std::move(layer));
  }
  return params;
}

// ---------------------------------------------------------------------------
// train config

json resolve_train_config(const json& merged) {
  json cfg = merged;
  const int t2 = get_as<int>(cfg, "t2_steps");
  if (t2 < 0) throw ConfigError("t2_steps must be >= 0");
  if (cfg["t1_steps"].is_null()) cfg["t1_steps"] = static_cast<int>(std::lround(0.9 * t2));
  const LrSchedule def = LrSchedule::scaled_default(get_as<double>(cfg, "lr"), t2);
  if (cfg["warmup_steps"].is_null()) cfg["warmup_steps"] = def.warmup_steps;
  if (cfg["decay_steps"].is_null()) cfg["decay_steps"] = def.decay_steps;
  // Parse once so every resolved config is known to be valid.
  const TrainConfig tc = train_config_from_json(cfg);
  tc.validate();
  parse_mix_mode(get_as<std::string>(cfg, "mix_mode"));
  return cfg;
}

TrainConfig train_config_from_json(const json& cfg) {
  TrainConfig tc;
  tc.t1_steps = get_as<int>(cfg, "t1_steps");
  tc.t2_steps = get_as<int>(cfg, "t2_steps");
  tc.batch_size = get_as<int>(cfg, "batch_size");
  tc.lr.base_lr = get_as<double>(cfg, "lr");
  tc.lr.warmup_steps = get_as<int>(cfg, "warmup_steps");
  tc.lr.decay_steps = get_as<std::vector<int>>(cfg, "decay_steps");
  tc.lr.decay_factor = get_as<double>(cfg, "decay_factor");
  tc.momentum = get_as<double>(cfg, "momentum");
  tc.weight_decay = get_as<double>(cfg, "weight_decay");
  tc.mix.alpha = get_as<double>(cfg, "alpha");
  tc.mix.tau = get_as<double>(cfg, "tau");
  tc.mix.mode = parse_mix_mode(get_as<std::string>(cfg, "mix_mode"));
  tc.loss = parse_loss_kind(get_as<std::string>(cfg, "loss"));
  const json& lp = cfg.at("loss_params");
  tc.loss_params.gamma = get_as<double>(lp, "gamma");
  tc.loss_params.beta = get_as<double>(lp, "beta");
  tc.loss_params.ldam_c = get_as<double>(lp, "ldam_c");
  tc.loss_params.la_tau = get_as<double>(lp, "la_tau");
  const double target_rho = get_as<double>(cfg, "target_rho");
  if (target_rho != 1.0) tc.target_prior = prior_from_rho(get_as<int>(cfg, "classes"), target_rho);
  tc.hidden = get_as<std::vector<int>>(cfg, "hidden");
  tc.seed = get_as<std::uint64_t>(cfg, "seed");
  return tc;
}

// ---------------------------------------------------------------------------
// commands

void run_gen_data(const json& cfg, const fs::path& out) {
  const Dataset ds = gen_gaussians(class_counts_for(cfg), get_as<int>(cfg, "dims"),
                                   get_as<double>(cfg, "cluster_spread"), get_as<std::uint64_t>(cfg, "seed"));
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  save_csv(ds, out);
  fs::path meta = out;
  meta += ".meta.json";
  write_json_atomic(meta, cfg);
}

void run_verify_dist(const json& cfg, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  const int classes = get_as<int>(cfg, "classes");
  const LTSpec spec = LTSpec::make(classes, get_as<double>(cfg, "rho"), get_as<double>(cfg, "tau"));
  const int resolution = cfg["resolution"].is_null() ? classes : get_as<int>(cfg, "resolution");

  std::string curves = "kind,y,density\n";
  for (const auto& curve : emit_density_curves(spec, resolution)) {
    for (const auto& p : curve.points) curves += csv_line({to_string(curve.kind), fmt(p.y), fmt(p.density)});
  }
  write_file_atomic(out_dir / "curves.csv", curves);

  const auto trials = get_as<std::int64_t>(cfg, "trials");
  if (trials > 0) {
    std::vector<MixMode> modes;
    if (cfg["mode"].is_null()) {
      modes = {MixMode::vanilla_mixup, MixMode::unimix_factor_only, MixMode::unimix_full};
    } else {
      modes = {parse_mix_mode(get_as<std::string>(cfg, "mode"))};
    }
    const ClassPrior prior = discrete_lt_prior(spec);
    for (MixMode mode : modes) {
      const MixConfig mix{get_as<double>(cfg, "alpha"), mode, spec.tau};
      const ClassPrior hist = mc_xi_aug_histogram(prior, mix, trials, get_as<std::uint64_t>(cfg, "seed"));
      // Closed form of the matching corollary at integer classes, renormalized
      // over the classes so it is comparable with the histogram.
      Eigen::VectorXd closed(classes);
      for (int c = 0; c < classes; ++c) {
        const double y = c + 1.0;
        switch (mode) {
          case MixMode::vanilla_mixup: closed[c] = corollary1_density(y, spec); break;
          case MixMode::unimix_factor_only: closed[c] = corollary2_density(y, spec); break;
          case MixMode::unimix_full: closed[c] = corollary3_density(y, spec); break;
        }
      }
      closed /= closed.sum();
      std::string csv = "class,empirical_prob,closed_form_prob\n";
      for (int c = 0; c < classes; ++c) csv += csv_line({std::to_string(c + 1), fmt(hist[c]), fmt(closed[c])});
      const std::string name = cfg["mode"].is_null() ? "histogram_" + to_string(mode) + ".csv" : "histogram.csv";
      write_file_atomic(out_dir / name, csv);
    }
  }
  write_json_atomic(out_dir / "config.resolved.json", cfg);
}

void run_train(const json& cfg, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  const TrainConfig tc = train_config_from_json(cfg);
  const std::uint64_t seed = get_as<std::uint64_t>(cfg, "seed");
  const Dataset ds = cfg["train_csv"].is_null()
                         ? gen_gaussians(class_counts_for(cfg), get_as<int>(cfg, "dims"),
                                         get_as<double>(cfg, "cluster_spread"), seed)
                         : load_csv(get_as<std::string>(cfg, "train_csv"));
  if (ds.num_classes() != get_as<int>(cfg, "classes")) {
    throw ConfigError("training data has " + std::to_string(ds.num_classes()) + " classes, config says " +
                      std::to_string(get_as<int>(cfg, "classes")));
  }
  const TrainResult result = train_alg1(ds, tc);

  write_json_atomic(out_dir / "config.resolved.json", cfg);
  write_json_atomic(out_dir / "model.json", model_to_json(result.params));
  std::string log = "step,phase,loss,lr\n";
  for (const auto& e : result.log) {
    log += csv_line({std::to_string(e.step), std::to_string(e.phase), fmt(e.loss), fmt(e.lr)});
  }
  write_file_atomic(out_dir / "train_log.csv", log);
}

void run_eval(const json& cfg, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  if (cfg["model"].is_null() || cfg["data"].is_null()) throw ConfigError("eval needs --model and --data");
  const Mlp params = model_from_json(read_json(get_as<std::string>(cfg, "model")));
  const Dataset ds = load_csv(get_as<std::string>(cfg, "data"));
  if (ds.dims() != params.input_dim()) throw ConfigError("test data dimension does not match the model");
  if (ds.num_classes() > params.output_dim()) throw ConfigError("test labels exceed model classes");

  const Eigen::MatrixXd probs = predict_proba(params, ds.features());
  CalibrationOptions opt;
  opt.num_bins = get_as<int>(cfg, "bins");
  opt.num_ranges = get_as<int>(cfg, "ranges");
  opt.tace_threshold = get_as<double>(cfg, "tace_threshold");
  opt.density_batch = get_as<int>(cfg, "density_batch");
  const CalibrationReport r = evaluate_calibration(probs, ds.labels(), opt);

  const json report = {{"n", ds.size()},   {"accuracy", r.accuracy}, {"ece", r.ece},   {"mce", r.mce},
                       {"ace", r.ace},     {"tace", r.tace},         {"sce", r.sce},   {"brier", r.brier},
                       {"bins", opt.num_bins}};
  write_json_atomic(out_dir / "report.json", report);

  std::string rel = "bin_lo,bin_hi,count,acc,conf\n";
  for (const auto& b : r.reliability) {
    rel += csv_line({fmt(b.lo), fmt(b.hi), std::to_string(b.count), fmt(b.acc), fmt(b.conf)});
  }
  write_file_atomic(out_dir / "reliability.csv", rel);

  const Eigen::MatrixXd logc = log_confusion(r.confusion);
  std::string conf = "true,pred,count,log_count\n";
  for (Eigen::Index t = 0; t < r.confusion.rows(); ++t) {
    for (Eigen::Index p = 0; p < r.confusion.cols(); ++p) {
      conf += csv_line({std::to_string(t), std::to_string(p), std::to_string(r.confusion(t, p)), fmt(logc(t, p))});
    }
  }
  write_file_atomic(out_dir / "confusion.csv", conf);

  std::string dens = "batch,conf,acc\n";
  for (std::size_t k = 0; k < r.density.size(); ++k) {
    dens += csv_line({std::to_string(k), fmt(r.density[k].confidence), fmt(r.density[k].accuracy)});
  }
  write_file_atomic(out_dir / "density.csv", dens);
  write_json_atomic(out_dir / "eval_config.resolved.json", cfg);
  if (!fs::exists(out_dir / "config.resolved.json")) write_json_atomic(out_dir / "config.resolved.json", cfg);
}

void run_circles_demo(const json& cfg, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  TwoCircleSpec spec;
  spec.x0 = get_as<double>(cfg, "x0");
  spec.y0 = get_as<double>(cfg, "y0");
  spec.radius = get_as<double>(cfg, "radius");
  spec.n_pos = get_as<int>(cfg, "m");
  spec.n_neg = get_as<int>(cfg, "n");
  spec.seed = get_as<std::uint64_t>(cfg, "seed");
  TrainConfig tc = default_circles_train_config(spec.seed);
  tc.t2_steps = get_as<int>(cfg, "steps");
  tc.t1_steps = static_cast<int>(std::lround(0.9 * tc.t2_steps));
  tc.lr.base_lr = get_as<double>(cfg, "lr");
  tc.batch_size = get_as<int>(cfg, "batch_size");

  std::string boundary = "scenario,w0,w1,b,angle_error_deg,offset\n";
  std::string points = "scenario,x,y,label,is_virtual\n";
  for (auto s : {CircleScenario::balanced, CircleScenario::imbalanced, CircleScenario::mixup,
                 CircleScenario::unimix}) {
    const CirclesRun run = run_circles(spec, s, tc);
    const auto& b = run.boundary;
    boundary += csv_line({to_string(s), fmt(b.weight[0]), fmt(b.weight[1]), fmt(b.bias), fmt(b.angle_error_deg),
                          fmt(b.offset)});
    for (const auto& p : run.cloud) {
      points += csv_line({to_string(s), fmt(p.x), fmt(p.y), std::to_string(p.label), p.is_virtual ? "1" : "0"});
    }
  }
  write_file_atomic(out_dir / "boundary.csv", boundary);
  write_file_atomic(out_dir / "points.csv", points);
  write_json_atomic(out_dir / "config.resolved.json", cfg);
}

ReportOutcome run_report(const fs::path& runs_dir) {
  if (!fs::is_directory(runs_dir)) throw ConfigError(runs_dir.string() + " is not a directory");
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(runs_dir)) {
    if (entry.is_directory()) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());

  static const char* kMetrics[] = {"accuracy", "ece", "mce", "ace", "tace", "sce", "brier"};
  ReportOutcome outcome;
  json rows = json::array();
  std::string csv = "run,loss,mix_mode,t1_steps,accuracy,ece,mce,ace,tace,sce,brier\n";
  for (const auto& dir : dirs) {
    const std::string name = dir.filename().string();
    if (!fs::exists(dir / "report.json")) {
      outcome.warnings.push_back(name + ": no report.json, skipped");
      continue;
    }
    json report;
    try {
      report = read_json(dir / "report.json");
      for (const char* m : kMetrics) (void)report.at(m).get<double>();
    } catch (const std::exception& e) {
      outcome.warnings.push_back(name + ": unreadable report.json (" + e.what() + "), skipped");
      continue;
    }
    std::string loss = "";
    std::string mix = "";
    std::string t1 = "";
    if (fs::exists(dir / "config.resolved.json")) {
      try {
        const json cfg = read_json(dir / "config.resolved.json");
        loss = cfg.value("loss", "");
        mix = cfg.value("mix_mode", "");
        if (cfg.contains("t1_steps") && cfg["t1_steps"].is_number()) t1 = std::to_string(cfg["t1_steps"].get<int>());
      } catch (const std::exception& e) {
        outcome.warnings.push_back(name + ": unreadable config.resolved.json (" + e.what() + ")");
      }
    }
    json row = {{"run", name}, {"loss", loss}, {"mix_mode", mix}, {"t1_steps", t1}};
    std::string line = name + "," + loss + "," + mix + "," + t1;
    for (const char* m : kMetrics) {
      const double v = report.at(m).get<double>();
      row[m] = v;
      line += "," + fmt(v);
    }
    csv += line + "\n";
    rows.push_back(row);
    ++outcome.rows;
  }
  write_file_atomic(runs_dir / "summary.csv", csv);
  write_json_atomic(runs_dir / "summary.json", rows);
  return outcome;
}

// ---------------------------------------------------------------------------
// CLI

namespace {

/// Flags recorded as JSON overrides, applied after the --config file.
struct Overrides {
  json values = json::object();

  void flag(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    app->add_flag_function(flag, [this, key](std::int64_t n) { values[key] = n > 0; }, help);
  }

  template <typename T>
  void bind(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    app->add_option_function<T>(flag, [this, key](const T& v) { values[key] = v; }, help);
  }
};

json load_and_merge(const json& defaults, const std::string& config_path, const Overrides& flags,
                    const std::string& command) {
  json merged = defaults;
  if (!config_path.empty()) {
    json file = read_json(config_path);
    if (file.contains("command") && file["command"] != command) {
      throw ConfigError(config_path + ": config is for '" + file["command"].get<std::string>() + "', not '" +
                        command + "'");
    }
    merged = merge_strict(merged, file, config_path);
  }
  merged = merge_strict(merged, flags.values, "flags");
  merged["command"] = command;
  return merged;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Long-tailed mixing, prior-compensated losses and calibration metrics", "unimix-lt"};
  app.require_subcommand(0, 1);

  std::string config_path;
  std::string out;

  // gen-data
  Overrides gen_flags;
  auto* gen = app.add_subcommand("gen-data", "Generate a long-tailed Gaussian dataset CSV");
  gen->add_option("--config", config_path, "JSON config");
  gen->add_option("--out", out, "Output CSV path")->required();
  gen_flags.bind<int>(gen, "--classes", "classes", "Number of classes");
  gen_flags.bind<double>(gen, "--rho", "rho", "Imbalance factor");
  gen_flags.bind<int>(gen, "--n-max", "n_max", "Head class count");
  gen_flags.bind<int>(gen, "--dims", "dims", "Feature dimension");
  gen_flags.bind<double>(gen, "--spread", "cluster_spread", "Cluster standard deviation (<= 1)");
  gen_flags.flag(gen, "--reverse", "reverse", "Reverse class counts (tail first)");
  gen_flags.bind<std::uint64_t>(gen, "--seed", "seed", "Seed");

  // verify-dist
  Overrides vd_flags;
  auto* vd = app.add_subcommand("verify-dist", "Closed-form xi-Aug curves and Monte Carlo histograms");
  vd->add_option("--config", config_path, "JSON config");
  vd->add_option("--out", out, "Output directory")->default_val(".");
  vd_flags.bind<int>(vd, "--classes", "classes", "Number of classes");
  vd_flags.bind<double>(vd, "--rho", "rho", "Imbalance factor");
  vd_flags.bind<double>(vd, "--tau", "tau", "Inverse sampler exponent");
  vd_flags.bind<double>(vd, "--alpha", "alpha", "Beta parameter");
  vd_flags.bind<std::int64_t>(vd, "--trials", "trials", "Monte Carlo pairs (0 = curves only)");
  vd_flags.bind<int>(vd, "--resolution", "resolution", "Curve grid points (default: classes)");
  vd_flags.bind<std::string>(vd, "--mode", "mode", "mixup|factor|full (default: all three)");
  vd_flags.bind<std::uint64_t>(vd, "--seed", "seed", "Seed");

  // train
  Overrides tr_flags;
  auto* tr = app.add_subcommand("train", "Two-phase UniMix + Bayias training on synthetic data");
  tr->add_option("--config", config_path, "JSON config");
  tr->add_option("--out", out, "Run directory")->required();
  tr_flags.bind<int>(tr, "--classes", "classes", "Number of classes");
  tr_flags.bind<double>(tr, "--rho", "rho", "Imbalance factor");
  tr_flags.bind<int>(tr, "--n-max", "n_max", "Head class count");
  tr_flags.bind<int>(tr, "--dims", "dims", "Feature dimension");
  tr_flags.bind<double>(tr, "--spread", "cluster_spread", "Cluster standard deviation (<= 1)");
  tr_flags.bind<std::string>(tr, "--train-csv", "train_csv", "Train on this CSV instead of generated data");
  tr_flags.bind<double>(tr, "--alpha", "alpha", "Beta parameter");
  tr_flags.bind<double>(tr, "--tau", "tau", "Inverse sampler exponent");
  tr_flags.bind<std::string>(tr, "--mix-mode", "mix_mode", "mixup|factor|full");
  tr_flags.bind<std::string>(tr, "--loss", "loss", "ce|bayias_ce|focal|cb|cdt|ldam|la");
  tr_flags.bind<double>(tr, "--target-rho", "target_rho", "Test prior imbalance (1 = balanced)");
  tr_flags.bind<int>(tr, "--t1", "t1_steps", "Mixed steps (default 0.9 * t2)");
  tr_flags.bind<int>(tr, "--t2", "t2_steps", "Total steps");
  tr_flags.bind<int>(tr, "--batch-size", "batch_size", "Batch size");
  tr_flags.bind<double>(tr, "--lr", "lr", "Base learning rate");
  tr_flags.bind<double>(tr, "--momentum", "momentum", "SGD momentum");
  tr_flags.bind<double>(tr, "--weight-decay", "weight_decay", "Weight decay");
  tr_flags.bind<std::uint64_t>(tr, "--seed", "seed", "Seed");

  // eval
  Overrides ev_flags;
  auto* ev = app.add_subcommand("eval", "Accuracy and calibration metrics of a trained model");
  ev->add_option("--config", config_path, "JSON config");
  ev->add_option("--out", out, "Output directory")->required();
  ev_flags.bind<std::string>(ev, "--model", "model", "model.json");
  ev_flags.bind<std::string>(ev, "--data", "data", "Test CSV");
  ev_flags.bind<int>(ev, "--bins", "bins", "Confidence bins");
  ev_flags.bind<int>(ev, "--ranges", "ranges", "Adaptive ranges");
  ev_flags.bind<double>(ev, "--tace-threshold", "tace_threshold", "TACE threshold");
  ev_flags.bind<int>(ev, "--density-batch", "density_batch", "Batch size for density points");

  // circles-demo
  Overrides ci_flags;
  auto* ci = app.add_subcommand("circles-demo", "Two-circle decision boundary study");
  ci->add_option("--config", config_path, "JSON config");
  ci->add_option("--out", out, "Output directory")->required();
  ci_flags.bind<double>(ci, "--x0", "x0", "Circle center x");
  ci_flags.bind<double>(ci, "--y0", "y0", "Circle center y");
  ci_flags.bind<double>(ci, "--r", "radius", "Circle radius");
  ci_flags.bind<int>(ci, "--m", "m", "Positive samples");
  ci_flags.bind<int>(ci, "--n", "n", "Negative samples");
  ci_flags.bind<std::uint64_t>(ci, "--seed", "seed", "Seed");
  ci_flags.bind<int>(ci, "--steps", "steps", "Training steps");
  ci_flags.bind<double>(ci, "--lr", "lr", "Learning rate");

  // report
  std::string runs_dir;
  auto* rp = app.add_subcommand("report", "Summary table across run directories");
  rp->add_option("runs", runs_dir, "Directory of run directories")->required();

  if (argc <= 1) {
    std::cerr << app.help();
    return 1;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (gen->parsed()) {
      run_gen_data(load_and_merge(gen_data_defaults(), config_path, gen_flags, "gen-data"), out);
    } else if (vd->parsed()) {
      run_verify_dist(load_and_merge(verify_dist_defaults(), config_path, vd_flags, "verify-dist"), out);
    } else if (tr->parsed()) {
      run_train(resolve_train_config(load_and_merge(train_defaults(), config_path, tr_flags, "train")), out);
    } else if (ev->parsed()) {
      run_eval(load_and_merge(eval_defaults(), config_path, ev_flags, "eval"), out);
    } else if (ci->parsed()) {
      run_circles_demo(load_and_merge(circles_defaults(), config_path, ci_flags, "circles-demo"), out);
    } else if (rp->parsed()) {
      const ReportOutcome r = run_report(runs_dir);
      for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
      std::cout << r.rows << " run(s) summarized\n";
    } else {
      std::cerr << app.help();
      return 1;
    }
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace unimix

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "gpcs/experiments.hpp"

namespace gpcs {

namespace {

using nlohmann::json;

void require_keys(const json& object, const char* where,
                  std::initializer_list<const char*> allowed) {
  for (const auto& item : object.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError(std::string("config: unknown key \"") + item.key() +
                        "\" in " + where);
    }
  }
}

template <class T>
void read_field(const json& object, const char* key, T& into) {
  if (!object.contains(key)) return;
  try {
    into = object.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: bad value for \"") + key +
                      "\": " + e.what());
  }
}

GpPrior prior_from_json(const json& object, const char* where,
                        const GpPrior& defaults) {
  require_keys(object, where, {"kernel", "noise", "mean_value"});
  double lengthscale = defaults.kernel.lengthscale;
  double signal_variance = defaults.kernel.signal_variance;
  double noise_variance = defaults.noise.noise_variance;
  double mean_value = defaults.mean_value;
  if (object.contains("kernel")) {
    const json& kernel = object.at("kernel");
    require_keys(kernel, (std::string(where) + ".kernel").c_str(),
                 {"lengthscale", "signal_variance"});
    read_field(kernel, "lengthscale", lengthscale);
    read_field(kernel, "signal_variance", signal_variance);
  }
  if (object.contains("noise")) {
    const json& noise = object.at("noise");
    require_keys(noise, (std::string(where) + ".noise").c_str(),
                 {"noise_variance"});
    read_field(noise, "noise_variance", noise_variance);
  }
  read_field(object, "mean_value", mean_value);
  try {
    return GpPrior{SeKernelParams(lengthscale, signal_variance),
                   NoiseModel(noise_variance), mean_value};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + where + ": " + e.what());
  }
}

json prior_to_json(const GpPrior& prior) {
  return json{
      {"kernel",
       {{"lengthscale", prior.kernel.lengthscale},
        {"signal_variance", prior.kernel.signal_variance}}},
      {"noise", {{"noise_variance", prior.noise.noise_variance}}},
      {"mean_value", prior.mean_value},
  };
}

json quantiles_to_json(const BoQuantiles& q) {
  return json{{"median", q.median}, {"q25", q.q25}, {"q75", q.q75}};
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out << text;
  out.flush();
  if (!out) {
    throw IoError("write failed for " + path.string());
  }
}

void prepare_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create " + dir.string() + ": " + ec.message());
  }
}

json common_summary(const ExperimentConfig& config,
                    const std::vector<std::string>& failures,
                    double duration_s) {
  json summary;
  summary["config"] = json::parse(config_to_json_text(config));
  summary["version"] = kVersion;
  summary["failures"] = failures;
  summary["duration_s"] = duration_s;
  return summary;
}

}  // namespace

std::string format_g17(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

ExperimentConfig config_from_json_text(const std::string& text,
                                       ExperimentKind kind) {
  json parsed;
  try {
    parsed = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!parsed.is_object()) {
    throw ConfigError("config: top level must be a JSON object");
  }
  require_keys(parsed, "config",
               {"kind", "true_prior", "working_prior", "cs", "times",
                "plot_grid_size", "replications", "seeds", "true_noise_scale",
                "output_dir"});

  ExperimentConfig config = default_config(kind);
  if (parsed.contains("kind")) {
    const auto file_kind = kind_from_name(parsed.at("kind").get<std::string>());
    if (file_kind != kind) {
      throw ConfigError("config: file kind \"" + kind_name(file_kind) +
                        "\" does not match requested kind \"" +
                        kind_name(kind) + "\"");
    }
  }
  if (parsed.contains("true_prior")) {
    config.true_prior =
        prior_from_json(parsed.at("true_prior"), "true_prior", config.true_prior);
  }
  if (parsed.contains("working_prior")) {
    config.working_prior = prior_from_json(parsed.at("working_prior"),
                                           "working_prior", config.working_prior);
  }
  if (parsed.contains("cs")) {
    const json& cs = parsed.at("cs");
    require_keys(cs, "cs", {"alpha", "gamma", "beta_power"});
    double alpha = config.cs.alpha;
    double gamma = config.cs.gamma;
    double beta_power = config.cs.beta_power;
    read_field(cs, "alpha", alpha);
    read_field(cs, "gamma", gamma);
    read_field(cs, "beta_power", beta_power);
    config.cs = CsConfig(alpha, gamma, beta_power);
  }
  read_field(parsed, "times", config.times);
  read_field(parsed, "plot_grid_size", config.plot_grid_size);
  read_field(parsed, "replications", config.replications);
  read_field(parsed, "seeds", config.seeds);
  read_field(parsed, "true_noise_scale", config.true_noise_scale);
  read_field(parsed, "output_dir", config.output_dir);
  validate_config(config);
  return config;
}

ExperimentConfig load_config_file(const std::string& path,
                                  ExperimentKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read config file " + path);
  }
  std::ostringstream text;
  text << in.rdbuf();
  return config_from_json_text(text.str(), kind);
}

std::string config_to_json_text(const ExperimentConfig& config) {
  json out{
      {"kind", kind_name(config.kind)},
      {"true_prior", prior_to_json(config.true_prior)},
      {"working_prior", prior_to_json(config.working_prior)},
      {"cs",
       {{"alpha", config.cs.alpha},
        {"gamma", config.cs.gamma},
        {"beta_power", config.cs.beta_power}}},
      {"times", config.times},
      {"plot_grid_size", config.plot_grid_size},
      {"replications", config.replications},
      {"seeds", config.seeds},
      {"true_noise_scale", config.true_noise_scale},
      {"output_dir", config.output_dir},
  };
  return out.dump(2);
}

void emit_results(const CoverageResult& result,
                  const std::filesystem::path& output_dir) {
  prepare_dir(output_dir);

  std::string csv = "replication,t,x,f_true,gp_mean,gp_lo,gp_hi,cs_lo,cs_hi\n";
  for (const auto& rec : result.records) {
    csv += std::to_string(rec.replication);
    csv += ',';
    csv += std::to_string(rec.t);
    csv += ',';
    csv += format_g17(rec.x);
    csv += ',';
    csv += format_g17(rec.f_true);
    csv += ',';
    csv += format_g17(rec.gp_mean);
    csv += ',';
    csv += format_g17(rec.gp_lo);
    csv += ',';
    csv += format_g17(rec.gp_hi);
    csv += ',';
    csv += format_g17(rec.cs_lo);
    csv += ',';
    csv += format_g17(rec.cs_hi);
    csv += '\n';
  }
  write_text_file(output_dir / "records.csv", csv);

  json summary =
      common_summary(result.config, result.failures, result.duration_s);
  summary["miscoverage_cs"] = result.summary.miscoverage_cs;
  summary["miscoverage_gp"] = result.summary.miscoverage_gp;
  summary["n_failed"] = result.summary.n_failed;
  if (result.config.kind == ExperimentKind::noise_misspec) {
    summary["cell"] = {{"true_noise_scale", result.config.true_noise_scale},
                       {"beta_power", result.config.cs.beta_power}};
  }
  write_text_file(output_dir / "summary.json", summary.dump(2) + "\n");
}

void emit_results(const BoCompareResult& result,
                  const std::filesystem::path& output_dir) {
  prepare_dir(output_dir);

  Eigen::Index dim = 1;
  for (const auto* runs : {&result.gp_runs, &result.cs_runs}) {
    for (const auto& run : *runs) {
      if (!run.steps.empty()) {
        dim = run.steps.front().x_chosen.size();
        break;
      }
    }
  }
  std::string csv = "seed,method,t";
  for (Eigen::Index k = 0; k < dim; ++k) {
    csv += ",x" + std::to_string(k);
  }
  csv += ",y,best_so_far\n";

  auto append_run = [&csv](const BoRun& run) {
    for (const auto& step : run.steps) {
      csv += std::to_string(run.seed);
      csv += ',';
      csv += acquisition_name(run.kind);
      csv += ',';
      csv += std::to_string(step.t);
      for (Eigen::Index k = 0; k < step.x_chosen.size(); ++k) {
        csv += ',';
        csv += format_g17(step.x_chosen[k]);
      }
      csv += ',';
      csv += format_g17(step.y_observed);
      csv += ',';
      csv += format_g17(step.best_so_far);
      csv += '\n';
    }
  };
  for (std::size_t r = 0; r < result.gp_runs.size(); ++r) {
    append_run(result.gp_runs[r]);
    append_run(result.cs_runs[r]);
  }
  write_text_file(output_dir / "records.csv", csv);

  json summary =
      common_summary(result.config, result.failures, result.duration_s);
  summary["n_failed"] = result.summary.n_failed;
  summary["methods"] = {{"gp_lcb", quantiles_to_json(result.summary.gp_lcb)},
                        {"cs_lcb", quantiles_to_json(result.summary.cs_lcb)}};
  if (result.config.kind == ExperimentKind::branin) {
    summary["optimum"] = kBraninMinimum;
  }
  write_text_file(output_dir / "summary.json", summary.dump(2) + "\n");
}

}  // namespace gpcs

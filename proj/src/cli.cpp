#include "uls/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "uls/city_io.hpp"
#include "uls/curve_io.hpp"
#include "uls/error.hpp"
#include "uls/fitting.hpp"
#include "uls/reference.hpp"
#include "uls/version.hpp"

namespace uls::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::Format:
    case ErrorCode::HighwayOverlap:
      return kValidation;
    case ErrorCode::InsufficientData:
    case ErrorCode::EmptySupport:
      return kInsufficientData;
    default:
      return kRuntime;
  }
}

// Flags shared by generate and simulate.
struct CityFlags {
  std::string env;
  std::optional<double> alpha;
  std::optional<int> beta;
  std::optional<double> gamma;
  std::string layout;
  std::optional<std::uint64_t> seed;
  std::optional<int> highway_count;
  std::optional<double> highway_width;
  std::optional<double> square_fraction;

  void attach(CLI::App& app) {
    app.add_option("--env", env,
                   "Environment preset: suburban, urban, dense-urban, high-rise");
    app.add_option("--alpha", alpha, "Built area fraction in (0,1]");
    app.add_option("--beta", beta, "Buildings per km^2");
    app.add_option("--gamma", gamma, "Rayleigh height scale (m)");
    app.add_option("--layout", layout, "manhattan, rm, ru or rh");
    app.add_option("--seed", seed, "Master seed");
    app.add_option("--highways", highway_count,
                   "Number of evenly spaced horizontal highways (rh)");
    app.add_option("--highway-width", highway_width, "Highway width (m)");
    app.add_option("--square-fraction", square_fraction,
                   "Probability that a building is square");
  }
};

citygen::BuiltUpParams resolve_params(const std::string& env,
                                      std::optional<citygen::BuiltUpParams> base,
                                      const CityFlags& flags) {
  if (!env.empty()) {
    const auto e = citygen::parse_environment(env);
    if (!e) throw UsageError("env must be one of suburban, urban, dense-urban, high-rise");
    base = citygen::preset(*e);
  }
  if (!base) {
    if (!(flags.alpha && flags.beta && flags.gamma)) {
      throw UsageError("either --env or all of --alpha, --beta, --gamma are required");
    }
    base = citygen::BuiltUpParams{};
  }
  if (flags.alpha) base->alpha = *flags.alpha;
  if (flags.beta) base->beta = *flags.beta;
  if (flags.gamma) base->gamma = *flags.gamma;
  base->validate();
  return *base;
}

citygen::Layout resolve_layout(const std::string& name) {
  const auto layout = citygen::parse_layout(name);
  if (!layout) throw UsageError("layout must be one of manhattan, rm, ru, rh");
  return *layout;
}

std::vector<citygen::Highway> highways_from_json(const json& arr) {
  std::vector<citygen::Highway> out;
  for (const auto& h : arr) {
    const auto axis = h.value("axis", std::string("horizontal"));
    if (axis != "horizontal" && axis != "vertical") {
      throw UsageError("highway axis must be horizontal or vertical");
    }
    out.push_back({axis == "horizontal" ? citygen::Axis::Horizontal
                                        : citygen::Axis::Vertical,
                   h.at("offset").get<double>(), h.value("width", 50.0),
                   h.value("length", citygen::kCitySide)});
  }
  return out;
}

void apply_highway_flags(const CityFlags& flags,
                         std::vector<citygen::Highway>& highways) {
  if (flags.highway_count || flags.highway_width) {
    highways = citygen::default_highways(flags.highway_count.value_or(3),
                                         flags.highway_width.value_or(50.0));
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("config file " + path + ": " + e.what());
  }
}

std::string hex64(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex;
  s.width(16);
  s.fill('0');
  s << v;
  return s.str();
}

fs::path with_suffix(const fs::path& out, const std::string& suffix) {
  fs::path p = out;
  if (p.extension() == ".csv") p.replace_extension();
  return fs::path(p.string() + suffix);
}

// ---------------------------------------------------------------- generate

struct GenerateCmd {
  CityFlags flags;
  std::string out;

  void attach(CLI::App& app) {
    flags.attach(app);
    app.add_option("--out", out, "Output city JSON (stdout when omitted)");
  }

  int execute(std::ostream& stdout_, std::ostream& stderr_) const {
    citygen::CityRequest request;
    request.params = resolve_params(flags.env, std::nullopt, flags);
    if (flags.layout.empty()) throw UsageError("--layout is required");
    request.layout = resolve_layout(flags.layout);
    if (request.layout == citygen::Layout::RandomHighway) {
      request.highways = citygen::default_highways();
      apply_highway_flags(flags, request.highways);
      citygen::validate_highways(request.highways);
    }
    if (flags.square_fraction) {
      if (*flags.square_fraction < 0 || *flags.square_fraction > 1) {
        throw UsageError("square-fraction must be in [0,1]");
      }
      request.options.square_fraction = *flags.square_fraction;
    }
    const auto city = citygen::generate_city(request, flags.seed.value_or(1), 0);
    if (out.empty()) {
      stdout_ << citygen::city_to_json(city, 1) << '\n';
    } else {
      citygen::write_city(city, out);
      stdout_ << "achieved_alpha=" << city.achieved_alpha
              << " buildings=" << city.buildings.size() << '\n';
    }
    for (const auto& w : city.warnings) {
      stderr_ << "warning: building " << w.building << " "
                << citygen::to_string(w.category) << ": " << w.message << '\n';
    }
    return kOk;
  }
};

// ---------------------------------------------------------------- simulate

struct SimulateCmd {
  CityFlags flags;
  std::string config_path;
  std::string city_path;
  std::optional<int> ues;
  std::optional<int> cities;
  std::optional<double> habs_max;
  std::optional<double> ue_height;
  std::optional<int> min_count;
  std::optional<int> abs_repeats;
  std::string binning;
  std::optional<int> threads;
  bool split_highway = false;
  std::string out;

  void attach(CLI::App& app) {
    flags.attach(app);
    app.add_option("--config", config_path, "JSON config file; flags override it");
    app.add_option("--city", city_path, "Simulate over a city JSON from `generate`");
    app.add_option("--ues", ues, "UEs per city");
    app.add_option("--cities", cities, "Number of cities");
    app.add_option("--habs-max", habs_max, "Maximum ABS height (m)");
    app.add_option("--ue-height", ue_height, "UE height (m)");
    app.add_option("--min-count", min_count, "Fit-eligibility count per bin");
    app.add_option("--abs-repeats", abs_repeats, "ABS redraws per city");
    app.add_option("--binning", binning, "nearest or ceiling");
    app.add_option("--threads", threads, "Worker threads, 0 = auto");
    app.add_flag("--split-highway", split_highway,
                 "rh only: write separate street and highway curves");
    app.add_option("--out", out, "Output curve CSV")->required();
  }

  mc::SimulationConfig build_config(const std::optional<citygen::CityModel>& city) const {
    mc::SimulationConfig config;
    std::optional<citygen::BuiltUpParams> base;
    std::string env = flags.env;
    std::string layout = flags.layout;
    bool have_ues = false, have_cities = false, have_habs = false;

    if (!config_path.empty()) {
      const json doc = read_json_file(config_path);
      try {
        if (doc.contains("env") && env.empty()) env = doc.at("env").get<std::string>();
        if (doc.contains("params")) {
          const auto& p = doc.at("params");
          base = citygen::BuiltUpParams{p.at("alpha").get<double>(),
                                        p.at("beta").get<int>(),
                                        p.at("gamma").get<double>()};
        }
        if (doc.contains("layout") && layout.empty()) {
          layout = doc.at("layout").get<std::string>();
        }
        if (doc.contains("h_abs_max")) {
          config.h_abs_max = doc.at("h_abs_max").get<double>();
          have_habs = true;
        }
        if (doc.contains("n_ue")) {
          config.n_ue = doc.at("n_ue").get<int>();
          have_ues = true;
        }
        if (doc.contains("n_cities")) {
          config.n_cities = doc.at("n_cities").get<int>();
          have_cities = true;
        }
        config.seed = doc.value("seed", config.seed);
        config.ue_height = doc.value("ue_height", config.ue_height);
        config.min_count_per_bin = doc.value("min_count_per_bin", config.min_count_per_bin);
        config.abs_repeats = doc.value("abs_repeats", config.abs_repeats);
        config.threads = doc.value("threads", config.threads);
        if (doc.contains("binning")) {
          const auto b = mc::parse_binning(doc.at("binning").get<std::string>());
          if (!b) throw UsageError("binning must be nearest or ceiling");
          config.binning = *b;
        }
        if (doc.contains("highways")) config.highways = highways_from_json(doc.at("highways"));
        if (doc.contains("generator")) {
          const auto& g = doc.at("generator");
          auto& o = config.generator;
          o.square_fraction = g.value("square_fraction", o.square_fraction);
          o.grid_resolution = g.value("grid_resolution", o.grid_resolution);
          o.enforce_area_cap = g.value("enforce_area_cap", o.enforce_area_cap);
          o.area_cap_fraction = g.value("area_cap_fraction", o.area_cap_fraction);
          if (g.contains("cap_referent")) {
            const auto r = g.at("cap_referent").get<std::string>();
            if (r != "total_area" && r != "building_area") {
              throw UsageError("cap_referent must be total_area or building_area");
            }
            o.cap_referent = r == "total_area" ? citygen::CapReferent::TotalArea
                                               : citygen::CapReferent::BuildingArea;
          }
          o.cap_attempts = g.value("cap_attempts", o.cap_attempts);
          o.placement_attempts = g.value("placement_attempts", o.placement_attempts);
          o.block_fill_limit = g.value("block_fill_limit", o.block_fill_limit);
        }
      } catch (const json::exception& e) {
        throw UsageError("config file " + config_path + ": " + e.what());
      }
    }

    if (city) {
      config.params = city->params;
      config.layout = city->layout;
      config.highways = city->highways;
      if (!have_cities) {
        config.n_cities = 1;
        have_cities = true;
      }
    } else {
      config.params = resolve_params(env, base, flags);
      if (layout.empty()) throw UsageError("--layout is required");
      config.layout = resolve_layout(layout);
    }

    if (flags.seed) config.seed = *flags.seed;
    if (ues) { config.n_ue = *ues; have_ues = true; }
    if (cities) { config.n_cities = *cities; have_cities = true; }
    if (habs_max) { config.h_abs_max = *habs_max; have_habs = true; }
    if (ue_height) config.ue_height = *ue_height;
    if (min_count) config.min_count_per_bin = *min_count;
    if (abs_repeats) config.abs_repeats = *abs_repeats;
    if (threads) config.threads = *threads;
    if (!binning.empty()) {
      const auto b = mc::parse_binning(binning);
      if (!b) throw UsageError("binning must be nearest or ceiling");
      config.binning = *b;
    }
    if (flags.square_fraction) config.generator.square_fraction = *flags.square_fraction;
    apply_highway_flags(flags, config.highways);

    if (!have_ues) throw UsageError("--ues is required (or n_ue in --config)");
    if (!have_cities) throw UsageError("--cities is required (or n_cities in --config)");
    if (!have_habs) throw UsageError("--habs-max is required (or h_abs_max in --config)");
    config.validate();
    return config;
  }

  int execute(std::ostream& stdout_) const {
    std::optional<citygen::CityModel> city;
    if (!city_path.empty()) city = citygen::read_city(city_path);
    const mc::SimulationConfig config = build_config(city);
    if (split_highway && config.layout != citygen::Layout::RandomHighway) {
      throw UsageError("--split-highway requires the rh layout");
    }

    const auto started = std::chrono::steady_clock::now();
    std::vector<mc::CityReport> reports;
    json outputs = json::array();
    std::uint64_t total = 0;
    if (split_highway) {
      const auto result = city ? mc::run_rh_split_on_city(config, *city)
                               : mc::run_rh_split(config);
      const auto street = with_suffix(out, ".street.csv");
      const auto highway = with_suffix(out, ".highway.csv");
      mc::write_curve_csv(result.street, street);
      mc::write_curve_csv(result.highway, highway);
      outputs = {street.string(), highway.string()};
      reports = result.cities;
      total = result.street.total_count();
    } else {
      const auto result = city ? mc::run_on_city(config, *city) : mc::run(config);
      mc::write_curve_csv(result.curve, out);
      outputs = {out};
      reports = result.cities;
      total = result.curve.total_count();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    json manifest;
    manifest["tool"] = "uls";
    manifest["version"] = kVersion;
    manifest["config"] = json::parse(mc::config_to_json(config));
    manifest["config_hash"] = hex64(mc::config_hash(config));
    manifest["kernel"] = std::string(simd::to_string(simd::best_isa()));
    manifest["wall_seconds"] = seconds;
    manifest["links_per_curve"] = total;
    manifest["outputs"] = outputs;
    if (city) manifest["city_file"] = city_path;
    json per_city = json::array();
    for (const auto& r : reports) {
      json warnings = json::array();
      for (const auto& w : r.warnings) {
        warnings.push_back({{"city", r.city_index},
                            {"category", std::string(citygen::to_string(w.category))},
                            {"building", w.building},
                            {"message", w.message}});
      }
      per_city.push_back({{"city", r.city_index},
                          {"achieved_alpha", r.achieved_alpha},
                          {"buildings", r.buildings},
                          {"warnings", std::move(warnings)}});
    }
    manifest["cities"] = std::move(per_city);
    const auto manifest_path = with_suffix(out, ".manifest.json");
    std::ofstream mf(manifest_path);
    mf << manifest.dump(1) << '\n';

    stdout_ << "links=" << total << " curves=" << outputs.size()
            << " manifest=" << manifest_path.string() << '\n';
    return kOk;
  }
};

// --------------------------------------------------------------------- fit

struct FitCmd {
  std::string curve_path;
  std::string model = "sig2";
  int min_count = 30;
  std::string out;

  void attach(CLI::App& app) {
    app.add_option("curve", curve_path, "Curve CSV")->required();
    app.add_option("--model", model, "sig1 or sig2");
    app.add_option("--min-count", min_count, "Minimum samples per bin");
    app.add_option("--out", out, "Output fit JSON");
  }

  int execute(std::ostream& stdout_, std::ostream& stderr_) const {
    const auto m = fit::parse_model(model);
    if (!m) throw UsageError("model must be sig1 or sig2");
    const auto curve = mc::read_curve_csv(fs::path(curve_path));
    fit::FitOptions options;
    options.min_count = min_count;
    const auto result = *m == fit::Model::Sig1 ? fit::fit_sig1(curve, options)
                                               : fit::fit_sig2(curve, options);
    json doc;
    doc["model"] = std::string(fit::to_string(result.model));
    if (const auto* p = std::get_if<fit::Sig1Params>(&result.params)) {
      doc["params"] = {{"a", p->a}, {"b", p->b}};
    } else {
      const auto& q = std::get<fit::Sig2Params>(result.params);
      doc["params"] = {{"x1", q.x1}, {"x2", q.x2}, {"x3", q.x3}, {"x4", q.x4}};
    }
    doc["rmse"] = result.rmse;
    doc["initial_rmse"] = result.initial_rmse;
    doc["support"] = result.support;
    doc["converged"] = result.converged;
    doc["iterations"] = result.iterations;
    doc["min_count"] = min_count;
    if (!out.empty()) {
      std::ofstream f(out);
      if (!f) throw UsageError("cannot write " + out);
      f << doc.dump(1) << '\n';
    }
    if (!result.converged) {
      stderr_ << "warning: iteration budget exhausted; reporting best iterate\n";
    }
    stdout_ << "model=" << fit::to_string(result.model) << " rmse=" << result.rmse
            << '\n';
    if (out.empty()) stdout_ << doc.dump(1) << '\n';
    return kOk;
  }
};

// ----------------------------------------------------------------- compare

struct CompareCmd {
  std::string a_path;
  std::string b_path;
  std::optional<int> theta_min;
  std::optional<int> theta_max;
  std::string json_out;

  void attach(CLI::App& app) {
    app.add_option("model", a_path, "Model curve CSV")->required();
    app.add_option("reference", b_path, "Reference curve CSV")->required();
    app.add_option("--theta-min", theta_min, "Lowest angle compared (deg)");
    app.add_option("--theta-max", theta_max, "Highest angle compared (deg)");
    app.add_option("--json", json_out, "Also write metrics as JSON");
  }

  int execute(std::ostream& stdout_) const {
    const auto a = mc::read_curve_csv(fs::path(a_path));
    const auto b = mc::read_curve_csv(fs::path(b_path));
    std::vector<int> support;
    if (theta_min || theta_max) {
      for (int t = theta_min.value_or(0); t <= theta_max.value_or(90); ++t) {
        support.push_back(t);
      }
      if (support.empty()) throw Error(ErrorCode::EmptySupport, "empty angle range");
    }
    const auto m = fit::compare(a, b, support);
    stdout_ << "rmse=" << m.rmse << "\nmae=" << m.mae << "\nr2=" << m.r2
            << "\nn=" << m.n << '\n';
    if (!json_out.empty()) {
      json doc{{"rmse", m.rmse}, {"mae", m.mae}, {"n", m.n}};
      doc["r2"] = std::isfinite(m.r2) ? json(m.r2) : json(nullptr);
      std::ofstream f(json_out);
      f << doc.dump(1) << '\n';
    }
    return kOk;
  }
};

// ------------------------------------------------------------------ table2

struct Table2Cmd {
  std::string env;
  std::string layout;
  std::string model = "sig2";
  std::string out;

  void attach(CLI::App& app) {
    app.add_option("--env", env, "Environment preset")->required();
    app.add_option("--layout", layout, "rm, ru or rh")->required();
    app.add_option("--model", model, "sig1 or sig2");
    app.add_option("--out", out, "Output curve CSV (stdout when omitted)");
  }

  int execute(std::ostream& stdout_) const {
    const auto e = citygen::parse_environment(env);
    const auto l = citygen::parse_layout(layout);
    const auto m = fit::parse_model(model);
    std::optional<reference::CoefficientRow> row;
    if (e && l && m) row = reference::find(*l, *e);
    if (!row) {
      throw UsageError("no published coefficients for (" + env + ", " + layout +
                       ", " + model + ")");
    }
    const auto curve = *m == fit::Model::Sig1 ? fit::model_curve(row->sig1)
                                              : fit::model_curve(row->sig2);
    if (out.empty()) {
      mc::write_curve_csv(curve, stdout_);
    } else {
      mc::write_curve_csv(curve, fs::path(out));
    }
    return kOk;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Urban line-of-sight simulator for aerial base stations", "uls"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  GenerateCmd generate;
  SimulateCmd simulate;
  FitCmd fit_cmd;
  CompareCmd compare;
  Table2Cmd table2;
  auto* gen_app = app.add_subcommand("generate", "Generate one city as JSON");
  auto* sim_app = app.add_subcommand("simulate", "Estimate P_LoS(theta) by Monte Carlo");
  auto* fit_app = app.add_subcommand("fit", "Fit a sigmoid model to a curve CSV");
  auto* cmp_app = app.add_subcommand("compare", "RMSE/MAE/R^2 between two curves");
  auto* t2_app = app.add_subcommand("table2", "Curve from published coefficients");
  generate.attach(*gen_app);
  simulate.attach(*sim_app);
  fit_cmd.attach(*fit_app);
  compare.attach(*cmp_app);
  table2.attach(*t2_app);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }

  try {
    if (gen_app->parsed()) return generate.execute(out, err);
    if (sim_app->parsed()) return simulate.execute(out);
    if (fit_app->parsed()) return fit_cmd.execute(out, err);
    if (cmp_app->parsed()) return compare.execute(out);
    if (t2_app->parsed()) return table2.execute(out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kValidation;
}

}  // namespace uls::cli

#include "quermass/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "quermass/parallel.hpp"
#include "quermass/stats.hpp"

namespace quermass::experiments {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

[[noreturn]] void config_fail(const std::string& origin, const std::string& message) {
  throw ConfigError(origin + ": " + message);
}

std::string line_of_offset(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return std::to_string(line);
}

struct RecordMeans {
  double n = 0, area = 0, perimeter = 0, euler = 0, components = 0, holes = 0;
  std::vector<double> per_type;
  long records = 0;
};

RecordMeans record_means(const std::vector<TraceRecord>& records) {
  RecordMeans m;
  m.records = static_cast<long>(records.size());
  if (records.empty()) return m;
  m.per_type.assign(records.front().per_type_counts.size(), 0.0);
  for (const TraceRecord& r : records) {
    m.n += static_cast<double>(r.n_points);
    m.area += r.area;
    m.perimeter += r.perimeter;
    m.euler += static_cast<double>(r.euler);
    m.components += static_cast<double>(r.components);
    m.holes += static_cast<double>(r.holes);
    for (std::size_t k = 0; k < m.per_type.size() && k < r.per_type_counts.size(); ++k)
      m.per_type[k] += static_cast<double>(r.per_type_counts[k]);
  }
  const double inv = 1.0 / static_cast<double>(m.records);
  m.n *= inv;
  m.area *= inv;
  m.perimeter *= inv;
  m.euler *= inv;
  m.components *= inv;
  m.holes *= inv;
  for (double& v : m.per_type) v *= inv;
  return m;
}

}  // namespace

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << content;
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError(path + ": cannot open file");
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  return from_json_text(read_file(path), path);
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text,
                                                  const std::string& origin) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    config_fail(origin + ":" + line_of_offset(text, e.byte), e.what());
  }
  ExperimentConfig config;
  try {
    if (j.contains("model")) {
      const auto& m = j.at("model");
      config.model.theta1 = m.value("theta1", 0.0);
      config.model.theta2 = m.value("theta2", 0.0);
      config.model.theta3 = m.value("theta3", 0.0);
      config.model.z = m.value("z", 1.0);
      config.model.r0 = m.value("r0", 1.0);
      config.model.r1 = m.value("r1", 1.0);
      if (m.contains("radiusLaw")) {
        const auto& law = m.at("radiusLaw");
        const std::string kind = law.value("kind", "fixed");
        if (kind == "fixed") {
          config.model.radius_law = RadiusLaw::fixed(law.value("r", config.model.r1));
        } else if (kind == "uniform") {
          config.model.radius_law = RadiusLaw::uniform(law.value("lo", config.model.r0),
                                                       law.value("hi", config.model.r1));
        } else if (kind == "discrete") {
          config.model.radius_law =
              RadiusLaw::discrete(law.at("values").get<std::vector<double>>(),
                                  law.at("weights").get<std::vector<double>>());
        } else {
          config_fail(origin, "model.radiusLaw.kind must be fixed|uniform|discrete");
        }
      } else {
        config.model.radius_law = RadiusLaw::fixed(config.model.r1);
      }
      config.K = m.value("K", 1);
      if (config.K < 1) config_fail(origin, "model.K must be >= 1");
      if (m.contains("boundary")) {
        const auto& b = m.at("boundary");
        const std::string kind = b.value("kind", "free");
        if (kind == "free") {
          config.boundary_kind = BoundaryKind::free_boundary;
        } else if (kind == "periodic") {
          config.boundary_kind = BoundaryKind::periodic;
        } else if (kind == "fixedOutside") {
          config.boundary_kind = BoundaryKind::fixed_outside;
          config.boundary_snapshot_path = b.value("snapshot", std::string());
          if (config.boundary_snapshot_path.empty())
            config_fail(origin, "model.boundary.snapshot required for fixedOutside");
        } else {
          config_fail(origin, "model.boundary.kind must be free|fixedOutside|periodic");
        }
      }
    }
    if (j.contains("window")) {
      const auto& w = j.at("window");
      if (!w.is_array() || w.size() != 4) config_fail(origin, "window must be [x0,y0,x1,y1]");
      config.window = {w.at(0).get<double>(), w.at(1).get<double>(), w.at(2).get<double>(),
                       w.at(3).get<double>()};
      if (!(config.window.area() > 0)) config_fail(origin, "window must have positive area");
    }
    if (j.contains("chain")) {
      const auto& c = j.at("chain");
      config.chain.n_steps = c.value("nSteps", config.chain.n_steps);
      config.chain.burn_in = c.value("burnIn", config.chain.burn_in);
      config.chain.thinning = c.value("thinning", config.chain.thinning);
      config.n_replicas = c.value("nReplicas", config.n_replicas);
      if (config.chain.n_steps < 1) config_fail(origin, "chain.nSteps must be >= 1");
      if (config.n_replicas < 1) config_fail(origin, "chain.nReplicas must be >= 1");
    }
    if (j.contains("proposal")) {
      const auto& p = j.at("proposal");
      config.chain.mix.p_birth = p.value("pBirth", 0.4);
      config.chain.mix.p_death = p.value("pDeath", 0.4);
      config.chain.mix.p_move = p.value("pMove", 0.2);
      config.chain.mix.translate_scale = p.value("translateScale", 0.5);
    }
    if (j.contains("sweep")) {
      const auto& s = j.at("sweep");
      const std::string param = s.value("parameter", "");
      if (param != "z" && param != "theta1" && param != "theta2" && param != "theta3")
        config_fail(origin, "sweep.parameter must be one of z|theta1|theta2|theta3");
      config.sweep_parameter = param;
      config.sweep_values = s.value("values", std::vector<double>());
      if (config.sweep_values.empty()) config_fail(origin, "sweep.values must be nonempty");
      for (double v : config.sweep_values)
        if (!std::isfinite(v)) config_fail(origin, "sweep.values must be finite");
    }
    if (j.contains("analysis")) {
      const auto& a = j.at("analysis");
      const std::string dir = a.value("crossingDirection", "horizontal");
      if (dir == "horizontal")
        config.crossing_direction = Direction::horizontal;
      else if (dir == "vertical")
        config.crossing_direction = Direction::vertical;
      else
        config_fail(origin, "analysis.crossingDirection must be horizontal|vertical");
      if (a.contains("diamondEll")) {
        config.diamond_ell = a.at("diamondEll").get<double>();
        if (!(*config.diamond_ell > 2 * config.model.r1 + 2 * config.model.r0))
          config_fail(origin, "analysis.diamondEll must exceed 2*r1 + 2*r0");
      }
    }
    config.seed = j.value("seed", static_cast<std::uint64_t>(1));
    if (j.contains("output")) config.out_dir = j.at("output").value("dir", config.out_dir);
    if (j.contains("snapshot")) config.snapshot_path = j.at("snapshot").get<std::string>();
    config.model.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    config_fail(origin, e.what());
  }
  return config;
}

Boundary ExperimentConfig::make_boundary() const {
  switch (boundary_kind) {
    case BoundaryKind::free_boundary:
      return Boundary::free();
    case BoundaryKind::periodic:
      return Boundary::torus();
    case BoundaryKind::fixed_outside: {
      std::vector<int> types;
      const Configuration outside =
          Configuration::from_json(read_file(boundary_snapshot_path), &types);
      if (types.empty()) types.assign(static_cast<std::size_t>(outside.size()), 0);
      return Boundary::fixed(outside.disks(), types);
    }
  }
  return Boundary::free();
}

QuermassParams ExperimentConfig::with_sweep_value(double v) const {
  QuermassParams p = model;
  if (!sweep_parameter) return p;
  if (*sweep_parameter == "z")
    p.z = v;
  else if (*sweep_parameter == "theta1")
    p.theta1 = v;
  else if (*sweep_parameter == "theta2")
    p.theta2 = v;
  else if (*sweep_parameter == "theta3")
    p.theta3 = v;
  return p;
}

void write_run_metadata(const std::string& out_dir, const std::string& command,
                        std::uint64_t seed) {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  nlohmann::json j;
  j["command"] = command;
  j["seed"] = seed;
  j["timestamp"] = stamp;
  write_file(out_dir + "/run_metadata.json", j.dump(2) + "\n");
}

void cmd_sample(const ExperimentConfig& config, int threads) {
  const Boundary boundary = config.make_boundary();
  std::vector<RunResult> results(static_cast<std::size_t>(config.n_replicas));
  parallel_for(config.n_replicas, threads, [&](long rep) {
    results[static_cast<std::size_t>(rep)] =
        run_chain(config.model, config.window, boundary, config.K, config.chain, config.seed,
                  static_cast<std::uint64_t>(rep));
  });
  for (long rep = 0; rep < config.n_replicas; ++rep) {
    const std::string suffix = config.n_replicas > 1 ? "_" + std::to_string(rep) : "";
    const RunResult& r = results[static_cast<std::size_t>(rep)];
    write_file(config.out_dir + "/trace" + suffix + ".csv", trace_to_csv(r.records));
    write_file(config.out_dir + "/snapshot" + suffix + ".json",
               r.final_config.to_json(config.K > 1 ? &r.final_types : nullptr) + "\n");
  }
  write_run_metadata(config.out_dir, "sample", config.seed);
}

namespace {

struct ReplicaSummary {
  double value = 0;
  long replica = 0;
  RecordMeans means;
  bool crossed = false;
  double p_hat = -1;  // -1: diamond not configured
  long largest_site_cluster = 0;
  long n_sites = 0;
};

std::string summary_csv(const std::vector<ReplicaSummary>& rows, bool with_sites) {
  std::ostringstream os;
  os << "value,replica,records,mean_n,mean_area,mean_perimeter,mean_euler,mean_components,"
        "mean_holes,crossing";
  if (with_sites) os << ",p_hat,largest_site_cluster,n_sites";
  os << "\n";
  for (const auto& r : rows) {
    os << fmt17(r.value) << "," << r.replica << "," << r.means.records << "," << fmt17(r.means.n)
       << "," << fmt17(r.means.area) << "," << fmt17(r.means.perimeter) << ","
       << fmt17(r.means.euler) << "," << fmt17(r.means.components) << "," << fmt17(r.means.holes)
       << "," << (r.crossed ? 1 : 0);
    if (with_sites) os << "," << fmt17(r.p_hat) << "," << r.largest_site_cluster << "," << r.n_sites;
    os << "\n";
  }
  return os.str();
}

}  // namespace

void cmd_sweep(const ExperimentConfig& config, int threads) {
  if (!config.sweep_parameter) throw ConfigError("sweep requested without a sweep block");
  const Boundary boundary = config.make_boundary();
  const long n_values = static_cast<long>(config.sweep_values.size());
  const long total = n_values * config.n_replicas;
  std::vector<ReplicaSummary> rows(static_cast<std::size_t>(total));

  parallel_for(total, threads, [&](long flat) {
    const long vi = flat / config.n_replicas;
    const long rep = flat % config.n_replicas;
    const double value = config.sweep_values[static_cast<std::size_t>(vi)];
    const QuermassParams params = config.with_sweep_value(value);
    const RunResult run = run_chain(params, config.window, boundary, config.K, config.chain,
                                    config.seed, static_cast<std::uint64_t>(flat));
    ReplicaSummary row;
    row.value = value;
    row.replica = rep;
    row.means = record_means(run.records);
    row.crossed = crossing(run.final_config, config.window, config.crossing_direction);
    if (config.diamond_ell) {
      const DiamondGeometry geom(*config.diamond_ell, params.r0, params.r1);
      const SiteField field = site_field(run.final_config, geom);
      const auto summary = site_percolation_summary(field);
      row.p_hat = summary.p_hat;
      row.largest_site_cluster = summary.largest_site_cluster;
      row.n_sites = summary.n_sites;
    }
    rows[static_cast<std::size_t>(flat)] = row;
  });

  write_file(config.out_dir + "/summary.csv", summary_csv(rows, config.diamond_ell.has_value()));

  std::ostringstream agg;
  agg << "value,replicas,mean_n,se_n,mean_area,se_area,crossing_freq,se_crossing";
  if (config.diamond_ell) agg << ",mean_p_hat,se_p_hat";
  agg << "\n";
  for (long vi = 0; vi < n_values; ++vi) {
    std::vector<double> ns, areas, crossings, phats;
    for (long rep = 0; rep < config.n_replicas; ++rep) {
      const auto& row = rows[static_cast<std::size_t>(vi * config.n_replicas + rep)];
      ns.push_back(row.means.n);
      areas.push_back(row.means.area);
      crossings.push_back(row.crossed ? 1.0 : 0.0);
      if (config.diamond_ell) phats.push_back(row.p_hat);
    }
    const MeanSe mn = mean_se(ns), ma = mean_se(areas), mc = mean_se(crossings);
    agg << fmt17(config.sweep_values[static_cast<std::size_t>(vi)]) << "," << config.n_replicas
        << "," << fmt17(mn.mean) << "," << fmt17(mn.se) << "," << fmt17(ma.mean) << ","
        << fmt17(ma.se) << "," << fmt17(mc.mean) << "," << fmt17(mc.se);
    if (config.diamond_ell) {
      const MeanSe mp = mean_se(phats);
      agg << "," << fmt17(mp.mean) << "," << fmt17(mp.se);
    }
    agg << "\n";
  }
  write_file(config.out_dir + "/aggregate.csv", agg.str());
  write_run_metadata(config.out_dir, "sweep", config.seed);
}

void cmd_multitype(const ExperimentConfig& config, int threads) {
  if (config.K < 2) throw ConfigError("multitype requires model.K >= 2");
  const Boundary boundary = config.make_boundary();
  struct Row {
    RecordMeans means;
    double dominance = 0;
    bool nonempty = false;
  };
  std::vector<Row> rows(static_cast<std::size_t>(config.n_replicas));
  parallel_for(config.n_replicas, threads, [&](long rep) {
    const RunResult run = run_chain(config.model, config.window, boundary, config.K, config.chain,
                                    config.seed, static_cast<std::uint64_t>(rep));
    Row row;
    row.means = record_means(run.records);
    double total = 0, biggest = 0;
    for (double v : row.means.per_type) {
      total += v;
      biggest = std::max(biggest, v);
    }
    row.nonempty = total > 0;
    row.dominance = total > 0 ? biggest / total : 0.0;
    rows[static_cast<std::size_t>(rep)] = row;
  });

  std::ostringstream csv;
  csv << "replica,records,mean_n,dominance";
  for (int k = 0; k < config.K; ++k) csv << ",mean_n_type" << k;
  csv << "\n";
  std::vector<double> dominances;
  for (long rep = 0; rep < config.n_replicas; ++rep) {
    const Row& row = rows[static_cast<std::size_t>(rep)];
    csv << rep << "," << row.means.records << "," << fmt17(row.means.n) << ","
        << fmt17(row.dominance);
    for (double v : row.means.per_type) csv << "," << fmt17(v);
    csv << "\n";
    if (row.nonempty) dominances.push_back(row.dominance);
  }
  write_file(config.out_dir + "/multitype.csv", csv.str());

  const MeanSe md = mean_se(dominances);
  std::vector<long> histogram(10, 0);
  for (double d : dominances) {
    int bin = static_cast<int>(d * 10.0);
    if (bin > 9) bin = 9;
    ++histogram[static_cast<std::size_t>(bin)];
  }
  nlohmann::json j;
  j["K"] = config.K;
  j["replicas"] = config.n_replicas;
  j["nonemptyReplicas"] = static_cast<long>(dominances.size());
  j["meanDominance"] = md.mean;
  j["seDominance"] = md.se;
  j["dominanceHistogram"] = histogram;
  j["perTypeMeanDensity"] = nlohmann::json::array();
  std::vector<double> per_type_mean(static_cast<std::size_t>(config.K), 0.0);
  long used = 0;
  for (const Row& row : rows)
    if (row.means.records > 0) {
      ++used;
      for (std::size_t k = 0; k < per_type_mean.size() && k < row.means.per_type.size(); ++k)
        per_type_mean[k] += row.means.per_type[k];
    }
  for (double v : per_type_mean)
    j["perTypeMeanDensity"].push_back(used > 0 ? v / static_cast<double>(used) / config.window.area() : 0.0);
  write_file(config.out_dir + "/multitype_report.json", j.dump(2) + "\n");
  write_run_metadata(config.out_dir, "multitype", config.seed);
}

void cmd_percolate(const ExperimentConfig& config, int threads) {
  std::vector<Configuration> states;
  if (config.snapshot_path) {
    states.push_back(Configuration::from_json(read_file(*config.snapshot_path)));
  } else {
    const Boundary boundary = config.make_boundary();
    states.resize(static_cast<std::size_t>(config.n_replicas), Configuration({0, 0, 1, 1}, 1));
    parallel_for(config.n_replicas, threads, [&](long rep) {
      states[static_cast<std::size_t>(rep)] =
          run_chain(config.model, config.window, boundary, config.K, config.chain, config.seed,
                    static_cast<std::uint64_t>(rep))
              .final_config;
    });
  }

  nlohmann::json out = nlohmann::json::array();
  for (std::size_t i = 0; i < states.size(); ++i) {
    const Configuration& state = states[i];
    const Rect window = config.snapshot_path ? state.window() : config.window;
    const ComponentSet comps = components(state);
    long largest = 0;
    std::vector<long> sizes(static_cast<std::size_t>(comps.count), 0);
    for (int lab : comps.label) largest = std::max(largest, ++sizes[static_cast<std::size_t>(lab)]);
    nlohmann::json item;
    item["sample"] = i;
    item["n"] = state.size();
    item["components"] = comps.count;
    item["largestComponent"] = largest;
    item["crossingHorizontal"] = crossing(state, window, Direction::horizontal);
    item["crossingVertical"] = crossing(state, window, Direction::vertical);
    if (config.diamond_ell) {
      const DiamondGeometry geom(*config.diamond_ell, config.model.r0, config.model.r1);
      const SiteField field = site_field(state, geom);
      const auto summary = site_percolation_summary(field);
      item["pHat"] = summary.p_hat;
      item["latticeCrossing"] = summary.lattice_crossing;
      item["largestSiteCluster"] = summary.largest_site_cluster;
      item["nSites"] = summary.n_sites;
      const std::string suffix = states.size() > 1 ? "_" + std::to_string(i) : "";
      write_file(config.out_dir + "/sites" + suffix + ".csv", field.to_csv());
    }
    out.push_back(item);
  }
  write_file(config.out_dir + "/percolation.json", out.dump(2) + "\n");
  write_run_metadata(config.out_dir, "percolate", config.seed);
}

validate::Report cmd_validate(const validate::Options& options, const std::string& out_dir) {
  const validate::Report report = validate::run_all(options);
  write_file(out_dir + "/validate_report.json", report.to_json() + "\n");
  write_run_metadata(out_dir, "validate", options.seed);
  return report;
}

}  // namespace quermass::experiments

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "roughscl/distance.hpp"
#include "roughscl/errors.hpp"
#include "roughscl/flux.hpp"
#include "roughscl/io.hpp"
#include "roughscl/orm.hpp"
#include "roughscl/path.hpp"
#include "roughscl/solver.hpp"
#include "roughscl/version.hpp"

using nlohmann::json;
using namespace roughscl;

namespace {

json load_config(const std::string& filename) {
  if (filename.empty()) return json::object();
  std::ifstream in(filename);
  if (!in.good()) throw IoError("cannot open " + filename);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument(filename + ": " + e.what());
  }
}

template <typename T>
void override_from(const json& cfg, const char* key, T& value) {
  if (cfg.contains(key)) value = cfg.at(key).get<T>();
}

std::uint64_t resolve_seed(const CLI::Option* seed_opt, std::uint64_t flag_value,
                           const json& cfg) {
  std::uint64_t seed = 0;
  if (const char* env = std::getenv("ROUGHSCL_SEED")) {
    std::string text(env);
    std::size_t used = 0;
    try {
      seed = std::stoull(text, &used);
    } catch (const std::exception&) {
      used = std::string::npos;
    }
    if (used != text.size()) {
      throw std::invalid_argument("ROUGHSCL_SEED is not an unsigned integer");
    }
  }
  if (seed_opt->count() > 0) seed = flag_value;
  override_from(cfg, "seed", seed);
  return seed;
}

void emit(const json& output) { std::cout << output.dump(2) << "\n"; }

json bound_json(double b) {
  if (b == kInf) return "inf";
  return b;
}

json report_json(const OleinikReport& report) {
  json quantiles = json::array();
  for (const auto& [p, v] : report.quantile_violations) {
    quantiles.push_back(json::array({p, v}));
  }
  return json{{"lower_bound", bound_json(report.lower_bound)},
              {"upper_bound", bound_json(report.upper_bound)},
              {"slack", report.slack},
              {"max_violation_lower", report.max_violation_lower},
              {"max_violation_upper", report.max_violation_upper},
              {"n_violations", report.n_violations},
              {"quantile_violations", quantiles}};
}

struct BoundFlags {
  std::string m_plus = "inf";
  std::string m_minus = "inf";
};

double bound_from_json(const json& value) {
  if (value.is_string()) return parse_bound(value.get<std::string>());
  return value.get<double>();
}

RegularityBounds resolve_bounds(const json& cfg, const char* key_plus, const char* key_minus,
                                const BoundFlags& flags) {
  double m_plus = parse_bound(flags.m_plus);
  double m_minus = parse_bound(flags.m_minus);
  if (cfg.contains(key_plus)) m_plus = bound_from_json(cfg.at(key_plus));
  if (cfg.contains(key_minus)) m_minus = bound_from_json(cfg.at(key_minus));
  RegularityBounds bounds{m_minus, m_plus};
  if (!(bounds.m_plus >= 0) || !(bounds.m_minus >= 0)) {
    throw std::invalid_argument("regularity bounds must be nonnegative");
  }
  return bounds;
}

int cmd_sample(const CLI::Option* seed_opt, std::uint64_t seed_flag, int n, double tau,
               double scale, const std::string& out, const std::string& config_file) {
  auto cfg = load_config(config_file);
  override_from(cfg, "n", n);
  override_from(cfg, "tau", tau);
  override_from(cfg, "scale", scale);
  std::string out_file = out;
  override_from(cfg, "out", out_file);
  auto seed = resolve_seed(seed_opt, seed_flag, cfg);
  if (n < 1) throw std::invalid_argument("need at least one segment");
  if (!(tau > 0)) throw std::invalid_argument("tau must be positive");

  auto z = sample_brownian(tau, static_cast<std::size_t>(n), seed, scale);
  write_path_csv(out_file, z);
  emit(json{{"seed", seed},
            {"n_segments", n},
            {"tau", tau},
            {"out", out_file},
            {"version", kVersion},
            {"config",
             json{{"n", n}, {"tau", tau}, {"scale", scale}, {"seed", seed}, {"out", out_file}}}});
  return 0;
}

int cmd_compress(std::string path_file, std::optional<double> tau, BoundFlags flags,
                 std::string out, const std::string& config_file) {
  auto cfg = load_config(config_file);
  override_from(cfg, "path", path_file);
  if (cfg.contains("tau")) tau = cfg.at("tau").get<double>();
  override_from(cfg, "out", out);
  auto bounds = resolve_bounds(cfg, "m_plus", "m_minus", flags);

  auto z = read_path_csv(path_file);
  double horizon = tau.value_or(z.horizon());
  auto res = orm(z, horizon, bounds);
  write_path_csv(out, res.compressed);

  auto zt = horizon == z.horizon() ? z : truncate_path(z, horizon);
  double tv_before = total_variation(zt);
  double tv_after = total_variation(res.compressed);
  auto n_before = zt.times.size() - 1;
  auto n_after = res.taus.size() - 1;

  json taus = json::array();
  for (auto it = res.taus.rbegin(); it != res.taus.rend(); ++it) taus.push_back(*it);
  emit(json{{"n_segments", n_after},
            {"taus", taus},
            {"t_plus", res.t_plus},
            {"t_minus", res.t_minus},
            {"tv_before", tv_before},
            {"tv_after", tv_after},
            {"tv_ratio", tv_before > 0 ? tv_after / tv_before : 1.0},
            {"compression_factor", static_cast<double>(n_before) / n_after},
            {"version", kVersion},
            {"config",
             json{{"path", path_file},
                  {"tau", horizon},
                  {"m_plus", bound_json(bounds.m_plus)},
                  {"m_minus", bound_json(bounds.m_minus)},
                  {"out", out}}}});
  return 0;
}

int cmd_solve(std::string flux_name, std::string u0_file, std::string path_file,
              std::optional<double> tau, double cfl, BoundFlags flags, bool bounds_given,
              int substeps, bool compare_orm, std::string out, const std::string& config_file) {
  auto cfg = load_config(config_file);
  override_from(cfg, "flux", flux_name);
  override_from(cfg, "u0", u0_file);
  override_from(cfg, "path", path_file);
  if (cfg.contains("tau")) tau = cfg.at("tau").get<double>();
  override_from(cfg, "cfl", cfl);
  if (cfg.contains("m_plus") || cfg.contains("m_minus")) bounds_given = true;
  override_from(cfg, "substeps", substeps);
  override_from(cfg, "compare_orm", compare_orm);
  override_from(cfg, "out", out);

  auto flux = make_flux(flux_name);
  auto u0 = read_solution_csv(u0_file);
  auto z = read_path_csv(path_file);
  double horizon = tau.value_or(z.horizon());
  auto bounds = bounds_given ? resolve_bounds(cfg, "m_plus", "m_minus", flags)
                             : estimate_bounds(u0, flux);

  StepStats stats;
  SolveOptions options;
  options.cfl = cfl;
  options.forced_substeps = substeps;
  options.stats = &stats;
  auto u = solve_path(u0, z, horizon, flux, options);
  write_solution_csv(out, u);

  auto report = oleinik_report(u, z, horizon, bounds, flux);
  json output{{"tau", horizon},
              {"n_cells", u.n_cells},
              {"mass_initial", mass(u0)},
              {"mass_final", mass(u)},
              {"m_plus", bound_json(bounds.m_plus)},
              {"m_minus", bound_json(bounds.m_minus)},
              {"oleinik", report_json(report)},
              {"stats",
               json{{"steps", stats.steps},
                    {"max_mass_drift", stats.max_mass_drift},
                    {"max_overshoot", stats.max_overshoot}}},
              {"version", kVersion},
              {"config",
               json{{"flux", flux_name},
                    {"u0", u0_file},
                    {"path", path_file},
                    {"tau", horizon},
                    {"cfl", cfl},
                    {"m_plus", bound_json(bounds.m_plus)},
                    {"m_minus", bound_json(bounds.m_minus)},
                    {"substeps", substeps},
                    {"compare_orm", compare_orm},
                    {"out", out}}}};
  if (compare_orm) {
    auto res = orm(z, horizon, bounds);
    auto uc = solve_path(u0, res.compressed, horizon, flux, options);
    output["orm_gap"] = l1_distance(u, uc);
    output["orm_segments"] = res.taus.size() - 1;
  }
  emit(output);
  return 0;
}

int cmd_distance(std::string path1, std::string path2, BoundFlags flags1, BoundFlags flags2,
                 bool oracle, const std::string& config_file) {
  auto cfg = load_config(config_file);
  override_from(cfg, "path1", path1);
  override_from(cfg, "path2", path2);
  override_from(cfg, "oracle", oracle);
  auto b1 = resolve_bounds(cfg, "m_plus1", "m_minus1", flags1);
  auto b2 = resolve_bounds(cfg, "m_plus2", "m_minus2", flags2);

  auto z1 = read_path_csv(path1);
  auto z2 = read_path_csv(path2);
  auto grid = build_cost_grid(z1, z2, b1, b2);
  auto report = dp_on_grid(grid);

  json witness = json::array();
  for (const auto& [s, t] : report.witness) witness.push_back(json::array({s, t}));
  auto kappa_json = [](bool finite, std::pair<double, double> point) {
    json k{{"finite", finite}};
    if (finite) {
      k["s"] = point.first;
      k["t"] = point.second;
    }
    return k;
  };
  json output{{"value", report.value},
              {"grid_dims", json::array({report.n1, report.n2})},
              {"witness", witness},
              {"kappa_plus", kappa_json(report.kappa_plus_finite, report.kappa_plus)},
              {"kappa_minus", kappa_json(report.kappa_minus_finite, report.kappa_minus)},
              {"version", kVersion},
              {"config",
               json{{"path1", path1},
                    {"path2", path2},
                    {"m_plus1", bound_json(b1.m_plus)},
                    {"m_minus1", bound_json(b1.m_minus)},
                    {"m_plus2", bound_json(b2.m_plus)},
                    {"m_minus2", bound_json(b2.m_minus)},
                    {"oracle", oracle}}}};
  if (oracle) output["oracle_value"] = brute_force_distance(grid);
  emit(output);
  return 0;
}

int cmd_convergence(const CLI::Option* seed_opt, std::uint64_t seed_flag, std::string flux_name,
                    std::string u0_file, double tau, double scale, int target_segments,
                    std::string target_path, std::vector<int> levels, double cfl, int jobs,
                    std::string out, const std::string& config_file) {
  auto cfg = load_config(config_file);
  override_from(cfg, "flux", flux_name);
  override_from(cfg, "u0", u0_file);
  override_from(cfg, "tau", tau);
  override_from(cfg, "scale", scale);
  override_from(cfg, "target_segments", target_segments);
  override_from(cfg, "target_path", target_path);
  override_from(cfg, "levels", levels);
  override_from(cfg, "cfl", cfl);
  override_from(cfg, "jobs", jobs);
  override_from(cfg, "out", out);
  auto seed = resolve_seed(seed_opt, seed_flag, cfg);
  if (levels.empty()) throw std::invalid_argument("need at least one refinement level");
  for (int level : levels) {
    if (level < 1) throw std::invalid_argument("levels must be positive");
  }
  if (jobs < 1) throw std::invalid_argument("jobs must be positive");
  if (!(tau > 0)) throw std::invalid_argument("tau must be positive");
  if (target_segments < 1) throw std::invalid_argument("target_segments must be positive");

  auto flux = make_flux(flux_name);
  auto u0 = read_solution_csv(u0_file);
  PiecewiseLinearPath target =
      target_path.empty()
          ? sample_brownian(tau, static_cast<std::size_t>(target_segments), seed, scale)
          : read_path_csv(target_path);
  if (!target_path.empty() && tau != target.horizon()) {
    target = truncate_path(target, tau);
  }

  auto u_ref = solve_path(u0, target, tau, flux, cfl);

  struct LevelRow {
    int n_segments = 0;
    double sup_diff = 0;
    double l1_error = 0;
  };
  std::vector<LevelRow> rows(levels.size());
  auto run_level = [&](std::size_t idx) {
    int n = levels[idx];
    std::vector<double> times(n + 1), values(n + 1);
    for (int k = 0; k <= n; ++k) {
      times[k] = k == n ? tau : tau * k / n;
      values[k] = eval(target, times[k]);
    }
    PiecewiseLinearPath zn(std::move(times), std::move(values));
    auto un = solve_path(u0, zn, tau, flux, cfl);
    rows[idx] = {n, uniform_distance(zn, target), l1_distance(un, u_ref)};
  };
  if (jobs <= 1) {
    for (std::size_t i = 0; i < levels.size(); ++i) run_level(i);
  } else {
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w) {
      workers.emplace_back([&, w] {
        for (std::size_t i = w; i < levels.size(); i += jobs) run_level(i);
      });
    }
    for (auto& worker : workers) worker.join();
  }

  std::ofstream table(out, std::ios::binary);
  if (!table.good()) throw IoError("cannot open " + out + " for writing");
  table << "n_segments,sup_diff,l1_error\n";
  char line[120];
  for (const auto& row : rows) {
    std::snprintf(line, sizeof(line), "%d,%.17g,%.17g\n", row.n_segments, row.sup_diff,
                  row.l1_error);
    table << line;
  }
  if (!table.good()) throw IoError("failed writing " + out);

  // Least-squares slope of log error against log path distance, over the
  // rows where both are positive.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (const auto& row : rows) {
    if (row.sup_diff > 0 && row.l1_error > 0) {
      double x = std::log(row.sup_diff), y = std::log(row.l1_error);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++m;
    }
  }
  json exponent;
  if (m >= 2 && sxx * m - sx * sx > 0) {
    exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  }

  json row_json = json::array();
  for (const auto& row : rows) {
    row_json.push_back(json{{"n_segments", row.n_segments},
                            {"sup_diff", row.sup_diff},
                            {"l1_error", row.l1_error}});
  }
  emit(json{{"rows", row_json},
            {"exponent", exponent},
            {"seed", seed},
            {"version", kVersion},
            {"config",
             json{{"flux", flux_name},
                  {"u0", u0_file},
                  {"tau", tau},
                  {"scale", scale},
                  {"seed", seed},
                  {"target_segments", target_segments},
                  {"target_path", target_path},
                  {"levels", levels},
                  {"cfl", cfl},
                  {"jobs", jobs},
                  {"out", out}}}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scalar conservation laws driven by rough time-paths"};
  app.require_subcommand(1);
  std::string config_file;

  auto* sample = app.add_subcommand("sample", "Sample a piecewise-linear Brownian path");
  int sample_n = 1;
  double sample_tau = 1.0, sample_scale = 1.0;
  std::uint64_t sample_seed = 0;
  std::string sample_out;
  sample->add_option("--n", sample_n, "Number of segments");
  sample->add_option("--tau", sample_tau, "Horizon");
  sample->add_option("--scale", sample_scale, "Diffusion scale");
  auto* sample_seed_opt = sample->add_option("--seed", sample_seed, "RNG seed");
  sample->add_option("--out", sample_out, "Output path CSV")->required();
  sample->add_option("--config", config_file, "JSON config overriding flags");

  auto* compress = app.add_subcommand("compress", "Compress a path to its record times");
  std::string compress_path, compress_out;
  double compress_tau = 0;
  BoundFlags compress_bounds;
  compress->add_option("--path", compress_path, "Input path CSV")->required();
  auto* compress_tau_opt = compress->add_option("--tau", compress_tau, "Horizon (default: full)");
  compress->add_option("--m-plus", compress_bounds.m_plus, "Increasing-quotient bound");
  compress->add_option("--m-minus", compress_bounds.m_minus, "Decreasing-quotient bound");
  compress->add_option("--out", compress_out, "Compressed path CSV")->required();
  compress->add_option("--config", config_file, "JSON config overriding flags");

  auto* solve = app.add_subcommand("solve", "Solve the conservation law along a path");
  std::string solve_flux = "burgers", solve_u0, solve_path_file, solve_out;
  double solve_tau = 0, solve_cfl = 0.45;
  BoundFlags solve_bounds;
  int solve_substeps = 0;
  bool solve_compare = false;
  solve->add_option("--flux", solve_flux, "Flux model name");
  solve->add_option("--u0", solve_u0, "Initial data CSV")->required();
  solve->add_option("--path", solve_path_file, "Driving path CSV")->required();
  auto* solve_tau_opt = solve->add_option("--tau", solve_tau, "Horizon (default: full)");
  solve->add_option("--cfl", solve_cfl, "CFL number");
  auto* solve_mp = solve->add_option("--m-plus", solve_bounds.m_plus, "Increasing-quotient bound");
  auto* solve_mm =
      solve->add_option("--m-minus", solve_bounds.m_minus, "Decreasing-quotient bound");
  solve->add_option("--substeps", solve_substeps, "Force the per-segment substep count");
  solve->add_flag("--compare-orm", solve_compare, "Also solve the compressed path");
  solve->add_option("--out", solve_out, "Solution CSV")->required();
  solve->add_option("--config", config_file, "JSON config overriding flags");

  auto* distance = app.add_subcommand("distance", "Equivalence-class distance of two paths");
  std::string distance_path1, distance_path2;
  BoundFlags distance_b1, distance_b2;
  bool distance_oracle = false;
  distance->add_option("--path1", distance_path1, "First path CSV")->required();
  distance->add_option("--path2", distance_path2, "Second path CSV")->required();
  distance->add_option("--m-plus1", distance_b1.m_plus, "Bound for the first path");
  distance->add_option("--m-minus1", distance_b1.m_minus, "Bound for the first path");
  distance->add_option("--m-plus2", distance_b2.m_plus, "Bound for the second path");
  distance->add_option("--m-minus2", distance_b2.m_minus, "Bound for the second path");
  distance->add_flag("--oracle", distance_oracle, "Cross-check with exhaustive enumeration");
  distance->add_option("--config", config_file, "JSON config overriding flags");

  auto* convergence = app.add_subcommand("convergence", "Path-refinement convergence study");
  std::string conv_flux = "burgers", conv_u0, conv_target_path, conv_out;
  double conv_tau = 1.0, conv_scale = 1.0, conv_cfl = 0.45;
  int conv_target_segments = 128, conv_jobs = 1;
  std::uint64_t conv_seed = 0;
  std::vector<int> conv_levels;
  convergence->add_option("--flux", conv_flux, "Flux model name");
  convergence->add_option("--u0", conv_u0, "Initial data CSV")->required();
  auto* conv_seed_opt = convergence->add_option("--seed", conv_seed, "RNG seed");
  convergence->add_option("--tau", conv_tau, "Horizon");
  convergence->add_option("--scale", conv_scale, "Diffusion scale");
  convergence->add_option("--target-segments", conv_target_segments,
                          "Segments of the Brownian target");
  convergence->add_option("--target-path", conv_target_path,
                          "Explicit target path CSV (overrides sampling)");
  convergence->add_option("--levels", conv_levels, "Refinement level (repeatable)");
  convergence->add_option("--cfl", conv_cfl, "CFL number");
  convergence->add_option("--jobs", conv_jobs, "Worker threads");
  convergence->add_option("--out", conv_out, "Rate table CSV")->required();
  convergence->add_option("--config", config_file, "JSON config overriding flags");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sample->parsed()) {
      return cmd_sample(sample_seed_opt, sample_seed, sample_n, sample_tau, sample_scale,
                        sample_out, config_file);
    }
    if (compress->parsed()) {
      return cmd_compress(compress_path,
                          compress_tau_opt->count() > 0 ? std::optional<double>(compress_tau)
                                                        : std::nullopt,
                          compress_bounds, compress_out, config_file);
    }
    if (solve->parsed()) {
      return cmd_solve(solve_flux, solve_u0, solve_path_file,
                       solve_tau_opt->count() > 0 ? std::optional<double>(solve_tau)
                                                  : std::nullopt,
                       solve_cfl, solve_bounds, solve_mp->count() > 0 || solve_mm->count() > 0,
                       solve_substeps, solve_compare, solve_out, config_file);
    }
    if (distance->parsed()) {
      return cmd_distance(distance_path1, distance_path2, distance_b1, distance_b2,
                          distance_oracle, config_file);
    }
    if (convergence->parsed()) {
      return cmd_convergence(conv_seed_opt, conv_seed, conv_flux, conv_u0, conv_tau, conv_scale,
                             conv_target_segments, conv_target_path, conv_levels, conv_cfl,
                             conv_jobs, conv_out, config_file);
    }
  } catch (const MathDomainError& e) {
    std::cerr << "roughscl: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "roughscl: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "roughscl: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "roughscl: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "roughscl: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "no3l/census.hpp"
#include "no3l/grid.hpp"
#include "no3l/heuristic.hpp"
#include "no3l/montecarlo.hpp"
#include "no3l/solver.hpp"

#ifndef NO3L_VERSION
#define NO3L_VERSION "dev"
#endif

namespace no3l::cli {

namespace {

using json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

// Provenance block attached to every report.
struct RunManifest {
  std::string subcommand;
  json parameters = json::object();
  std::optional<std::uint64_t> seed;
  std::string started = utc_timestamp();

  json finish() const {
    json m;
    m["subcommand"] = subcommand;
    m["parameters"] = parameters;
    m["seed"] = seed ? json(*seed) : json(nullptr);
    m["tool_version"] = NO3L_VERSION;
    m["started"] = started;
    m["finished"] = utc_timestamp();
    return m;
  }
};

json point_json(const GridPoint& p) { return json::array({p.x, p.y}); }

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double round_to(double v, int places) {
  const double scale = std::pow(10.0, places);
  return std::round(v * scale) / scale;
}

struct KSweep {
  double lo = 0, hi = 0, step = 0;
  std::vector<double> values() const {
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> out;
    for (long i = 0; i < count; ++i) out.push_back(lo + static_cast<double>(i) * step);
    return out;
  }
};

KSweep parse_sweep(const std::string& spec) {
  KSweep s;
  char eq = 0, c1 = 0, c2 = 0;
  std::istringstream is(spec);
  if (spec.size() < 2 || spec[0] != 'k') throw UsageError("--sweep expects k=<lo>:<hi>:<step>");
  is.get();
  if (!(is >> eq >> s.lo >> c1 >> s.hi >> c2 >> s.step) || eq != '=' || c1 != ':' || c2 != ':' ||
      !(is >> std::ws).eof())
    throw UsageError("--sweep expects k=<lo>:<hi>:<step>");
  if (!(s.step > 0) || s.hi < s.lo) throw UsageError("--sweep needs step > 0 and hi >= lo");
  return s;
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

// CSV with a header row.
void emit_csv(std::ostream& out, const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
}

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

unsigned resolve_threads(std::optional<unsigned> flag) {
  if (flag) {
    if (*flag == 0) throw UsageError("--threads must be positive");
    return *flag;
  }
  if (const char* env = std::getenv("NO3L_THREADS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v <= 0 || v > 4096) throw UsageError("NO3L_THREADS must be a positive integer");
    return static_cast<unsigned>(v);
  }
  return 1;
}

json survival_json(const IndependenceGap& g) {
  const auto& t = g.trials;
  json j;
  j["n"] = t.n;
  j["k"] = t.k;
  j["subset_size"] = t.subset_size;
  j["samples"] = t.samples;
  j["survivors"] = t.survivors;
  j["p_hat"] = t.p_hat;
  j["stderr"] = t.std_error;
  j["predicted_log"] = t.predicted_log;
  j["seed"] = t.seed;
  j["workers"] = t.workers;
  j["rng"] = std::string(kRngAlgorithm);
  j["gap"] = g.gap ? json(*g.gap) : json(nullptr);
  j["gap_error_bar"] = g.error_bar ? json(*g.error_bar) : json(nullptr);
  j["all_died"] = g.all_died;
  j["gap_upper_bound"] = g.all_died ? json(g.gap_upper_bound) : json(nullptr);
  return j;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"no3l: no-three-in-line census, solver, heuristic estimates and sampling", "no3l"};
  app.require_subcommand(1);
  // Global flags may also follow the subcommand.
  app.fallthrough();
  app.set_version_flag("--version", NO3L_VERSION);

  std::optional<unsigned> threads_flag;
  bool csv = false;
  app.add_option("--threads", threads_flag, "worker threads (fallback: NO3L_THREADS, then 1)");
  app.add_flag("--csv", csv, "CSV output instead of JSON where supported");

  // census
  auto* census = app.add_subcommand("census", "exact collinear-triple count t_n");
  std::int64_t census_n = 0;
  bool census_brute = false, census_compare = false;
  std::int64_t brute_cap = kDefaultBruteCap;
  census->add_option("--n", census_n, "grid side length")->required();
  census->add_flag("--brute", census_brute, "also run the brute-force oracle");
  census->add_option("--brute-cap", brute_cap, "largest n the brute-force oracle accepts")
      ->capture_default_str();
  census->add_flag("--compare", census_compare, "add |ratio - 1| against (3/pi^2) n^4 ln n");

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "search for a maximum no-three-in-line set");
  std::int64_t solve_n = 0;
  std::string solve_target = "2n";
  std::optional<double> time_budget;
  std::optional<std::uint64_t> node_budget;
  bool symmetry = false;
  std::string out_path;
  solve_cmd->add_option("--n", solve_n, "grid side length")->required();
  solve_cmd->add_option("--target", solve_target, "2n, max, or an explicit size")->capture_default_str();
  solve_cmd->add_option("--time-budget", time_budget, "seconds (default 60 unless --target max)");
  solve_cmd->add_option("--node-budget", node_budget, "maximum search nodes");
  solve_cmd->add_flag("--symmetry", symmetry, "break the vertical mirror symmetry in column 0");
  solve_cmd->add_option("--out", out_path, "write the witness to this file");

  // verify
  auto* verify = app.add_subcommand("verify", "check a witness file");
  std::string verify_path;
  verify->add_option("file", verify_path, "witness file")->required();

  // estimate
  auto* estimate = app.add_subcommand("estimate", "heuristic estimate chain at (n, k)");
  std::int64_t est_n = 0;
  double est_k = 0;
  double slack = 1.0;
  bool est_json = false;
  estimate->add_option("--n", est_n, "grid side length")->required();
  estimate->add_option("--k", est_k, "density: subsets of round(k n) points")->required();
  estimate->add_option("--slack", slack, "C in the +-C n bracket")->capture_default_str();
  estimate->add_flag("--json", est_json, "JSON output (the default)");

  // constants
  auto* constants = app.add_subcommand("constants", "conjectured constants for f_n / n");

  // mc
  auto* mc = app.add_subcommand("mc", "Monte Carlo sampling");
  mc->require_subcommand(1);
  auto* mc_surv = mc->add_subcommand("survival", "survival of random round(kn)-subsets");
  std::int64_t mc_n = 0;
  double mc_k = 0;
  std::uint64_t mc_samples = 0, mc_seed = 0;
  std::string sweep;
  mc_surv->add_option("--n", mc_n, "grid side length")->required();
  auto* k_opt = mc_surv->add_option("--k", mc_k, "density");
  mc_surv->add_option("--samples", mc_samples, "number of random subsets")->required();
  mc_surv->add_option("--seed", mc_seed, "RNG seed")->required();
  auto* sweep_opt = mc_surv->add_option("--sweep", sweep, "k=<lo>:<hi>:<step>");
  k_opt->excludes(sweep_opt);
  auto* mc_tri = mc->add_subcommand("triples", "collinearity of random triples");
  mc_tri->add_option("--n", mc_n, "grid side length")->required();
  mc_tri->add_option("--samples", mc_samples, "number of random triples")->required();
  mc_tri->add_option("--seed", mc_seed, "RNG seed")->required();

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.push_back("no3l");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << NO3L_VERSION << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n\n" << app.help("", CLI::AppFormatMode::All);
    return kExitUsage;
  }

  try {
    const unsigned threads = resolve_threads(threads_flag);
    RunManifest manifest;
    manifest.parameters["threads"] = threads;

    if (census->parsed()) {
      manifest.subcommand = "census";
      manifest.parameters["n"] = census_n;
      manifest.parameters["brute"] = census_brute;
      manifest.parameters["compare"] = census_compare;
      const GridSize n(census_n);
      const auto t = count_triples_fast(n, threads);
      std::optional<AsymptoticComparison> cmp;
      if (n.value() >= 2) cmp = compare_asymptotic(n, threads);
      std::optional<TripleCount> brute;
      if (census_brute) brute = count_triples_brute(n, brute_cap);

      if (csv) {
        std::vector<std::string> header{"n", "t", "main_term", "ratio"};
        std::vector<std::string> row{std::to_string(n.value()), to_decimal(t.value),
                                     cmp ? num(cmp->main_term) : "", cmp ? num(cmp->ratio) : ""};
        if (brute) {
          header.insert(header.end(), {"t_brute", "oracle_agrees"});
          row.insert(row.end(), {to_decimal(brute->value), brute->value == t.value ? "true" : "false"});
        }
        emit_csv(out, header, {row});
        return kExitOk;
      }
      json j;
      j["n"] = n.value();
      j["t"] = to_decimal(t.value);
      j["main_term"] = cmp ? json(cmp->main_term) : json(nullptr);
      j["ratio"] = cmp ? json(cmp->ratio) : json(nullptr);
      if (census_compare) j["relative_error"] = cmp ? json(std::abs(cmp->ratio - 1)) : json(nullptr);
      if (brute) {
        j["t_brute"] = to_decimal(brute->value);
        j["oracle_agrees"] = brute->value == t.value;
      }
      j["manifest"] = manifest.finish();
      emit(out, j);
      return kExitOk;
    }

    if (solve_cmd->parsed()) {
      manifest.subcommand = "solve";
      const GridSize n(solve_n);
      SolverConfig cfg;
      cfg.thread_count = threads;
      cfg.symmetry_breaking = symmetry;
      if (solve_target == "2n") {
        cfg.target_size = 2 * n.value();
        cfg.time_budget = std::chrono::seconds(60);
      } else if (solve_target == "max") {
        cfg.exhaustive = true;
      } else {
        char* end = nullptr;
        const long long v = std::strtoll(solve_target.c_str(), &end, 10);
        if (solve_target.empty() || *end != '\0' || v < 0) throw UsageError("--target must be 2n, max, or a size");
        cfg.target_size = v;
        cfg.time_budget = std::chrono::seconds(60);
      }
      if (time_budget) cfg.time_budget = std::chrono::duration<double>(*time_budget);
      if (node_budget) cfg.node_budget = *node_budget;
      manifest.parameters["n"] = n.value();
      manifest.parameters["target"] = solve_target;
      manifest.parameters["time_budget_s"] = cfg.time_budget ? json(cfg.time_budget->count()) : json(nullptr);
      manifest.parameters["node_budget"] = cfg.node_budget ? json(*cfg.node_budget) : json(nullptr);
      manifest.parameters["symmetry_breaking"] = symmetry;

      const auto r = solve(n, cfg);
      if (!out_path.empty()) {
        std::ofstream f(out_path);
        if (!f) throw DomainError("cannot write witness file " + out_path);
        write_point_set(f, r.witness);
      }
      json j;
      j["n"] = r.n;
      j["best_size"] = r.best_size;
      json w = json::array();
      for (const auto& p : r.witness.members()) w.push_back(point_json(p));
      j["witness"] = w;
      j["proven_optimal"] = r.proven_optimal;
      j["tree_exhausted"] = r.tree_exhausted;
      j["nodes_explored"] = r.nodes_explored;
      j["elapsed_ms"] = std::chrono::duration<double, std::milli>(r.elapsed).count();
      j["witness_file"] = out_path.empty() ? json(nullptr) : json(out_path);
      j["manifest"] = manifest.finish();
      emit(out, j);
      return kExitOk;
    }

    if (verify->parsed()) {
      manifest.subcommand = "verify";
      manifest.parameters["file"] = verify_path;
      std::ifstream f(verify_path);
      if (!f) throw DomainError("cannot open witness file " + verify_path);
      const auto raw = parse_point_list(f);
      const auto rep = verify_points(raw);
      json j;
      j["n"] = raw.n;
      j["points"] = raw.points.size();
      j["valid"] = rep.valid;
      j["reason"] = rep.valid ? json(nullptr) : json(rep.reason);
      if (rep.offending) {
        json tri = json::array();
        for (const auto& p : *rep.offending) tri.push_back(point_json(p));
        j["offending"] = tri;
      } else {
        j["offending"] = nullptr;
      }
      j["manifest"] = manifest.finish();
      emit(out, j);
      if (!rep.valid) err << "invalid witness: " << rep.reason << '\n';
      return rep.valid ? kExitOk : kExitDomain;
    }

    if (estimate->parsed()) {
      manifest.subcommand = "estimate";
      manifest.parameters["n"] = est_n;
      manifest.parameters["k"] = est_k;
      manifest.parameters["slack"] = slack;
      const GridSize n(est_n);
      const auto r = make_estimate_report(n, est_k, slack, threads);
      const auto est = estimate_solution_count(n, est_k);
      if (csv && !est_json) {
        emit_csv(out,
                 {"n", "k", "subset_size", "p_triple_exact", "p_triple_asym", "survival_log",
                  "count_log10", "exponent_corrected", "exponent_erroneous"},
                 {{std::to_string(r.n), num(r.k), std::to_string(r.subset_size), num(r.p_triple_exact),
                   num(r.p_triple_asym), num(r.survival.value), num(r.count_log10),
                   num(r.exponent_corrected), num(r.exponent_erroneous)}});
        return kExitOk;
      }
      json j;
      j["n"] = r.n;
      j["k"] = r.k;
      j["subset_size"] = r.subset_size;
      j["p_triple_exact"] = r.p_triple_exact;
      j["p_triple_asym"] = r.p_triple_asym;
      j["survival_log"] = r.survival.value;
      j["survival_log_bracket"] = json::array({r.survival.lower, r.survival.upper});
      j["log_binomial"] = r.log_binomial;
      j["count_log10"] = r.count_log10;
      j["count_log10_bracket"] = json::array({r.count_log10_lower, r.count_log10_upper});
      j["leading_exponent"] = est.leading_exponent;
      j["exponent_corrected"] = r.exponent_corrected;
      j["exponent_erroneous"] = r.exponent_erroneous;
      j["manifest"] = manifest.finish();
      emit(out, j);
      return kExitOk;
    }

    if (constants->parsed()) {
      manifest.subcommand = "constants";
      const auto c = conjecture_constants();
      json j;
      j["k_corrected"] = round_to(c.k_corrected, 12);
      j["k_original"] = round_to(c.k_original, 12);
      j["manifest"] = manifest.finish();
      emit(out, j);
      return kExitOk;
    }

    if (mc_surv->parsed()) {
      manifest.subcommand = "mc survival";
      manifest.seed = mc_seed;
      manifest.parameters["n"] = mc_n;
      manifest.parameters["samples"] = mc_samples;
      const GridSize n(mc_n);
      std::vector<double> ks;
      if (!sweep.empty()) {
        manifest.parameters["sweep"] = sweep;
        ks = parse_sweep(sweep).values();
      } else {
        if (k_opt->count() == 0) throw UsageError("mc survival needs --k or --sweep");
        manifest.parameters["k"] = mc_k;
        ks = {mc_k};
      }
      std::vector<json> rows;
      for (double k : ks) rows.push_back(survival_json(independence_gap(n, k, mc_samples, mc_seed, threads)));
      if (csv) {
        const std::vector<std::string> keys{"n", "k", "subset_size", "samples", "survivors", "p_hat",
                                            "stderr", "predicted_log", "gap", "gap_error_bar",
                                            "all_died", "seed", "workers", "rng"};
        std::vector<std::vector<std::string>> cells;
        for (const auto& r : rows) {
          std::vector<std::string> line;
          for (const auto& key : keys) {
            const auto& v = r[key];
            if (v.is_null()) line.emplace_back();
            else if (v.is_number_float()) line.push_back(num(v.get<double>()));
            else if (v.is_string()) line.push_back(v.get<std::string>());
            else line.push_back(v.dump());
          }
          cells.push_back(std::move(line));
        }
        emit_csv(out, keys, cells);
        return kExitOk;
      }
      json j;
      if (sweep.empty()) {
        j = rows.front();
      } else {
        j["rows"] = rows;
      }
      j["manifest"] = manifest.finish();
      emit(out, j);
      return kExitOk;
    }

    if (mc_tri->parsed()) {
      manifest.subcommand = "mc triples";
      manifest.seed = mc_seed;
      manifest.parameters["n"] = mc_n;
      manifest.parameters["samples"] = mc_samples;
      const GridSize n(mc_n);
      const auto t = sample_triple_collinearity(n, mc_samples, mc_seed, threads);
      double exact = std::nan("");
      if (n.value() >= 2) exact = triple_probability(n, threads).exact;
      json j;
      j["n"] = t.n;
      j["samples"] = t.samples;
      j["collinear"] = t.survivors;
      j["p_hat"] = t.p_hat;
      j["stderr"] = t.std_error;
      j["exact"] = finite_or_null(exact);
      j["z_score"] = t.std_error > 0 ? json((t.p_hat - exact) / t.std_error) : json(nullptr);
      j["seed"] = t.seed;
      j["workers"] = t.workers;
      j["rng"] = std::string(kRngAlgorithm);
      j["manifest"] = manifest.finish();
      emit(out, j);
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::overflow_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace no3l::cli

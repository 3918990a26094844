#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "wreath/wreath.hpp"

using namespace wreath;
using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

struct RunConfig {
  int k = 2;
  int n = 2;
  std::string n_range = "2:4";
  int max_weight = 1;
  int max_vertices = 4;
  std::string engine = "centralizer";
  std::string cache_dir;
  std::string format = "text";
  int workers = 1;
  std::uint64_t seed = 1;
  int pairs = 1000;
  std::vector<std::string> triples;
  bool inject_fault = false;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::pair<int, int> parse_range(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) throw UsageError("--n-range expects A:B");
  int a = std::stoi(s.substr(0, colon)), b = std::stoi(s.substr(colon + 1));
  if (a < 1 || b < a) throw UsageError("--n-range must satisfy 1 <= A <= B");
  return {a, b};
}

void emit(const RunConfig& cfg, json body, const std::string& text, const std::string& csv = "") {
  if (cfg.format == "json") {
    body["schema_version"] = kSchemaVersion;
    std::cout << body.dump(2) << "\n";
  } else if (cfg.format == "csv" && !csv.empty()) {
    std::cout << csv;
  } else {
    std::cout << text;
  }
}

int cmd_types(const RunConfig& cfg, int max_weight) {
  if (cfg.max_vertices < 0) throw UsageError("--max-vertices must be non-negative");
  auto types = enumerate_modified_types(cfg.k, cfg.max_vertices, max_weight);
  json arr = json::array();
  std::ostringstream text, csv;
  csv << "key,vertices,weight,lambda\n";
  for (const auto& t : types) {
    arr.push_back({{"key", t.key()}, {"vertices", t.vertices()}, {"weight", t.weight}, {"lambda", lambda_string(t)}});
    text << t.key() << "  weight " << t.weight << "  lambda " << lambda_string(t) << "\n";
    csv << '"' << t.key() << "\"," << t.vertices() << ',' << t.weight << ",\"" << lambda_string(t) << "\"\n";
  }
  emit(cfg, {{"k", cfg.k}, {"max_vertices", cfg.max_vertices}, {"types", arr}}, text.str(), csv.str());
  return 0;
}

std::vector<Engine> engines_of(const std::string& e) {
  if (e == "both") return {Engine::oracle, Engine::centralizer};
  return {parse_engine(e)};
}

int cmd_table(const RunConfig& cfg) {
  WreathContext ctx(cfg.k, cfg.n);
  auto engines = engines_of(cfg.engine);
  for (auto e : engines)
    if (e == Engine::oracle && ctx.degree() > kOracleCeiling)
      throw CeilingExceeded("oracle engine refuses kn = " + std::to_string(ctx.degree()) + " (limit " + std::to_string(kOracleCeiling) + ")");
  if (!cfg.cache_dir.empty() && ctx.degree() <= kCompactTableCeiling) {
    CosetEnumerationOptions opt;
    opt.mode = ctx.degree() <= kFullTableCeiling ? TableMode::full : TableMode::compact;
    opt.workers = cfg.workers;
    opt.cache_dir = cfg.cache_dir;
    enumerate_double_cosets(ctx, opt);
  }
  StructureTable table(cfg.k);
  TableOptions opt;
  opt.workers = cfg.workers;
  for (auto e : engines) fill_table(table, cfg.n, e, opt);
  auto bad = table.disagreements();
  if (!cfg.cache_dir.empty()) {
    std::filesystem::create_directories(cfg.cache_dir);
    std::ofstream(std::filesystem::path(cfg.cache_dir) / ("table_k" + std::to_string(cfg.k) + "_n" + std::to_string(cfg.n) + "_" + cfg.engine + "_v" +
                                                          std::to_string(kTableSchemaVersion) + ".csv"))
        << table.to_csv();
  }
  std::ostringstream text;
  for (const auto& e : table.entries())
    text << e.M.key() << " * " << e.N.key() << " -> " << e.L.key() << " = " << e.value << "  (" << to_string(e.engine) << ")\n";
  for (const auto& d : bad) text << "DISAGREEMENT " << d << "\n";
  json body = table.to_json();
  body["n"] = cfg.n;
  body["disagreements"] = bad;
  emit(cfg, body, text.str(), table.to_csv());
  if (!bad.empty()) {
    std::cerr << "engines disagree: " << bad.front() << "\n";
    return 1;
  }
  return 0;
}

// The samplers used by fit and verify.
struct Samplers {
  std::shared_ptr<CentralizerEngine> engine;
  Sampler sample;
  Sampler holdout;
};

Samplers make_samplers(const RunConfig& cfg, bool fault) {
  Samplers s;
  s.engine = std::make_shared<CentralizerEngine>(cfg.k);
  Sampler reduced = reduced_sampler(s.engine);
  if (cfg.engine == "oracle") s.sample = oracle_sampler(cfg.k, cfg.workers);
  else if (cfg.engine == "both") s.sample = checked_sampler(reduced, oracle_sampler(cfg.k, cfg.workers));
  else if (cfg.engine == "centralizer") s.sample = reduced;
  else throw UsageError("unknown engine '" + cfg.engine + "'");
  s.holdout = level_sampler(s.engine);
  if (fault) {
    // perturb one sampled constant: the first nonzero one seen
    auto inner = s.sample;
    auto hit = std::make_shared<std::string>();
    s.sample.value = [inner, hit](const ModifiedType& M, const ModifiedType& N, const ModifiedType& L, int n) {
      BigInt v = inner(M, N, L, n);
      std::string key = M.key() + N.key() + L.key() + std::to_string(n);
      if (v != 0 && (hit->empty() || *hit == key)) {
        *hit = key;
        return BigInt(v + 1);
      }
      return v;
    };
  }
  return s;
}

std::vector<std::array<ModifiedType, 3>> requested_triples(const RunConfig& cfg) {
  std::vector<std::array<ModifiedType, 3>> out;
  for (const auto& t : cfg.triples) {
    std::array<ModifiedType, 3> tr;
    std::size_t start = 0;
    for (int i = 0; i < 3; ++i) {
      auto end = t.find(';', start);
      if ((i < 2) != (end != std::string::npos)) throw UsageError("--triple expects M;N;L");
      std::string key = t.substr(start, end == std::string::npos ? std::string::npos : end - start);
      tr[i] = parse_type_key(cfg.k, key == "" || key == "0" ? "0:" : key);
      start = end + 1;
    }
    out.push_back(tr);
  }
  if (out.empty()) {
    auto factors = enumerate_modified_types(cfg.k, 2 * cfg.max_weight, cfg.max_weight);
    for (const auto& M : factors)
      for (const auto& N : factors)
        for (const auto& L : enumerate_modified_types(cfg.k, M.vertices() + N.vertices())) out.push_back({M, N, L});
  }
  return out;
}

int cmd_fit(const RunConfig& cfg) {
  Samplers s = make_samplers(cfg, cfg.inject_fault);
  json arr = json::array();
  std::ostringstream text;
  bool ok = true;
  for (const auto& [M, N, L] : requested_triples(cfg)) {
    FitResult f = fit_structure_polynomial(M, N, L, cfg.k, s.sample, &s.holdout);
    ok = ok && f.ok();
    arr.push_back(f);
    text << M.key() << " * " << N.key() << " -> " << L.key() << " : " << f.polynomial.to_string() << "  [" << f.polynomial.to_falling_string()
         << "]  held-out";
    for (const auto& [n, v] : f.held_out) text << " n=" << n << ":" << v;
    text << (f.ok() ? "  ok" : "  FAIL") << "\n";
  }
  emit(cfg, {{"k", cfg.k}, {"fits", arr}, {"ok", ok}}, text.str());
  return ok ? 0 : 1;
}

EvolutionSuiteReport evolution_suite(const RunConfig& cfg) {
  // largest n with kn <= 9
  int n = std::max(1, 9 / cfg.k);
  return run_evolution_suite(WreathContext(cfg.k, n), cfg.pairs, cfg.seed);
}

int cmd_verify(const RunConfig& cfg) {
  auto [lo, hi] = parse_range(cfg.n_range);
  Samplers s = make_samplers(cfg, cfg.inject_fault);
  Sampler fit_sampler = reduced_sampler(s.engine);
  StabilityOptions opt;
  opt.workers = cfg.workers;
  opt.fit = true;
  opt.fit_sampler = cfg.inject_fault ? &s.sample : &fit_sampler;
  opt.holdout = &s.holdout;
  opt.terms = s.engine;
  auto reports = verify_stability(cfg.k, cfg.max_weight, lo, hi, s.sample, opt);
  bool stability_ok = std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.ok(); });
  auto evo = evolution_suite(cfg);
  TopDegreeConstants constants(cfg.k, fit_sampler);
  auto assoc = graded_associativity_check(constants, cfg.max_weight);
  bool ok = stability_ok && evo.ok() && assoc.ok();

  std::ostringstream text;
  text << format_reports(reports);
  text << "stability: " << (stability_ok ? "ok" : "FAIL") << " (" << reports.size() << " triples)\n";
  text << "evolution: " << (evo.ok() ? "ok" : "FAIL") << " (" << evo.pairs << " pairs at k=" << evo.k << ", n=" << evo.n << ")\n";
  for (const auto& e : evo.examples) text << "  " << e << "\n";
  text << "graded associativity: " << (assoc.ok() ? "ok" : "FAIL") << " (" << assoc.triples << " triples)\n";
  json body = {{"k", cfg.k}, {"max_weight", cfg.max_weight}, {"n_range", {lo, hi}}, {"stability", reports},
               {"evolution", evo}, {"associativity", assoc}, {"ok", ok}};
  emit(cfg, body, text.str());
  return ok ? 0 : 1;
}

int cmd_evolve(const RunConfig& cfg) {
  WreathContext ctx(cfg.k, cfg.n);
  if (ctx.degree() > 12) throw CeilingExceeded("evolve: kn must be at most 12");
  auto rep = run_evolution_suite(ctx, cfg.pairs, cfg.seed);
  std::ostringstream text;
  text << "pairs " << rep.pairs << ", aggregate equalities " << rep.aggregate_equalities << ", minimal products " << rep.product_minimal
       << ", weight equalities " << rep.weight_equalities << "\n";
  text << "endpoint failures " << rep.endpoint_failures << ", stepwise failures " << rep.stepwise_failures << ", aggregate failures "
       << rep.aggregate_failures << ", merge failures " << rep.merge_failures << ", inclusion failures " << rep.inclusion_failures << "\n";
  for (const auto& e : rep.examples) text << "  " << e << "\n";
  text << (rep.ok() ? "ok" : "FAIL") << "\n";
  emit(cfg, rep, text.str());
  return rep.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hecke algebras of (S_kn, S_k wr S_n): types, structure constants, stability checks"};
  app.require_subcommand(1);
  RunConfig cfg;
  int max_weight_opt = -1;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--k", cfg.k, "block size")->check(CLI::Range(2, 10));
    sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--workers", cfg.workers, "worker threads")->check(CLI::Range(1, 256));
  };

  auto* types = app.add_subcommand("types", "list modified types");
  common(types);
  types->add_option("--max-vertices", cfg.max_vertices, "largest vertex count");
  types->add_option("--max-weight", max_weight_opt, "largest weight");

  auto* table = app.add_subcommand("table", "structure constants at one n");
  common(table);
  table->add_option("--n", cfg.n, "number of blocks")->check(CLI::Range(1, 12));
  table->add_option("--engine", cfg.engine, "oracle, centralizer or both")->check(CLI::IsMember({"oracle", "centralizer", "both"}));
  table->add_option("--cache-dir", cfg.cache_dir, "cache directory");

  auto* fit = app.add_subcommand("fit", "fit c(n) for triples");
  common(fit);
  fit->add_option("--triple", cfg.triples, "M;N;L type keys (repeatable)");
  fit->add_option("--max-weight", cfg.max_weight, "weight bound when no triple is given");
  fit->add_option("--engine", cfg.engine, "sampling engine")->check(CLI::IsMember({"oracle", "centralizer", "both"}));
  fit->add_flag("--inject-fault", cfg.inject_fault, "perturb one sampled constant");

  auto* verify = app.add_subcommand("verify", "stability, evolution and associativity checks");
  common(verify);
  verify->add_option("--max-weight", cfg.max_weight, "weight bound for M and N");
  verify->add_option("--n-range", cfg.n_range, "sampled n as A:B");
  verify->add_option("--engine", cfg.engine, "sampling engine")->check(CLI::IsMember({"oracle", "centralizer", "both"}));
  verify->add_option("--seed", cfg.seed, "seed for the evolution suite");
  verify->add_option("--pairs", cfg.pairs, "random pairs for the evolution suite")->check(CLI::PositiveNumber);
  verify->add_flag("--inject-fault", cfg.inject_fault, "perturb one sampled constant");

  auto* evolve = app.add_subcommand("evolve", "evolution property suite");
  common(evolve);
  evolve->add_option("--n", cfg.n, "number of blocks")->check(CLI::Range(1, 12));
  evolve->add_option("--seed", cfg.seed, "random seed");
  evolve->add_option("--pairs", cfg.pairs, "random pairs")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*types) return cmd_types(cfg, max_weight_opt);
    if (*table) return cmd_table(cfg);
    if (*fit) return cmd_fit(cfg);
    if (*verify) return cmd_verify(cfg);
    if (*evolve) return cmd_evolve(cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const CeilingExceeded& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

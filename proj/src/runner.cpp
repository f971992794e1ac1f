#include "markoff/runner.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <stdexcept>
#include <thread>
#include <utility>

#include "markoff/counting.hpp"
#include "markoff/cyclo.hpp"
#include "markoff/ff.hpp"
#include "markoff/incidence.hpp"
#include "markoff/orbits.hpp"
#include "markoff/stepanov.hpp"

namespace markoff::runner {

namespace {

namespace ff = markoff::ff;
namespace orb = markoff::orbits;
namespace inc = markoff::incidence;
namespace cnt = markoff::counting;
namespace st = markoff::stepanov;
namespace cy = markoff::cyclo;

u64 splitmix64(u64 x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void check(PrimeRecord& rec, bool cond, const std::string& what) {
  if (!cond) rec.violations.push_back(what);
}

void suite_enumerate(PrimeRecord& rec, const ff::PrimeContext& ctx) {
  const auto s = orb::SolutionSet::enumerate(ctx.p);
  const u64 n = s.size();
  // |X*(p)| = p^2 + 3 chi(-1) p for p >= 5; p = 3 is the lone special case
  const u64 expected =
      ctx.p == 3 ? 8
                 : (ff::legendre(ctx.p - 1, ctx.p) == 1 ? ctx.p * ctx.p + 3 * ctx.p
                                                        : ctx.p * ctx.p - 3 * ctx.p);
  rec.data["n_points"] = n;
  rec.data["expected"] = expected;
  check(rec, n == expected,
        "n_points = " + std::to_string(n) + ", expected " +
            std::to_string(expected));
}

void suite_components(PrimeRecord& rec, const ff::PrimeContext& ctx) {
  const auto s = orb::SolutionSet::enumerate(ctx.p);
  const auto part = orb::components(s);
  const u64 n_comp = part.n_components();
  const u64 largest = part.component_sizes.empty() ? 0 : part.component_sizes[0];
  rec.data["n_components"] = n_comp;
  rec.data["largest"] = largest;
  if (ctx.p >= 5)
    check(rec, n_comp == 1,
          "n_components = " + std::to_string(n_comp) + ", expected 1");
  if (ctx.p <= 300) {
    const u64 bfs = orb::bfs_component_size(s);
    rec.data["bfs_size"] = bfs;
    if (n_comp == 1)
      check(rec, bfs == largest, "BFS reached " + std::to_string(bfs) +
                                     " of " + std::to_string(largest));
  }
}

void suite_incidence(PrimeRecord& rec, const ff::PrimeContext& ctx) {
  if (ctx.p < 5) {
    rec.data["skipped"] = true;
    return;
  }
  const auto g = inc::IncidenceGraph::build(ctx);
  const auto diam = inc::diameter(g);
  const auto law = inc::meeting_law(g);
  rec.data["vertices"] = diam.n_vertices;
  rec.data["connected"] = diam.connected;
  rec.data["diameter"] = diam.diameter;
  rec.data["degree_uniform"] = law.nonparabolic_uniform;
  rec.data["degree"] = law.nonparabolic_degree;
  rec.data["parity_rule"] = law.matches_parity_rule;
  rec.data["parabolic_meets_all"] = law.parabolic_meets_all;
  if (ctx.p >= 11) {
    check(rec, diam.connected, "incidence graph disconnected");
    check(rec, diam.diameter == 2,
          "diameter = " + std::to_string(diam.diameter) + ", expected 2");
  }
  check(rec, law.nonparabolic_uniform, "nonparabolic meeting degree not uniform");
  check(rec, law.matches_parity_rule, "meeting degree breaks the parity rule");
  check(rec, law.parabolic_meets_all, "a parabolic value misses some value");
}

void suite_cage(PrimeRecord& rec, const ff::PrimeContext& ctx) {
  const auto s = orb::SolutionSet::enumerate(ctx.p);
  const auto part = orb::components(s);
  const auto cage = orb::cage(s, ctx, part);
  rec.data["cage_size"] = cage.cage_size;
  rec.data["single"] = cage.cage_single_component;
  rec.data["residual"] = cage.residual;
  rec.data["hyperbolic_size"] = cage.cage_hyperbolic_size;
  rec.data["hyperbolic_single"] = cage.cage_hyperbolic_single_component;
  rec.data["min_max_order"] = cage.min_max_order;
  if (ctx.p >= 5) {
    check(rec, cage.cage_size > 0, "empty cage");
    check(rec, cage.cage_single_component, "cage spans several components");
  }
}

void suite_counting(PrimeRecord& rec, const ff::PrimeContext& ctx,
                    std::mt19937_64& rng) {
  const u64 p = ctx.p;
  u64 ph_checks = 0;
  for (u64 m : ff::divisors(ctx.fact_pm1)) {
    const auto H = ff::subgroup(ff::Ambient::Split, m, ctx);
    for (int i = 0; i < 3; ++i) {
      const u64 a = 1 + rng() % (p - 1);
      const u64 b = 1 + rng() % (p - 1);
      const auto ph = cnt::count_PH(a, b, H, ctx);  // direct == moebius inside
      check(rec, ph.count <= 2 * m,
            "P(H) = " + std::to_string(ph.count) + " above 2|H| at |H| = " +
                std::to_string(m));
      ++ph_checks;
    }
  }
  rec.data["ph_checks"] = ph_checks;

  const auto full = ff::subgroup(ff::Ambient::Split, p - 1, ctx);
  std::vector<u64> sigmas;
  std::vector<u64> trace_counts;
  for (int i = 0; i < 5; ++i) {
    const u64 sigma = p == 3 ? 2 : 2 + rng() % (p - 2);
    sigmas.push_back(sigma);
    const auto tr = cnt::count_eq_p41(sigma, full, full, ctx);
    trace_counts.push_back(tr.count);
    check(rec, tr.trivial_bound_ok,
          "trace count above 2 min(|H1|,|H2|) at sigma = " +
              std::to_string(sigma));
    check(rec, tr.gcd_bound_ok,
          "trace count above the gcd bound at sigma = " + std::to_string(sigma));
  }
  rec.data["sigmas"] = sigmas;
  rec.data["trace_counts"] = trace_counts;

  const u64 draws = 200;
  for (u64 i = 0; i < draws; ++i) {
    const u64 f1 = 1 + rng() % (p - 1);
    const u64 f2 = 1 + rng() % (p - 1);
    const u64 t = 1 + rng() % (p - 1);
    const u64 sigma = p == 3 ? 2 : 2 + rng() % (p - 2);
    const auto mg = cnt::middlegame_transform(f1, f2, t, sigma, ctx);
    check(rec, mg.eq22 == mg.eq23, "mixed-coordinate identities disagree");
    check(rec, mg.mobius_ok == (!mg.pole && mg.eq23),
          "Moebius form inconsistent with the pole flag");
  }
  rec.data["middlegame_draws"] = draws;
}

void suite_stepanov(PrimeRecord& rec, const ff::PrimeContext& ctx,
                    std::mt19937_64& rng) {
  const u64 p = ctx.p;
  u64 cor_checks = 0;
  for (u64 t : ff::divisors(ctx.fact_pm1)) {
    if (t < 2 || t > 64) continue;
    for (int i = 0; i < 2; ++i) {
      st::MoebiusMap m;
      do {
        m.a = rng() % p;
        m.b = rng() % p;
        m.c = rng() % p;
        m.d = rng() % p;
      } while (ff::sub_mod(ff::mul_mod(m.a, m.d, p), ff::mul_mod(m.b, m.c, p),
                           p) == 0 ||
               (m.b == 0 && m.c == 0 && m.a == m.d));
      st::count_unit_intersection(m, t, ctx);  // scan == gcd oracle inside
      ++cor_checks;
    }
  }
  rec.data["cor_a4_checks"] = cor_checks;

  const auto fn = st::classic_spec(ctx);
  const auto divs = ff::divisors(ctx.fact_pm1);
  rec.data["instance"] = nullptr;
  for (auto it1 = divs.rbegin(); it1 != divs.rend(); ++it1) {
    if (*it1 < 2) continue;
    for (auto it2 = divs.rbegin(); it2 != divs.rend(); ++it2) {
      if (*it2 > *it1) continue;
      const auto pr = st::suggest_params(fn, *it1, *it2, ctx);
      if (!pr) continue;
      const auto aux = st::build_aux_poly(fn, *pr, ctx);
      rec.data["instance"] = {
          {"t1", pr->t1},
          {"t2", pr->t2},
          {"J", pr->J},
          {"B", pr->B},
          {"M", pr->M},
          {"kernel_dim", aux.kernel_dim},
          {"y_count", aux.y_set.size()},
      };
      return;
    }
  }
}

void suite_opening(PrimeRecord& rec, const ff::PrimeContext& ctx) {
  const auto s = orb::SolutionSet::enumerate(ctx.p);
  const auto rep = cy::order_bound_report(s, ctx);
  rec.data["min_max_order"] = rep.min_max_order;
  rec.data["bound"] = rep.bound;
  rec.data["ok"] = rep.ok;
  check(rec, rep.ok, "a point falls below the (log_20 p)^(1/3) order bound");
}

void suite_smoothness(PrimeRecord& rec, const ff::PrimeContext& ctx) {
  const auto rep = cy::smoothness_check(ctx.p, ctx);
  rec.data["verdict"] = rep.verdict;
  rec.data["first_fail_y"] = rep.first_fail_y;
  rec.data["divisors_checked"] = rep.divisors.size();
  // a false verdict is a classification, not a violation
}

PrimeRecord run_one(Suite suite, const ff::PrimeContext& ctx, u64 seed) {
  PrimeRecord rec;
  rec.suite = suite;
  rec.p = ctx.p;
  try {
    std::mt19937_64 rng(task_seed(seed, suite, ctx.p));
    switch (suite) {
      case Suite::Enumerate: suite_enumerate(rec, ctx); break;
      case Suite::Components: suite_components(rec, ctx); break;
      case Suite::Incidence: suite_incidence(rec, ctx); break;
      case Suite::Cage: suite_cage(rec, ctx); break;
      case Suite::Counting: suite_counting(rec, ctx, rng); break;
      case Suite::Stepanov: suite_stepanov(rec, ctx, rng); break;
      case Suite::Opening: suite_opening(rec, ctx); break;
      case Suite::Smoothness: suite_smoothness(rec, ctx); break;
    }
  } catch (const std::exception& e) {
    rec.violations.push_back(std::string("exception: ") + e.what());
  }
  return rec;
}

}  // namespace

const std::vector<Suite>& all_suites() {
  static const std::vector<Suite> suites = {
      Suite::Enumerate, Suite::Components, Suite::Incidence, Suite::Cage,
      Suite::Counting,  Suite::Stepanov,   Suite::Opening,   Suite::Smoothness,
  };
  return suites;
}

std::string suite_name(Suite s) {
  switch (s) {
    case Suite::Enumerate: return "enumerate";
    case Suite::Components: return "components";
    case Suite::Incidence: return "incidence";
    case Suite::Cage: return "cage";
    case Suite::Counting: return "counting";
    case Suite::Stepanov: return "stepanov";
    case Suite::Opening: return "opening";
    case Suite::Smoothness: return "smoothness";
  }
  return "unknown";
}

std::optional<Suite> suite_from_name(const std::string& name) {
  for (Suite s : all_suites())
    if (suite_name(s) == name) return s;
  return std::nullopt;
}

u64 RunReport::violation_count() const {
  u64 n = 0;
  for (const auto& r : records) n += r.violations.size();
  return n;
}

u64 task_seed(u64 seed, Suite s, u64 p) {
  return splitmix64(splitmix64(seed + static_cast<u64>(s) + 1) ^ p);
}

RunReport run(const RunConfig& config) {
  if (config.p_min < 3)
    throw std::invalid_argument("run: p_min must be at least 3");
  if (config.workers < 1)
    throw std::invalid_argument("run: worker count must be at least 1");

  std::vector<Suite> suites;
  for (Suite s : all_suites())
    for (Suite c : config.suites)
      if (c == s && (suites.empty() || suites.back() != s)) {
        suites.push_back(s);
        break;
      }

  std::vector<u64> primes;
  for (u64 p = config.p_min; p <= config.p_max && p >= config.p_min; ++p)
    if (ff::is_prime(p)) primes.push_back(p);

  std::string cache_path = config.cache_path;
  if (const char* env = std::getenv("MARKOFF_FACTOR_CACHE"))
    if (*env) cache_path = env;
  ff::FactorCache cache(cache_path);

  std::vector<ff::PrimeContext> ctxs;
  ctxs.reserve(primes.size());
  for (u64 p : primes) ctxs.push_back(ff::PrimeContext::make(p, &cache));
  cache.flush();

  struct Task {
    Suite suite;
    std::size_t ctx_index;
  };
  std::vector<Task> tasks;
  for (Suite s : suites)
    for (std::size_t i = 0; i < ctxs.size(); ++i) tasks.push_back({s, i});

  RunReport report;
  report.records.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      report.records[i] =
          run_one(tasks[i].suite, ctxs[tasks[i].ctx_index], config.seed);
    }
  };
  const std::size_t n_workers =
      std::min<std::size_t>(config.workers, std::max<std::size_t>(tasks.size(), 1));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  if (!config.out_dir.empty()) write_report(report, config.out_dir);
  return report;
}

int exit_code(const RunReport& report) { return report.all_ok() ? 0 : 1; }

nlohmann::json record_to_json(const PrimeRecord& r) {
  return {
      {"v", kSchemaVersion},
      {"suite", suite_name(r.suite)},
      {"p", r.p},
      {"data", r.data},
      {"violations", r.violations},
  };
}

PrimeRecord record_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("v") || j.at("v").get<int>() != kSchemaVersion)
    throw std::runtime_error("report record: schema version mismatch");
  const auto suite = suite_from_name(j.at("suite").get<std::string>());
  if (!suite) throw std::runtime_error("report record: unknown suite");
  PrimeRecord r;
  r.suite = *suite;
  r.p = j.at("p").get<u64>();
  r.data = j.at("data");
  r.violations = j.at("violations").get<std::vector<std::string>>();
  return r;
}

std::string csv_header(Suite s) {
  switch (s) {
    case Suite::Enumerate: return "p,n_points,expected,violations";
    case Suite::Components: return "p,n_components,largest,bfs_size,violations";
    case Suite::Incidence:
      return "p,vertices,diameter,degree,parity_rule,violations";
    case Suite::Cage:
      return "p,cage_size,single,residual,hyperbolic_size,hyperbolic_single,"
             "min_max_order,violations";
    case Suite::Counting:
      return "p,ph_checks,sigma_samples,middlegame_draws,violations";
    case Suite::Stepanov:
      return "p,cor_a4_checks,t1,t2,J,B,M,kernel_dim,violations";
    case Suite::Opening: return "p,min_max_order,bound,ok,violations";
    case Suite::Smoothness:
      return "p,verdict,first_fail_y,divisors_checked,violations";
  }
  return "p,violations";
}

std::string csv_row(const PrimeRecord& r) {
  const auto& d = r.data;
  auto num = [&](const char* key) -> std::string {
    if (!d.contains(key)) return "";
    return std::to_string(d.at(key).get<u64>());
  };
  auto flag = [&](const char* key) -> std::string {
    if (!d.contains(key)) return "";
    return d.at(key).get<bool>() ? "1" : "0";
  };
  std::string row = std::to_string(r.p) + ",";
  switch (r.suite) {
    case Suite::Enumerate:
      row += num("n_points") + "," + num("expected");
      break;
    case Suite::Components:
      row += num("n_components") + "," + num("largest") + "," + num("bfs_size");
      break;
    case Suite::Incidence:
      row += num("vertices") + "," + num("diameter") + "," + num("degree") +
             "," + flag("parity_rule");
      break;
    case Suite::Cage:
      row += num("cage_size") + "," + flag("single") + "," + num("residual") +
             "," + num("hyperbolic_size") + "," + flag("hyperbolic_single") +
             "," + num("min_max_order");
      break;
    case Suite::Counting:
      row += num("ph_checks") + "," +
             std::to_string(d.contains("sigmas") ? d.at("sigmas").size() : 0) +
             "," + num("middlegame_draws");
      break;
    case Suite::Stepanov: {
      row += num("cor_a4_checks");
      const bool has = d.contains("instance") && !d.at("instance").is_null();
      for (const char* key : {"t1", "t2", "J", "B", "M", "kernel_dim"}) {
        row += ",";
        if (has) row += std::to_string(d.at("instance").at(key).get<u64>());
      }
      break;
    }
    case Suite::Opening:
      row += num("min_max_order") + "," +
             (d.contains("bound") ? format_double(d.at("bound").get<double>())
                                  : "") +
             "," + flag("ok");
      break;
    case Suite::Smoothness:
      row += flag("verdict") + "," + num("first_fail_y") + "," +
             num("divisors_checked");
      break;
  }
  row += "," + std::to_string(r.violations.size());
  return row;
}

void write_report(const RunReport& report, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (Suite s : all_suites()) {
    std::vector<const PrimeRecord*> recs;
    for (const auto& r : report.records)
      if (r.suite == s) recs.push_back(&r);
    if (recs.empty()) continue;
    const std::string base = dir + "/" + suite_name(s);
    std::ofstream jsonl(base + ".jsonl");
    std::ofstream csv(base + ".csv");
    if (!jsonl || !csv)
      throw std::runtime_error("write_report: cannot open files under " + dir);
    csv << csv_header(s) << "\n";
    for (const PrimeRecord* r : recs) {
      jsonl << record_to_json(*r).dump() << "\n";
      csv << csv_row(*r) << "\n";
    }
  }
}

RunReport report_merge(const std::vector<std::string>& paths) {
  std::map<std::pair<int, u64>, PrimeRecord> merged;
  for (const std::string& path : paths) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("report_merge: cannot read " + path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const std::exception&) {
        throw std::runtime_error("report_merge: bad record in " + path);
      }
      PrimeRecord r = record_from_json(j);
      merged[{static_cast<int>(r.suite), r.p}] = std::move(r);
    }
  }
  RunReport out;
  out.records.reserve(merged.size());
  for (auto& [key, rec] : merged) out.records.push_back(std::move(rec));
  return out;
}

}  // namespace markoff::runner

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include "fairdisc/fairdisc.hpp"

namespace {

using namespace fairdisc;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError("cannot write '" + path + "'", 0);
  out << text;
}

// Accepts "p/q", plain integers, and decimal literals ("0.05" -> 1/20).
Rational parse_number(const std::string& text) {
  const auto dot = text.find('.');
  if (dot == std::string::npos) return Rational::from_string(text);
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  const size_t places = text.size() - dot - 1;
  if (digits.empty() || places == 0)
    throw ParseError("cannot parse number '" + text + "'", 0);
  Rational den(1);
  for (size_t i = 0; i < places; ++i) den = den * Rational(10);
  return Rational::from_string(digits) / den;
}

std::vector<long long> parse_int_list(const std::string& text,
                                      const char* what) {
  std::vector<long long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParseError(std::string(what) + ": bad integer '" + item + "'", 0);
    }
  }
  if (out.empty()) throw ParseError(std::string(what) + ": empty list", 0);
  return out;
}

bool color_enabled() {
  return std::getenv("NO_COLOR") == nullptr && isatty(1);
}

void print_verdict(bool pass) {
  if (color_enabled())
    std::printf(pass ? "\x1b[32mPASS\x1b[0m\n" : "\x1b[31mFAIL\x1b[0m\n");
  else
    std::printf(pass ? "PASS\n" : "FAIL\n");
}

std::string fmt_quadratic(const Quadratic& q) {
  if (q.rational_part().sign() == 0 && q.root_coefficient() == Rational(1))
    return "sqrt(" + q.radicand().str() + ")";
  return q.str();
}

FairnessNotion notion_from(const std::string& name) {
  if (name == "cd") return FairnessNotion::CD;
  if (name == "ef") return FairnessNotion::EF;
  if (name == "prop") return FairnessNotion::PROP;
  throw ValidationError("unknown notion '" + name + "'");
}

// Runs fn(i) for i in [0, jobs) on `threads` workers; the first exception
// wins and is rethrown after all workers drain.
void parallel_for(long long jobs, int threads, const std::function<void(long long)>& fn) {
  if (threads <= 1) {
    for (long long i = 0; i < jobs; ++i) fn(i);
    return;
  }
  std::atomic<long long> next{0};
  std::atomic<bool> dead{false};
  std::exception_ptr first;
  std::mutex mu;
  auto worker = [&] {
    for (;;) {
      const long long i = next.fetch_add(1);
      if (i >= jobs || dead.load()) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first) first = std::current_exception();
        dead.store(true);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

struct GenArgs {
  std::string construction, group_sizes, out;
  long long n = 0;
  int k = 2;
  double constant = 0;
  bool constant_set = false;
  std::uint64_t seed = 0;
};

int run_gen(const GenArgs& a) {
  std::vector<long long> sizes;
  if (!a.group_sizes.empty())
    sizes = parse_int_list(a.group_sizes, "--group-sizes");

  long long m = 0;
  Quadratic d;
  std::string payload;
  if (a.construction == "disc") {
    const double c = a.constant_set ? a.constant : kDiscDefaultConstant;
    auto g = gen_disc_system(a.n, a.k, c, a.seed);
    m = g.m;
    d = g.d;
    payload = serialize_set_system(g.system);
  } else if (a.construction == "ef" || a.construction == "prop") {
    const double c = a.constant_set
                         ? a.constant
                         : (a.construction == "ef" ? kEfDefaultConstant
                                                   : kPropDefaultConstant);
    auto g = a.construction == "ef"
                 ? gen_ef_instance(a.n, a.k, c, a.seed, sizes)
                 : gen_prop_instance(a.n, a.k, c, a.seed, sizes);
    m = g.m;
    d = g.d;
    payload = serialize_instance(g.instance);
  } else if (a.construction == "propnew") {
    const double c = a.constant_set ? a.constant : kGroupPropDefaultConstant;
    if (sizes.empty()) {
      if (a.n <= 0)
        throw ValidationError("gen propnew: need --group-sizes or --n");
      sizes = detail::balanced_groups(a.n, a.k);
    }
    auto g = gen_propnew_instance(sizes, c, a.seed);
    m = g.m;
    d = g.d;
    payload = serialize_instance(g.instance);
  } else {
    throw ValidationError("unknown construction '" + a.construction + "'");
  }
  write_file(a.out, payload);
  std::printf("m %lld\n", m);
  std::printf("d %s\n", fmt_quadratic(d).c_str());
  return 0;
}

struct CheckArgs {
  std::string instance, coloring, allocation, notion, d;
};

int run_check(const CheckArgs& a) {
  const Rational threshold = parse_number(a.d);
  Rational value;
  if (a.notion == "disc") {
    if (a.coloring.empty())
      throw ValidationError("check disc: needs --coloring");
    const SetSystem sys = parse_set_system(read_file(a.instance));
    const Coloring chi = parse_coloring(read_file(a.coloring));
    value = discrepancy(chi, sys).value;
    std::printf("discrepancy %s\n", value.str().c_str());
  } else {
    if (a.allocation.empty())
      throw ValidationError("check " + a.notion + ": needs --allocation");
    const GroupedInstance inst = parse_instance(read_file(a.instance));
    const Allocation alloc = parse_allocation(read_file(a.allocation));
    value = Rational(fairness_min_d(inst, alloc, notion_from(a.notion)));
    std::printf("min-d %s\n", value.str().c_str());
  }
  const bool pass = value <= threshold;
  print_verdict(pass);
  return pass ? 0 : 1;
}

struct SolveArgs {
  std::string instance, notion, out;
  bool exact = false, search = false;
  int k = 0;
  long long state_cap = 100'000'000;
  long long budget = 10'000;
  std::uint64_t seed = 0;
};

int run_solve(const SolveArgs& a) {
  if (a.exact == a.search)
    throw ValidationError("solve: pass exactly one of --exact / --search");
  if (a.notion == "disc") {
    const SetSystem sys = parse_set_system(read_file(a.instance));
    const int k = a.k > 0 ? a.k : 2;
    ExactSolveResult res;
    if (a.exact) {
      ExactOptions opt;
      opt.state_cap = a.state_cap;
      res = min_discrepancy_exact(sys, k, opt);
    } else {
      res = min_discrepancy_search(sys, k, a.seed, a.budget);
    }
    write_file(a.out, serialize_coloring(res.coloring));
    std::printf("value %s\n", res.result.value.str().c_str());
    std::printf("optimal %s\n", res.optimal ? "true" : "false");
    return 0;
  }

  const FairnessNotion notion = notion_from(a.notion);
  const GroupedInstance inst = parse_instance(read_file(a.instance));
  const int nb = a.k > 0 ? a.k : std::max(1, inst.num_groups());
  if (a.exact) {
    const FairnessSolveResult res =
        exact_min_over_allocations(inst, notion, a.state_cap, nb);
    write_file(a.out, serialize_allocation(res.allocation));
    std::printf("value %d\n", res.d);
    std::printf("optimal true\n");
    return 0;
  }
  if (notion != FairnessNotion::CD && nb < inst.num_groups())
    throw ValidationError("solve: needs at least one bundle per group");
  const int m = inst.num_items;
  const CounterRng rng(a.seed);
  std::vector<std::vector<int>> bundles(nb);
  Allocation best;
  int best_d = -1;
  for (long long r = 0; r < a.budget; ++r) {
    for (auto& b : bundles) b.clear();
    for (int e = 0; e < m; ++e)
      bundles[rng.below(static_cast<std::uint64_t>(r), e, nb)].push_back(e);
    Allocation cand = Allocation::make(m, bundles);
    const int d = fairness_min_d(inst, cand, notion);
    if (best_d < 0 || d < best_d) {
      best_d = d;
      best = std::move(cand);
    }
  }
  write_file(a.out, serialize_allocation(best));
  std::printf("value %d\n", best_d);
  std::printf("optimal false\n");
  return 0;
}

struct ScalingArgs {
  std::string construction, n_list, out;
  int k = 2;
  int samples = 20;
  double constant = 0;
  bool constant_set = false;
  std::uint64_t seed = 0;
  long long state_cap = 100'000'000;
  int threads = 1;
};

int run_scaling(const ScalingArgs& a) {
  const std::vector<long long> ns = parse_int_list(a.n_list, "--n-list");
  if (a.samples < 1) throw ValidationError("scaling: --samples must be >= 1");

  struct Row {
    long long m = 0;
    std::string d;
    Rational value;
  };
  const long long jobs = (long long)ns.size() * a.samples;
  std::vector<Row> rows(jobs);
  const CounterRng seeder(a.seed);

  parallel_for(jobs, a.threads, [&](long long j) {
    const long long n = ns[j / a.samples];
    const int sample = (int)(j % a.samples);
    const std::uint64_t seed =
        seeder.at(static_cast<std::uint64_t>(n), sample);
    Row& row = rows[j];
    if (a.construction == "disc") {
      const double c = a.constant_set ? a.constant : kDiscDefaultConstant;
      auto g = gen_disc_system(n, a.k, c, seed);
      ExactOptions opt;
      opt.state_cap = a.state_cap;
      row.m = g.m;
      row.d = fmt_quadratic(g.d);
      row.value = min_discrepancy_exact(g.system, a.k, opt).result.value;
    } else if (a.construction == "ef" || a.construction == "prop" ||
               a.construction == "propnew") {
      FairConstruction g;
      FairnessNotion notion;
      if (a.construction == "ef") {
        const double c = a.constant_set ? a.constant : kEfDefaultConstant;
        g = gen_ef_instance(n, a.k, c, seed);
        notion = FairnessNotion::EF;
      } else if (a.construction == "prop") {
        const double c = a.constant_set ? a.constant : kPropDefaultConstant;
        g = gen_prop_instance(n, a.k, c, seed);
        notion = FairnessNotion::PROP;
      } else {
        const double c =
            a.constant_set ? a.constant : kGroupPropDefaultConstant;
        g = gen_propnew_instance(detail::balanced_groups(n, a.k), c, seed);
        notion = FairnessNotion::PROP;
      }
      row.m = g.m;
      row.d = fmt_quadratic(g.d);
      row.value =
          Rational(exact_min_over_allocations(g.instance, notion, a.state_cap,
                                              a.k)
                       .d);
    } else {
      throw ValidationError("unknown construction '" + a.construction + "'");
    }
  });

  std::ostringstream csv;
  csv << "construction,n,k,sample_index,m,d_threshold,exact_min_value\n";
  for (size_t ni = 0; ni < ns.size(); ++ni) {
    std::vector<Rational> vals;
    for (int s = 0; s < a.samples; ++s) {
      const Row& row = rows[(long long)ni * a.samples + s];
      csv << a.construction << ',' << ns[ni] << ',' << a.k << ',' << s << ','
          << row.m << ',' << row.d << ',' << row.value.str() << '\n';
      vals.push_back(row.value);
    }
    std::sort(vals.begin(), vals.end());
    const Rational median =
        a.samples % 2 == 1
            ? vals[a.samples / 2]
            : (vals[a.samples / 2 - 1] + vals[a.samples / 2]) / Rational(2);
    const Row& first = rows[(long long)ni * a.samples];
    csv << a.construction << ',' << ns[ni] << ',' << a.k << ",median,"
        << first.m << ',' << first.d << ',' << median.str() << '\n';
  }
  write_file(a.out, csv.str());
  return 0;
}

struct ChernoffArgs {
  long long t_max = 400;
  std::string eps_step = "1/20";
  std::string report;
  int threads = 1;
};

int run_chernoff(const ChernoffArgs& a) {
  if (a.t_max < 1) throw ValidationError("chernoff: --t-max must be >= 1");
  const Rational step = parse_number(a.eps_step);
  if (step.sign() <= 0)
    throw ValidationError("chernoff: --eps-step must be positive");
  std::vector<Rational> grid;
  const Rational half(1, 2);
  for (Rational eps = step; eps <= half; eps = eps + step) grid.push_back(eps);
  if (grid.empty())
    throw ValidationError("chernoff: --eps-step exceeds 1/2, empty grid");

  struct Row {
    bool admissible = false;
    bool holds = false;
    long double exact_log = 0, bound_log = 0;
  };
  const long long jobs = a.t_max * (long long)grid.size();
  std::vector<Row> rows(jobs);
  parallel_for(jobs, a.threads, [&](long long j) {
    const long long t = j / (long long)grid.size() + 1;
    const Rational& eps = grid[j % grid.size()];
    Row& row = rows[j];
    if (eps * eps * Rational(t) < Rational(6)) return;
    const BoundReport rep = verify_reverse_chernoff(t, eps);
    row.admissible = true;
    row.holds = rep.holds;
    row.exact_log = rep.rhs_log;
    row.bound_log = rep.lhs_log;
  });

  std::ostringstream csv;
  csv << "t,eps,exact_tail_log,bound_log,holds\n";
  bool all_hold = true;
  char buf[64];
  for (long long j = 0; j < jobs; ++j) {
    const long long t = j / (long long)grid.size() + 1;
    const Rational& eps = grid[j % grid.size()];
    const Row& row = rows[j];
    csv << t << ',' << eps.str() << ',';
    if (!row.admissible) {
      csv << ",,skipped\n";
      continue;
    }
    snprintf(buf, sizeof buf, "%.18Lg", row.exact_log);
    csv << buf << ',';
    snprintf(buf, sizeof buf, "%.18Lg", row.bound_log);
    csv << buf << ',' << (row.holds ? "true" : "false") << '\n';
    all_hold = all_hold && row.holds;
  }
  write_file(a.report, csv.str());
  std::printf("grid points %lld, all admissible hold: %s\n", jobs,
              all_hold ? "true" : "false");
  return all_hold ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random set-system discrepancy and group fairness toolkit"};
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads, "worker threads for sweeps")
      ->capture_default_str();

  GenArgs gen;
  auto* cmd_gen = app.add_subcommand("gen", "generate a random instance");
  cmd_gen->add_option("--construction", gen.construction,
                      "disc | ef | prop | propnew")
      ->required();
  cmd_gen->add_option("--n", gen.n, "number of sets / agents");
  cmd_gen->add_option("--k", gen.k, "colors / groups")->capture_default_str();
  auto* gen_const = cmd_gen->add_option("--constant", gen.constant,
                                        "constant c in the item-count formula");
  cmd_gen->add_option("--group-sizes", gen.group_sizes,
                      "comma-separated group sizes");
  cmd_gen->add_option("--seed", gen.seed, "RNG seed")->capture_default_str();
  cmd_gen->add_option("--out", gen.out, "output instance file")->required();

  CheckArgs chk;
  auto* cmd_check =
      app.add_subcommand("check", "evaluate a witness against a threshold");
  cmd_check->add_option("--instance", chk.instance, "instance file")
      ->required();
  cmd_check->add_option("--notion", chk.notion, "disc | cd | ef | prop")
      ->required();
  cmd_check->add_option("--coloring", chk.coloring, "coloring file (disc)");
  cmd_check->add_option("--allocation", chk.allocation,
                        "allocation file (cd/ef/prop)");
  cmd_check->add_option("--d", chk.d, "threshold (integer, p/q, or decimal)")
      ->required();

  SolveArgs sol;
  auto* cmd_solve = app.add_subcommand("solve", "optimize over witnesses");
  cmd_solve->add_option("--instance", sol.instance, "instance file")
      ->required();
  cmd_solve->add_option("--notion", sol.notion, "disc | cd | ef | prop")
      ->required();
  cmd_solve->add_flag("--exact", sol.exact, "provably optimal witness");
  cmd_solve->add_flag("--search", sol.search, "heuristic witness");
  cmd_solve->add_option("--k", sol.k, "colors / bundles (default: 2 or groups)");
  cmd_solve->add_option("--state-cap", sol.state_cap, "exact search state cap")
      ->capture_default_str();
  cmd_solve->add_option("--budget", sol.budget, "heuristic restarts")
      ->capture_default_str();
  cmd_solve->add_option("--seed", sol.seed, "RNG seed")->capture_default_str();
  cmd_solve->add_option("--out", sol.out, "witness output file")->required();

  ScalingArgs sca;
  auto* cmd_scaling =
      app.add_subcommand("scaling", "exact optimum across instance sizes");
  cmd_scaling->add_option("--construction", sca.construction,
                          "disc | ef | prop | propnew")
      ->required();
  cmd_scaling->add_option("--k", sca.k, "colors / groups")
      ->capture_default_str();
  cmd_scaling->add_option("--n-list", sca.n_list, "comma-separated n values")
      ->required();
  cmd_scaling->add_option("--samples", sca.samples, "instances per n")
      ->capture_default_str();
  auto* sca_const = cmd_scaling->add_option(
      "--constant", sca.constant, "constant c in the item-count formula");
  cmd_scaling->add_option("--seed", sca.seed, "RNG seed")
      ->capture_default_str();
  cmd_scaling->add_option("--state-cap", sca.state_cap,
                          "exact search state cap")
      ->capture_default_str();
  cmd_scaling->add_option("--out", sca.out, "output CSV")->required();

  ChernoffArgs che;
  auto* cmd_chernoff =
      app.add_subcommand("chernoff", "sweep the binomial anti-concentration bound");
  cmd_chernoff->add_option("--t-max", che.t_max, "largest trial count")
      ->capture_default_str();
  cmd_chernoff->add_option("--eps-step", che.eps_step, "epsilon grid step")
      ->capture_default_str();
  cmd_chernoff->add_option("--report", che.report, "output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  gen.constant_set = gen_const->count() > 0;
  sca.constant_set = sca_const->count() > 0;
  sca.threads = threads;
  che.threads = threads;

  try {
    if (cmd_gen->parsed()) return run_gen(gen);
    if (cmd_check->parsed()) return run_check(chk);
    if (cmd_solve->parsed()) return run_solve(sol);
    if (cmd_scaling->parsed()) return run_scaling(sca);
    if (cmd_chernoff->parsed()) return run_chernoff(che);
  } catch (const CapacityError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}

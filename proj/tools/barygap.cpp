// Command-line front end. Exit codes: 0 success, 1 property failure, 2 usage
// or input error, 3 resource cap or unfinished solve.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "barygap/bary.hpp"
#include "barygap/chub.hpp"
#include "barygap/errors.hpp"
#include "barygap/io.hpp"
#include "barygap/reduction.hpp"
#include "barygap/verify.hpp"

using namespace barygap;

namespace {

constexpr int kExitProperty = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

struct Global {
  std::uint64_t seed = 0;
  int threads = 1;
  bool quiet = false;
  bool json = false;
};

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

// The report goes to stdout with --json; otherwise the summary line does, unless --quiet.
int emit(const Global& g, const RunReport& r, const std::string& summary, const std::string& out_path,
         const Json& artifact) {
  if (!out_path.empty()) write_json_file(out_path, artifact);
  if (g.json) {
    std::cout << to_json(r).dump(2) << '\n';
  } else if (!g.quiet) {
    std::cout << summary << '\n';
  }
  return r.passed ? 0 : kExitProperty;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Graph generate_graph(const std::string& family, int n, std::optional<int> degree, std::vector<int> offsets,
                     std::uint64_t seed) {
  if (family == "complete") return complete_graph(n);
  if (family == "cycle") return cycle_graph(n);
  if (family == "petersen") return petersen_graph();
  if (family == "circulant") {
    if (offsets.empty()) {
      if (!degree) throw InputError("graph gen: circulant needs --degree or --offsets");
      if (*degree % 2 && n % 2) throw InputError("graph gen: odd degree needs even n");
      for (int o = 1; o <= *degree / 2; ++o) offsets.push_back(o);
      if (*degree % 2) offsets.push_back(n / 2);
    }
    return circulant_graph(n, offsets);
  }
  if (family == "random-regular") {
    if (!degree) throw InputError("graph gen: random-regular needs --degree");
    return random_regular_graph(n, *degree, seed);
  }
  throw InputError("graph gen: unknown family '" + family + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Barycenter hardness toolkit: clique gadgets, CHUB and MOT solvers, property checks"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--seed", g.seed, "Seed for every random choice")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads for enumerations")->check(CLI::PositiveNumber);
  app.add_flag("--quiet", g.quiet, "Print nothing on stdout");
  app.add_flag("--json", g.json, "Print the JSON run report on stdout");
  std::function<int()> action;

  // graph gen
  auto* graph = app.add_subcommand("graph", "Graph utilities");
  graph->require_subcommand(1);
  auto* gen = graph->add_subcommand("gen", "Generate a graph");
  std::string family, out;
  int n = 0;
  std::optional<int> degree;
  std::vector<int> offsets;
  gen->add_option("--family", family, "complete|cycle|circulant|petersen|random-regular")
      ->required()
      ->check(CLI::IsMember({"complete", "cycle", "circulant", "petersen", "random-regular"}));
  gen->add_option("--n", n, "Vertex count (ignored for petersen)");
  gen->add_option("--degree", degree, "Degree for circulant and random-regular");
  gen->add_option("--offsets", offsets, "Circulant offsets")->delimiter(',');
  gen->add_option("--out", out, "Output graph JSON");
  gen->callback([&] {
    action = [&] {
      Stopwatch sw;
      const Graph gr = generate_graph(family, family == "petersen" ? 10 : n, degree, offsets, g.seed);
      RunReport r;
      r.command = "graph gen";
      r.seed = g.seed;
      r.config = {{"family", family}, {"n", gr.num_vertices()}};
      if (degree) r.config["degree"] = *degree;
      if (!offsets.empty()) r.config["offsets"] = offsets;
      r.timings["generate"] = sw.lap();
      const Json gj = to_json(gr);
      r.results = {{"graph", gj}, {"hash", fmt("%016llx", static_cast<unsigned long long>(gr.hash()))}};
      if (auto d = gr.regular_degree()) r.results["degree"] = *d;
      if (out.empty() && !g.json && !g.quiet) {
        std::cout << gj.dump() << '\n';
        return 0;
      }
      return emit(g, r, fmt("graph: n=%d, %d edges", gr.num_vertices(), gr.num_edges()), out, gj);
    };
  });

  // embed
  auto* embed = app.add_subcommand("embed", "Embed a graph as k groups of points");
  std::string graph_path, q_arg = "2";
  int k = 0;
  double p = 2;
  embed->add_option("--graph", graph_path, "Graph JSON")->required()->check(CLI::ExistingFile);
  embed->add_option("--k", k, "Clique size")->required();
  embed->add_option("--p", p, "Exponent p >= 1")->capture_default_str();
  embed->add_option("--q", q_arg, "Norm q >= 1 or inf")->capture_default_str();
  embed->add_option("--out", out, "Output point config JSON")->required();
  embed->callback([&] {
    action = [&] {
      Stopwatch sw;
      const double q = parse_q(q_arg);
      const Graph gr = graph_from_json(read_json_file(graph_path));
      const auto cfg = embed_for(gr, k, p, q);
      RunReport r;
      r.command = "embed";
      r.seed = g.seed;
      r.config = {{"graph", to_json(gr)}, {"k", k}, {"p", p}, {"q", q_to_json(q)}};
      r.timings["embed"] = sw.lap();
      r.results = {{"regime", regime_name(cfg.regime)},
                   {"d", cfg.d},
                   {"points", cfg.points.size()},
                   {"embedding", cfg.source ? cfg.source->embedding : ""}};
      return emit(
          g, r,
          fmt("%s embedding, regime %s, %zu points in dimension %zu", cfg.source ? cfg.source->embedding.c_str() : "?",
              regime_name(cfg.regime).c_str(), cfg.points.size(), cfg.d),
          out, to_json(cfg));
    };
  });

  // chub
  auto* chub = app.add_subcommand("chub", "Minimum of F over all vertex tuples");
  std::string points_path;
  double tol = 1e-6;
  std::uint64_t cap = kDefaultEnumerationCap;
  bool exact = false;
  chub->add_option("--points", points_path, "Point config JSON")->required()->check(CLI::ExistingFile);
  chub->add_option("--tol", tol, "Absolute tolerance")->capture_default_str();
  chub->add_option("--cap", cap, "Tuple enumeration cap")->capture_default_str();
  chub->add_flag("--exact", exact, "Exact rational values (p = q = 2 only)");
  chub->add_option("--out", out, "Output result JSON");
  chub->callback([&] {
    action = [&] {
      Stopwatch sw;
      const auto cfg = points_from_json(read_json_file(points_path));
      const double load = sw.lap();
      ChubOptions opts;
      opts.tol = tol;
      opts.cap = cap;
      opts.threads = g.threads;
      opts.exact = exact;
      const auto res = solve_chub(cfg, opts);
      RunReport r;
      r.command = "chub";
      r.seed = g.seed;
      r.config = {{"points_k", cfg.k},     {"points_n", cfg.n}, {"d", cfg.d},    {"p", cfg.p},
                  {"q", q_to_json(cfg.q)}, {"tol", tol},        {"exact", exact}};
      r.timings["load"] = load;
      r.timings["solve"] = sw.lap();
      r.results = {{"value", res.value},
                   {"lower_bound", res.lower_bound},
                   {"argmin", res.argmin},
                   {"method", res.method},
                   {"tolerance", res.tolerance},
                   {"requested_tol", tol},
                   {"classes", res.distinct_classes}};
      if (res.exact_value) r.results["exact_value"] = to_string(*res.exact_value);
      return emit(g, r, fmt("CHUB = %.12g (lower bound %.12g, %s)", res.value, res.lower_bound, res.method.c_str()),
                  out, r.results);
    };
  });

  // bary solve / uniformize
  auto* bary = app.add_subcommand("bary", "Barycenter instances");
  bary->require_subcommand(1);
  auto* solve = bary->add_subcommand("solve", "Barycenter value");
  std::string inst_path, method = "mot";
  solve->add_option("--instance", inst_path, "Instance JSON")->required()->check(CLI::ExistingFile);
  solve->add_option("--method", method, "mot|borgwardt")
      ->capture_default_str()
      ->check(CLI::IsMember({"mot", "borgwardt"}));
  solve->add_option("--tol", tol, "Absolute tolerance (mot)")->capture_default_str();
  solve->add_option("--cap", cap, "Joint-support size cap")->capture_default_str();
  solve->add_option("--out", out, "Output result JSON");
  solve->callback([&] {
    action = [&] {
      Stopwatch sw;
      const auto inst = bary_instance_from_json(read_json_file(inst_path));
      RunReport r;
      r.command = "bary solve";
      r.seed = g.seed;
      r.config = {{"instance", to_json(inst)}, {"method", method}, {"tol", tol}};
      r.timings["load"] = sw.lap();
      if (method == "mot") {
        MotOptions opts;
        opts.tol = tol;
        opts.cap = cap;
        opts.threads = g.threads;
        const auto res = bary_value_mot(inst, opts);
        const auto nu = extract_barycenter(res.plan, inst);
        r.timings["solve"] = sw.lap();
        r.results = {{"value", res.value},        {"lower_bound", res.lower_bound},
                     {"method", res.method},      {"rounds", res.rounds},
                     {"columns", res.columns},    {"marginal_violation", res.plan.marginal_violation(inst)},
                     {"plan", to_json(res.plan)}, {"barycenter", to_json(nu)}};
      } else {
        const auto res = borgwardt_2approx(inst, cap);
        r.timings["solve"] = sw.lap();
        r.results = {{"value", res.value}, {"method", "borgwardt"}, {"barycenter", to_json(res.nu)}};
      }
      return emit(g, r, fmt("barycenter value %.12g (%s)", r.results["value"].get<double>(), method.c_str()), out,
                  r.results);
    };
  });
  auto* unif = bary->add_subcommand("uniformize", "Uniform-mass instance within eps");
  double eps = 0.1;
  unif->add_option("--instance", inst_path, "Instance JSON")->required()->check(CLI::ExistingFile);
  unif->add_option("--eps", eps, "Target accuracy")->required();
  unif->add_option("--out", out, "Output instance JSON");
  unif->callback([&] {
    action = [&] {
      Stopwatch sw;
      const auto inst = bary_instance_from_json(read_json_file(inst_path));
      const auto u = uniformize(inst, eps);
      RunReport r;
      r.command = "bary uniformize";
      r.seed = g.seed;
      r.config = {{"instance", to_json(inst)}, {"eps", eps}};
      r.timings["uniformize"] = sw.lap();
      const int atoms = u.measures.empty() ? 0 : static_cast<int>(u.measures[0].size());
      r.results = {{"atoms_per_measure", atoms}, {"k", u.k()}};
      if (out.empty() && !g.json && !g.quiet) {
        std::cout << to_json(u).dump() << '\n';
        return 0;
      }
      return emit(g, r, fmt("uniformized: %d measures of %d atoms", u.k(), atoms), out, to_json(u));
    };
  });

  // reduce
  auto* reduce = app.add_subcommand("reduce", "Decide k-clique through the barycenter gadget");
  std::string solver = "chub", report_path;
  std::optional<double> reduce_tol;
  reduce->add_option("--graph", graph_path, "Graph JSON")->required()->check(CLI::ExistingFile);
  reduce->add_option("--k", k, "Clique size")->required();
  reduce->add_option("--p", p, "Exponent p >= 1")->capture_default_str();
  reduce->add_option("--q", q_arg, "Norm q >= 1 or inf")->capture_default_str();
  reduce->add_option("--solver", solver, "chub|mot")
      ->capture_default_str()
      ->check(CLI::IsMember({"chub", "mot", "chub-bruteforce", "bary-mot"}));
  reduce->add_option("--tol", reduce_tol, "CHUB-scale tolerance, at most delta / 10 (default delta / 20)");
  reduce->add_option("--cap", cap, "Enumeration cap")->capture_default_str();
  reduce->add_option("--report", report_path, "Output run report JSON");
  reduce->callback([&] {
    action = [&] {
      Stopwatch sw;
      const double q = parse_q(q_arg);
      const Graph gr = graph_from_json(read_json_file(graph_path));
      RunReport r;
      r.command = "reduce";
      r.seed = g.seed;
      r.timings["load"] = sw.lap();
      const auto inst = build_instance(gr, k, p, q);
      r.timings["build"] = sw.lap();
      const double t = reduce_tol.value_or(inst.certificate.delta / 20);
      r.config = {{"graph", to_json(gr)}, {"k", k},   {"p", p},
                  {"q", q_to_json(q)},    {"tol", t}, {"solver", solver_name(parse_solver(solver))}};
      const auto d = decide_clique(inst, parse_solver(solver), t, cap, g.threads);
      r.timings["decide"] = sw.lap();
      const bool truth = has_k_clique(gr, k, cap);
      r.timings["oracle"] = sw.lap();
      r.results = {{"value", d.value},
                   {"lower_bound", d.lower_bound},
                   {"threshold", d.threshold},
                   {"margin", d.margin},
                   {"gamma", inst.certificate.gamma},
                   {"delta", inst.certificate.delta},
                   {"certificate", to_json(inst.certificate)},
                   {"decision", d.has_clique},
                   {"truth", truth},
                   {"agrees", d.has_clique == truth},
                   {"method", d.method},
                   {"doubled", inst.doubled},
                   {"embedded_k", inst.k},
                   {"embedded_n", inst.graph.num_vertices()}};
      if (d.exact_value) r.results["exact_value"] = to_string(*d.exact_value);
      if (!d.argmin.empty()) r.results["argmin"] = d.argmin;
      r.passed = d.has_clique == truth;
      return emit(
          g, r,
          fmt("%s: value %.12g vs threshold %.12g -> %s (oracle: %s)", solver_name(parse_solver(solver)).c_str(),
              d.value, d.threshold, d.has_clique ? "clique" : "no clique", truth ? "clique" : "no clique"),
          report_path, to_json(r));
    };
  });

  // verify
  auto* verify = app.add_subcommand("verify", "Run a property suite");
  std::string lemma;
  int budget = 20;
  verify->add_option("--lemma", lemma, "Suite id or 'all'")->required();
  verify->add_option("--budget", budget, "Random trials per property")->capture_default_str();
  verify->add_option("--report", report_path, "Output run report JSON");
  verify->callback([&] {
    action = [&] {
      std::vector<std::string> ids;
      if (lemma == "all") {
        ids = lemma_ids();
      } else {
        ids.push_back(lemma);
      }
      RunReport all;
      all.command = "verify";
      all.seed = g.seed;
      all.config = {{"lemma", lemma}, {"seed", g.seed}, {"budget", budget}};
      all.results = Json::array();
      std::string summary;
      for (const auto& id : ids) {
        VerifyOptions opts{g.seed, budget, g.threads};
        const auto r = verify_lemma(id, opts);
        all.passed = all.passed && r.passed;
        all.timings[id] = r.timings.at("properties");
        all.results.push_back(r.results);
        for (const auto& prop : r.results["properties"]) {
          summary += fmt("%s %s: %s (%ld trials)\n", prop["passed"].get<bool>() ? "PASS" : "FAIL", id.c_str(),
                         prop["name"].get<std::string>().c_str(), prop["trials"].get<long>());
        }
      }
      if (!summary.empty()) summary.pop_back();
      return emit(g, all, summary, report_path, to_json(all));
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  try {
    return action ? action() : kExitUsage;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ResourceError& e) {
    std::cerr << "resource cap: " << e.what() << '\n';
    return kExitResource;
  } catch (const SolverError& e) {
    std::cerr << "solver: " << e.what() << fmt(" (bracket [%.12g, %.12g])", e.lower(), e.upper()) << '\n';
    return kExitResource;
  }
}

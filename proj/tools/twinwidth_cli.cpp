#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "twinwidth/bench.hpp"
#include "twinwidth/elimination.hpp"
#include "twinwidth/inference.hpp"
#include "twinwidth/jointree.hpp"
#include "twinwidth/randgen.hpp"
#include "twinwidth/serialize.hpp"
#include "twinwidth/thinning.hpp"
#include "twinwidth/world.hpp"

using namespace twinwidth;

namespace {

constexpr int kUsageError = 1;
constexpr int kInvariantFailure = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a computed result breaks one of the checked relations.
class InvariantFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::uint64_t seed = 0;
  std::string out;
  int workers = 1;
  std::string format;
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    std::cout.flush();
  } else {
    write_file(g.out, text);
  }
}

void require_json(const Globals& g) {
  if (!g.format.empty() && g.format != "json") throw UsageError("this subcommand only supports --format json");
}

GenMethod parse_gen_method(const std::string& s) {
  if (s == "rnet") return GenMethod::RNet;
  if (s == "rnet2") return GenMethod::RNet2;
  throw UsageError("unknown generator '" + s + "'");
}

Dag twin_dag(const Dag& dag) {
  std::vector<bool> roots(dag.size(), false);
  for (VarId r : dag.roots()) roots[r] = true;
  return world_dag(dag, make_world_map(roots, 2), Naming::Prime);
}

std::vector<VarId> resolve_roots(const Dag& dag, const std::optional<std::vector<std::string>>& names) {
  if (!names) return dag.roots();
  std::vector<VarId> out;
  for (const auto& n : *names) out.push_back(dag.index_of(n));
  return out;
}

Evidence parse_assignments(const std::vector<std::string>& items) {
  Evidence e;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("expected VAR=STATE, got '" + item + "'");
    try {
      e[item.substr(0, eq)] = std::stoi(item.substr(eq + 1));
    } catch (const std::logic_error&) {
      throw UsageError("expected an integer state in '" + item + "'");
    }
  }
  return e;
}

SuiteConfig suite_from(const Globals& g, const std::string& method, bool scm, const std::vector<int>& ns,
                       const std::vector<int>& params, int reps, int chain_bound, bool timings) {
  SuiteConfig cfg;
  cfg.method = parse_gen_method(method);
  cfg.scm = scm;
  cfg.ns = ns;
  cfg.params = params;
  cfg.reps = reps;
  cfg.chain_bound = chain_bound;
  cfg.seed = g.seed;
  cfg.workers = g.workers;
  cfg.timings = timings;
  if (cfg.reps < 1) throw UsageError("--reps must be at least 1");
  return cfg;
}

Json witness_json(const std::optional<TightnessWitness>& w) {
  if (!w) return nullptr;
  Json j;
  j["network"] = dag_to_json(w->dag);
  if (!w->order.sequence.empty()) j["order"] = order_to_json(w->order, w->dag.names());
  j["base_width"] = w->base_width;
  j["twin_width"] = w->twin_width;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Twin and N-world network construction, jointree widths and counterfactual inference"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("-o,--out", g.out, "Output file (default: standard output)");
  app.add_option("--workers", g.workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));

  std::function<void()> action;
  std::string net_path;
  auto net_option = [&](CLI::App* sub) { sub->add_option("--net", net_path, "Network file")->required(); };

  // gen
  std::string gen_method = "rnet";
  int gen_n = 50, gen_p = 3, gen_d = 5, gen_card = 2;
  bool gen_scm = false, gen_structure = false;
  auto* gen = app.add_subcommand("gen", "Generate a random network");
  gen->add_option("--method", gen_method)->check(CLI::IsMember({"rnet", "rnet2"}))->capture_default_str();
  gen->add_option("--n", gen_n)->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--p", gen_p)->check(CLI::NonNegativeNumber)->capture_default_str();
  gen->add_option("--d", gen_d)->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--card", gen_card, "States per variable")->check(CLI::Range(1, 16))->capture_default_str();
  gen->add_flag("--scm", gen_scm, "Add a private exogenous root to every internal variable");
  gen->add_flag("--structure", gen_structure, "Emit ids and parents only");
  gen->callback([&] {
    action = [&] {
      require_json(g);
      GenConfig cfg;
      cfg.method = parse_gen_method(gen_method);
      cfg.n = gen_n;
      cfg.p = gen_p;
      cfg.d = gen_d;
      cfg.seed = g.seed;
      cfg.scm_transform = gen_scm;
      const Dag dag = generate(cfg);
      emit(g, dump(gen_structure ? dag_to_json(dag) : network_to_json(parameterize(dag, g.seed, gen_card))));
    };
  });

  // twin
  auto* twin = app.add_subcommand("twin", "Twin network (all roots shared)");
  net_option(twin);
  twin->callback([&] {
    action = [&] {
      require_json(g);
      const auto [net, map] = twin_network(load_network(net_path));
      emit(g, dump(network_to_json(net, &map)));
    };
  });

  // nworld
  int worlds = 2;
  std::vector<std::string> shared_names;
  auto* nworld = app.add_subcommand("nworld", "N-world network sharing a set of roots");
  net_option(nworld);
  nworld->add_option("--worlds", worlds)->check(CLI::PositiveNumber)->capture_default_str();
  auto* shared_opt = nworld->add_option("--shared", shared_names, "Shared roots (default: all roots)")
                         ->delimiter(',')
                         ->expected(0, CLI::detail::expected_max_vector_size);
  nworld->callback([&] {
    action = [&] {
      require_json(g);
      const Scm scm = load_network(net_path);
      const auto [net, map] = n_world_network(
          scm, resolve_roots(scm.dag, shared_opt->count() ? std::optional(shared_names) : std::nullopt), worlds);
      emit(g, dump(network_to_json(net, &map)));
    };
  });

  // mutilate
  std::vector<std::string> do_items;
  auto* mut = app.add_subcommand("mutilate", "Apply interventions");
  net_option(mut);
  mut->add_option("--do", do_items, "VAR=STATE")->required()->delimiter(',');
  mut->callback([&] {
    action = [&] {
      require_json(g);
      emit(g, dump(network_to_json(mutilate(load_network(net_path), parse_assignments(do_items)))));
    };
  });

  // order
  bool order_twin = false;
  auto* order = app.add_subcommand("order", "Minfill elimination order and its width");
  net_option(order);
  order->add_flag("--twin", order_twin, "Also lift the order to the twin network");
  order->callback([&] {
    action = [&] {
      require_json(g);
      const Dag dag = load_structure(net_path).dag;
      const MoralGraph mg = moral_graph(dag);
      const EliminationOrder base = minfill_order(mg);
      Json j;
      j["order"] = order_to_json(base, dag.names());
      j["width"] = order_width(mg, base);
      if (order_twin) {
        const Dag twin = twin_dag(dag);
        const EliminationOrder lifted = twin_order(base, dag);
        j["twin_order"] = order_to_json(lifted, twin.names());
        j["twin_width"] = order_width(moral_graph(twin), lifted);
        if (j["twin_width"].get<int>() > 2 * j["width"].get<int>() + 1)
          throw InvariantFailure("twin order width exceeds 2w+1");
      }
      emit(g, dump(j));
    };
  });

  // jointree
  auto* jt_cmd = app.add_subcommand("jointree", "Minfill jointree of the network");
  net_option(jt_cmd);
  jt_cmd->callback([&] {
    action = [&] {
      require_json(g);
      const Dag dag = load_structure(net_path).dag;
      const Jointree jt = jointree_from_order(dag, minfill_order(moral_graph(dag)));
      emit(g, dump(jointree_to_json(jt, classical_separators(jt))));
    };
  });

  // twin-jointree
  auto* tjt = app.add_subcommand("twin-jointree", "Twin jointree built from the minfill base jointree");
  net_option(tjt);
  tjt->callback([&] {
    action = [&] {
      require_json(g);
      const Dag dag = load_structure(net_path).dag;
      const Jointree jt = jointree_from_order(dag, minfill_order(moral_graph(dag)));
      const SeparatorAssignment base = classical_separators(jt);
      const Jointree lifted = make_twin_jointree(jt, dag);
      const SeparatorAssignment seps = lift_separators(base, lifted);
      if (seps.width > 2 * base.width + 1 || lifted.node_count() > 2 * jt.node_count())
        throw InvariantFailure("twin jointree exceeds its width or size bound");
      emit(g, dump(jointree_to_json(lifted, seps)));
    };
  });

  // thin
  int chain_bound = 10;
  bool thin_twin = false;
  auto* thin_cmd = app.add_subcommand("thin", "Replicate and thin the minfill jointree");
  net_option(thin_cmd);
  thin_cmd->add_option("--chain-bound", chain_bound)->check(CLI::NonNegativeNumber)->capture_default_str();
  thin_cmd->add_flag("--twin", thin_twin, "Lift the thinned jointree to the twin network");
  thin_cmd->callback([&] {
    action = [&] {
      require_json(g);
      const auto [dag, functional] = load_structure(net_path);
      const Jointree jt = jointree_from_order(dag, minfill_order(moral_graph(dag)));
      const Jointree rep = replicate(jt, functional, chain_bound);
      const ThinnedJointree thinned = thin(rep, functional);
      if (auto problem = replay_thinning(rep, classical_separators(rep), thinned.log, thinned.thinned);
          !problem.empty())
        throw InvariantFailure("thinning log does not replay: " + problem);
      if (!thin_twin) {
        emit(g, dump(thinned_to_json(thinned, classical_separators(rep))));
        return;
      }
      const Jointree lifted = make_twin_jointree(rep, dag);
      const ThinnedJointree lifted_thin = thinned_twin_separators(thinned, lifted);
      if (lifted_thin.thinned.width > 2 * thinned.thinned.width + 1)
        throw InvariantFailure("thinned twin width exceeds 2w+1");
      emit(g, dump(thinned_to_json(lifted_thin, classical_separators(lifted))));
    };
  });

  // infer
  std::string query_path, engine_name = "ve";
  auto* infer = app.add_subcommand("infer", "Answer a counterfactual query");
  net_option(infer);
  infer->add_option("--query", query_path)->required();
  infer->add_option("--engine", engine_name)
      ->check(CLI::IsMember({"ve", "jointree", "jointree-thinned", "oracle"}))
      ->capture_default_str();
  infer->add_option("--chain-bound", chain_bound)->check(CLI::NonNegativeNumber)->capture_default_str();
  infer->callback([&] {
    action = [&] {
      require_json(g);
      const Scm scm = load_network(net_path);
      const CounterfactualQuery q = parse_query(read_file(query_path));
      emit(g, dump(result_to_json(counterfactual(scm, q, engine_from_string(engine_name), chain_bound))));
    };
  });

  // bench and audit share the suite options
  std::string suite_method = "rnet";
  bool suite_scm = false, timings = false, tightness = false;
  std::vector<int> suite_ns{50}, suite_params{3, 5, 7};
  int reps = 50, tight_nodes = 6, tight_tw_nodes = 8;
  auto suite_options = [&](CLI::App* sub) {
    sub->add_option("--method", suite_method)->check(CLI::IsMember({"rnet", "rnet2"}))->capture_default_str();
    sub->add_flag("--scm", suite_scm, "Apply the SCM transformation");
    sub->add_option("--n", suite_ns, "Node counts")->delimiter(',')->capture_default_str();
    sub->add_option("--param", suite_params, "p for rnet, d for rnet2")->delimiter(',')->capture_default_str();
    sub->add_option("--reps", reps)->capture_default_str();
    sub->add_option("--chain-bound", chain_bound)->check(CLI::NonNegativeNumber)->capture_default_str();
  };

  auto* bench = app.add_subcommand("bench", "Width experiment over random networks");
  suite_options(bench);
  bench->add_flag("--timings", timings, "Add per-method milliseconds (not reproducible)");
  bench->callback([&] {
    action = [&] {
      const SuiteConfig cfg = suite_from(g, suite_method, suite_scm, suite_ns, suite_params, reps, chain_bound, timings);
      const auto rows = run_suite(cfg);
      if (g.format == "json") {
        Json arr = Json::array();
        for (const auto& r : rows) {
          Json row;
          row["generator"] = generator_name(cfg.method, cfg.scm);
          row["n"] = r.n;
          row["param"] = r.param;
          row["rep"] = r.rep;
          row["seed"] = r.seed;
          for (Method m : kMethods) {
            Json mj;
            mj["width"] = r[m].width;
            mj["normalized_width"] = r[m].normalized_width;
            mj["nodes"] = r[m].nodes;
            if (cfg.timings) mj["ms"] = r[m].ms;
            row[to_string(m)] = mj;
          }
          arr.push_back(row);
        }
        emit(g, dump(arr));
      } else {
        emit(g, suite_csv(cfg, rows));
      }
      std::size_t bad = 0;
      for (const auto& r : rows)
        for (const auto& v : row_invariant_violations(r)) {
          std::cerr << "n=" << r.n << " param=" << r.param << " rep=" << r.rep << ": " << v << "\n";
          ++bad;
        }
      if (bad) throw InvariantFailure(std::to_string(bad) + " per-row invariant violations");
    };
  });

  auto* audit = app.add_subcommand("audit", "Check width and size bounds on random networks");
  suite_options(audit);
  audit->add_flag("--tightness", tightness, "Also search small DAGs for tightness witnesses");
  audit->add_option("--max-nodes", tight_nodes, "Largest DAG in the order tightness search")
      ->check(CLI::Range(2, 7))
      ->capture_default_str();
  audit->add_option("--treewidth-max-nodes", tight_tw_nodes, "Largest DAG in the treewidth tightness search")
      ->check(CLI::Range(2, 9))
      ->capture_default_str();
  audit->callback([&] {
    action = [&] {
      require_json(g);
      const SuiteConfig cfg = suite_from(g, suite_method, suite_scm, suite_ns, suite_params, reps, chain_bound, false);
      const AuditReport report = run_bound_audit(cfg);
      Json j;
      j["generator"] = generator_name(cfg.method, cfg.scm);
      j["instances"] = report.instances;
      j["checks"] = report.checks;
      Json violations = Json::array();
      for (const auto& v : report.violations) {
        Json vj;
        vj["bound"] = v.bound;
        vj["detail"] = v.detail;
        vj["instance"] = Json::parse(v.instance);
        violations.push_back(vj);
      }
      j["violations"] = violations;
      bool witnesses_ok = true;
      if (tightness) {
        const auto order_witness = find_order_tightness(tight_nodes);
        const auto tw_witness = find_treewidth_tightness(tight_tw_nodes);
        j["order_tightness"] = witness_json(order_witness);
        j["treewidth_tightness"] = witness_json(tw_witness);
        witnesses_ok = order_witness.has_value() && tw_witness.has_value();
      }
      emit(g, dump(j));
      if (!report.violations.empty()) throw InvariantFailure(std::to_string(report.violations.size()) + " bound violations");
      if (!witnesses_ok) throw InvariantFailure("tightness witness not found");
    };
  });

  // treewidth
  bool tw_twin = false;
  int node_limit = 40;
  auto* tw = app.add_subcommand("treewidth", "Exact treewidth of the moral graph");
  net_option(tw);
  tw->add_flag("--twin", tw_twin, "Use the twin network");
  tw->add_option("--node-limit", node_limit)->check(CLI::Range(1, 64))->capture_default_str();
  tw->callback([&] {
    action = [&] {
      require_json(g);
      Dag dag = load_structure(net_path).dag;
      if (tw_twin) dag = twin_dag(dag);
      const MoralGraph mg = moral_graph(dag);
      Json j;
      j["nodes"] = mg.size();
      j["treewidth"] = exact_treewidth(mg, node_limit);
      j["minfill_width"] = order_width(mg, minfill_order(mg));
      emit(g, dump(j));
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    action();
    return 0;
  } catch (const InvariantFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvariantFailure;
  } catch (const ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvariantFailure;
  } catch (const InferenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvariantFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }
}

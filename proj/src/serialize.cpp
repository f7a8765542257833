#include "twinwidth/serialize.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace twinwidth {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

namespace {

Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + e.what());
  }
}

[[noreturn]] void shape_error(const std::string& field, const std::string& what) {
  throw ParseError(field + ": " + what);
}

const Json& member(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) shape_error(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) shape_error(path + "." + key, "missing");
  return *it;
}

std::string as_string(const Json& j, const std::string& path) {
  if (!j.is_string()) shape_error(path, "expected a string");
  return j.get<std::string>();
}

int as_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) shape_error(path, "expected an integer");
  return j.get<int>();
}

const Json& as_array(const Json& j, const std::string& path) {
  if (!j.is_array()) shape_error(path, "expected an array");
  return j;
}

}  // namespace

Scm parse_network(const std::string& text) {
  const Json doc = parse_text(text);
  const Json& vars = as_array(member(doc, "variables", "$"), "variables");
  Scm scm;
  struct Pending {
    std::vector<std::string> parents;
    std::string path;
  };
  std::vector<Pending> pending;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const std::string path = "variables[" + std::to_string(i) + "]";
    const Json& v = vars[i];
    const std::string id = as_string(member(v, "id", path), path + ".id");
    if (!is_valid_id(id)) throw ModelError(id, "invalid variable id '" + id + "'");
    Variable var;
    for (std::size_t s = 0; s < as_array(member(v, "states", path), path + ".states").size(); ++s)
      var.states.push_back(as_string(v["states"][s], path + ".states[" + std::to_string(s) + "]"));
    Pending pend;
    pend.path = path;
    if (auto it = v.find("parents"); it != v.end()) {
      for (std::size_t p = 0; p < as_array(*it, path + ".parents").size(); ++p)
        pend.parents.push_back(as_string((*it)[p], path + ".parents[" + std::to_string(p) + "]"));
    }
    const bool has_dist = v.contains("dist"), has_cpt = v.contains("cpt");
    if (has_dist) {
      std::vector<double> dist;
      for (const auto& x : as_array(v["dist"], path + ".dist")) {
        if (!x.is_number()) shape_error(path + ".dist", "expected numbers");
        dist.push_back(x.get<double>());
      }
      var.dist = std::move(dist);
    }
    if (has_cpt) {
      std::vector<int> cpt;
      const Json& rows = as_array(v["cpt"], path + ".cpt");
      for (std::size_t r = 0; r < rows.size(); ++r) {
        const Json& row = rows[r];
        if (row.is_number_integer()) {
          cpt.push_back(row.get<int>());
        } else if (row.is_array()) {
          // a full probability row is accepted only when it is a point mass
          int chosen = -1;
          for (std::size_t s = 0; s < row.size(); ++s) {
            if (!row[s].is_number()) shape_error(path + ".cpt[" + std::to_string(r) + "]", "expected numbers");
            const double x = row[s].get<double>();
            if (x == 1.0 && chosen < 0) {
              chosen = static_cast<int>(s);
            } else if (x != 0.0) {
              chosen = -2;
              break;
            }
          }
          if (chosen < 0)
            throw ModelError(id, "determinism violation at " + id + ": cpt row " + std::to_string(r) +
                                     " is not a point mass");
          cpt.push_back(chosen);
        } else {
          shape_error(path + ".cpt[" + std::to_string(r) + "]", "expected a state index or a probability row");
        }
      }
      var.cpt = std::move(cpt);
    }
    if (auto it = v.find("functional"); it != v.end()) {
      if (!it->is_boolean()) shape_error(path + ".functional", "expected a boolean");
      var.functional = it->get<bool>();
    } else {
      var.functional = !pend.parents.empty();
    }
    scm.dag.add_node(id);
    scm.vars.push_back(std::move(var));
    pending.push_back(std::move(pend));
  }
  for (std::size_t i = 0; i < pending.size(); ++i) {
    for (const auto& p : pending[i].parents) {
      auto pid = scm.dag.find(p);
      if (!pid) throw ModelError(scm.dag.name(static_cast<VarId>(i)), pending[i].path + ".parents: unknown variable '" + p + "'");
      scm.dag.add_edge(*pid, static_cast<VarId>(i));
    }
  }
  require_valid(scm);
  return scm;
}

Scm load_network(const std::filesystem::path& path) { return parse_network(read_file(path)); }

NetworkStructure parse_structure(const std::string& text) {
  const Json doc = parse_text(text);
  const Json& vars = as_array(member(doc, "variables", "$"), "variables");
  NetworkStructure out;
  std::vector<bool> functional;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const std::string path = "variables[" + std::to_string(i) + "]";
    const std::string id = as_string(member(vars[i], "id", path), path + ".id");
    if (!is_valid_id(id)) throw ModelError(id, "invalid variable id '" + id + "'");
    out.dag.add_node(id);
  }
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const std::string path = "variables[" + std::to_string(i) + "]";
    const auto v = static_cast<VarId>(i);
    if (auto it = vars[i].find("parents"); it != vars[i].end()) {
      for (std::size_t p = 0; p < as_array(*it, path + ".parents").size(); ++p) {
        const std::string name = as_string((*it)[p], path + ".parents[" + std::to_string(p) + "]");
        const auto pid = out.dag.find(name);
        if (!pid) throw ModelError(out.dag.name(v), path + ".parents: unknown variable '" + name + "'");
        const auto& existing = out.dag.parents(v);
        if (std::find(existing.begin(), existing.end(), *pid) != existing.end())
          throw ModelError(out.dag.name(v), "duplicate-parent violation at " + out.dag.name(v) + ": parent " + name +
                                                " listed twice");
        out.dag.add_edge(*pid, v);
      }
    }
    if (auto it = vars[i].find("functional"); it != vars[i].end()) {
      if (!it->is_boolean()) shape_error(path + ".functional", "expected a boolean");
      functional.push_back(it->get<bool>());
    } else {
      functional.push_back(!out.dag.is_root(v));
    }
  }
  if (!out.dag.is_acyclic()) throw ModelError("", "cycle violation: the graph has a directed cycle");
  out.functional = VarSet(out.dag.size());
  for (std::size_t v = 0; v < functional.size(); ++v) out.functional[v] = functional[v];
  return out;
}

NetworkStructure load_structure(const std::filesystem::path& path) { return parse_structure(read_file(path)); }

std::optional<WorldMap> parse_world_map(const std::string& text) {
  const Json doc = parse_text(text);
  if (!doc.is_object() || !doc.contains("world_map")) return std::nullopt;
  return world_map_from_json(doc["world_map"]);
}

Json world_map_to_json(const WorldMap& map) {
  Json j;
  j["worlds"] = map.worlds;
  Json shared = Json::array();
  for (std::size_t b = 0; b < map.shared.size(); ++b)
    if (map.shared[b]) shared.push_back(static_cast<int>(b));
  j["shared"] = shared;
  j["copies"] = map.copies;
  return j;
}

WorldMap world_map_from_json(const Json& j) {
  const int worlds = as_int(member(j, "worlds", "world_map"), "world_map.worlds");
  const Json& copies = as_array(member(j, "copies", "world_map"), "world_map.copies");
  std::vector<bool> shared(copies.size(), false);
  for (const auto& s : as_array(member(j, "shared", "world_map"), "world_map.shared")) {
    const int b = as_int(s, "world_map.shared[]");
    if (b < 0 || static_cast<std::size_t>(b) >= shared.size()) shape_error("world_map.shared", "index out of range");
    shared[b] = true;
  }
  WorldMap map = make_world_map(shared, worlds);
  if (copies.get<std::vector<std::vector<VarId>>>() != map.copies)
    shape_error("world_map.copies", "does not match the standard layout");
  return map;
}

namespace {

Json variables_json(const Dag& dag, const Scm* scm) {
  Json vars = Json::array();
  for (std::size_t i = 0; i < dag.size(); ++i) {
    const auto v = static_cast<VarId>(i);
    Json item;
    item["id"] = dag.name(v);
    Json parents = Json::array();
    for (VarId p : dag.parents(v)) parents.push_back(dag.name(p));
    if (scm) {
      const auto& var = scm->vars[i];
      item["states"] = var.states;
      item["parents"] = parents;
      if (var.dist) item["dist"] = *var.dist;
      if (var.cpt) item["cpt"] = *var.cpt;
      if (var.functional != !dag.is_root(v)) item["functional"] = var.functional;
    } else {
      item["parents"] = parents;
    }
    vars.push_back(std::move(item));
  }
  return vars;
}

}  // namespace

Json network_to_json(const Scm& scm, const WorldMap* map) {
  Json j;
  j["variables"] = variables_json(scm.dag, &scm);
  if (map) j["world_map"] = world_map_to_json(*map);
  return j;
}

Json dag_to_json(const Dag& dag, const WorldMap* map) {
  Json j;
  j["variables"] = variables_json(dag, nullptr);
  if (map) j["world_map"] = world_map_to_json(*map);
  return j;
}

Json order_to_json(const EliminationOrder& order, const std::vector<std::string>& names) {
  Json j = Json::array();
  for (VarId v : order.sequence) j.push_back(names.at(v));
  return j;
}

EliminationOrder order_from_json(const Json& j, const Dag& dag) {
  EliminationOrder order;
  for (const auto& x : as_array(j, "order")) order.sequence.push_back(dag.index_of(as_string(x, "order[]")));
  if (!is_permutation(order, dag.size())) shape_error("order", "not a permutation of the network variables");
  return order;
}

namespace {

Json names_of(const Jointree& jt, const VarSet& set) {
  Json j = Json::array();
  for (auto v = set.find_first(); v != VarSet::npos; v = set.find_next(v)) j.push_back(jt.var_names[v]);
  return j;
}

}  // namespace

Json separators_to_json(const Jointree& jt, const SeparatorAssignment& seps) {
  Json j = Json::array();
  for (const auto& s : seps.separators) j.push_back(names_of(jt, s));
  return j;
}

Json jointree_to_json(const Jointree& jt, const SeparatorAssignment& seps) {
  Json j;
  Json nodes = Json::array();
  for (std::size_t i = 0; i < jt.node_count(); ++i) {
    Json node;
    node["id"] = static_cast<int>(i);
    node["label"] = jt.labels[i];
    if (jt.host[i] >= 0) node["hosts"] = jt.var_names[jt.host[i]];
    nodes.push_back(std::move(node));
  }
  j["nodes"] = nodes;
  Json edges = Json::array();
  for (const auto& [a, b] : jt.edges) edges.push_back({a, b});
  j["edges"] = edges;
  Json hosts = Json::object();
  for (std::size_t v = 0; v < jt.var_count(); ++v) hosts[jt.var_names[v]] = jt.hosts_of(static_cast<VarId>(v));
  j["hosts"] = hosts;
  if (jt.lift) {
    Json classes = Json::array();
    for (auto c : jt.lift->edge_class) classes.push_back(to_string(c));
    j["edge_class"] = classes;
    j["world_map"] = world_map_to_json(jt.lift->map);
  }
  j["separators"] = separators_to_json(jt, seps);
  Json clusters = Json::array();
  for (const auto& c : seps.clusters) clusters.push_back(names_of(jt, c));
  j["clusters"] = clusters;
  j["width"] = seps.width;
  j["normalized_width"] = seps.normalized_width;
  return j;
}

Json thinned_to_json(const ThinnedJointree& tj, const SeparatorAssignment& classical) {
  Json j = jointree_to_json(tj.jointree, classical);
  j["thinned_separators"] = separators_to_json(tj.jointree, tj.thinned);
  j["thinned_width"] = tj.thinned.width;
  j["thinned_normalized_width"] = tj.thinned.normalized_width;
  Json log = Json::array();
  for (const auto& step : tj.log) {
    Json s;
    s["edge"] = step.edge;
    s["variable"] = tj.jointree.var_names[step.var];
    s["rule"] = step.rule;
    s["witness"] = step.witness;
    log.push_back(std::move(s));
  }
  j["thinning_log"] = log;
  return j;
}

namespace {

std::vector<WorldEvent> events_from(const Json& doc, const std::string& key) {
  std::vector<WorldEvent> out;
  auto it = doc.find(key);
  if (it == doc.end()) return out;
  const Json& arr = as_array(*it, key);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string path = key + "[" + std::to_string(i) + "]";
    WorldEvent ev;
    ev.world = arr[i].contains("world") ? as_int(arr[i]["world"], path + ".world") : 1;
    ev.var = as_string(member(arr[i], "var", path), path + ".var");
    ev.state = as_int(member(arr[i], "state", path), path + ".state");
    out.push_back(std::move(ev));
  }
  return out;
}

Json events_to(const std::vector<WorldEvent>& events) {
  Json arr = Json::array();
  for (const auto& ev : events) arr.push_back({{"world", ev.world}, {"var", ev.var}, {"state", ev.state}});
  return arr;
}

}  // namespace

CounterfactualQuery parse_query(const std::string& text) {
  const Json doc = parse_text(text);
  if (!doc.is_object()) shape_error("$", "expected an object");
  CounterfactualQuery q;
  if (doc.contains("worlds")) q.worlds = as_int(doc["worlds"], "worlds");
  if (doc.contains("shared_roots")) {
    std::vector<std::string> roots;
    for (const auto& r : as_array(doc["shared_roots"], "shared_roots")) roots.push_back(as_string(r, "shared_roots[]"));
    q.shared_roots = std::move(roots);
  }
  q.observe = events_from(doc, "observe");
  q.intervene = events_from(doc, "do");
  q.target = events_from(doc, "target");
  if (doc.contains("mode")) {
    const auto mode = as_string(doc["mode"], "mode");
    if (mode == "conditional") {
      q.mode = QueryMode::Conditional;
    } else if (mode == "joint") {
      q.mode = QueryMode::Joint;
    } else {
      shape_error("mode", "expected \"conditional\" or \"joint\"");
    }
  }
  return q;
}

Json query_to_json(const CounterfactualQuery& q) {
  Json j;
  j["worlds"] = q.worlds;
  if (q.shared_roots) j["shared_roots"] = *q.shared_roots;
  j["observe"] = events_to(q.observe);
  j["do"] = events_to(q.intervene);
  j["target"] = events_to(q.target);
  j["mode"] = q.mode == QueryMode::Conditional ? "conditional" : "joint";
  return j;
}

Json result_to_json(const InferenceResult& r) {
  Json j;
  j["value"] = r.value;
  j["joint"] = r.joint;
  j["evidence_probability"] = r.evidence_probability;
  j["method"] = r.method;
  return j;
}

}  // namespace twinwidth

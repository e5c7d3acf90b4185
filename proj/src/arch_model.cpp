#include "dsmopt/arch_model.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

namespace dsmopt {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string idx_path(const std::string& base, std::size_t i) {
  return base + "/" + std::to_string(i);
}

std::int32_t parse_id(const json& v, const std::string& path) {
  constexpr auto max32 = std::numeric_limits<std::int32_t>::max();
  if (v.is_number_unsigned()) {
    const auto u = v.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(max32)) throw ModelError(path, "id out of range");
    return static_cast<std::int32_t>(u);
  }
  if (v.is_number_integer()) {
    const auto s = v.get<std::int64_t>();
    if (s < 0) throw ModelError(path, "expected a non-negative integer");
    if (s > max32) throw ModelError(path, "id out of range");
    return static_cast<std::int32_t>(s);
  }
  throw ModelError(path, "expected a non-negative integer");
}

std::string parse_name(const json& v, const std::string& path) {
  if (!v.is_string()) throw ModelError(path, "expected a string");
  return v.get<std::string>();
}

void require_object(const json& v, const std::string& path) {
  if (!v.is_object()) throw ModelError(path, "expected an object");
}

void require_array(const json& v, const std::string& path) {
  if (!v.is_array()) throw ModelError(path, "expected an array");
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return it.key() == k; });
    if (!known) throw ModelError(path + "/" + it.key(), "unknown key");
  }
}

const json& require_member(const json& obj, const char* key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ModelError(path, std::string("missing required key \"") + key + "\"");
  return *it;
}

const char* kind_name(ComponentKind k) {
  return k == ComponentKind::system ? "system" : "actor";
}

const char* kind_name(ExchangeKind k) { return k == ExchangeKind::data ? "data" : "control"; }

}  // namespace

std::vector<FunctionId> ArchitectureModel::free_function_ids() const {
  std::vector<FunctionId> out;
  for (const auto& f : functions) {
    if (!f.pre_allocated_to) out.push_back(f.id);
  }
  return out;
}

std::vector<ComponentId> ArchitectureModel::system_component_ids() const {
  std::vector<ComponentId> out;
  for (const auto& c : components) {
    if (c.kind == ComponentKind::system) out.push_back(c.id);
  }
  return out;
}

void validate_model(const ArchitectureModel& model) {
  const auto n = model.functions.size();
  const auto c = model.components.size();

  for (std::size_t i = 0; i < c; ++i) {
    if (model.components[i].id != static_cast<ComponentId>(i)) {
      throw ModelError(idx_path("/components", i) + "/id",
                       "component ids must form the contiguous range 0..N-1");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& f = model.functions[i];
    if (f.id != static_cast<FunctionId>(i)) {
      throw ModelError(idx_path("/functions", i) + "/id",
                       "function ids must form the contiguous range 0..N-1");
    }
    if (f.pre_allocated_to) {
      const auto target = *f.pre_allocated_to;
      if (target < 0 || static_cast<std::size_t>(target) >= c) {
        throw ModelError(idx_path("/functions", i) + "/preAllocatedTo",
                         "function \"" + f.name + "\" references unknown component " +
                             std::to_string(target));
      }
    }
  }
  for (std::size_t i = 0; i < model.exchanges.size(); ++i) {
    const auto& e = model.exchanges[i];
    const std::string path = idx_path("/exchanges", i);
    if (e.source < 0 || static_cast<std::size_t>(e.source) >= n) {
      throw ModelError(path + "/source",
                       "references unknown function " + std::to_string(e.source));
    }
    if (e.target < 0 || static_cast<std::size_t>(e.target) >= n) {
      throw ModelError(path + "/target",
                       "references unknown function " + std::to_string(e.target));
    }
    if (e.source == e.target) {
      throw ModelError(path, "self-loop exchange on function " + std::to_string(e.source) +
                                 " (the matrix diagonal is reserved)");
    }
  }
  std::unordered_set<ExchangeId> exchange_ids;
  for (std::size_t i = 0; i < model.exchanges.size(); ++i) {
    const auto& e = model.exchanges[i];
    if (e.id < 0) throw ModelError(idx_path("/exchanges", i) + "/id", "negative exchange id");
    if (!exchange_ids.insert(e.id).second) {
      throw ModelError(idx_path("/exchanges", i) + "/id",
                       "duplicate exchange id " + std::to_string(e.id));
    }
  }

  const bool any_free = std::any_of(model.functions.begin(), model.functions.end(),
                                    [](const FunctionDef& f) { return !f.pre_allocated_to; });
  const bool any_system =
      std::any_of(model.components.begin(), model.components.end(),
                  [](const ComponentDef& comp) { return comp.kind == ComponentKind::system; });
  if (any_free && !any_system) {
    throw ModelError("/components",
                     "model has free functions but no system component to allocate them to");
  }
}

ArchitectureModel load_model(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ModelError("", std::string("parse error: ") + e.what());
  }
  require_object(doc, "");
  reject_unknown_keys(doc, {"functions", "components", "exchanges"}, "");

  ArchitectureModel model;

  const json& comps = require_member(doc, "components", "");
  require_array(comps, "/components");
  {
    const auto count = comps.size();
    std::vector<std::size_t> seen(count, std::numeric_limits<std::size_t>::max());
    for (std::size_t i = 0; i < count; ++i) {
      const std::string path = idx_path("/components", i);
      require_object(comps[i], path);
      reject_unknown_keys(comps[i], {"id", "name", "kind"}, path);
      ComponentDef comp;
      comp.id = parse_id(require_member(comps[i], "id", path), path + "/id");
      comp.name = parse_name(require_member(comps[i], "name", path), path + "/name");
      const auto kind = parse_name(require_member(comps[i], "kind", path), path + "/kind");
      if (kind == "system") {
        comp.kind = ComponentKind::system;
      } else if (kind == "actor") {
        comp.kind = ComponentKind::actor;
      } else {
        throw ModelError(path + "/kind", "expected \"system\" or \"actor\", got \"" + kind + "\"");
      }
      if (static_cast<std::size_t>(comp.id) >= count) {
        throw ModelError(path + "/id", "component ids must form the contiguous range 0..N-1 (id " +
                                           std::to_string(comp.id) + ", N = " +
                                           std::to_string(count) + ")");
      }
      if (seen[static_cast<std::size_t>(comp.id)] != std::numeric_limits<std::size_t>::max()) {
        throw ModelError(path + "/id", "duplicate component id " + std::to_string(comp.id));
      }
      seen[static_cast<std::size_t>(comp.id)] = i;
      model.components.push_back(std::move(comp));
    }
    std::sort(model.components.begin(), model.components.end(),
              [](const ComponentDef& a, const ComponentDef& b) { return a.id < b.id; });
  }

  const json& funcs = require_member(doc, "functions", "");
  require_array(funcs, "/functions");
  {
    const auto count = funcs.size();
    std::vector<std::size_t> seen(count, std::numeric_limits<std::size_t>::max());
    for (std::size_t i = 0; i < count; ++i) {
      const std::string path = idx_path("/functions", i);
      require_object(funcs[i], path);
      reject_unknown_keys(funcs[i], {"id", "name", "preAllocatedTo"}, path);
      FunctionDef fn;
      fn.id = parse_id(require_member(funcs[i], "id", path), path + "/id");
      fn.name = parse_name(require_member(funcs[i], "name", path), path + "/name");
      if (auto it = funcs[i].find("preAllocatedTo"); it != funcs[i].end()) {
        fn.pre_allocated_to = parse_id(*it, path + "/preAllocatedTo");
      }
      if (static_cast<std::size_t>(fn.id) >= count) {
        throw ModelError(path + "/id", "function ids must form the contiguous range 0..N-1 (id " +
                                           std::to_string(fn.id) + ", N = " +
                                           std::to_string(count) + ")");
      }
      if (seen[static_cast<std::size_t>(fn.id)] != std::numeric_limits<std::size_t>::max()) {
        throw ModelError(path + "/id", "duplicate function id " + std::to_string(fn.id));
      }
      seen[static_cast<std::size_t>(fn.id)] = i;
      model.functions.push_back(std::move(fn));
    }
    std::sort(model.functions.begin(), model.functions.end(),
              [](const FunctionDef& a, const FunctionDef& b) { return a.id < b.id; });
  }

  const json& exs = require_member(doc, "exchanges", "");
  require_array(exs, "/exchanges");
  for (std::size_t i = 0; i < exs.size(); ++i) {
    const std::string path = idx_path("/exchanges", i);
    require_object(exs[i], path);
    reject_unknown_keys(exs[i], {"id", "source", "target", "kind"}, path);
    FunctionalExchange ex;
    ex.id = parse_id(require_member(exs[i], "id", path), path + "/id");
    ex.source = parse_id(require_member(exs[i], "source", path), path + "/source");
    ex.target = parse_id(require_member(exs[i], "target", path), path + "/target");
    if (auto it = exs[i].find("kind"); it != exs[i].end()) {
      const auto kind = parse_name(*it, path + "/kind");
      if (kind == "data") {
        ex.kind = ExchangeKind::data;
      } else if (kind == "control") {
        ex.kind = ExchangeKind::control;
      } else {
        throw ModelError(path + "/kind", "expected \"data\" or \"control\", got \"" + kind + "\"");
      }
    }
    model.exchanges.push_back(ex);
  }

  validate_model(model);
  return model;
}

ArchitectureModel load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("", "cannot open model file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_model(buf.str());
}

std::string save_model(const ArchitectureModel& model) {
  ordered_json doc;
  doc["functions"] = ordered_json::array();
  for (const auto& f : model.functions) {
    ordered_json j;
    j["id"] = f.id;
    j["name"] = f.name;
    if (f.pre_allocated_to) j["preAllocatedTo"] = *f.pre_allocated_to;
    doc["functions"].push_back(std::move(j));
  }
  doc["components"] = ordered_json::array();
  for (const auto& c : model.components) {
    ordered_json j;
    j["id"] = c.id;
    j["name"] = c.name;
    j["kind"] = kind_name(c.kind);
    doc["components"].push_back(std::move(j));
  }
  doc["exchanges"] = ordered_json::array();
  for (const auto& e : model.exchanges) {
    ordered_json j;
    j["id"] = e.id;
    j["source"] = e.source;
    j["target"] = e.target;
    j["kind"] = kind_name(e.kind);
    doc["exchanges"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

Allocation load_allocation(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ModelError("", std::string("parse error: ") + e.what());
  }
  require_object(doc, "");
  reject_unknown_keys(doc, {"assignment"}, "");
  const json& arr = require_member(doc, "assignment", "");
  require_array(arr, "/assignment");
  Allocation alloc;
  alloc.assignment.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    alloc.assignment.push_back(parse_id(arr[i], idx_path("/assignment", i)));
  }
  return alloc;
}

Allocation load_allocation_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("", "cannot open allocation file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_allocation(buf.str());
}

std::string save_allocation(const Allocation& alloc) {
  ordered_json doc;
  doc["assignment"] = alloc.assignment;
  return doc.dump(2) + "\n";
}

std::vector<AllocationViolation> validate_allocation(const ArchitectureModel& model,
                                                     const Allocation& alloc) {
  if (alloc.assignment.size() != model.functions.size()) {
    throw std::invalid_argument("allocation length " + std::to_string(alloc.assignment.size()) +
                                " does not match function count " +
                                std::to_string(model.functions.size()));
  }
  std::vector<AllocationViolation> violations;
  for (std::size_t i = 0; i < alloc.assignment.size(); ++i) {
    const auto fid = static_cast<FunctionId>(i);
    const auto cid = alloc.assignment[i];
    const auto& fn = model.functions[i];
    if (cid < 0 || cid >= model.component_count()) {
      violations.push_back({fid, AllocationRule::component_exists,
                            "function " + std::to_string(fid) + " (\"" + fn.name +
                                "\") is assigned to unknown component " + std::to_string(cid)});
      continue;
    }
    if (fn.pre_allocated_to && *fn.pre_allocated_to != cid) {
      violations.push_back({fid, AllocationRule::locked_gene,
                            "function " + std::to_string(fid) + " (\"" + fn.name +
                                "\") is pre-allocated to component " +
                                std::to_string(*fn.pre_allocated_to) + " but assigned to " +
                                std::to_string(cid)});
    } else if (!fn.pre_allocated_to && model.is_actor(cid)) {
      violations.push_back({fid, AllocationRule::actor_target,
                            "free function " + std::to_string(fid) + " (\"" + fn.name +
                                "\") is assigned to actor component " + std::to_string(cid) +
                                " (\"" + model.components[static_cast<std::size_t>(cid)].name +
                                "\")"});
    }
  }
  return violations;
}

namespace {

std::string format_violations(const std::vector<AllocationViolation>& violations) {
  std::string msg = "invalid allocation (" + std::to_string(violations.size()) + " violation" +
                    (violations.size() == 1 ? "" : "s") + ")";
  for (const auto& v : violations) msg += "\n  - " + v.message;
  return msg;
}

}  // namespace

std::vector<ComponentExchange> derive_component_exchanges(const ArchitectureModel& model,
                                                          const Allocation& alloc) {
  auto violations = validate_allocation(model, alloc);
  if (!violations.empty()) {
    throw AllocationError(format_violations(violations), std::move(violations));
  }
  std::map<std::pair<ComponentId, ComponentId>, std::vector<ExchangeId>> by_pair;
  for (const auto& e : model.exchanges) {
    const auto src = alloc.assignment[static_cast<std::size_t>(e.source)];
    const auto dst = alloc.assignment[static_cast<std::size_t>(e.target)];
    if (src == dst) continue;  // intra-component, filtered out
    by_pair[{src, dst}].push_back(e.id);
  }
  std::vector<ComponentExchange> out;
  out.reserve(by_pair.size());
  for (auto& [pair, ids] : by_pair) {
    std::sort(ids.begin(), ids.end());
    out.push_back({pair.first, pair.second, std::move(ids)});
  }
  return out;
}

}  // namespace dsmopt

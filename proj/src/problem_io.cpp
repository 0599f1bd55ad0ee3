#include "lcot/problem_io.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "lcot/json_out.hpp"

namespace lcot {

namespace {

using nlohmann::json;

const json& field(const json& obj, const char* name, const std::string& where) {
  if (!obj.is_object()) throw parse_error(where + ": expected an object");
  auto it = obj.find(name);
  if (it == obj.end()) throw parse_error(where + ": missing field '" + name + "'");
  return *it;
}

std::string get_string(const json& obj, const char* name, const std::string& where) {
  const json& v = field(obj, name, where);
  if (!v.is_string()) throw parse_error(where + "." + name + ": expected a string");
  return v.get<std::string>();
}

std::vector<double> get_number_array(const json& v, const std::string& where) {
  if (!v.is_array()) throw parse_error(where + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (!x.is_number()) throw parse_error(where + ": expected numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

CostTensor build_cost(const json& cost_json, const GridPtr& grid, ParsedProblem& p) {
  const std::string where = "cost";
  if (!cost_json.is_object()) throw parse_error(where + ": expected an object");
  if (cost_json.contains("values")) {
    auto values = get_number_array(cost_json["values"], where + ".values");
    if (values.size() != grid->cell_count())
      throw parse_error(where + ".values: expected " + std::to_string(grid->cell_count()) +
                        " entries in row-major order, got " + std::to_string(values.size()));
    return CostTensor(grid, std::move(values));
  }
  if (!cost_json.contains("formula"))
    throw parse_error(where + ": need either 'values' or 'formula'");
  const std::string formula = get_string(cost_json, "formula", where);
  if (grid->factor_count() != 2)
    throw parse_error(where + ".formula: named formulas require exactly two marginals");
  for (std::size_t k = 0; k < 2; ++k)
    if (!grid->factor(k)->has_coordinates())
      throw parse_error(where + ".formula: space '" + grid->factor(k)->id() +
                        "' has no coordinates");
  std::vector<double> values(grid->cell_count());
  for (std::size_t flat = 0; flat < values.size(); ++flat) {
    const double x = grid->factor(0)->coordinate(grid->coordinate_of(flat, 0));
    const double y = grid->factor(1)->coordinate(grid->coordinate_of(flat, 1));
    if (formula == "abs_diff")
      values[flat] = std::abs(x - y);
    else if (formula == "sq_diff")
      values[flat] = (x - y) * (x - y);
    else if (formula == "product")
      values[flat] = x * y;
    else
      throw parse_error(where + ".formula: unknown formula '" + formula +
                        "' (expected abs_diff, sq_diff or product)");
  }
  p.cost_formula = formula;
  return CostTensor(grid, std::move(values));
}

GroupAction parse_group_elements(const json& arr, const GridPtr& grid) {
  if (!arr.is_array() || arr.empty())
    throw parse_error("constraints.elements: expected a non-empty array of elements");
  GroupAction g;
  for (std::size_t e = 0; e < arr.size(); ++e) {
    const std::string where = "constraints.elements[" + std::to_string(e) + "]";
    const json& elem = arr[e];
    if (!elem.is_array() || elem.size() != grid->factor_count())
      throw parse_error(where + ": expected one permutation per factor (" +
                        std::to_string(grid->factor_count()) + ")");
    std::vector<std::vector<std::size_t>> perms;
    for (std::size_t k = 0; k < elem.size(); ++k) {
      const json& pj = elem[k];
      if (!pj.is_array() || pj.size() != grid->factor_size(k))
        throw parse_error(where + "[" + std::to_string(k) + "]: expected " +
                          std::to_string(grid->factor_size(k)) + " point indices");
      std::vector<std::size_t> perm;
      for (const auto& v : pj) {
        if (!v.is_number_unsigned())
          throw parse_error(where + "[" + std::to_string(k) +
                            "]: expected nonnegative point indices");
        perm.push_back(v.get<std::size_t>());
      }
      perms.push_back(std::move(perm));
    }
    g.elements.push_back(std::move(perms));
  }
  // locate the identity element
  bool found = false;
  for (std::size_t e = 0; e < g.elements.size() && !found; ++e) {
    bool id = true;
    for (const auto& perm : g.elements[e])
      for (std::size_t i = 0; i < perm.size() && id; ++i)
        if (perm[i] != i) id = false;
    if (id) {
      g.identity_index = e;
      found = true;
    }
  }
  if (!found)
    throw parse_error("constraints.elements: the identity element is missing");
  return g;
}

}  // namespace

ParsedProblem parse_problem(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw parse_error(std::string("problem file: ") + e.what());
  }
  if (!doc.is_object()) throw parse_error("problem file: top level must be an object");

  std::vector<SpacePtr> spaces;
  std::map<std::string, SpacePtr> by_id;
  const json& jspaces = field(doc, "spaces", "problem file");
  if (!jspaces.is_array() || jspaces.empty())
    throw parse_error("spaces: expected a non-empty array");
  for (std::size_t s = 0; s < jspaces.size(); ++s) {
    const std::string where = "spaces[" + std::to_string(s) + "]";
    const json& js = jspaces[s];
    const std::string id = get_string(js, "id", where);
    const json& jpoints = field(js, "points", where);
    if (!jpoints.is_array() || jpoints.empty())
      throw parse_error(where + ".points: expected a non-empty array of labels");
    std::vector<std::string> labels;
    for (const auto& l : jpoints) {
      if (!l.is_string()) throw parse_error(where + ".points: expected string labels");
      labels.push_back(l.get<std::string>());
    }
    SpacePtr space;
    try {
      if (js.contains("coordinates")) {
        auto coords = get_number_array(js["coordinates"], where + ".coordinates");
        space = make_space(id, std::move(labels), std::move(coords));
      } else {
        space = make_space(id, std::move(labels));
      }
    } catch (const validation_error& e) {
      throw parse_error(where + ": " + e.what());
    }
    if (!by_id.emplace(id, space).second)
      throw parse_error(where + ": duplicate space id '" + id + "'");
    spaces.push_back(std::move(space));
  }

  const json& jmarg = field(doc, "marginals", "problem file");
  if (!jmarg.is_array() || jmarg.empty())
    throw parse_error("marginals: expected a non-empty array");
  std::vector<DiscreteMeasure> marginals;
  std::vector<SpacePtr> factors;
  for (std::size_t m = 0; m < jmarg.size(); ++m) {
    const std::string where = "marginals[" + std::to_string(m) + "]";
    const std::string sid = get_string(jmarg[m], "space", where);
    const auto it = by_id.find(sid);
    if (it == by_id.end())
      throw parse_error(where + ".space: unknown space id '" + sid + "'");
    auto weights = get_number_array(field(jmarg[m], "weights", where), where + ".weights");
    try {
      marginals.emplace_back(it->second, std::move(weights));
    } catch (const validation_error& e) {
      throw parse_error(where + ": " + e.what());
    }
    factors.push_back(it->second);
  }

  GridPtr grid = make_grid(std::move(factors));

  ParsedProblem p{"1",
                  std::move(spaces),
                  grid,
                  std::move(marginals),
                  CostTensor(grid, std::vector<double>(grid->cell_count(), 0.0)),
                  ParsedProblem::ConstraintMode::none,
                  ConstraintSet(grid),
                  std::nullopt,
                  std::nullopt};
  if (doc.contains("version")) {
    if (!doc["version"].is_string()) throw parse_error("version: expected a string");
    p.version = doc["version"].get<std::string>();
  }

  try {
    p.cost = build_cost(field(doc, "cost", "problem file"), grid, p);
  } catch (const validation_error& e) {
    throw parse_error(std::string("cost: ") + e.what());
  }

  const json& jcons = field(doc, "constraints", "problem file");
  const std::string type = get_string(jcons, "type", "constraints");
  try {
    if (type == "none") {
      p.mode = ParsedProblem::ConstraintMode::none;
    } else if (type == "explicit") {
      p.mode = ParsedProblem::ConstraintMode::explicit_set;
      const json& jgens = field(jcons, "generators", "constraints");
      if (!jgens.is_array()) throw parse_error("constraints.generators: expected an array");
      for (std::size_t j = 0; j < jgens.size(); ++j) {
        const std::string where = "constraints.generators[" + std::to_string(j) + "]";
        ConstraintGenerator gen;
        gen.name = get_string(jgens[j], "name", where);
        gen.values = get_number_array(field(jgens[j], "values", where), where + ".values");
        p.constraints.add(std::move(gen));
      }
    } else if (type == "martingale") {
      p.mode = ParsedProblem::ConstraintMode::martingale;
      p.constraints = martingale_generators(grid);
    } else if (type == "group") {
      p.mode = ParsedProblem::ConstraintMode::group;
      GroupAction g = parse_group_elements(field(jcons, "elements", "constraints"), grid);
      const GroupValidation v = validate_group(g, *grid);
      if (!v.valid) throw parse_error("constraints.elements: " + v.violation);
      p.constraints = reduce_generators(invariance_generators(g, grid));
      p.group = std::move(g);
    } else {
      throw parse_error("constraints.type: unknown type '" + type +
                        "' (expected none, explicit, martingale or group)");
    }
  } catch (const validation_error& e) {
    throw parse_error(std::string("constraints: ") + e.what());
  }
  return p;
}

std::string serialize_problem(const ParsedProblem& p) {
  JsonWriter w;
  w.begin_object();
  w.key("version").value(p.version);
  w.key("spaces").begin_array();
  for (const auto& s : p.spaces) {
    w.begin_object();
    w.key("id").value(s->id());
    w.key("points").begin_array();
    for (const auto& l : s->labels()) w.value(l);
    w.end_array();
    if (s->has_coordinates()) {
      w.key("coordinates").begin_array();
      for (double c : s->coordinates()) w.value(c);
      w.end_array();
    }
    w.end_object();
  }
  w.end_array();
  w.key("marginals").begin_array();
  for (const auto& mu : p.marginals) {
    w.begin_object();
    w.key("space").value(mu.space()->id());
    w.key("weights").begin_array();
    for (double v : mu.weights()) w.value(v);
    w.end_array();
    w.end_object();
  }
  w.end_array();
  w.key("cost").begin_object();
  if (p.cost_formula) {
    w.key("formula").value(*p.cost_formula);
  } else {
    w.key("values").begin_array();
    for (double v : p.cost.values()) w.value(v);
    w.end_array();
  }
  w.end_object();
  w.key("constraints").begin_object();
  switch (p.mode) {
    case ParsedProblem::ConstraintMode::none:
      w.key("type").value("none");
      break;
    case ParsedProblem::ConstraintMode::explicit_set:
      w.key("type").value("explicit");
      w.key("generators").begin_array();
      for (const auto& gen : p.constraints.generators()) {
        w.begin_object();
        w.key("name").value(gen.name);
        w.key("values").begin_array();
        for (double v : gen.values) w.value(v);
        w.end_array();
        w.end_object();
      }
      w.end_array();
      break;
    case ParsedProblem::ConstraintMode::martingale:
      w.key("type").value("martingale");
      break;
    case ParsedProblem::ConstraintMode::group:
      w.key("type").value("group");
      w.key("elements").begin_array();
      for (const auto& e : p.group->elements) {
        w.begin_array();
        for (const auto& perm : e) {
          w.begin_array();
          for (std::size_t v : perm) w.value(v);
          w.end_array();
        }
        w.end_array();
      }
      w.end_array();
      break;
  }
  w.end_object();
  w.end_object();
  return w.take();
}

}  // namespace lcot

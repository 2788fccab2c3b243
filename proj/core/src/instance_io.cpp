#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "coldchain/instance.hpp"
#include "json.hpp"

namespace coldchain {

namespace {

using json = nlohmann::ordered_json;

// Doses and person counts are whole numbers; keep them as JSON integers.
json number(double x) {
  if (std::isfinite(x) && std::floor(x) == x && std::abs(x) < 9e15) {
    return json(static_cast<long long>(x));
  }
  return json(x);
}

json flat_to_nested(const std::vector<double>& data,
                    const std::vector<int>& shape, std::size_t& pos,
                    std::size_t dim, bool as_int) {
  json arr = json::array();
  if (dim + 1 == shape.size()) {
    for (int i = 0; i < shape[dim]; ++i) {
      arr.push_back(as_int ? number(data[pos]) : json(data[pos]));
      ++pos;
    }
  } else {
    for (int i = 0; i < shape[dim]; ++i) {
      arr.push_back(flat_to_nested(data, shape, pos, dim + 1, as_int));
    }
  }
  return arr;
}

json nested(const std::vector<double>& data, const std::vector<int>& shape,
            bool as_int = false) {
  std::size_t expect = 1;
  for (int s : shape) expect *= static_cast<std::size_t>(s);
  if (data.size() != expect) {
    throw std::runtime_error("array size does not match dimensions");
  }
  std::size_t pos = 0;
  return flat_to_nested(data, shape, pos, 0, as_int);
}

void nested_to_flat(const json& arr, const std::vector<int>& shape,
                    std::size_t dim, std::vector<double>& out,
                    const std::string& field) {
  if (!arr.is_array() || arr.size() != static_cast<std::size_t>(shape[dim])) {
    std::ostringstream os;
    os << "field '" << field << "': expected array of length " << shape[dim]
       << " at depth " << dim;
    throw std::runtime_error(os.str());
  }
  if (dim + 1 == shape.size()) {
    for (const json& x : arr) {
      if (!x.is_number()) {
        throw std::runtime_error("field '" + field + "': non-numeric entry");
      }
      out.push_back(x.get<double>());
    }
  } else {
    for (const json& x : arr) nested_to_flat(x, shape, dim + 1, out, field);
  }
}

std::vector<double> parse_array(const json& obj, const std::string& field,
                                const std::vector<int>& shape) {
  if (!obj.contains(field)) {
    throw std::runtime_error("missing field '" + field + "'");
  }
  std::vector<double> out;
  std::size_t expect = 1;
  for (int s : shape) expect *= static_cast<std::size_t>(s);
  out.reserve(expect);
  nested_to_flat(obj.at(field), shape, 0, out, field);
  return out;
}

double parse_number(const json& obj, const std::string& field) {
  if (!obj.contains(field) || !obj.at(field).is_number()) {
    throw std::runtime_error("missing or non-numeric field '" + field + "'");
  }
  return obj.at(field).get<double>();
}

}  // namespace

std::string instance_to_json(const Instance& inst) {
  const Dimensions& d = inst.dims;
  json j;
  j["schema"] = kInstanceSchema;
  j["dimensions"] = {{"suppliers", d.suppliers}, {"dcs", d.dcs},
                     {"vcs", d.vcs},             {"vaccines", d.vaccines},
                     {"age_groups", d.age_groups}, {"periods", d.periods}};
  j["suppliers"] = json::array();
  for (const SupplierParams& s : inst.suppliers) {
    json js;
    js["name"] = s.name;
    js["lead_time"] = s.lead_time;
    js["budget"] = s.budget;
    js["max_order"] = nested(s.max_order, {d.vaccines}, true);
    js["capacity"] = number(s.capacity);
    js["price"] = nested(s.price, {d.vaccines});
    j["suppliers"].push_back(js);
  }
  json jn;
  jn["dc_capacity"] = nested(inst.network.dc_capacity, {d.dcs}, true);
  jn["var_cost_s2d"] =
      nested(inst.network.var_cost_s2d, {d.suppliers, d.dcs, d.vaccines});
  jn["fixed_cost_s2d"] =
      nested(inst.network.fixed_cost_s2d, {d.suppliers, d.dcs});
  jn["var_cost_d2v"] =
      nested(inst.network.var_cost_d2v, {d.dcs, d.vcs, d.vaccines});
  jn["fixed_cost_d2v"] = nested(inst.network.fixed_cost_d2v, {d.dcs, d.vcs});
  jn["assignment"] = inst.network.assignment;
  j["network"] = jn;
  j["vaccines"] = json::array();
  for (const VaccineParams& v : inst.vaccines) {
    j["vaccines"].push_back(
        {{"holding_cost", v.holding_cost}, {"shelf_life", v.shelf_life}});
  }
  json jd;
  jd["demand"] = nested(inst.demand.demand, {d.vcs, d.vaccines, d.periods}, true);
  jd["age_demand"] = nested(inst.demand.age_demand, {d.age_groups, d.dcs}, true);
  jd["service_floor"] = inst.demand.service_floor;
  jd["equity_tolerance"] = inst.demand.equity_tolerance;
  if (!inst.demand.service_floor_override.empty()) {
    jd["service_floor_override"] = nested(inst.demand.service_floor_override,
                                          {d.vcs, d.vaccines, d.periods});
  }
  j["demand"] = jd;
  j["weights"] = {{"theta1", inst.weights.theta1},
                  {"theta2", inst.weights.theta2},
                  {"theta3", inst.weights.theta3},
                  {"deprivation_slope", inst.weights.deprivation_slope}};
  j["seed"] = inst.seed;
  if (inst.has_robust) {
    json jr;
    jr["gamma"] = inst.robust.gamma;
    jr["deviation_fraction"] = inst.robust.deviation_fraction;
    if (!inst.robust.maxorder_deviation.empty()) {
      jr["maxorder_deviation"] =
          nested(inst.robust.maxorder_deviation, {d.suppliers, d.vaccines});
    }
    if (!inst.robust.budget_deviation.empty()) {
      jr["budget_deviation"] = nested(inst.robust.budget_deviation,
                                      {d.suppliers});
    }
    j["robust"] = jr;
  }
  return j.dump(2) + "\n";
}

Instance instance_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("instance parse error: ") + e.what());
  }
  if (!j.contains("schema") || j.at("schema") != kInstanceSchema) {
    throw std::runtime_error(
        "instance schema mismatch: expected " + std::string(kInstanceSchema));
  }
  Instance inst;
  const json& jdim = j.at("dimensions");
  inst.dims.suppliers = static_cast<int>(parse_number(jdim, "suppliers"));
  inst.dims.dcs = static_cast<int>(parse_number(jdim, "dcs"));
  inst.dims.vcs = static_cast<int>(parse_number(jdim, "vcs"));
  inst.dims.vaccines = static_cast<int>(parse_number(jdim, "vaccines"));
  inst.dims.age_groups = static_cast<int>(parse_number(jdim, "age_groups"));
  inst.dims.periods = static_cast<int>(parse_number(jdim, "periods"));
  const Dimensions& d = inst.dims;

  if (!j.contains("suppliers") || !j.at("suppliers").is_array()) {
    throw std::runtime_error("missing field 'suppliers'");
  }
  for (const json& js : j.at("suppliers")) {
    SupplierParams s;
    s.name = js.value("name", std::string("supplier"));
    s.lead_time = static_cast<int>(parse_number(js, "lead_time"));
    s.budget = parse_number(js, "budget");
    s.max_order = parse_array(js, "max_order", {d.vaccines});
    s.capacity = parse_number(js, "capacity");
    s.price = parse_array(js, "price", {d.vaccines});
    inst.suppliers.push_back(std::move(s));
  }

  const json& jn = j.at("network");
  inst.network.dc_capacity = parse_array(jn, "dc_capacity", {d.dcs});
  inst.network.var_cost_s2d =
      parse_array(jn, "var_cost_s2d", {d.suppliers, d.dcs, d.vaccines});
  inst.network.fixed_cost_s2d =
      parse_array(jn, "fixed_cost_s2d", {d.suppliers, d.dcs});
  inst.network.var_cost_d2v =
      parse_array(jn, "var_cost_d2v", {d.dcs, d.vcs, d.vaccines});
  inst.network.fixed_cost_d2v =
      parse_array(jn, "fixed_cost_d2v", {d.dcs, d.vcs});
  for (double a : parse_array(jn, "assignment", {d.vcs})) {
    inst.network.assignment.push_back(static_cast<int>(a));
  }

  for (const json& jv : j.at("vaccines")) {
    VaccineParams v;
    v.holding_cost = parse_number(jv, "holding_cost");
    v.shelf_life = static_cast<int>(parse_number(jv, "shelf_life"));
    inst.vaccines.push_back(v);
  }

  const json& jd = j.at("demand");
  inst.demand.demand = parse_array(jd, "demand", {d.vcs, d.vaccines, d.periods});
  inst.demand.age_demand = parse_array(jd, "age_demand", {d.age_groups, d.dcs});
  inst.demand.service_floor = parse_number(jd, "service_floor");
  inst.demand.equity_tolerance = parse_number(jd, "equity_tolerance");
  if (jd.contains("service_floor_override")) {
    inst.demand.service_floor_override = parse_array(
        jd, "service_floor_override", {d.vcs, d.vaccines, d.periods});
  }

  const json& jw = j.at("weights");
  inst.weights.theta1 = parse_number(jw, "theta1");
  inst.weights.theta2 = parse_number(jw, "theta2");
  inst.weights.theta3 = parse_number(jw, "theta3");
  inst.weights.deprivation_slope = parse_number(jw, "deprivation_slope");

  if (j.contains("seed")) inst.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("robust")) {
    const json& jr = j.at("robust");
    inst.has_robust = true;
    inst.robust.gamma = parse_number(jr, "gamma");
    inst.robust.deviation_fraction = parse_number(jr, "deviation_fraction");
    if (jr.contains("maxorder_deviation")) {
      inst.robust.maxorder_deviation =
          parse_array(jr, "maxorder_deviation", {d.suppliers, d.vaccines});
    }
    if (jr.contains("budget_deviation")) {
      inst.robust.budget_deviation =
          parse_array(jr, "budget_deviation", {d.suppliers});
    }
  }
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return instance_from_json(buf.str());
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write instance file: " + path);
  out << instance_to_json(inst);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace coldchain

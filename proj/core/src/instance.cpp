#include "coldchain/instance.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace coldchain {

namespace {

std::string at(const char* field, int idx) {
  std::ostringstream os;
  os << field << "[" << idx << "]";
  return os.str();
}

void check_size(std::vector<std::string>& out, const char* field,
                std::size_t actual, std::size_t expected) {
  if (actual != expected) {
    std::ostringstream os;
    os << field << " has size " << actual << ", expected " << expected;
    out.push_back(os.str());
  }
}

void check_nonneg(std::vector<std::string>& out, const char* field,
                  const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0.0)) {
      std::ostringstream os;
      os << field << "[" << i << "] = " << values[i] << " is negative";
      out.push_back(os.str());
    }
  }
}

}  // namespace

double Instance::total_demand() const {
  double s = 0.0;
  for (double x : demand.demand) s += x;
  return s;
}

double Instance::dc_total_age_demand(int j) const {
  double s = 0.0;
  for (int a = 0; a < dims.age_groups; ++a) s += age_demand(a, j);
  return s;
}

std::vector<std::vector<int>> Instance::dc_members() const {
  std::vector<std::vector<int>> members(dims.dcs);
  for (int k = 0; k < dims.vcs; ++k) {
    int j = network.assignment[k];
    if (j >= 0 && j < dims.dcs) members[j].push_back(k);
  }
  return members;
}

double deprivation_intensity(double t, double slope) {
  if (t < 0.0) {
    throw std::invalid_argument("deprivation_intensity: negative period");
  }
  return slope * t;
}

std::vector<std::string> validate_instance(const Instance& inst) {
  std::vector<std::string> v;
  const Dimensions& d = inst.dims;

  if (d.suppliers < 1) v.push_back("dimensions.suppliers < 1");
  if (d.dcs < 1) v.push_back("dimensions.dcs < 1");
  if (d.vcs < 1) v.push_back("dimensions.vcs < 1");
  if (d.vaccines < 1) v.push_back("dimensions.vaccines < 1");
  if (d.age_groups < 1) v.push_back("dimensions.age_groups < 1");
  if (d.periods < 1) v.push_back("dimensions.periods < 1");
  if (!v.empty()) return v;  // shape checks below assume sane counts

  check_size(v, "suppliers", inst.suppliers.size(), d.suppliers);
  for (int i = 0; i < static_cast<int>(inst.suppliers.size()); ++i) {
    const SupplierParams& s = inst.suppliers[i];
    if (s.lead_time < 0 || s.lead_time >= d.periods) {
      v.push_back(at("suppliers", i) + ".lead_time " +
                  std::to_string(s.lead_time) + " outside [0, periods)");
    }
    if (!(s.budget >= 0.0)) v.push_back(at("suppliers", i) + ".budget negative");
    if (!(s.capacity >= 0.0))
      v.push_back(at("suppliers", i) + ".capacity negative");
    check_size(v, "suppliers[].max_order", s.max_order.size(), d.vaccines);
    check_size(v, "suppliers[].price", s.price.size(), d.vaccines);
    for (double m : s.max_order)
      if (!(m >= 0.0)) v.push_back(at("suppliers", i) + ".max_order negative");
    for (double p : s.price)
      if (!(p >= 0.0)) v.push_back(at("suppliers", i) + ".price negative");
  }

  const NetworkParams& n = inst.network;
  check_size(v, "network.dc_capacity", n.dc_capacity.size(), d.dcs);
  check_size(v, "network.var_cost_s2d", n.var_cost_s2d.size(),
             static_cast<std::size_t>(d.suppliers) * d.dcs * d.vaccines);
  check_size(v, "network.fixed_cost_s2d", n.fixed_cost_s2d.size(),
             static_cast<std::size_t>(d.suppliers) * d.dcs);
  check_size(v, "network.var_cost_d2v", n.var_cost_d2v.size(),
             static_cast<std::size_t>(d.dcs) * d.vcs * d.vaccines);
  check_size(v, "network.fixed_cost_d2v", n.fixed_cost_d2v.size(),
             static_cast<std::size_t>(d.dcs) * d.vcs);
  check_size(v, "network.assignment", n.assignment.size(), d.vcs);
  check_nonneg(v, "network.dc_capacity", n.dc_capacity);
  check_nonneg(v, "network.var_cost_s2d", n.var_cost_s2d);
  check_nonneg(v, "network.fixed_cost_s2d", n.fixed_cost_s2d);
  check_nonneg(v, "network.var_cost_d2v", n.var_cost_d2v);
  check_nonneg(v, "network.fixed_cost_d2v", n.fixed_cost_d2v);
  for (int k = 0; k < static_cast<int>(n.assignment.size()); ++k) {
    if (n.assignment[k] < 0 || n.assignment[k] >= d.dcs) {
      v.push_back("network.assignment[" + std::to_string(k) +
                  "] does not name a distribution center");
    }
  }

  check_size(v, "vaccines", inst.vaccines.size(), d.vaccines);
  for (int i = 0; i < static_cast<int>(inst.vaccines.size()); ++i) {
    const VaccineParams& p = inst.vaccines[i];
    if (!(p.holding_cost >= 0.0))
      v.push_back(at("vaccines", i) + ".holding_cost negative");
    if (p.shelf_life < 1 || p.shelf_life > d.periods) {
      v.push_back(at("vaccines", i) + ".shelf_life " +
                  std::to_string(p.shelf_life) + " outside [1, periods]");
    }
  }

  const DemandParams& dm = inst.demand;
  check_size(v, "demand.demand", dm.demand.size(),
             static_cast<std::size_t>(d.vcs) * d.vaccines * d.periods);
  check_size(v, "demand.age_demand", dm.age_demand.size(),
             static_cast<std::size_t>(d.age_groups) * d.dcs);
  check_nonneg(v, "demand.demand", dm.demand);
  check_nonneg(v, "demand.age_demand", dm.age_demand);
  if (!(dm.service_floor >= 0.0 && dm.service_floor <= 1.0)) {
    v.push_back("demand.service_floor outside [0,1]");
  }
  if (!(dm.equity_tolerance >= 0.0 && dm.equity_tolerance <= 1.0)) {
    v.push_back("demand.equity_tolerance outside [0,1]");
  }
  if (!dm.service_floor_override.empty()) {
    check_size(v, "demand.service_floor_override",
               dm.service_floor_override.size(),
               static_cast<std::size_t>(d.vcs) * d.vaccines * d.periods);
    for (double w : dm.service_floor_override) {
      if (!(w >= 0.0 && w <= 1.0)) {
        v.push_back("demand.service_floor_override entry outside [0,1]");
        break;
      }
    }
  }
  if (dm.age_demand.size() ==
      static_cast<std::size_t>(d.age_groups) * d.dcs) {
    for (int j = 0; j < d.dcs; ++j) {
      if (!(inst.dc_total_age_demand(j) > 0.0)) {
        v.push_back("zero total age-group demand at dc " + std::to_string(j));
      }
    }
  }

  const ObjectiveWeights& w = inst.weights;
  if (!(w.theta1 >= 0.0 && w.theta2 >= 0.0 && w.theta3 >= 0.0)) {
    v.push_back("objective weights must be nonnegative");
  }
  double sum = w.theta1 + w.theta2 + w.theta3;
  if (std::abs(sum - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "weights sum " << sum << " != 1";
    v.push_back(os.str());
  }
  if (!(w.deprivation_slope >= 0.0)) v.push_back("deprivation_slope negative");

  if (inst.has_robust) {
    const RobustConfig& r = inst.robust;
    if (!(r.gamma >= 0.0)) v.push_back("robust.gamma negative");
    if (!(r.deviation_fraction >= 0.0))
      v.push_back("robust.deviation_fraction negative");
    if (!r.maxorder_deviation.empty()) {
      check_size(v, "robust.maxorder_deviation", r.maxorder_deviation.size(),
                 static_cast<std::size_t>(d.suppliers) * d.vaccines);
      check_nonneg(v, "robust.maxorder_deviation", r.maxorder_deviation);
    }
    if (!r.budget_deviation.empty()) {
      check_size(v, "robust.budget_deviation", r.budget_deviation.size(),
                 d.suppliers);
      check_nonneg(v, "robust.budget_deviation", r.budget_deviation);
    }
  }
  return v;
}

std::vector<SupplierParams> case_study_suppliers(int n_vaccines) {
  if (n_vaccines < 1) throw std::invalid_argument("n_vaccines must be >= 1");
  auto make = [n_vaccines](const char* name, double budget, double avg_order,
                           double capacity) {
    SupplierParams s;
    s.name = name;
    s.lead_time = 1;
    s.budget = budget;
    s.max_order.assign(n_vaccines, avg_order);
    s.capacity = capacity;
    s.price.assign(n_vaccines, 10.0);
    return s;
  };
  return {
      make("IRCS", 250'000'000.0, 3'180'000.0, 3'000'000.0),
      make("Private sector", 400'000'000.0, 3'350'000.0, 2'500'000.0),
      make("IMHM", 700'000'000.0, 3'350'000.0, 3'500'000.0),
  };
}

Dimensions preset_dimensions(int preset_id) {
  // {periods, dcs, vcs, vaccines}
  static constexpr int kTable[kNumPresets][4] = {
      {5, 10, 20, 2},    {5, 10, 30, 2},    {10, 10, 40, 2},
      {10, 10, 40, 3},   {15, 10, 40, 3},   {20, 20, 50, 4},
      {20, 20, 50, 5},   {25, 20, 50, 6},   {25, 20, 60, 8},
      {30, 20, 60, 10},  {35, 31, 70, 10},  {40, 31, 80, 10},
      {45, 31, 85, 10},  {50, 31, 90, 10},  {100, 31, 100, 15},
  };
  if (preset_id < 1 || preset_id > kNumPresets) {
    throw std::invalid_argument("unknown preset id " +
                                std::to_string(preset_id));
  }
  const int* row = kTable[preset_id - 1];
  Dimensions d;
  d.suppliers = 3;
  d.periods = row[0];
  d.dcs = row[1];
  d.vcs = row[2];
  d.vaccines = row[3];
  d.age_groups = 10;
  return d;
}

}  // namespace coldchain

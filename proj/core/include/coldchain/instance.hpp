#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace coldchain {

struct Dimensions {
  int suppliers = 3;
  int dcs = 1;
  int vcs = 1;
  int vaccines = 1;
  int age_groups = 10;
  int periods = 1;
};

struct SupplierParams {
  std::string name;
  int lead_time = 1;                // periods between order and availability
  double budget = 0.0;
  std::vector<double> max_order;    // per vaccine type, doses
  double capacity = 0.0;            // doses
  std::vector<double> price;        // per vaccine type, currency/dose
};

struct NetworkParams {
  std::vector<double> dc_capacity;     // [j]
  std::vector<double> var_cost_s2d;    // [i][j][v] row-major
  std::vector<double> fixed_cost_s2d;  // [i][j]
  std::vector<double> var_cost_d2v;    // [j][k][v]
  std::vector<double> fixed_cost_d2v;  // [j][k]
  std::vector<int> assignment;         // [k] -> serving dc j (partition)
};

struct VaccineParams {
  double holding_cost = 0.0;  // currency/dose/period
  int shelf_life = 1;         // max allowed holding time, periods
};

struct DemandParams {
  std::vector<double> demand;      // [k][v][t] doses
  std::vector<double> age_demand;  // [a][j] persons
  double service_floor = 0.3;      // omega
  double equity_tolerance = 0.1;   // xi
  // Optional per-(k,v,t) service floor override; empty means the scalar
  // service_floor applies uniformly.
  std::vector<double> service_floor_override;
};

struct ObjectiveWeights {
  double theta1 = 0.3;
  double theta2 = 0.1;
  double theta3 = 0.6;
  double deprivation_slope = 3.0;  // r(t) = slope * t
};

struct RobustConfig {
  double gamma = 0.0;               // shared budget of uncertainty
  double deviation_fraction = 0.1;  // default deviation as fraction of nominal
  std::vector<double> maxorder_deviation;  // [i][v], optional explicit
  std::vector<double> budget_deviation;    // [i], optional explicit
};

struct Instance {
  Dimensions dims;
  std::vector<SupplierParams> suppliers;
  NetworkParams network;
  std::vector<VaccineParams> vaccines;
  DemandParams demand;
  ObjectiveWeights weights;
  std::uint64_t seed = 0;
  bool has_robust = false;
  RobustConfig robust;

  // Flattened-array accessors, all indices 0-based.
  double d(int k, int v, int t) const {
    return demand.demand[(static_cast<std::size_t>(k) * dims.vaccines + v) *
                             dims.periods +
                         t];
  }
  double age_demand(int a, int j) const {
    return demand.age_demand[static_cast<std::size_t>(a) * dims.dcs + j];
  }
  double cost_s2d(int i, int j, int v) const {
    return network.var_cost_s2d[(static_cast<std::size_t>(i) * dims.dcs + j) *
                                    dims.vaccines +
                                v];
  }
  double fixed_s2d(int i, int j) const {
    return network.fixed_cost_s2d[static_cast<std::size_t>(i) * dims.dcs + j];
  }
  double cost_d2v(int j, int k, int v) const {
    return network.var_cost_d2v[(static_cast<std::size_t>(j) * dims.vcs + k) *
                                    dims.vaccines +
                                v];
  }
  double fixed_d2v(int j, int k) const {
    return network.fixed_cost_d2v[static_cast<std::size_t>(j) * dims.vcs + k];
  }
  double omega(int k, int v, int t) const {
    if (!demand.service_floor_override.empty()) {
      return demand
          .service_floor_override[(static_cast<std::size_t>(k) * dims.vaccines +
                                   v) *
                                      dims.periods +
                                  t];
    }
    return demand.service_floor;
  }

  double total_demand() const;
  double dc_total_age_demand(int j) const;  // divisor of the equity rows
  std::vector<std::vector<int>> dc_members() const;  // K_j partition
};

/// Returns one description per violated invariant; empty means well formed.
std::vector<std::string> validate_instance(const Instance& inst);

/// Deprivation intensity r(t) = slope * t; slope defaults to 3.
double deprivation_intensity(double t, double slope = 3.0);

/// The three case-study suppliers (IRCS, private sector, IMHM) with their
/// published budgets, average max orders and inventory capacities. Per-vaccine
/// max orders and prices are filled uniformly for n_vaccines types.
std::vector<SupplierParams> case_study_suppliers(int n_vaccines = 1);

inline constexpr int kNumPresets = 15;
Dimensions preset_dimensions(int preset_id);  // 1..15

/// Deterministic random instance for the given shape and seed. Every generated
/// instance passes validate_instance and has a feasible planning model.
Instance generate_instance(const Dimensions& dims, std::uint64_t seed);
Instance generate_instance(int preset_id, std::uint64_t seed);

inline constexpr const char* kInstanceSchema = "coldchain-instance/1";
Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& text);

}  // namespace coldchain

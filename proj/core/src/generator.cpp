#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "coldchain/instance.hpp"

namespace coldchain {

namespace {

// Thin wrapper so that draws depend only on the (standardized) mt19937_64
// stream, not on libstdc++ distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) {
    double u = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
  long uniform_int(long lo, long hi) {
    return lo + static_cast<long>(eng_() %
                                  static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace

Instance generate_instance(int preset_id, std::uint64_t seed) {
  return generate_instance(preset_dimensions(preset_id), seed);
}

Instance generate_instance(const Dimensions& dims, std::uint64_t seed) {
  if (dims.suppliers < 1 || dims.dcs < 1 || dims.vcs < 1 ||
      dims.vaccines < 1 || dims.age_groups < 1 || dims.periods < 1) {
    throw std::invalid_argument("generate_instance: all counts must be >= 1");
  }
  Rng rng(seed);
  Instance inst;
  inst.dims = dims;
  inst.seed = seed;
  const int S = dims.suppliers, J = dims.dcs, K = dims.vcs, V = dims.vaccines,
            A = dims.age_groups, T = dims.periods;

  // Suppliers start from the case-study trio, cycled if more are requested,
  // then get scaled to the instance's demand volume further down.
  std::vector<SupplierParams> base = case_study_suppliers(V);
  inst.suppliers.resize(S);
  for (int i = 0; i < S; ++i) {
    inst.suppliers[i] = base[i % base.size()];
    if (i >= 3) inst.suppliers[i].name += " #" + std::to_string(i + 1);
  }
  int min_lead = T;
  for (int i = 0; i < S; ++i) {
    int lead = static_cast<int>(rng.uniform_int(1, 2));
    lead = std::min(lead, T - 1);  // invariant: lead_time < periods
    inst.suppliers[i].lead_time = lead;
    min_lead = std::min(min_lead, lead);
    for (int v = 0; v < V; ++v) {
      inst.suppliers[i].price[v] = rng.uniform(5.0, 20.0);
    }
  }

  inst.vaccines.resize(V);
  for (int v = 0; v < V; ++v) {
    inst.vaccines[v].holding_cost = rng.uniform(0.01, 0.1);
    int lo = std::min(3, T), hi = std::min(6, T);
    inst.vaccines[v].shelf_life = static_cast<int>(rng.uniform_int(lo, hi));
  }

  // Round-robin partition of vaccination centers over distribution centers.
  inst.network.assignment.resize(K);
  for (int k = 0; k < K; ++k) inst.network.assignment[k] = k % J;

  // Demands. Periods that no supplier can reach (t <= min lead time) carry no
  // demand, otherwise the per-period service floor is unsatisfiable.
  inst.demand.demand.resize(static_cast<std::size_t>(K) * V * T);
  for (int k = 0; k < K; ++k) {
    for (int v = 0; v < V; ++v) {
      for (int t = 0; t < T; ++t) {
        double d = (t < min_lead) ? 0.0
                                  : static_cast<double>(rng.uniform_int(50, 500));
        inst.demand.demand[(static_cast<std::size_t>(k) * V + v) * T + t] = d;
      }
    }
  }
  inst.demand.service_floor = 0.3;
  inst.demand.equity_tolerance = 0.1;

  // Age-group demand per dc sums to that dc's total vaccine demand.
  inst.demand.age_demand.resize(static_cast<std::size_t>(A) * J);
  auto members = inst.dc_members();
  for (int j = 0; j < J; ++j) {
    double dj = 0.0;
    for (int k : members[j]) {
      for (int v = 0; v < V; ++v) {
        for (int t = 0; t < T; ++t) {
          dj += inst.demand.demand[(static_cast<std::size_t>(k) * V + v) * T + t];
        }
      }
    }
    std::vector<double> w(A);
    double wsum = 0.0;
    for (int a = 0; a < A; ++a) wsum += (w[a] = rng.uniform(0.5, 1.5));
    double assigned = 0.0;
    for (int a = 0; a < A; ++a) {
      double share = (a + 1 == A) ? std::max(1.0, dj - assigned)
                                  : std::max(1.0, std::floor(dj * w[a] / wsum));
      inst.demand.age_demand[static_cast<std::size_t>(a) * J + j] = share;
      assigned += share;
    }
  }

  // Transport and storage costs. Fixed charges are sized below the typical
  // per-period variable cost of an open arc, keeping the LP relaxation
  // informative enough for desk-scale branch and bound.
  inst.network.var_cost_s2d.resize(static_cast<std::size_t>(S) * J * V);
  inst.network.fixed_cost_s2d.resize(static_cast<std::size_t>(S) * J);
  for (int i = 0; i < S; ++i) {
    for (int j = 0; j < J; ++j) {
      inst.network.fixed_cost_s2d[static_cast<std::size_t>(i) * J + j] =
          rng.uniform(20.0, 80.0);
      for (int v = 0; v < V; ++v) {
        inst.network.var_cost_s2d[(static_cast<std::size_t>(i) * J + j) * V + v] =
            rng.uniform(0.1, 1.0);
      }
    }
  }
  inst.network.var_cost_d2v.resize(static_cast<std::size_t>(J) * K * V);
  inst.network.fixed_cost_d2v.resize(static_cast<std::size_t>(J) * K);
  for (int j = 0; j < J; ++j) {
    for (int k = 0; k < K; ++k) {
      inst.network.fixed_cost_d2v[static_cast<std::size_t>(j) * K + k] =
          rng.uniform(5.0, 25.0);
      for (int v = 0; v < V; ++v) {
        inst.network.var_cost_d2v[(static_cast<std::size_t>(j) * K + k) * V + v] =
            rng.uniform(0.1, 1.0);
      }
    }
  }
  inst.network.dc_capacity.resize(J);
  for (int j = 0; j < J; ++j) {
    double dj = 0.0;
    for (int k : members[j]) {
      for (int v = 0; v < V; ++v) {
        for (int t = 0; t < T; ++t) {
          dj += inst.demand.demand[(static_cast<std::size_t>(k) * V + v) * T + t];
        }
      }
    }
    inst.network.dc_capacity[j] = std::max(1.0, dj);
  }

  // Scale the case-study supplier figures to the instance volume: capacities
  // and max orders to 1.5x total demand, budgets to 1.35x the cost of buying
  // the whole demand at the mean price. Budgets then bind only under the
  // deeper cuts of the sensitivity sweeps.
  double total_d = inst.total_demand();
  double cap_sum = 0.0, bud_sum = 0.0, price_sum = 0.0;
  for (const SupplierParams& s : inst.suppliers) {
    cap_sum += s.capacity;
    bud_sum += s.budget;
    for (double p : s.price) price_sum += p;
  }
  double mean_price = price_sum / (static_cast<double>(S) * V);
  double dose_scale = cap_sum > 0.0 ? 1.5 * total_d / cap_sum : 1.0;
  double money_scale =
      bud_sum > 0.0 ? 1.35 * total_d * mean_price / bud_sum : 1.0;
  for (SupplierParams& s : inst.suppliers) {
    s.capacity *= dose_scale;
    for (double& m : s.max_order) m *= dose_scale;
    s.budget *= money_scale;
  }

  inst.weights = ObjectiveWeights{};
  return inst;
}

}  // namespace coldchain

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "gpcbo/gp.hpp"
#include "gpcbo/mesh.hpp"

namespace gpcbo {

enum class NormKind { L2, L2H1 };

struct CboParams {
  int num_agents = 100;   // N
  double alpha = 1e5;     // Gibbs exponent
  double lambda = 1.0;    // drift rate
  double tau = 0.1;       // time step
  double horizon = 200.0; // T; the run executes J = int(T / tau) iterations
  std::uint64_t seed = 1;
  NormKind norm = NormKind::L2;

  /// N >= 2, positive alpha/lambda/tau, horizon >= 0 and lambda * tau <= 1
  /// (the drift must not overshoot the consensus).
  void validate() const;
  int iterations() const;
};

struct Ensemble {
  std::vector<Eigen::VectorXd> agents;
  Eigen::VectorXd costs;
  int iteration = 0;
};

struct HistoryRecord {
  int iteration = 0;
  double best_cost = 0.0;
  double consensus_cost = 0.0;
  double spread = 0.0;
  double err_l2 = 0.0;    // NaN when the run has no exact reference
  double err_linf = 0.0;  // NaN when the run has no exact reference
  double seconds = 0.0;   // wall clock since run start; not reproducible
};
using History = std::vector<HistoryRecord>;

using CostFn = std::function<double(const Eigen::VectorXd&)>;

/// Gibbs-weighted ensemble average with shift-invariant weights
/// w_i = exp(-alpha (f_i - min_k f_k)). Throws on NaN costs (naming the
/// agent) and when every cost is +infinity.
Eigen::VectorXd consensus(const Ensemble& ensemble, double alpha);

/// Discrete L2 norm sqrt(sum_p w_p d_p^2) using the mesh quadrature weights.
/// Accepts stacked vectors whose length is a multiple of the node count
/// (each block is one component). NormKind::L2H1 adds the H1 seminorm of a
/// first-difference derivative and is available on 1D meshes only.
double ensemble_norm(const Eigen::VectorXd& diff, const Mesh& mesh,
                     NormKind norm = NormKind::L2);

/// One consensus step applied in place:
///   U_i <- U_i - lambda tau (U_i - v) + sqrt(2 tau) |U_i - v| xi_i
/// with |.| the ensemble norm and xi_i = noise[i]. Costs are recomputed via
/// f. Returns the indices of agents whose updated state or cost is
/// non-finite; the caller decides how to recover them.
std::vector<int> step(Ensemble& ensemble, const Eigen::VectorXd& v,
                      const CboParams& params,
                      const std::vector<Eigen::VectorXd>& noise,
                      const Mesh& mesh, const CostFn& f, int threads = 1);

struct RunOptions {
  /// Independent scalar components per agent (vector-valued controls).
  int components = 1;
  /// Extra trailing evaluation slots per component carried through the
  /// dynamics with zero quadrature weight (off-mesh constraint points).
  int probe_slots = 0;
  int threads = 1;
  /// Exact solution on the mesh nodes; enables the history error columns.
  std::optional<Eigen::VectorXd> exact;
  /// Called once per recorded iteration with the current ensemble and
  /// consensus point.
  std::function<void(const Ensemble&, const Eigen::VectorXd&)> observer;
};

struct CboResult {
  Eigen::VectorXd consensus;
  Ensemble ensemble;
  History history;
};

/// Full consensus-based optimization loop: agents start as draws from the
/// constrained measure gp_c, per-iteration noise comes from the homogeneous
/// measure gp_0, and agents that go non-finite are redrawn from gp_c.
/// Per-agent randomness is keyed by (seed, purpose, iteration, agent), so
/// results are bit-identical for any thread count.
CboResult run(const CostFn& f, const GaussianMeasure& gp_c,
              const GaussianMeasure& gp_0, const CboParams& params,
              const Mesh& mesh, const RunOptions& options = {});

}  // namespace gpcbo

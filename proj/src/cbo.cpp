#include "gpcbo/cbo.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace gpcbo {
namespace {

constexpr std::uint64_t kPurposeInit = 0;
constexpr std::uint64_t kPurposeNoise = 1;
constexpr std::uint64_t kPurposeResample = 2;
constexpr int kMaxResampleDraws = 64;

// Static block partition over [0, n); deterministic because each index owns
// its output slot and all reductions happen on the calling thread.
void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  const int workers = std::min(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::mutex mu;
  std::exception_ptr first_error;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      const int lo = static_cast<int>(static_cast<long long>(n) * w / workers);
      const int hi =
          static_cast<int>(static_cast<long long>(n) * (w + 1) / workers);
      try {
        for (int i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

double weighted_l2(const Eigen::VectorXd& diff,
                   const Eigen::VectorXd& block_weights) {
  const Eigen::Index block = block_weights.size();
  double sum = 0.0;
  for (Eigen::Index c = 0; c * block < diff.size(); ++c)
    sum += (diff.segment(c * block, block).array().square() *
            block_weights.array())
               .sum();
  return std::sqrt(sum);
}

// H1 seminorm addition: central first differences inside, one-sided at the
// endpoints. 1D meshes only.
double h1_seminorm_sq(const Eigen::VectorXd& d, const Mesh& mesh) {
  const Eigen::Index p = mesh.num_points();
  const double h = mesh.spacing_x();
  Eigen::VectorXd dd(p);
  dd[0] = (d[1] - d[0]) / h;
  dd[p - 1] = (d[p - 1] - d[p - 2]) / h;
  for (Eigen::Index i = 1; i + 1 < p; ++i) dd[i] = (d[i + 1] - d[i - 1]) / (2.0 * h);
  return (dd.array().square() * mesh.quad_weights().array()).sum();
}

struct NormContext {
  Eigen::VectorXd block_weights;  // quadrature weights, zero on probe slots
  const Mesh* mesh = nullptr;
  NormKind kind = NormKind::L2;
  int probe_slots = 0;

  double operator()(const Eigen::VectorXd& diff) const {
    double base = weighted_l2(diff, block_weights);
    if (kind == NormKind::L2) return base;
    const Eigen::Index block = block_weights.size();
    double sum = base * base;
    for (Eigen::Index c = 0; c * block < diff.size(); ++c)
      sum += h1_seminorm_sq(diff.segment(c * block, mesh->num_points()), *mesh);
    return std::sqrt(sum);
  }
};

std::vector<int> step_impl(Ensemble& ensemble, const Eigen::VectorXd& v,
                           const CboParams& params,
                           const std::vector<Eigen::VectorXd>& noise,
                           const NormContext& norm, const CostFn& f,
                           int threads) {
  const int n = static_cast<int>(ensemble.agents.size());
  if (static_cast<int>(noise.size()) != n)
    throw std::invalid_argument("cbo: need one noise draw per agent");
  const double drift = params.lambda * params.tau;
  const double diffusion = std::sqrt(2.0 * params.tau);

  parallel_for(n, threads, [&](int i) {
    Eigen::VectorXd& u = ensemble.agents[i];
    const Eigen::VectorXd diff = u - v;
    const double amp = diffusion * norm(diff);
    if (drift == 1.0) {
      // exact collapse branch; algebraically the same update
      u = v + amp * noise[i];
    } else {
      u = u - drift * diff + amp * noise[i];
    }
    ensemble.costs[i] = f(u);
  });
  ensemble.iteration += 1;

  std::vector<int> flagged;
  for (int i = 0; i < n; ++i)
    if (!std::isfinite(ensemble.costs[i]) || !ensemble.agents[i].allFinite())
      flagged.push_back(i);
  return flagged;
}

double spread(const Ensemble& ensemble, const NormContext& norm) {
  double best = 0.0;
  for (std::size_t i = 0; i < ensemble.agents.size(); ++i)
    for (std::size_t k = i + 1; k < ensemble.agents.size(); ++k)
      best = std::max(best,
                      norm(ensemble.agents[i] - ensemble.agents[k]));
  return best;
}

}  // namespace

void CboParams::validate() const {
  if (num_agents < 2)
    throw std::invalid_argument("cbo: need at least 2 agents, got " +
                                std::to_string(num_agents));
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("cbo: alpha must be positive");
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("cbo: lambda must be positive");
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw std::invalid_argument("cbo: tau must be positive");
  if (!(horizon >= 0.0) || !std::isfinite(horizon))
    throw std::invalid_argument("cbo: horizon must be >= 0");
  if (lambda * tau > 1.0)
    throw std::invalid_argument("cbo: lambda * tau must be <= 1, got " +
                                std::to_string(lambda * tau));
}

int CboParams::iterations() const {
  const double q = horizon / tau;
  // int(T / tau) up to roundoff in the division
  return static_cast<int>(std::floor(q + 4e-12 * q + 1e-12));
}

Eigen::VectorXd consensus(const Ensemble& ensemble, double alpha) {
  if (ensemble.agents.empty())
    throw std::invalid_argument("cbo: consensus of an empty ensemble");
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("cbo: alpha must be positive");
  if (ensemble.costs.size() != static_cast<Eigen::Index>(ensemble.agents.size()))
    throw std::invalid_argument("cbo: ensemble costs out of sync with agents");

  double min_cost = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < ensemble.costs.size(); ++i) {
    if (std::isnan(ensemble.costs[i]))
      throw std::runtime_error("cbo: agent " + std::to_string(i) +
                               " has NaN cost");
    min_cost = std::min(min_cost, ensemble.costs[i]);
  }
  if (!std::isfinite(min_cost))
    throw std::runtime_error("cbo: every agent cost is infinite");

  Eigen::VectorXd v = Eigen::VectorXd::Zero(ensemble.agents.front().size());
  double total = 0.0;
  for (std::size_t i = 0; i < ensemble.agents.size(); ++i) {
    const double w = std::exp(-alpha * (ensemble.costs[i] - min_cost));
    v += w * ensemble.agents[i];
    total += w;
  }
  return v / total;
}

double ensemble_norm(const Eigen::VectorXd& diff, const Mesh& mesh,
                     NormKind norm) {
  const Eigen::Index p = mesh.num_points();
  if (diff.size() == 0 || diff.size() % p != 0)
    throw std::invalid_argument(
        "cbo: vector length " + std::to_string(diff.size()) +
        " is not a multiple of the node count " + std::to_string(p));
  if (norm == NormKind::L2H1 && mesh.dim() != 1)
    throw std::invalid_argument("cbo: the H1 add-on norm is 1D only");
  NormContext ctx{mesh.quad_weights(), &mesh, norm, 0};
  return ctx(diff);
}

std::vector<int> step(Ensemble& ensemble, const Eigen::VectorXd& v,
                      const CboParams& params,
                      const std::vector<Eigen::VectorXd>& noise,
                      const Mesh& mesh, const CostFn& f, int threads) {
  params.validate();
  if (ensemble.agents.empty())
    throw std::invalid_argument("cbo: step on an empty ensemble");
  if (ensemble.agents.front().size() % mesh.num_points() != 0)
    throw std::invalid_argument("cbo: agent length does not tile the mesh");
  if (params.norm == NormKind::L2H1 && mesh.dim() != 1)
    throw std::invalid_argument("cbo: the H1 add-on norm is 1D only");
  NormContext ctx{mesh.quad_weights(), &mesh, params.norm, 0};
  return step_impl(ensemble, v, params, noise, ctx, f, threads);
}

CboResult run(const CostFn& f, const GaussianMeasure& gp_c,
              const GaussianMeasure& gp_0, const CboParams& params,
              const Mesh& mesh, const RunOptions& options) {
  params.validate();
  const Eigen::Index p = mesh.num_points();
  const int ncomp = options.components;
  const int probes = options.probe_slots;
  if (ncomp < 1) throw std::invalid_argument("cbo: components must be >= 1");
  if (probes < 0) throw std::invalid_argument("cbo: negative probe count");
  const Eigen::Index block = p + probes;
  if (gp_c.dim() != block || gp_0.dim() != block)
    throw std::invalid_argument(
        "cbo: measures are defined on " + std::to_string(gp_c.dim()) +
        " points, expected " + std::to_string(block));
  if (options.exact && options.exact->size() != p)
    throw std::invalid_argument("cbo: exact reference must live on the mesh");
  if (params.norm == NormKind::L2H1 && (mesh.dim() != 1 || probes != 0))
    throw std::invalid_argument(
        "cbo: the H1 add-on norm needs a 1D mesh and no probe slots");
  const int threads = std::max(1, options.threads);

  NormContext norm;
  norm.block_weights = Eigen::VectorXd::Zero(block);
  norm.block_weights.head(p) = mesh.quad_weights();
  norm.mesh = &mesh;
  norm.kind = params.norm;
  norm.probe_slots = probes;

  const int n = params.num_agents;
  const int total_iters = params.iterations();
  const auto t0 = std::chrono::steady_clock::now();

  Ensemble ensemble;
  ensemble.agents.resize(n);
  ensemble.costs.resize(n);
  ensemble.iteration = 0;

  auto resample = [&](int i, std::uint64_t iteration) {
    NormalStream rs =
        NormalStream::keyed(params.seed, kPurposeResample, iteration, i);
    for (int attempt = 0; attempt < kMaxResampleDraws; ++attempt) {
      Eigen::VectorXd u = sample_stacked(gp_c, rs, ncomp);
      const double c = f(u);
      if (std::isfinite(c) && u.allFinite()) {
        ensemble.agents[i] = std::move(u);
        ensemble.costs[i] = c;
        return;
      }
    }
    throw std::runtime_error("cbo: agent " + std::to_string(i) +
                             " still non-finite after " +
                             std::to_string(kMaxResampleDraws) + " redraws");
  };

  parallel_for(n, threads, [&](int i) {
    NormalStream init = NormalStream::keyed(params.seed, kPurposeInit, 0, i);
    ensemble.agents[i] = sample_stacked(gp_c, init, ncomp);
    ensemble.costs[i] = f(ensemble.agents[i]);
  });
  for (int i = 0; i < n; ++i)
    if (!std::isfinite(ensemble.costs[i]) || !ensemble.agents[i].allFinite())
      resample(i, 0);

  History history;
  history.reserve(total_iters + 1);
  std::vector<Eigen::VectorXd> noise(n);
  Eigen::VectorXd v;

  for (int j = 0;; ++j) {
    v = consensus(ensemble, params.alpha);

    HistoryRecord rec;
    rec.iteration = j;
    rec.best_cost = ensemble.costs.minCoeff();
    rec.consensus_cost = f(v);
    rec.spread = spread(ensemble, norm);
    if (options.exact) {
      const Eigen::VectorXd err = v.head(p) - *options.exact;
      rec.err_l2 = weighted_l2(err, mesh.quad_weights());
      rec.err_linf = err.cwiseAbs().maxCoeff();
    } else {
      rec.err_l2 = std::numeric_limits<double>::quiet_NaN();
      rec.err_linf = std::numeric_limits<double>::quiet_NaN();
    }
    rec.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    history.push_back(rec);
    if (options.observer) options.observer(ensemble, v);
    if (j == total_iters) break;

    parallel_for(n, threads, [&](int i) {
      NormalStream ns =
          NormalStream::keyed(params.seed, kPurposeNoise, j + 1, i);
      noise[i] = sample_stacked(gp_0, ns, ncomp);
    });
    const std::vector<int> flagged =
        step_impl(ensemble, v, params, noise, norm, f, threads);
    for (int i : flagged) resample(i, j + 1);
  }

  return CboResult{std::move(v), std::move(ensemble), std::move(history)};
}

}  // namespace gpcbo

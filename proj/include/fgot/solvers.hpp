#pragma once

#include "fgot/distance.hpp"
#include "fgot/filters.hpp"
#include "fgot/transport.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace fgot {

enum class SolverKind { Mgd, Smgd };

/// Map from G1 vertices to G2 vertices produced by rounding a coupling.
/// Square couplings round to a bijection (maximum-weight matching);
/// rectangular ones to a row-argmax many-to-one map.
struct HardAssignment {
    std::vector<int> map;
    bool one_to_one = false;
    bool degenerate = false;  // all-equal coupling; lowest-index tie-break used

    Index size() const { return static_cast<Index>(map.size()); }
    Mat matrix(Index cols) const;
    Permutation permutation() const;  // requires one_to_one
};

HardAssignment round_to_hard(const Coupling& c);

struct Hyperparams {
    double epsilon = 0.0;
    double alpha = 0.0;
};

/// Scales step size and entropic weight by the filter magnitudes:
///   epsilon = c1 * max1 * max2 / sqrt(n m),  alpha = c2 * n m / (max1 * max2)
/// with max1, max2 the largest entries of g(L1), g(L2).
Hyperparams default_hyperparams(const FilteredGraph& f1, const FilteredGraph& f2,
                                double c1, double c2);

struct MgdConfig {
    std::optional<double> alpha;    // step size; derived via c2 when unset
    std::optional<double> epsilon;  // entropic weight; derived via c1 when unset
    double c1 = 6e-3;
    double c2 = 1.0;
    int max_iters = 1000;
    double tol = 1e-7;          // relative cost-decrease tolerance
    int patience = 10;          // consecutive below-tol changes before a restart
    double init_jitter = 0.05;  // log-scale noise on the uniform start; the
                                // uniform coupling is a stationary point for
                                // filters that annihilate the constant vector
    bool restart = true;        // on stall, rejitter and continue to max_iters
    SinkhornConfig sinkhorn{};
    std::uint64_t seed = 0;
};

struct StochasticConfig {
    int samples = 5;
    std::optional<double> alpha;  // derived via c2 when unset
    double c2 = 50.0;
    int max_iters = 500;
    double sigma0 = 1.0;
    std::optional<double> eta0;   // mean initializer; uniform-coupling scale when unset
    double tol = 1e-7;
    int patience = 50;            // iterations without best-cost improvement
    bool restart = true;          // on stall, redraw (eta, sigma) and continue
    bool adaptive = false;        // moving second-moment rescaling of both gradients
    SinkhornConfig sinkhorn{};
    std::uint64_t seed = 0;
};

struct SolverResult {
    Coupling coupling;
    HardAssignment hard;
    std::vector<double> cost_trace;  // rescaled surrogate, one entry per iteration
    double final_cost = 0.0;
    int iterations = 0;
};

/// Entropically regularized mirror gradient descent on the coupling polytope:
///   P_{t+1} = KL-project(P_t (.) exp(-alpha q_t)),
///   q_t = grad surrogate(P_t) + epsilon (log P_t + 1).
/// Runs in the log domain from a jittered uniform start; a stalled run
/// rejitters and continues until the iteration budget is spent. Returns the
/// best-cost iterate seen.
SolverResult mgd_solve(const FilteredGraph& f1, const FilteredGraph& f2,
                       const MgdConfig& cfg);

/// Stochastic mirror descent over a diagonal Gaussian N(eta, diag(sigma^2))
/// parametrizing log-couplings: samples exp(eta + sigma (.) noise) pass
/// through the KL projection, pathwise gradients are averaged over the
/// samples, and (eta, sigma) follow the closed-form mirror updates. Stalls
/// redraw the search distribution; the best-cost configuration over all
/// means and samples is reprojected at high accuracy and returned.
SolverResult stochastic_mgd_solve(const FilteredGraph& f1, const FilteredGraph& f2,
                                  const StochasticConfig& cfg);

namespace detail {

/// sqrt(sigma^2 + d^2) - d, entrywise, floored at 1e-10.
Mat sigma_update(const Mat& sigma, const Mat& d);

/// Minimum-cost perfect assignment on a square cost matrix (O(n^3) potentials
/// method). Returns row -> column.
std::vector<int> solve_assignment(const Mat& cost);

} // namespace detail

} // namespace fgot

#pragma once

#include "fgot/types.hpp"

#include <utility>
#include <vector>

namespace fgot {

/// Soft assignment between two vertex sets: nonnegative |V1| x |V2| matrix
/// whose rows each sum to 1/|V1| and columns to 1/|V2| once projected.
struct Coupling {
    Mat matrix;

    Index rows() const { return matrix.rows(); }
    Index cols() const { return matrix.cols(); }
    double row_target() const { return 1.0 / static_cast<double>(rows()); }
    double col_target() const { return 1.0 / static_cast<double>(cols()); }

    static Coupling uniform(Index n, Index m);
};

/// Largest absolute deviation of a row or column sum from the 1/n, 1/m targets.
double marginal_violation(const Mat& p);

struct SinkhornConfig {
    double tau = 1.0;     // temperature for cost -> kernel conversion
    int max_iters = 50;   // alternating row/column sweeps
    double tol = 1e-9;    // stop once marginal violation falls below this
};

namespace detail {

/// Entries pass through max(p, kCouplingFloor) before any log.
inline constexpr double kCouplingFloor = 1e-30;

/// Log-domain couplings recorded after every executed normalization
/// half-step; states[0] is the initial log-kernel. Replaying the tape in
/// reverse yields the exact pullback of the forward pass.
struct SinkhornTape {
    std::vector<Mat> states;

    Mat pullback(const Mat& upstream) const;
};

Mat sinkhorn_log(Mat log_kernel, const SinkhornConfig& cfg, SinkhornTape* tape);

} // namespace detail

/// Alternating row/column normalization of K = exp(-cost/tau), run entirely
/// in the log domain, onto the 1/n, 1/m marginals.
Coupling sinkhorn(const Mat& cost, const SinkhornConfig& cfg);

/// KL projection onto the coupling polytope: S_tau(-tau log P). Entries are
/// floored at 1e-30 before the log; the projection is idempotent and
/// invariant to positive rescaling of the input.
Coupling kl_project(const Mat& p, const SinkhornConfig& cfg);

/// Forward KL projection plus the reverse-mode pullback of `upstream`
/// (= d cost / d projected matrix) through the executed normalization steps.
/// The projected value is bit-identical to kl_project on the same input.
std::pair<Coupling, Mat> project_and_grad(const Mat& p, const Mat& upstream,
                                          const SinkhornConfig& cfg);

} // namespace fgot

#include "fgot/transport.hpp"

#include <cmath>
#include <utility>

namespace fgot {

namespace {

constexpr double kLogFloor = detail::kCouplingFloor;

Vec logsumexp_rows(const Mat& x) {
    Vec m = x.rowwise().maxCoeff();
    Vec s = (x.colwise() - m).array().exp().rowwise().sum();
    return m.array() + s.array().log();
}

Vec logsumexp_cols(const Mat& x) {
    Vec m = x.colwise().maxCoeff();
    Vec s = (x.rowwise() - m.transpose()).array().exp().colwise().sum();
    return m.array() + s.array().log();
}

} // namespace

Coupling Coupling::uniform(Index n, Index m) {
    if (n < 1 || m < 1) throw ValidationError("coupling dimensions must be >= 1");
    return Coupling{Mat::Constant(n, m, 1.0 / static_cast<double>(n * m))};
}

double marginal_violation(const Mat& p) {
    const double r = 1.0 / static_cast<double>(p.rows());
    const double c = 1.0 / static_cast<double>(p.cols());
    const double row_dev = (p.rowwise().sum().array() - r).abs().maxCoeff();
    const double col_dev = (p.colwise().sum().array() - c).abs().maxCoeff();
    return std::max(row_dev, col_dev);
}

namespace detail {

Mat sinkhorn_log(Mat log_kernel, const SinkhornConfig& cfg, SinkhornTape* tape) {
    const Index n = log_kernel.rows();
    const Index m = log_kernel.cols();
    const double log_r = -std::log(static_cast<double>(n));
    const double log_c = -std::log(static_cast<double>(m));

    Mat x = std::move(log_kernel);
    if (tape) {
        tape->states.clear();
        tape->states.push_back(x);
    }
    for (int it = 0; it < cfg.max_iters; ++it) {
        x.colwise() -= (logsumexp_rows(x).array() - log_r).matrix().eval();
        if (tape) tape->states.push_back(x);
        x.rowwise() -= (logsumexp_cols(x).array() - log_c).transpose().matrix().eval();
        if (tape) tape->states.push_back(x);
        if (marginal_violation(x.array().exp()) < cfg.tol) break;
    }
    return x.array().exp();
}

Mat SinkhornTape::pullback(const Mat& upstream) const {
    // states alternate: [log-kernel, after row step, after col step, ...].
    const Mat& final_state = states.back();
    const double r = 1.0 / static_cast<double>(final_state.rows());
    const double c = 1.0 / static_cast<double>(final_state.cols());

    Mat g = upstream.cwiseProduct(final_state.array().exp().matrix());
    for (std::size_t k = states.size() - 1; k >= 1; --k) {
        const Mat p_out = states[k].array().exp();
        const bool row_step = (k % 2 == 1);
        if (row_step) {
            Vec row_sums = g.rowwise().sum();
            g -= ((p_out / r).array().colwise() * row_sums.array()).matrix();
        } else {
            Vec col_sums = g.colwise().sum();
            g -= ((p_out / c).array().rowwise() * col_sums.transpose().array()).matrix();
        }
    }
    return g;
}

} // namespace detail

Coupling sinkhorn(const Mat& cost, const SinkhornConfig& cfg) {
    if (!cost.allFinite()) throw ValidationError("sinkhorn requires a finite cost matrix");
    if (!(cfg.tau > 0.0)) throw ValidationError("sinkhorn requires tau > 0");
    Mat p = detail::sinkhorn_log(-cost / cfg.tau, cfg, nullptr);
    if (!p.allFinite()) throw NumericError("sinkhorn produced non-finite coupling");
    return Coupling{std::move(p)};
}

Coupling kl_project(const Mat& p, const SinkhornConfig& cfg) {
    if (p.rows() < 1 || p.cols() < 1) throw ValidationError("empty matrix in kl_project");
    if (p.maxCoeff() <= 0.0) throw ValidationError("kl_project requires some positive entry");
    Mat out = detail::sinkhorn_log(p.cwiseMax(kLogFloor).array().log(), cfg, nullptr);
    if (!out.allFinite()) throw NumericError("kl_project produced non-finite coupling");
    return Coupling{std::move(out)};
}

std::pair<Coupling, Mat> project_and_grad(const Mat& p, const Mat& upstream,
                                          const SinkhornConfig& cfg) {
    if (p.rows() < 1 || p.cols() < 1) throw ValidationError("empty matrix in project_and_grad");
    if (p.maxCoeff() <= 0.0) throw ValidationError("project_and_grad requires some positive entry");
    if (upstream.rows() != p.rows() || upstream.cols() != p.cols()) {
        throw ValidationError("upstream gradient shape does not match input");
    }
    detail::SinkhornTape tape;
    Mat out = detail::sinkhorn_log(p.cwiseMax(kLogFloor).array().log(), cfg, &tape);
    if (!out.allFinite()) throw NumericError("project_and_grad produced non-finite coupling");
    Mat g = tape.pullback(upstream);
    // d log(max(p, floor)) / dp is 1/p above the floor and 0 below it.
    Mat grad = (p.array() > kLogFloor).select(g.array() / p.array(), 0.0);
    return {Coupling{std::move(out)}, std::move(grad)};
}

} // namespace fgot

#include "fgot/solvers.hpp"

#include "fgot/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <utility>

namespace fgot {

namespace {

constexpr double kFloor = detail::kCouplingFloor;
constexpr double kSigmaFloor = 1e-10;

Mat standard_normal(Index n, Index m, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Mat out(n, m);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < m; ++j) out(i, j) = normal(rng);
    }
    return out;
}

SinkhornConfig final_projection_config(const SinkhornConfig& in_loop) {
    SinkhornConfig cfg = in_loop;
    cfg.max_iters = std::max(cfg.max_iters, 500);
    return cfg;
}

struct BestTracker {
    double cost = std::numeric_limits<double>::infinity();
    Mat state;

    void update(double c, const Mat& s) {
        if (c < cost) {
            cost = c;
            state = s;
        }
    }
};

// Significant-improvement test for stall detection.
bool improves(double cost, double reference, double tol) {
    return cost < reference - tol * std::max(std::abs(reference), 1e-12);
}

void check_finite_cost(double cost, const char* solver, int iteration) {
    if (!std::isfinite(cost)) {
        std::ostringstream os;
        os << solver << " produced non-finite cost at iteration " << iteration
           << "; the step size is likely too large for this instance";
        throw NumericError(os.str());
    }
}

} // namespace

Mat HardAssignment::matrix(Index cols) const {
    Mat p = Mat::Zero(size(), cols);
    for (Index i = 0; i < size(); ++i) {
        const int j = map[static_cast<std::size_t>(i)];
        if (j < 0 || j >= cols) throw ValidationError("assignment target out of range");
        p(i, j) = 1.0;
    }
    return p;
}

Permutation HardAssignment::permutation() const {
    if (!one_to_one) throw ValidationError("assignment is not one-to-one");
    return Permutation(map);
}

HardAssignment round_to_hard(const Coupling& c) {
    const Index n = c.rows();
    const Index m = c.cols();
    if (n < 1 || m < 1) throw ValidationError("empty coupling");

    const double lo = c.matrix.minCoeff();
    const double hi = c.matrix.maxCoeff();
    const bool all_equal = (hi - lo) <= 1e-12 * std::max(std::abs(hi), 1.0);

    HardAssignment hard;
    hard.degenerate = all_equal;
    if (n == m) {
        hard.one_to_one = true;
        if (all_equal) {
            hard.map.resize(static_cast<std::size_t>(n));
            std::iota(hard.map.begin(), hard.map.end(), 0);
        } else {
            hard.map = detail::solve_assignment(-c.matrix);
        }
    } else {
        hard.one_to_one = false;
        hard.map.resize(static_cast<std::size_t>(n));
        for (Index i = 0; i < n; ++i) {
            Index best = 0;
            for (Index j = 1; j < m; ++j) {
                if (c.matrix(i, j) > c.matrix(i, best)) best = j;
            }
            hard.map[static_cast<std::size_t>(i)] = static_cast<int>(best);
        }
    }
    return hard;
}

Hyperparams default_hyperparams(const FilteredGraph& f1, const FilteredGraph& f2,
                                double c1, double c2) {
    const double max1 = f1.gl.maxCoeff();
    const double max2 = f2.gl.maxCoeff();
    if (!(max1 > 0.0) || !(max2 > 0.0)) {
        throw ValidationError("filter matrices must have a positive maximum entry");
    }
    const double nm = static_cast<double>(f1.size()) * static_cast<double>(f2.size());
    return Hyperparams{c1 * max1 * max2 / std::sqrt(nm), c2 * nm / (max1 * max2)};
}

SolverResult mgd_solve(const FilteredGraph& f1, const FilteredGraph& f2,
                       const MgdConfig& cfg) {
    const Index n = f1.size();
    const Index m = f2.size();
    const Hyperparams hp = default_hyperparams(f1, f2, cfg.c1, cfg.c2);
    const double alpha = cfg.alpha.value_or(hp.alpha);
    const double epsilon = cfg.epsilon.value_or(hp.epsilon);
    if (!(alpha > 0.0)) throw ValidationError("mgd_solve requires alpha > 0");
    if (epsilon < 0.0) throw ValidationError("mgd_solve requires epsilon >= 0");

    auto rng = make_rng(cfg.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double log_uniform = -std::log(static_cast<double>(n) * static_cast<double>(m));

    auto jittered_start = [&]() {
        Mat logp = Mat::Constant(n, m, log_uniform);
        if (cfg.init_jitter > 0.0) {
            for (Index i = 0; i < n; ++i) {
                for (Index j = 0; j < m; ++j) logp(i, j) += cfg.init_jitter * normal(rng);
            }
        }
        return detail::sinkhorn_log(std::move(logp), cfg.sinkhorn, nullptr);
    };

    std::vector<double> trace;
    trace.reserve(static_cast<std::size_t>(cfg.max_iters) + 1);
    BestTracker best;

    int iterations = 0;
    bool exhausted = false;
    while (!exhausted) {
        Mat p = jittered_start();
        double cost = surrogate_cost(f1, f2, Coupling{p});
        check_finite_cost(cost, "mgd_solve", iterations);
        trace.push_back(cost);
        best.update(cost, p);

        int small_change_streak = 0;
        while (true) {
            if (iterations >= cfg.max_iters) {
                exhausted = true;
                break;
            }
            ++iterations;

            Mat q = surrogate_gradient(f1, f2, p);
            if (epsilon > 0.0) {
                q += epsilon * (p.cwiseMax(kFloor).array().log() + 1.0).matrix();
            }
            // Multiplicative step and KL projection, fused in the log domain:
            // log(P (.) exp(-alpha q)) = log P - alpha q.
            Mat log_next = p.cwiseMax(kFloor).array().log().matrix() - alpha * q;
            p = detail::sinkhorn_log(std::move(log_next), cfg.sinkhorn, nullptr);

            const double prev = cost;
            cost = surrogate_cost(f1, f2, Coupling{p});
            check_finite_cost(cost, "mgd_solve", iterations);
            trace.push_back(cost);
            best.update(cost, p);

            if (std::abs(cost - prev) < cfg.tol * std::max(std::abs(prev), 1e-12)) {
                if (++small_change_streak >= cfg.patience) break;  // stalled
            } else {
                small_change_streak = 0;
            }
        }
        if (!cfg.restart) break;
    }

    Coupling coupling{detail::sinkhorn_log(best.state.cwiseMax(kFloor).array().log(),
                                           final_projection_config(cfg.sinkhorn), nullptr)};
    SolverResult result{coupling, round_to_hard(coupling), std::move(trace),
                        surrogate_cost(f1, f2, coupling), iterations};
    return result;
}

SolverResult stochastic_mgd_solve(const FilteredGraph& f1, const FilteredGraph& f2,
                                  const StochasticConfig& cfg) {
    const Index n = f1.size();
    const Index m = f2.size();
    if (cfg.samples < 1) throw ValidationError("stochastic_mgd_solve requires samples >= 1");
    if (!(cfg.sigma0 > 0.0)) throw ValidationError("stochastic_mgd_solve requires sigma0 > 0");
    const Hyperparams hp = default_hyperparams(f1, f2, 0.0, cfg.c2);
    const double alpha = cfg.alpha.value_or(hp.alpha);
    if (!(alpha > 0.0)) throw ValidationError("stochastic_mgd_solve requires alpha > 0");

    auto rng = make_rng(cfg.seed);
    // The Gaussian parametrizes log-couplings: a sample X = eta + sigma (.)
    // noise stands for the positive matrix exp(X), so the KL projection runs
    // on X directly and the pathwise gradient needs no 1/P factor.
    const double eta0 =
        cfg.eta0.value_or(1.0 / (static_cast<double>(n) * static_cast<double>(m)));
    if (!(eta0 > 0.0)) throw ValidationError("stochastic_mgd_solve requires eta0 > 0");
    const double log_eta0 = std::log(eta0);

    // Optional moving second-moment normalization of the averaged gradients.
    constexpr double kBeta2 = 0.999;
    constexpr double kAdaptEps = 1e-8;

    const auto evaluate = [&](const Mat& logits, const SinkhornConfig& proj) {
        Mat projected = detail::sinkhorn_log(logits, proj, nullptr);
        return std::make_pair(surrogate_cost(f1, f2, Coupling{projected}), projected);
    };

    std::vector<double> trace;
    trace.reserve(static_cast<std::size_t>(cfg.max_iters) + 1);
    BestTracker best;

    int iterations = 0;
    bool exhausted = false;
    while (!exhausted) {
        Mat eta = Mat::Constant(n, m, log_eta0);
        Mat sigma = (cfg.sigma0 * standard_normal(n, m, rng).cwiseAbs()).cwiseMax(kSigmaFloor);
        Mat v_eta = Mat::Zero(n, m), v_sigma = Mat::Zero(n, m);
        Mat vhat_eta = Mat::Zero(n, m), vhat_sigma = Mat::Zero(n, m);

        double cost = evaluate(eta, cfg.sinkhorn).first;
        check_finite_cost(cost, "stochastic_mgd_solve", iterations);
        trace.push_back(cost);
        best.update(cost, eta);
        double restart_best = cost;
        int since_improvement = 0;

        while (since_improvement < cfg.patience) {
            if (iterations >= cfg.max_iters) {
                exhausted = true;
                break;
            }
            ++iterations;

            Mat g_eta = Mat::Zero(n, m);
            Mat g_sigma = Mat::Zero(n, m);
            double iteration_min = std::numeric_limits<double>::infinity();
            for (int s = 0; s < cfg.samples; ++s) {
                Mat noise = standard_normal(n, m, rng);
                Mat sample_logits = eta + sigma.cwiseProduct(noise);

                detail::SinkhornTape tape;
                Mat projected = detail::sinkhorn_log(sample_logits, cfg.sinkhorn, &tape);
                const double sample_cost = surrogate_cost(f1, f2, Coupling{projected});
                check_finite_cost(sample_cost, "stochastic_mgd_solve", iterations);
                best.update(sample_cost, sample_logits);
                iteration_min = std::min(iteration_min, sample_cost);

                Mat grad = tape.pullback(surrogate_gradient(f1, f2, projected));
                g_eta += grad;
                g_sigma += noise.cwiseProduct(grad);
            }
            g_eta /= static_cast<double>(cfg.samples);
            g_sigma /= static_cast<double>(cfg.samples);

            if (cfg.adaptive) {
                v_eta = kBeta2 * v_eta + (1.0 - kBeta2) * g_eta.cwiseProduct(g_eta);
                v_sigma = kBeta2 * v_sigma + (1.0 - kBeta2) * g_sigma.cwiseProduct(g_sigma);
                vhat_eta = vhat_eta.cwiseMax(v_eta);
                vhat_sigma = vhat_sigma.cwiseMax(v_sigma);
                g_eta = (g_eta.array() / (vhat_eta.array().sqrt() + kAdaptEps)).matrix();
                g_sigma = (g_sigma.array() / (vhat_sigma.array().sqrt() + kAdaptEps)).matrix();
            }

            const Mat sigma_sq = sigma.cwiseProduct(sigma);
            const Mat d = 0.5 * alpha * sigma_sq.cwiseProduct(g_sigma);
            eta -= alpha * sigma_sq.cwiseProduct(g_eta);
            sigma = detail::sigma_update(sigma, d);

            cost = evaluate(eta, cfg.sinkhorn).first;
            check_finite_cost(cost, "stochastic_mgd_solve", iterations);
            trace.push_back(cost);
            best.update(cost, eta);
            iteration_min = std::min(iteration_min, cost);

            if (improves(iteration_min, restart_best, cfg.tol)) {
                restart_best = iteration_min;
                since_improvement = 0;
            } else {
                ++since_improvement;
            }
        }
        if (!cfg.restart) break;
    }

    auto [final_cost, projected] = evaluate(best.state, final_projection_config(cfg.sinkhorn));
    Coupling coupling{std::move(projected)};
    SolverResult result{coupling, round_to_hard(coupling), std::move(trace), final_cost,
                        iterations};
    return result;
}

namespace detail {

Mat sigma_update(const Mat& sigma, const Mat& d) {
    Mat next = (sigma.array().square() + d.array().square()).sqrt() - d.array();
    return next.cwiseMax(kSigmaFloor);
}

std::vector<int> solve_assignment(const Mat& cost) {
    const int n = static_cast<int>(cost.rows());
    if (cost.cols() != n) throw ValidationError("assignment cost matrix must be square");
    constexpr double kInf = std::numeric_limits<double>::infinity();

    // Potentials method over a virtual 0 row/column, 1-indexed.
    std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<int> match(static_cast<std::size_t>(n) + 1, 0);  // column -> row
    std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);

    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(n) + 1, kInf);
        std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
        do {
            used[static_cast<std::size_t>(j0)] = true;
            const int i0 = match[static_cast<std::size_t>(j0)];
            int j1 = -1;
            double delta = kInf;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                                   v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (match[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> row_to_col(static_cast<std::size_t>(n), -1);
    for (int j = 1; j <= n; ++j) {
        const int i = match[static_cast<std::size_t>(j)];
        if (i >= 1) row_to_col[static_cast<std::size_t>(i - 1)] = j - 1;
    }
    return row_to_col;
}

} // namespace detail

} // namespace fgot

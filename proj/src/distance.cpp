#include "fgot/distance.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

namespace fgot {

namespace {

void check_pair_sizes(const FilteredGraph& f1, const FilteredGraph& f2,
                      Index rows, Index cols) {
    if (rows != f1.size() || cols != f2.size()) {
        std::ostringstream os;
        os << "assignment is " << rows << "x" << cols << " but graphs have "
           << f1.size() << " and " << f2.size() << " vertices";
        throw ValidationError(os.str());
    }
}

// Tr sqrt(g1 B^2 g1) where B = P g(L2) P^T. The square root's argument
// factors as (g1 B)(g1 B)^T, so the trace is the sum of singular values of
// g1 B. Computing singular values directly avoids the sqrt-of-clamped-
// eigenvalue noise that an eigendecomposition of the product picks up at the
// Laplacians' zero modes.
double trace_sqrt_cross(const Mat& g1, const Mat& permuted_g2) {
    const Mat s = g1 * permuted_g2;
    Eigen::JacobiSVD<Mat> svd(s);
    const Vec& sigma = svd.singularValues();
    if (!sigma.allFinite()) {
        throw NumericError("singular values of the exact-distance cross term are not finite");
    }
    return sigma.sum();
}

} // namespace

double exact_distance(const FilteredGraph& f1, const FilteredGraph& f2,
                      const Permutation& p) {
    if (f1.size() != f2.size()) {
        throw ValidationError("exact distance is defined for graphs of equal size");
    }
    if (p.size() != f2.size()) {
        throw ValidationError("permutation size does not match graph size");
    }
    const Index n = f1.size();
    Mat permuted(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) permuted(i, j) = f2.gl(p[i], p[j]);
    }
    const double cross = trace_sqrt_cross(f1.gl, permuted);
    return f1.gl_sq_trace + f2.gl_sq_trace - 2.0 * cross;
}

double surrogate_cost(const FilteredGraph& f1, const FilteredGraph& f2,
                      const Mat& assignment) {
    check_pair_sizes(f1, f2, assignment.rows(), assignment.cols());
    const double cross = (f1.gl * assignment * f2.gl).cwiseProduct(assignment).sum();
    return f1.gl_sq_trace + f2.gl_sq_trace - 2.0 * cross;
}

double surrogate_cost(const FilteredGraph& f1, const FilteredGraph& f2,
                      const Coupling& coupling) {
    const Mat scaled = coupling_scale(coupling.rows(), coupling.cols()) * coupling.matrix;
    return surrogate_cost(f1, f2, scaled);
}

Mat surrogate_gradient(const FilteredGraph& f1, const FilteredGraph& f2,
                       const Mat& assignment) {
    check_pair_sizes(f1, f2, assignment.rows(), assignment.cols());
    return -4.0 * (f1.gl * assignment * f2.gl);
}

DistanceReport distance_report(const FilteredGraph& f1, const FilteredGraph& f2,
                               const Mat& assignment) {
    check_pair_sizes(f1, f2, assignment.rows(), assignment.cols());
    DistanceReport report;
    report.trace_terms = {f1.gl_sq_trace, f2.gl_sq_trace};
    report.cross_term = (f1.gl * assignment * f2.gl).cwiseProduct(assignment).sum();
    report.surrogate = f1.gl_sq_trace + f2.gl_sq_trace - 2.0 * report.cross_term;

    if (assignment.rows() == assignment.cols()) {
        // Recognize a permutation matrix and add the exact distance for it.
        const Index n = assignment.rows();
        std::vector<int> perm(static_cast<std::size_t>(n), -1);
        std::vector<bool> used(static_cast<std::size_t>(n), false);
        bool is_perm = true;
        for (Index i = 0; i < n && is_perm; ++i) {
            for (Index j = 0; j < n && is_perm; ++j) {
                const double v = assignment(i, j);
                if (std::abs(v - 1.0) < 1e-12) {
                    if (perm[static_cast<std::size_t>(i)] != -1 || used[static_cast<std::size_t>(j)]) {
                        is_perm = false;
                    } else {
                        perm[static_cast<std::size_t>(i)] = static_cast<int>(j);
                        used[static_cast<std::size_t>(j)] = true;
                    }
                } else if (std::abs(v) > 1e-12) {
                    is_perm = false;
                }
            }
        }
        if (is_perm && std::all_of(perm.begin(), perm.end(), [](int v) { return v >= 0; })) {
            report.exact = exact_distance(f1, f2, Permutation(perm));
        }
    }
    return report;
}

BruteForceResult brute_force_align(const FilteredGraph& f1, const FilteredGraph& f2) {
    if (f1.size() != f2.size()) {
        throw ValidationError("brute-force alignment requires equal graph sizes");
    }
    const Index n = f1.size();
    if (n > 8) throw ValidationError("brute-force alignment is limited to n <= 8");

    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);

    BruteForceResult result{Permutation(perm), std::numeric_limits<double>::infinity(),
                            Permutation(perm), std::numeric_limits<double>::infinity()};
    Mat permuted(n, n);
    do {
        for (Index i = 0; i < n; ++i) {
            const int pi = perm[static_cast<std::size_t>(i)];
            for (Index j = 0; j < n; ++j) {
                permuted(i, j) = f2.gl(pi, perm[static_cast<std::size_t>(j)]);
            }
        }
        // <g1 P g2, P> = sum_ij g1(i,j) g2(perm[i], perm[j]) = <g1, permuted>
        const double cross = f1.gl.cwiseProduct(permuted).sum();
        const double surrogate = f1.gl_sq_trace + f2.gl_sq_trace - 2.0 * cross;
        const double exact =
            f1.gl_sq_trace + f2.gl_sq_trace - 2.0 * trace_sqrt_cross(f1.gl, permuted);
        if (exact < result.exact_min) {
            result.exact_min = exact;
            result.exact_best = Permutation(perm);
        }
        if (surrogate < result.surrogate_min) {
            result.surrogate_min = surrogate;
            result.surrogate_best = Permutation(perm);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return result;
}

} // namespace fgot

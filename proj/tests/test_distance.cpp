#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fgot/distance.hpp"
#include "fgot/random.hpp"
#include "helpers.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace fgot;
using testutil::mat;

namespace {

Mat psd_sqrt(const Mat& c) {
    Eigen::SelfAdjointEigenSolver<Mat> es(c);
    Vec lambda = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * lambda.asDiagonal() * es.eigenvectors().transpose();
}

// Independent route for the exact distance: nested square roots of the
// covariances C = g^2(L), as in the Gaussian Wasserstein formula.
double exact_oracle(const FilteredGraph& f1, const FilteredGraph& f2, const Permutation& p) {
    const Index n = f1.size();
    const Mat c1 = f1.gl * f1.gl;
    Mat g2p(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) g2p(i, j) = f2.gl(p[i], p[j]);
    }
    const Mat c2 = g2p * g2p;
    const Mat root1 = psd_sqrt(c1);
    const Mat inner = root1 * c2 * root1;
    Eigen::SelfAdjointEigenSolver<Mat> es(((inner + inner.transpose()) / 2.0).eval());
    const double cross = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return c1.trace() + c2.trace() - 2.0 * cross;
}

Mat random_matrix(Index n, Index m, std::uint64_t seed, double lo, double hi) {
    auto rng = make_rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    Mat p(n, m);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < m; ++j) p(i, j) = u(rng);
    }
    return p;
}

} // namespace

TEST_CASE("self distance vanishes") {
    for (const FilterSpec& spec : testutil::filter_library()) {
        const FilteredGraph f = materialize(testutil::random_graph(5, 3), spec);
        CHECK(std::abs(exact_distance(f, f, Permutation::identity(5))) < 1e-8);
        CHECK(std::abs(surrogate_cost(f, f, Permutation::identity(5).matrix())) < 1e-8);
    }
}

TEST_CASE("isomorphic graphs at the isomorphism have zero distance") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const Graph g = testutil::random_graph(6, seed, 0.5);
        const Permutation p = random_permutation(6, seed + 40);
        const Graph permuted = apply_permutation(g, p);
        for (const FilterSpec& spec : testutil::filter_library()) {
            const FilteredGraph f1 = materialize(permuted, spec);
            const FilteredGraph f2 = materialize(g, spec);
            CHECK(std::abs(exact_distance(f1, f2, p)) < 1e-7);
            CHECK(std::abs(surrogate_cost(f1, f2, p.matrix())) < 1e-7);
        }
    }
}

TEST_CASE("K2 against the empty graph under the square filter") {
    const FilteredGraph f1 = materialize(testutil::k2(), FilterSpec::square());
    const FilteredGraph f2 = materialize(testutil::empty_graph(2), FilterSpec::square());
    const Permutation id = Permutation::identity(2);
    CHECK(exact_distance(f1, f2, id) == doctest::Approx(16.0).epsilon(1e-10));
    CHECK(exact_oracle(f1, f2, id) == doctest::Approx(16.0).epsilon(1e-10));
    CHECK(surrogate_cost(f1, f2, id.matrix()) == doctest::Approx(16.0).epsilon(1e-10));
}

TEST_CASE("exact distance agrees with the nested-square-root oracle") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const Graph a = testutil::random_graph(6, seed, 0.5);
        const Graph b = testutil::random_graph(6, seed + 90, 0.5);
        const Permutation p = random_permutation(6, seed + 7);
        for (const FilterSpec& spec : testutil::filter_library()) {
            const FilteredGraph f1 = materialize(a, spec);
            const FilteredGraph f2 = materialize(b, spec);
            const double direct = exact_distance(f1, f2, p);
            const double oracle = exact_oracle(f1, f2, p);
            // The oracle's nested clamped square roots carry ~sqrt(eps |M|)
            // noise at the Laplacians' zero modes; compare at that level.
            CHECK(std::abs(direct - oracle) < 1e-5 * std::max(1.0, std::abs(oracle)));
        }
    }
}

TEST_CASE("surrogate matches the naive double-loop trace oracle") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const FilteredGraph f1 =
            materialize(testutil::random_graph(4, seed, 0.6), FilterSpec::heat(0.8));
        const FilteredGraph f2 =
            materialize(testutil::random_graph(4, seed + 33, 0.6), FilterSpec::heat(0.8));
        const Mat p = random_matrix(4, 4, seed + 66, 0.0, 1.0);

        double cross = 0.0;
        for (Index i = 0; i < 4; ++i) {
            for (Index j = 0; j < 4; ++j) {
                for (Index k = 0; k < 4; ++k) {
                    for (Index l = 0; l < 4; ++l) {
                        cross += f1.gl(i, j) * p(j, k) * f2.gl(k, l) * p(i, l);
                    }
                }
            }
        }
        const double oracle = f1.gl_sq_trace + f2.gl_sq_trace - 2.0 * cross;
        CHECK(surrogate_cost(f1, f2, p) == doctest::Approx(oracle).epsilon(1e-10));
    }
}

TEST_CASE("surrogate handles rectangular assignments") {
    const FilteredGraph f1 =
        materialize(testutil::random_graph(3, 1, 0.7), FilterSpec::heat(0.5));
    const FilteredGraph f2 =
        materialize(testutil::random_graph(5, 2, 0.5), FilterSpec::heat(0.5));
    const Mat p = random_matrix(3, 5, 3, 0.0, 0.4);
    CHECK(std::isfinite(surrogate_cost(f1, f2, p)));
    CHECK_THROWS_AS(surrogate_cost(f1, f2, p.transpose().eval()), ValidationError);
    CHECK_THROWS_AS(exact_distance(f1, f2, Permutation::identity(3)), ValidationError);
}

TEST_CASE("coupling rescale reproduces hard-assignment values") {
    const FilteredGraph f1 =
        materialize(testutil::random_graph(5, 8, 0.5), FilterSpec::square());
    const FilteredGraph f2 =
        materialize(testutil::random_graph(5, 9, 0.5), FilterSpec::square());
    const Permutation p = random_permutation(5, 10);
    // A permutation scaled into the fuzzy polytope has entries 1/n.
    const Coupling c{p.matrix() / 5.0};
    CHECK(surrogate_cost(f1, f2, c) ==
          doctest::Approx(surrogate_cost(f1, f2, p.matrix())).epsilon(1e-12));
}

TEST_CASE("surrogate gradient") {
    const FilteredGraph f1 =
        materialize(testutil::random_graph(5, 13, 0.5), FilterSpec::heat(0.8));
    const FilteredGraph f2 =
        materialize(testutil::random_graph(5, 14, 0.5), FilterSpec::heat(0.8));

    SUBCASE("zero assignment has zero gradient") {
        CHECK(surrogate_gradient(f1, f2, Mat::Zero(5, 5)).cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("matches central finite differences") {
        const Mat p = random_matrix(5, 5, 15, 0.1, 1.0);
        const Mat grad = surrogate_gradient(f1, f2, p);
        const double h = 1e-5;
        for (Index i = 0; i < 5; ++i) {
            for (Index j = 0; j < 5; ++j) {
                Mat plus = p, minus = p;
                plus(i, j) += h;
                minus(i, j) -= h;
                const double fd =
                    (surrogate_cost(f1, f2, plus) - surrogate_cost(f1, f2, minus)) / (2.0 * h);
                CHECK(std::abs(fd - grad(i, j)) <=
                      1e-4 * std::max(std::abs(grad(i, j)), 1e-6));
            }
        }
    }

    SUBCASE("identity filters reduce the gradient to -4P") {
        const FilteredGraph i1 =
            materialize(testutil::random_graph(4, 21, 0.5), FilterSpec::heat(1e-12));
        const FilteredGraph i2 =
            materialize(testutil::random_graph(4, 22, 0.5), FilterSpec::heat(1e-12));
        const Mat p = random_matrix(4, 4, 23, 0.0, 1.0);
        CHECK((surrogate_gradient(i1, i2, p) + 4.0 * p).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("upper-bound property of the surrogate (Lemma 2 direction)") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const Index n = 3 + static_cast<Index>(seed % 10);
        const Graph a = testutil::random_graph(n, seed * 3 + 1, 0.45);
        const Graph b = testutil::random_graph(n, seed * 3 + 2, 0.45);
        const Permutation p = random_permutation(n, seed * 3 + 3);
        for (const FilterSpec& spec : testutil::filter_library()) {
            const FilteredGraph f1 = materialize(a, spec);
            const FilteredGraph f2 = materialize(b, spec);
            const double surrogate = surrogate_cost(f1, f2, p.matrix());
            CHECK(exact_distance(f1, f2, p) <= surrogate + 1e-7);
        }
    }
}

TEST_CASE("brute force alignment") {
    SUBCASE("isomorphic pairs reach zero") {
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            const Graph g = testutil::random_graph(5, seed + 60, 0.5);
            const Permutation p = random_permutation(5, seed);
            const Graph permuted = apply_permutation(g, p);
            const FilteredGraph f1 = materialize(permuted, FilterSpec::sqrt());
            const FilteredGraph f2 = materialize(g, FilterSpec::sqrt());
            const BruteForceResult r = brute_force_align(f1, f2);
            CHECK(std::abs(r.exact_min) < 1e-7);
            CHECK(std::abs(r.surrogate_min) < 1e-7);
            CHECK(std::abs(exact_distance(f1, f2, r.exact_best)) < 1e-7);
        }
    }

    SUBCASE("graph against itself") {
        const FilteredGraph f =
            materialize(testutil::random_graph(4, 77, 0.5), FilterSpec::square());
        const BruteForceResult r = brute_force_align(f, f);
        CHECK(std::abs(r.exact_min) < 1e-8);
        CHECK(std::abs(exact_distance(f, f, r.exact_best)) < 1e-8);
    }

    SUBCASE("matches an independent full enumeration") {
        const FilteredGraph f1 =
            materialize(testutil::random_graph(5, 101, 0.5), FilterSpec::heat(0.8));
        const FilteredGraph f2 =
            materialize(testutil::random_graph(5, 102, 0.5), FilterSpec::heat(0.8));
        const BruteForceResult r = brute_force_align(f1, f2);

        std::vector<int> perm(5);
        std::iota(perm.begin(), perm.end(), 0);
        double best_exact = std::numeric_limits<double>::infinity();
        double best_surr = std::numeric_limits<double>::infinity();
        int count = 0;
        do {
            const Permutation p(perm);
            best_exact = std::min(best_exact, exact_oracle(f1, f2, p));
            best_surr = std::min(best_surr, surrogate_cost(f1, f2, p.matrix()));
            ++count;
        } while (std::next_permutation(perm.begin(), perm.end()));
        CHECK(count == 120);
        CHECK(r.exact_min == doctest::Approx(best_exact).epsilon(1e-8));
        CHECK(r.surrogate_min == doctest::Approx(best_surr).epsilon(1e-10));
    }

    SUBCASE("size limit") {
        const FilteredGraph f =
            materialize(testutil::random_graph(9, 1, 0.4), FilterSpec::square());
        CHECK_THROWS_AS(brute_force_align(f, f), ValidationError);
    }
}

TEST_CASE("distance_report") {
    const FilteredGraph f1 =
        materialize(testutil::random_graph(4, 51, 0.5), FilterSpec::heat(0.8));
    const FilteredGraph f2 =
        materialize(testutil::random_graph(4, 52, 0.5), FilterSpec::heat(0.8));
    const Permutation p = random_permutation(4, 53);

    const DistanceReport at_perm = distance_report(f1, f2, p.matrix());
    REQUIRE(at_perm.exact.has_value());
    CHECK(*at_perm.exact == doctest::Approx(exact_distance(f1, f2, p)));
    CHECK(at_perm.surrogate == doctest::Approx(surrogate_cost(f1, f2, p.matrix())));
    CHECK(at_perm.surrogate >= *at_perm.exact - 1e-7);
    CHECK(at_perm.trace_terms.first == doctest::Approx(f1.gl_sq_trace));

    const DistanceReport fuzzy = distance_report(f1, f2, Mat::Constant(4, 4, 0.25));
    CHECK(!fuzzy.exact.has_value());
}

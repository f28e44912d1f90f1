#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fgot/graph.hpp"
#include "fgot/random.hpp"
#include "helpers.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <map>

using namespace fgot;
using testutil::mat;

TEST_CASE("laplacian of K2") {
    const Laplacian l = laplacian(testutil::k2());
    CHECK((l.matrix - mat({{1, -1}, {-1, 1}})).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    CHECK(l.degrees(0) == doctest::Approx(1.0));
}

TEST_CASE("laplacian of the triangle") {
    const Laplacian l = laplacian(testutil::triangle());
    const Mat expected = mat({{2, -1, -1}, {-1, 2, -1}, {-1, -1, 2}});
    CHECK((l.matrix - expected).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("laplacian of an empty graph is zero") {
    const Laplacian l = laplacian(testutil::empty_graph(3));
    CHECK(l.matrix.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("laplacian row sums vanish and the matrix is PSD") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Graph g = testutil::random_weighted_graph(8, seed);
        const Laplacian l = laplacian(g);
        CHECK(l.matrix.rowwise().sum().cwiseAbs().maxCoeff() < 1e-10);
        Eigen::SelfAdjointEigenSolver<Mat> es(l.matrix);
        CHECK(es.eigenvalues().minCoeff() > -1e-8);
    }
}

TEST_CASE("graph validation") {
    CHECK_THROWS_AS(Graph(mat({{0, 1}, {0.5, 0}})), ValidationError);   // asymmetric
    CHECK_THROWS_AS(Graph(mat({{0, -1}, {-1, 0}})), ValidationError);   // negative
    CHECK_THROWS_AS(Graph(mat({{1, 0}, {0, 0}})), ValidationError);     // diagonal
    CHECK_THROWS_AS(Graph(Mat::Zero(0, 0)), ValidationError);           // empty
    CHECK_THROWS_AS(Graph(Mat::Zero(2, 3)), ValidationError);           // non-square

    // Roundoff-level asymmetry is repaired instead of rejected.
    Mat w = mat({{0, 1}, {1, 0}});
    w(0, 1) += 5e-11;
    const Graph g(w);
    CHECK(g.weights()(0, 1) == doctest::Approx(g.weights()(1, 0)));
}

TEST_CASE("apply_permutation leaves identity and automorphisms alone") {
    const Laplacian l = laplacian(testutil::k2());
    const Laplacian same = apply_permutation(l, Permutation::identity(2));
    CHECK((same.matrix - l.matrix).cwiseAbs().maxCoeff() == 0.0);

    const Laplacian swapped = apply_permutation(l, Permutation({1, 0}));
    CHECK((swapped.matrix - l.matrix).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("apply_permutation matches the matrix-product oracle") {
    const Laplacian l = laplacian(testutil::path3());

    const Permutation reversal({2, 1, 0});
    const Laplacian reversed = apply_permutation(l, reversal);
    CHECK((reversed.matrix - l.matrix).cwiseAbs().maxCoeff() == doctest::Approx(0.0));

    for (const auto& perm : {Permutation({1, 0, 2}), Permutation({2, 0, 1})}) {
        const Laplacian permuted = apply_permutation(l, perm);
        const Mat p = perm.matrix();
        const Mat oracle = p * l.matrix * p.transpose();
        CHECK((permuted.matrix - oracle).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("permutation preserves the spectrum") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const Graph g = testutil::random_weighted_graph(7, seed);
        const Laplacian l = laplacian(g);
        const Permutation p = random_permutation(7, seed + 100);
        const Laplacian lp = apply_permutation(l, p);

        Eigen::SelfAdjointEigenSolver<Mat> e1(l.matrix), e2(lp.matrix);
        CHECK((e1.eigenvalues() - e2.eigenvalues()).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("laplacian is linear in the edge weights") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Graph a = testutil::random_weighted_graph(6, seed);
        const Graph b = testutil::random_weighted_graph(6, seed + 50);
        const Graph sum(a.weights() + b.weights());
        const Mat combined = laplacian(a).matrix + laplacian(b).matrix;
        CHECK((laplacian(sum).matrix - combined).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("permutation validation and inverse") {
    CHECK_THROWS_AS(Permutation({0, 0}), ValidationError);
    CHECK_THROWS_AS(Permutation({0, 2}), ValidationError);
    CHECK_THROWS_AS(Permutation({}), ValidationError);

    const Permutation p({2, 0, 1});
    const Permutation inv = p.inverse();
    CHECK((p.matrix() * inv.matrix() - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((p.matrix().transpose() - inv.matrix()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("random_permutation basics") {
    CHECK(random_permutation(1, 7) == Permutation::identity(1));
    CHECK(random_permutation(3, 99) == random_permutation(3, 99));

    bool any_diff = false;
    for (std::uint64_t s = 0; s < 16 && !any_diff; ++s) {
        any_diff = !(random_permutation(5, s) == random_permutation(5, s + 1));
    }
    CHECK(any_diff);
}

TEST_CASE("random_permutation is uniform (chi-square over S_5)") {
    const int draws = 10000;
    std::map<std::vector<int>, int> counts;
    for (int d = 0; d < draws; ++d) {
        counts[random_permutation(5, split_seed(42, d)).indices()] += 1;
    }
    CHECK(counts.size() == 120);

    const double expected = draws / 120.0;
    double chi2 = 0.0;
    int min_count = draws, max_count = 0;
    for (const auto& [perm, count] : counts) {
        chi2 += (count - expected) * (count - expected) / expected;
        min_count = std::min(min_count, count);
        max_count = std::max(max_count, count);
    }
    // 0.999 quantile of chi-square with 119 dof.
    CHECK(chi2 < 172.5);
    // Per-cell binomial 3-sigma band around draws/120.
    const double sigma = std::sqrt(draws * (1.0 / 120.0) * (119.0 / 120.0));
    CHECK(min_count > expected - 3 * sigma);
    CHECK(max_count < expected + 3 * sigma);
}

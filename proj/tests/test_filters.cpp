#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fgot/filters.hpp"
#include "fgot/random.hpp"
#include "helpers.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace fgot;
using testutil::mat;

TEST_CASE("decompose known spectra") {
    const SpectralDecomposition k2 = decompose(laplacian(testutil::k2()));
    CHECK(k2.eigenvalues(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(k2.eigenvalues(1) == doctest::Approx(2.0));

    // Characteristic polynomial of the triangle Laplacian: lambda (lambda-3)^2.
    const SpectralDecomposition k3 = decompose(laplacian(testutil::triangle()));
    CHECK(k3.eigenvalues(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(k3.eigenvalues(1) == doctest::Approx(3.0));
    CHECK(k3.eigenvalues(2) == doctest::Approx(3.0));

    const SpectralDecomposition zero = decompose(laplacian(testutil::empty_graph(3)));
    CHECK(zero.eigenvalues.cwiseAbs().maxCoeff() == 0.0);
    CHECK((zero.eigenvectors * zero.eigenvectors.transpose() - Mat::Identity(3, 3))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
}

TEST_CASE("decompose reconstructs and orthonormalizes") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const Laplacian l = laplacian(testutil::random_weighted_graph(9, seed));
        const SpectralDecomposition dec = decompose(l);
        const Mat rebuilt = dec.eigenvectors * dec.eigenvalues.asDiagonal() *
                            dec.eigenvectors.transpose();
        CHECK((rebuilt - l.matrix).norm() < 1e-8);
        CHECK((dec.eigenvectors * dec.eigenvectors.transpose() - Mat::Identity(9, 9)).norm() <
              1e-8);
        for (Index i = 1; i < dec.eigenvalues.size(); ++i) {
            CHECK(dec.eigenvalues(i) >= dec.eigenvalues(i - 1));
        }
        CHECK(dec.eigenvalues(0) >= 0.0);
    }
}

TEST_CASE("scalar filter responses") {
    CHECK(evaluate_filter(FilterSpec::pinv_sqrt(), 0.0, 10.0) == 0.0);
    CHECK(evaluate_filter(FilterSpec::pinv_sqrt(), 4.0, 10.0) == doctest::Approx(0.5));
    CHECK(evaluate_filter(FilterSpec::square(), 3.0, 10.0) == doctest::Approx(9.0));
    CHECK(evaluate_filter(FilterSpec::sqrt(), 9.0, 10.0) == doctest::Approx(3.0));
    CHECK(evaluate_filter(FilterSpec::heat(0.8), 2.0, 10.0) ==
          doctest::Approx(std::exp(-1.6)).epsilon(1e-12));

    const FilterSpec combo = FilterSpec::sum({FilterSpec::pinv_sqrt(), FilterSpec::square()});
    CHECK(evaluate_filter(combo, 4.0, 10.0) == doctest::Approx(16.5));

    // The pseudoinverse threshold scales with the largest eigenvalue.
    CHECK(evaluate_filter(FilterSpec::pinv_sqrt(), 1e-9, 1.0) == 0.0);
    CHECK(evaluate_filter(FilterSpec::pinv_sqrt(), 1e-7, 1.0) > 0.0);
}

TEST_CASE("filter string grammar") {
    CHECK(FilterSpec::parse("pinv-sqrt").kind == FilterSpec::Kind::PinvSqrt);
    CHECK(FilterSpec::parse("SQ").kind == FilterSpec::Kind::Square);
    CHECK(FilterSpec::parse("sqrt").kind == FilterSpec::Kind::Sqrt);
    CHECK(FilterSpec::parse("heat:0.8").tau == doctest::Approx(0.8));

    const FilterSpec g5 = FilterSpec::parse("pinv-sqrt+heat:0.8");
    REQUIRE(g5.kind == FilterSpec::Kind::Sum);
    REQUIRE(g5.terms.size() == 2);
    CHECK(g5.terms[0].kind == FilterSpec::Kind::PinvSqrt);
    CHECK(g5.terms[1].kind == FilterSpec::Kind::Heat);
    CHECK(g5.str() == "pinv-sqrt+heat:0.8");

    CHECK_THROWS_AS(FilterSpec::parse("boxcar"), ValidationError);
    CHECK_THROWS_AS(FilterSpec::parse("heat:"), ValidationError);
    CHECK_THROWS_AS(FilterSpec::parse("heat:-1"), ValidationError);
    CHECK_THROWS_AS(FilterSpec::parse("heat:0.8junk"), ValidationError);
    CHECK_THROWS_AS(FilterSpec::parse("sq+"), ValidationError);
    CHECK_THROWS_AS(FilterSpec::parse(""), ValidationError);
}

TEST_CASE("materialize K2 with the square filter") {
    const FilteredGraph f = materialize(testutil::k2(), FilterSpec::square());
    const Mat l = laplacian(testutil::k2()).matrix;
    const Mat l2 = l * l;
    CHECK((f.gl - l2).cwiseAbs().maxCoeff() < 1e-10);
    // Tr g^2(L) = Tr(L^4), via the direct matrix-power oracle.
    CHECK(f.gl_sq_trace == doctest::Approx((l2 * l2).trace()).epsilon(1e-12));
    CHECK(f.gl_sq_trace == doctest::Approx(16.0));
}

TEST_CASE("heat filter at tiny tau is the identity") {
    const FilteredGraph f = materialize(testutil::random_graph(6, 3), FilterSpec::heat(1e-9));
    CHECK((f.gl - Mat::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("pseudoinverse maps every component's zero eigenvalue to zero") {
    // Two disjoint K2 components: eigenvalue 0 with multiplicity 2.
    const Graph two_k2(mat({{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}}));
    const FilteredGraph f = materialize(two_k2, FilterSpec::pinv_sqrt());
    int zeros = 0;
    for (Index i = 0; i < f.filtered_eigenvalues.size(); ++i) {
        if (f.filtered_eigenvalues(i) == 0.0) ++zeros;
    }
    CHECK(zeros == 2);
    // Remaining spectrum is {2, 2}; pinv-sqrt squares to 1/2 each.
    CHECK(f.gl_sq_trace == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("materialized filters are symmetric PSD and commute with L") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const Graph g = testutil::random_graph(8, seed, 0.4);
        const Mat l = laplacian(g).matrix;
        for (const FilterSpec& spec : testutil::filter_library()) {
            const FilteredGraph f = materialize(g, spec);
            CHECK((f.gl - f.gl.transpose()).cwiseAbs().maxCoeff() < 1e-8);
            Eigen::SelfAdjointEigenSolver<Mat> es(f.gl);
            CHECK(es.eigenvalues().minCoeff() > -1e-8);
            CHECK((f.gl * l - l * f.gl).norm() < 1e-6);
            CHECK(f.gl_sq_trace ==
                  doctest::Approx((f.gl * f.gl).trace()).epsilon(1e-6));
        }
    }
}

TEST_CASE("filters commute with permutations") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const Graph g = testutil::random_graph(7, seed, 0.45);
        const Permutation p = random_permutation(7, seed + 17);
        const Graph gp = apply_permutation(g, p);
        for (const FilterSpec& spec : testutil::filter_library()) {
            const FilteredGraph direct = materialize(gp, spec);
            const FilteredGraph base = materialize(g, spec);
            const Mat pm = p.matrix();
            const Mat moved = pm * base.gl * pm.transpose();
            CHECK((direct.gl - moved).norm() < 1e-7);
        }
    }
}

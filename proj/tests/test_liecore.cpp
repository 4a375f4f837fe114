#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "reflow/pair.hpp"

using namespace reflow;

namespace {

std::vector<SymmetricPairSpec> sample_specs() {
    return {build_space_form_pair(2, 1, false), build_space_form_pair(2, 2, false),
            build_space_form_pair(3, 2, true), build_lagrangian_pair(2, false),
            build_lagrangian_pair(3, true)};
}

} // namespace

TEST_CASE("component dimensions follow the closed-form counts") {
    for (int n = 2; n <= 3; ++n)
        for (int k = 1; k <= 3; ++k)
            for (bool hyp : {false, true}) {
                const auto s = build_space_form_pair(n, k, hyp);
                CHECK(subspace_basis(s, Part::PP).dim() ==
                      n * (n - 1) / 2 + k * (k - 1) / 2);
                CHECK(subspace_basis(s, Part::PM).dim() == n * k);
                CHECK(subspace_basis(s, Part::MP).dim() == k);
                CHECK(subspace_basis(s, Part::MM).dim() == n);
                CHECK(s.m == n + k + 1);
            }
    for (int n = 2; n <= 3; ++n)
        for (bool hyp : {false, true}) {
            const auto s = build_lagrangian_pair(n, hyp);
            CHECK(subspace_basis(s, Part::PP).dim() == n * (n - 1) / 2);
            CHECK(subspace_basis(s, Part::PM).dim() == n * (n + 1) / 2);
            CHECK(subspace_basis(s, Part::MP).dim() == n);
            CHECK(subspace_basis(s, Part::MM).dim() == n);
            CHECK(s.m == 2 * n + 2);
        }
    // the four components exhaust the ambient algebra
    for (const auto& s : sample_specs()) {
        int total = 0;
        for (Part p : {Part::PP, Part::PM, Part::MP, Part::MM})
            total += subspace_basis(s, p).dim();
        CHECK(static_cast<int>(ambient_basis(s).size()) == total);
    }
}

TEST_CASE("component bases are unit-normalized and orthogonal in the invariant form") {
    for (const auto& s : sample_specs()) {
        std::vector<Mat> all;
        std::vector<double> signs;
        for (Part p : {Part::PP, Part::PM, Part::MP, Part::MM}) {
            const auto b = subspace_basis(s, p);
            for (int i = 0; i < b.dim(); ++i) {
                all.push_back(b.mats[static_cast<std::size_t>(i)]);
                signs.push_back(b.form_sign[static_cast<std::size_t>(i)]);
            }
        }
        for (std::size_t i = 0; i < all.size(); ++i) {
            CHECK((signs[i] == 1.0 || signs[i] == -1.0));
            CHECK(trace_form(all[i], all[i]) ==
                  doctest::Approx(signs[i]).epsilon(1e-12));
            for (std::size_t j = i + 1; j < all.size(); ++j)
                CHECK(std::abs(trace_form(all[i], all[j])) < 1e-12);
        }
    }
    // compact space forms carry a definite form; the hyperbolic ones do not
    {
        const auto b = subspace_basis(build_space_form_pair(3, 2, false), Part::MM);
        for (double sg : b.form_sign) CHECK(sg == 1.0);
        const auto bh =
            subspace_basis(build_space_form_pair(3, 2, true), Part::MM);
        bool has_negative = false;
        for (double sg : bh.form_sign) has_negative = has_negative || sg == -1.0;
        CHECK(has_negative);
    }
}

TEST_CASE("decomposition is exact and idempotent") {
    // the involutions are diagonal sign matrices, so each matrix entry belongs
    // to exactly one component and the projector sums cancel bit-exactly
    for (const auto& s : sample_specs()) {
        Rng rng(3);
        for (int t = 0; t < 60; ++t) {
            const Mat x = random_ambient(s, rng);
            const FourComponents fc = decompose(x, s);
            CHECK(fnorm(x - fc.sum()) == 0.0);
            for (Part p : {Part::PP, Part::PM, Part::MP, Part::MM}) {
                CHECK(off_part_residual(fc.part(p), s, p) == 0.0);
                CHECK(fnorm(fc.part(p) - project_part(x, s, p)) == 0.0);
            }
        }
    }
}

TEST_CASE("decomposition rejects matrices outside the ambient algebra") {
    const auto s = build_space_form_pair(2, 2, false);
    CHECK_THROWS_AS(decompose(Mat::Identity(s.m, s.m), s), MembershipError);
    try {
        decompose(Mat::Identity(s.m, s.m), s);
    } catch (const MembershipError& e) {
        CHECK(e.residual > 1.0);
    }
    Rng rng(4);
    for (int t = 0; t < 20; ++t)
        CHECK(s.ambient_residual(random_ambient(s, rng)) < 1e-13);
}

TEST_CASE("bracket relations close exactly for the diagonal involution pairs") {
    for (const auto& s : sample_specs()) {
        CHECK(check_bracket_relations(s, 100, 9).max() == 0.0);
        for (Part p : {Part::PP, Part::PM, Part::MP, Part::MM})
            CHECK(lie_triple_residual(s, p, 40, 9) == 0.0);
    }
    CHECK_THROWS_AS(check_bracket_relations(sample_specs()[0], 0, 1), ConfigError);
}

TEST_CASE("space-form structural elements land in their components") {
    for (bool hyp : {false, true}) {
        const auto s = build_space_form_pair(3, 2, hyp);
        Rng rng(6);
        Vec v(3), w(2);
        for (int i = 0; i < 3; ++i) v(i) = rng.normal();
        for (int i = 0; i < 2; ++i) w(i) = rng.normal();

        CHECK(off_part_residual(sf_tangent(s, v), s, Part::MM) == 0.0);
        CHECK(s.ambient_residual(sf_tangent(s, v)) == 0.0);
        for (int col = 0; col < 2; ++col) {
            CHECK(off_part_residual(sf_column(s, v, col), s, Part::PM) == 0.0);
            CHECK(s.ambient_residual(sf_column(s, v, col)) == 0.0);
        }
        CHECK(off_part_residual(sf_normal(s, w), s, Part::MP) == 0.0);
    }
}

TEST_CASE("lagrangian block embeddings: placement and bracket calculus") {
    for (int n : {2, 3}) {
        const auto s = build_lagrangian_pair(n, false);
        const int N = n + 1;
        Rng rng(5);
        Mat R(N, N), R2(N, N);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
                R(i, j) = rng.normal();
                R2(i, j) = rng.normal();
            }
        const Mat A = 0.5 * (R - R.transpose());
        const Mat B1 = 0.5 * (R + R.transpose());
        const Mat B2 = 0.5 * (R2 + R2.transpose());

        // A-blocks are even under the second involution, B-blocks odd
        const FourComponents fa = decompose(lag_embed_A(s, A), s, 1e9);
        CHECK(fnorm(fa.pm) == 0.0);
        CHECK(fnorm(fa.mm) == 0.0);
        const FourComponents fb = decompose(lag_embed_B(s, B1), s, 1e9);
        CHECK(fnorm(fb.pp) == 0.0);
        CHECK(fnorm(fb.mp) == 0.0);
        CHECK(s.ambient_residual(lag_embed_A(s, A)) == 0.0);

        CHECK(fnorm(bracket(lag_embed_B(s, B1), lag_embed_B(s, B2)) -
                    lag_embed_A(s, -bracket(B1, B2))) == 0.0);
        CHECK(fnorm(bracket(lag_embed_A(s, A), lag_embed_B(s, B1)) -
                    lag_embed_B(s, bracket(A, B1))) == 0.0);

        Vec beta(n);
        for (int i = 0; i < n; ++i) beta(i) = rng.normal();
        CHECK(off_part_residual(lag_tangent(s, beta), s, Part::MM) == 0.0);
    }
}

TEST_CASE("kahler generator swaps the moving components and squares to minus one") {
    for (int n : {2, 3}) {
        const auto s = build_lagrangian_pair(n, false);
        const Mat zeta = kahler_generator(s);
        Rng rng(8);
        for (int t = 0; t < 25; ++t) {
            const Mat x = random_in_part(s, Part::MM, rng);
            const Mat y = bracket(zeta, x);
            CHECK(off_part_residual(y, s, Part::MP) == 0.0);
            CHECK(fnorm(bracket(zeta, y) + x) < 1e-14);
            const Mat w = random_in_part(s, Part::MP, rng);
            CHECK(off_part_residual(bracket(zeta, w), s, Part::MM) == 0.0);
            CHECK(fnorm(bracket(zeta, bracket(zeta, w)) + w) < 1e-14);
        }
    }
    CHECK_THROWS_AS(kahler_generator(build_space_form_pair(2, 1, false)),
                    ConfigError);
}

TEST_CASE("abelian rank search matches the frozen table and is deterministic") {
    for (int n = 2; n <= 4; ++n)
        for (int k = 1; k <= 3; ++k)
            for (bool hyp : {false, true}) {
                if (n == 4 && k != 3) continue;  // keep the sweep quick
                const auto s = build_space_form_pair(n, k, hyp);
                const RankResult r = rank_oracle(s, 3, 11);
                CHECK(r.rank == std::min(n, k + 1));
                CHECK(r.tangent_rank == r.rank);
                CHECK(static_cast<int>(r.basis.size()) == r.rank);
            }
    for (int n : {2, 3})
        for (bool hyp : {false, true}) {
            const RankResult r = rank_oracle(build_lagrangian_pair(n, hyp), 3, 11);
            CHECK(r.rank == n);
            CHECK(r.tangent_rank == n);
        }
    // same seed, same answer, bit for bit
    const auto s = build_space_form_pair(3, 2, false);
    const RankResult a = rank_oracle(s, 3, 17);
    const RankResult b = rank_oracle(s, 3, 17);
    REQUIRE(a.basis.size() == b.basis.size());
    for (std::size_t i = 0; i < a.basis.size(); ++i)
        CHECK(fnorm(a.basis[i] - b.basis[i]) == 0.0);
    // a found basis really is abelian
    for (std::size_t i = 0; i < a.basis.size(); ++i)
        for (std::size_t j = i + 1; j < a.basis.size(); ++j)
            CHECK(fnorm(bracket(a.basis[i], a.basis[j])) < 1e-8);
}

TEST_CASE("rank obstruction reports the failing dimensions") {
    const RankObstruction e(3, 2);
    CHECK(std::string(e.what()) == "obstructed: n=3 > rank=2");
    CHECK(e.n == 3);
    CHECK(e.rank == 2);
}

TEST_CASE("span rank and coordinates solve small exact problems") {
    Mat a = Mat::Zero(2, 2), b = Mat::Zero(2, 2);
    a(0, 1) = 1.0;
    b(1, 0) = 1.0;
    CHECK(span_rank({a, b}) == 2);
    CHECK(span_rank({a, 2.0 * a, Mat(a + a)}) == 1);
    const Vec c = coords_against(Mat(3.0 * a + 2.0 * b), {a, b});
    REQUIRE(c.size() == 2);
    CHECK(c(0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(c(1) == doctest::Approx(2.0).epsilon(1e-12));
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "reflow/soliton.hpp"
#include "reflow/zerocurv.hpp"

using namespace reflow;

namespace {

// worst frame error of the integrated vacuum against the matrix exponential of
// the (commuting) constant direction forms
double vacuum_exp_error(const ConnectionField& c, double lambda, int substeps) {
    IntegrateOptions opts;
    opts.substeps = substeps;
    const FrameField f = integrate_frame(c, lambda, {0, 1}, opts);
    const Mat a0 = c.alpha(0, 0, lambda);
    const Mat a1 = c.alpha(0, 1, lambda);
    double worst = 0.0;
    for (std::size_t pt = 0; pt < c.points(); pt += 7) {
        const auto idx = c.chart.unflat(pt);
        const double x0 = c.chart.coord(0, idx[0]) - c.chart.origin[0];
        const double x1 = c.chart.coord(1, idx[1]) - c.chart.origin[1];
        const Mat exact = Mat(x0 * a0 + x1 * a1).exp();
        worst = std::max(worst, fnorm(f.F(pt) - exact));
    }
    return worst;
}

} // namespace

TEST_CASE("constant commuting data integrates to the matrix exponential") {
    const auto spec = build_space_form_pair(2, 1, false);
    const auto chart = make_box({33, 33}, 0.05, {0.0, 0.0});
    const auto vac = vacuum_solution(spec, chart, 5);
    CHECK(mc_residual(vac.field).worst <= 1e-12);
    CHECK(vacuum_exp_error(vac.field, 2.0, 32) <= 1e-9);
}

TEST_CASE("integration refuses data that is not flat") {
    const auto chart = make_box({33, 33}, 0.05, {0.0, 0.0});
    auto c = compact_kink(chart, 1);
    // the clean fixture passes the default gate
    CHECK_NOTHROW(integrate_frame(c, 1.0, {0, 1}));

    plant_mc_defect(c, 0.05);
    try {
        integrate_frame(c, 1.0, {0, 1});
        FAIL("expected a verification error");
    } catch (const VerificationError& e) {
        CHECK(e.check == "mc");
    }
}

TEST_CASE("sweep-order independence") {
    const auto chart = make_box({33, 33}, 0.05, {0.0, 0.0});
    const auto spec = build_space_form_pair(2, 1, false);
    const auto vac = vacuum_solution(spec, chart, 5);
    IntegrateOptions opts;
    opts.substeps = 4;
    CHECK(path_independence_residual(vac.field, 2.0, opts) == 0.0);

    const auto kink = compact_kink(chart, 1);
    CHECK(path_independence_residual(kink, 2.0, opts) <= 1e-4);
}

TEST_CASE("parameter inversion and negation act by constant conjugation") {
    const auto chart = make_box({33, 33}, 0.05, {0.0, 0.0});
    const auto spec = build_space_form_pair(2, 1, false);
    IntegrateOptions opts;
    opts.substeps = 4;

    auto run = [&](const ConnectionField& c) {
        const auto sp = c.make_spec();
        const FrameField f2 = integrate_frame(c, 2.0, {0, 1}, opts);
        const FrameField fh = integrate_frame(c, 0.5, {0, 1}, opts);
        const FrameField fn = integrate_frame(c, -2.0, {0, 1}, opts);
        CHECK(inversion_conjugation_residual(f2, fh, sp) == 0.0);
        CHECK(negation_conjugation_residual(f2, fn, sp) == 0.0);
    };
    run(vacuum_solution(spec, chart, 5).field);
    run(compact_kink(chart, 1));
}

TEST_CASE("doubly-even part of the log-derivative matches the stored coefficient") {
    const auto spec = build_space_form_pair(2, 1, false);
    const auto chart = make_box({33, 33}, 0.05, {0.0, 0.0});
    const auto vac = vacuum_solution(spec, chart, 5);
    IntegrateOptions opts;
    opts.substeps = 4;
    const FrameField f = integrate_frame(vac.field, 2.0, {0, 1}, opts);
    CHECK(fixed_part_audit(vac.field, f, spec).worst <= 1e-8);
}

TEST_CASE("integration error decays at fourth order") {
    const auto spec = build_space_form_pair(2, 1, false);
    const auto vac_c = vacuum_solution(spec, make_box({33, 33}, 0.05, {0.0, 0.0}), 5);
    const auto vac_f = vacuum_solution(spec, make_box({65, 65}, 0.025, {0.0, 0.0}), 5);
    const double e1 = vacuum_exp_error(vac_c.field, 2.0, 1);
    const double e2 = vacuum_exp_error(vac_f.field, 2.0, 1);
    CHECK(e1 > 10.0 * e2);  // halving the step should buy a factor near 16
    CHECK(std::log2(e1 / e2) >= 3.5);
}

TEST_CASE("existence is decided by the symmetric-space rank") {
    // codimension 1: rank 2, so a 2-dimensional chart works and a 3-dimensional
    // one is refused with the measured rank
    const auto chart2 = make_box({17, 17}, 0.05, {0.0, 0.0});
    const auto vac21 =
        vacuum_solution(build_space_form_pair(2, 1, false), chart2, 5);
    CHECK(vac21.rank == 2);
    CHECK(vac21.b_coeffs.size() == 2);
    CHECK(vac21.c_coeffs.size() == 2);

    const auto chart3 = make_box({9, 9, 9}, 0.05, {0.0, 0.0, 0.0});
    try {
        vacuum_solution(build_space_form_pair(3, 1, false), chart3, 5);
        FAIL("expected a rank obstruction");
    } catch (const RankObstruction& e) {
        CHECK(e.n == 3);
        CHECK(e.rank == 2);
        CHECK(std::string(e.what()) == "obstructed: n=3 > rank=2");
    }

    // one more unit of codimension unlocks n = 3
    const auto vac32 =
        vacuum_solution(build_space_form_pair(3, 2, false), chart3, 5);
    CHECK(vac32.rank == 3);
    CHECK(mc_residual(vac32.field).worst <= 1e-12);

    // Lagrangian family: rank n, no obstruction at any n
    const auto vacL2 =
        vacuum_solution(build_lagrangian_pair(2, false), chart2, 5);
    CHECK(vacL2.rank == 2);
    CHECK(mc_residual(vacL2.field).worst <= 1e-12);
    const auto vacL3 =
        vacuum_solution(build_lagrangian_pair(3, false), chart3, 5);
    CHECK(vacL3.rank == 3);
    CHECK(mc_residual(vacL3.field).worst <= 1e-12);

    // indefinite signature integrates just as cleanly
    const auto vh = vacuum_solution(build_space_form_pair(2, 1, true), chart2, 5);
    CHECK(mc_residual(vh.field).worst <= 1e-12);
    IntegrateOptions opts;
    opts.substeps = 4;
    const FrameField fh = integrate_frame(vh.field, 2.0, {0, 1}, opts);
    CHECK(frame_drift(fh, build_space_form_pair(2, 1, true)).worst <= 1e-7);
}

TEST_CASE("regularity: constant data degenerate, genuine profiles not") {
    const auto chart = make_box({33, 33}, 0.05, {0.0, 0.0});
    const auto spec21 = build_space_form_pair(2, 1, false);
    const auto vac = vacuum_solution(spec21, chart, 5);
    CHECK(regularity_check(vac.field).sigma_min == 0.0);

    CHECK(regularity_check(compact_kink(chart, 1)).sigma_min >= 0.01);

    const auto spec22 = build_space_form_pair(2, 2, false);
    const auto polar = polar_fixture(spec22, chart, 3);
    CHECK(regularity_check(polar).sigma_min >= 0.01);
}

TEST_CASE("polar data: flat at the midpoint of the loop, curved elsewhere") {
    const auto spec = build_space_form_pair(2, 2, false);
    const auto chart = make_box({33, 33}, 0.05, {0.0, 0.0});
    const auto c = polar_fixture(spec, chart, 3);

    CHECK(mc_residual_at(c, 1.0).worst <= 1e-3);
    CHECK(mc_residual_at(c, 2.0).worst >= 1e-2);

    IntegrateOptions opts;
    opts.substeps = 16;
    opts.skip_mc_check = true;  // flat only at lambda = 1
    const FrameField f = integrate_frame(c, 1.0, {0, 1}, opts);
    const auto gens = polar_generators(spec, 3);
    double worst = 0.0;
    for (std::size_t pt = 0; pt < c.points(); pt += 11) {
        const auto idx = c.chart.unflat(pt);
        Vec x(2);
        x << c.chart.coord(0, idx[0]), c.chart.coord(1, idx[1]);
        worst = std::max(worst, fnorm(f.F(pt) - polar_frame_at(gens, x)));
    }
    CHECK(worst <= 1e-12);
    CHECK(frame_drift(f, spec).worst <= 1e-8);
}

TEST_CASE("drift measurement detects a corrupted frame") {
    const auto chart = make_box({17, 17}, 0.05, {0.0, 0.0});
    const auto c = compact_kink(chart, 1);
    const auto spec = c.make_spec();
    IntegrateOptions opts;
    opts.substeps = 4;
    FrameField f = integrate_frame(c, 2.0, {0, 1}, opts);
    CHECK(frame_drift(f, spec).worst <= 1e-8);
    f.F(100) *= 1.01;
    CHECK(frame_drift(f, spec).worst >= 1e-3);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "reflow/connection.hpp"
#include "reflow/soliton.hpp"
#include "reflow/zerocurv.hpp"

using namespace reflow;

namespace {

std::filesystem::path scratch_dir() {
    const auto d = std::filesystem::temp_directory_path() / "reflow_loops_test";
    std::filesystem::create_directories(d);
    return d;
}

} // namespace

TEST_CASE("laurent evaluation matches the direct sum") {
    LaurentMatrixPoly p(2, 3);
    Rng rng(12);
    for (int j = -2; j <= 2; ++j)
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) p.coeff(j)(r, c) = rng.normal();
    for (double l : {1.0, 2.0, -0.75, 0.5}) {
        Mat direct = Mat::Zero(3, 3);
        for (int j = -2; j <= 2; ++j) direct += p.coeff(j) * std::pow(l, j);
        CHECK(fnorm(eval(p, l) - direct) < 1e-12);
    }
}

TEST_CASE("evaluation and the homothety factor reject the puncture") {
    LaurentMatrixPoly p(1, 2);
    CHECK_THROWS_AS(eval(p, 0.0), ConfigError);
    CHECK_THROWS_AS(r_lambda(0.0), ConfigError);
    CHECK(r_lambda(1.0) == 1.0);
    CHECK(r_lambda(-1.0) == 1.0);
    CHECK(r_lambda(2.0) == 1.25);
    CHECK(r_lambda(0.5) == 1.25);   // homothety is inversion-invariant
    CHECK(r_lambda(-2.0) == 1.25);
    CHECK(r_lambda(3.0) == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("assembled direction polynomials reproduce the stored form exactly") {
    const auto chart = make_box({17, 17}, 0.1, {0.0, 0.0});
    const auto c = compact_kink(chart, 2);
    double worst = 0.0;
    for (std::size_t pt = 0; pt < c.points(); pt += 13)
        for (int d = 0; d < c.dirs(); ++d) {
            const LaurentMatrixPoly p = c.assemble_poly(pt, d);
            CHECK(p.degree == 1);
            for (double l : {1.0, 2.0, -0.5})
                worst = std::max(worst, fnorm(eval(p, l) - c.alpha(pt, d, l)));
        }
    CHECK(worst == 0.0);
    CHECK_THROWS_AS(c.alpha(0, 0, 0.0), ConfigError);
}

TEST_CASE("coefficient-level loop membership: fixtures pass, parity breaks fail") {
    const auto chart = make_box({17, 17}, 0.1, {0.0, 0.0});
    const auto c = compact_kink(chart, 1);
    const auto spec = c.make_spec();

    LaurentMatrixPoly p = c.assemble_poly(123, 0);
    const TwistReport ok = is_twisted(p, spec, 1e-12);
    CHECK(ok.pass);
    CHECK(ok.residual == 0.0);

    // an even-parity bump on an odd coefficient must be caught
    p.coeff(1)(0, 1) += 0.01;
    p.coeff(1)(1, 0) -= 0.01;
    const TwistReport bad = is_twisted(p, spec, 1e-12);
    CHECK_FALSE(bad.pass);
    CHECK(bad.residual > 1e-3);
}

TEST_CASE("connection containers round-trip bit-exactly") {
    const auto dir = scratch_dir();
    const auto chart = make_box({9, 11}, 0.07, {0.25, -0.5});
    const auto c = compact_kink(chart, 2);
    const std::string path = (dir / "kink.rfc").string();
    write_connection(path, c);
    const ConnectionField r = read_connection(path);
    CHECK(r.family == c.family);
    CHECK(r.n == c.n);
    CHECK(r.k == c.k);
    CHECK(r.m == c.m);
    CHECK(r.hyperbolic == c.hyperbolic);
    CHECK(r.chart.counts == c.chart.counts);
    CHECK(r.chart.spacing == c.chart.spacing);
    CHECK(r.chart.origin == c.chart.origin);
    CHECK(r.raw() == c.raw());
}

TEST_CASE("frame containers round-trip bit-exactly") {
    const auto dir = scratch_dir();
    const auto chart = make_box({9, 9}, 0.05, {0.0, 0.0});
    const auto c = compact_kink(chart, 1);
    IntegrateOptions opts;
    opts.substeps = 2;
    const FrameField f = integrate_frame(c, 2.0, {0, 1}, opts);
    const std::string path = (dir / "kink.rff").string();
    write_frame(path, f, c.family, c.n, c.k, c.hyperbolic);
    const FrameField r = read_frame(path);
    CHECK(r.m == f.m);
    CHECK(r.lambda == f.lambda);
    CHECK(r.chart.counts == f.chart.counts);
    CHECK(r.raw() == f.raw());
}

TEST_CASE("container failure paths raise io errors") {
    const auto dir = scratch_dir();
    CHECK_THROWS_AS(read_connection((dir / "missing.rfc").string()), IoError);
    CHECK_THROWS_AS(read_frame((dir / "missing.rff").string()), IoError);

    const std::string junk = (dir / "junk.rfc").string();
    std::ofstream(junk) << "this is not a container";
    CHECK_THROWS_AS(read_connection(junk), IoError);

    // magic of the other container kind is refused
    const auto chart = make_box({9, 9}, 0.05, {0.0, 0.0});
    const auto c = compact_kink(chart, 1);
    const std::string cpath = (dir / "conn.rfc").string();
    write_connection(cpath, c);
    CHECK_THROWS_AS(read_frame(cpath), IoError);

    CHECK_THROWS_AS(write_connection("/nonexistent_dir_zz/c.rfc", c), IoError);
}

TEST_CASE("first-derivative stencils converge at design order") {
    auto worst_errors = [](double h) {
        const auto g = make_box({65, 65}, h, {0.0, 0.0});
        MatField f = [&](std::size_t pt) {
            const auto idx = g.unflat(pt);
            Mat v(1, 1);
            v(0, 0) = std::sin(g.coord(0, idx[0])) * std::cos(2.0 * g.coord(1, idx[1]));
            return v;
        };
        double central = 0.0, rich = 0.0, boundary = 0.0;
        for (int i = 2; i < 63; ++i)
            for (int j = 2; j < 63; ++j) {
                const double ref =
                    std::cos(g.coord(0, i)) * std::cos(2.0 * g.coord(1, j));
                central = std::max(
                    central, std::abs(fd_d1(g, f, {i, j}, 0)(0, 0) - ref));
                rich = std::max(
                    rich, std::abs(fd_d1_rich(g, f, {i, j}, 0)(0, 0) - ref));
            }
        for (int j = 0; j < 65; ++j) {
            const double ref = std::cos(2.0 * g.coord(1, j));
            boundary = std::max(
                boundary, std::abs(fd_d1(g, f, {0, j}, 0)(0, 0) - ref));
        }
        return std::array<double, 3>{central, rich, boundary};
    };
    const auto e1 = worst_errors(0.05);
    const auto e2 = worst_errors(0.025);
    CHECK(e1[0] < 1e-3);
    CHECK(e1[1] < 1e-6);
    CHECK(e1[2] < 2e-3);
    CHECK(e1[0] / e2[0] > 3.4);   // second order, central
    CHECK(e1[1] / e2[1] > 12.0);  // fourth order after extrapolation
    CHECK(e1[2] / e2[2] > 3.4);   // second order, one-sided
}

TEST_CASE("second-derivative stencils: diagonal and mixed") {
    const auto g = make_box({33, 33}, 0.05, {0.0, 0.0});
    MatField f = [&](std::size_t pt) {
        const auto idx = g.unflat(pt);
        Mat v(1, 1);
        v(0, 0) = std::sin(g.coord(0, idx[0])) * std::cos(2.0 * g.coord(1, idx[1]));
        return v;
    };
    double diag = 0.0, mixed = 0.0;
    for (int i = 2; i <= 30; ++i)
        for (int j = 2; j <= 30; ++j) {
            const double x = g.coord(0, i), y = g.coord(1, j);
            diag = std::max(diag, std::abs(fd_d2_rich(g, f, {i, j}, 0, 0)(0, 0) +
                                           std::sin(x) * std::cos(2.0 * y)));
            // the mixed path assembles its four shifted samples into a fresh
            // matrix before they go out of scope; this guards that it stays an
            // honest cross stencil
            mixed = std::max(mixed, std::abs(fd_d2_rich(g, f, {i, j}, 0, 1)(0, 0) +
                                             2.0 * std::cos(x) * std::sin(2.0 * y)));
        }
    CHECK(diag < 1e-6);
    CHECK(mixed < 1e-4);
}

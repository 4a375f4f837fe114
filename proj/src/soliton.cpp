#include "reflow/soliton.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include "reflow/rng.hpp"

namespace reflow {

namespace {

Vec unit2(int i) {
    Vec e = Vec::Zero(2);
    e(i) = 1.0;
    return e;
}

Vec grid_x(const GridChart& g, std::size_t pt) {
    const std::vector<double> p = g.point(g.unflat(pt));
    return Eigen::Map<const Vec>(p.data(), static_cast<Eigen::Index>(p.size()));
}

void require_2d(const GridChart& chart, const char* who) {
    chart.validate();
    if (chart.dim() != 2)
        throw ConfigError(std::string(who) + ": chart must be 2-dimensional");
}

Mat plane_rotator(int m) {
    // so(k) generator acting on the first two codimension columns (rows 2,3
    // for n = 2)
    Mat G = Mat::Zero(m, m);
    G(2, 3) = 1.0;
    G(3, 2) = -1.0;
    return G;
}

} // namespace

ConnectionField compact_kink(const GridChart& chart, int k, const KinkParams& p,
                             int column) {
    require_2d(chart, "compact_kink");
    if (k < 1 || column < 0 || column >= k)
        throw ConfigError("compact_kink: bad codimension column");
    const SymmetricPairSpec spec = build_space_form_pair(2, k, false);
    ConnectionField c(Family::SpaceForm, 2, k, false, spec.m, chart);

    const double A = p.amplitude, M = 2.0 * A;
    const double ch = std::cosh(p.tilt), sh = std::sinh(p.tilt);
    Mat R = Mat::Zero(spec.m, spec.m);
    R(0, 1) = 1.0;
    R(1, 0) = -1.0;

    for (std::size_t pt = 0; pt < c.points(); ++pt) {
        const Vec x = grid_x(chart, pt);
        const double z = M * (x(1) * ch + x(0) * sh) + p.offset;
        const double se = 1.0 / std::cosh(z), ta = std::tanh(z);
        c.b(pt, 0) = sf_column(spec, A * se * unit2(0), column);
        c.b(pt, 1) = sf_column(spec, A * ta * unit2(1), column);
        c.c(pt, 0) = sf_tangent(spec, -A * ta * unit2(0));
        c.c(pt, 1) = sf_tangent(spec, A * se * unit2(1));
        c.a(pt, 0) = (-M * ch * se) * R;
        c.a(pt, 1) = (-M * sh * se) * R;
    }
    return c;
}

ConnectionField hyperbolic_kink(const GridChart& chart, int k, const KinkParams& p,
                                int column) {
    require_2d(chart, "hyperbolic_kink");
    if (k < 1 || column < 0 || column >= k)
        throw ConfigError("hyperbolic_kink: bad codimension column");
    const SymmetricPairSpec spec = build_space_form_pair(2, k, true);
    ConnectionField c(Family::SpaceForm, 2, k, true, spec.m, chart);

    const double A = p.amplitude, M = 2.0 * A;
    const double sn = std::sin(p.tilt), cs = std::cos(p.tilt);
    Mat R = Mat::Zero(spec.m, spec.m);
    R(0, 1) = 1.0;
    R(1, 0) = -1.0;

    for (std::size_t pt = 0; pt < c.points(); ++pt) {
        const Vec x = grid_x(chart, pt);
        const double w = M * (x(0) * sn + x(1) * cs) + p.offset;
        if (w <= 0.0)
            throw ConfigError("hyperbolic_kink: profile argument not positive");
        const double csch = 1.0 / std::sinh(w), coth = std::cosh(w) / std::sinh(w);
        c.c(pt, 0) = sf_tangent(spec, A * coth * unit2(0));
        c.c(pt, 1) = sf_tangent(spec, A * csch * unit2(1));
        c.b(pt, 0) = sf_column(spec, A * csch * unit2(0), column);
        c.b(pt, 1) = sf_column(spec, A * coth * unit2(1), column);
        c.a(pt, 0) = (-M * cs * csch) * R;
        c.a(pt, 1) = (M * sn * csch) * R;
    }
    return c;
}

ConnectionField gauge_normal_rotation(const ConnectionField& c, double gx,
                                      double gy) {
    if (c.family != Family::SpaceForm || c.k < 2)
        throw ConfigError("gauge_normal_rotation: needs a space-form pair with k >= 2");
    const Mat G = plane_rotator(c.m);
    ConnectionField out = c;
    for (std::size_t pt = 0; pt < c.points(); ++pt) {
        const Vec x = grid_x(c.chart, pt);
        const double phi = gx * x(0) + gy * x(1);
        Mat g = Mat::Identity(c.m, c.m);
        g(2, 2) = std::cos(phi);
        g(2, 3) = std::sin(phi);
        g(3, 2) = -std::sin(phi);
        g(3, 3) = std::cos(phi);
        const Mat gi = g.transpose();
        const double dphi[2] = {gx, gy};
        for (int dir = 0; dir < c.dirs(); ++dir) {
            out.a(pt, dir) = gi * c.a(pt, dir) * g + dphi[dir] * G;
            out.b(pt, dir) = gi * c.b(pt, dir) * g;
            out.c(pt, dir) = gi * c.c(pt, dir) * g;
        }
    }
    return out;
}

std::vector<Mat> polar_generators(const SymmetricPairSpec& spec, unsigned seed) {
    const SubspaceBasis mm = subspace_basis(spec, Part::MM);
    if (mm.dim() < 2)
        throw ConfigError("polar_generators: doubly-odd slot is too small");
    Rng rng(seed);
    const double m1 = 0.05 + 0.15 * rng.uniform();
    const double m2 = 0.05 + 0.1 * rng.uniform();
    auto unitize = [](Mat X) {
        return Mat(X / std::sqrt(std::abs(trace_form(X, X))));
    };
    std::vector<Mat> gens;
    gens.push_back(0.35 * unitize(mm.mats[0] + m1 * mm.mats[1]));
    gens.push_back(0.30 * unitize(mm.mats[1] - m2 * mm.mats[0]));
    return gens;
}

ConnectionField polar_fixture(const SymmetricPairSpec& spec, const GridChart& chart,
                              unsigned seed) {
    require_2d(chart, "polar_fixture");
    const std::vector<Mat> gens = polar_generators(spec, seed);
    ConnectionField c(spec.family, spec.n, spec.k, spec.hyperbolic, spec.m, chart);
    for (std::size_t pt = 0; pt < c.points(); ++pt) {
        const Vec x = grid_x(chart, pt);
        const Mat E2 = Mat(x(1) * gens[1]).exp();
        const Mat E2i = Mat(-x(1) * gens[1]).exp();
        const Mat alpha1 = E2i * gens[0] * E2;
        const FourComponents parts = decompose(alpha1, spec);
        c.a(pt, 0) = parts.pp;
        c.c(pt, 0) = 0.5 * parts.mm;
        c.c(pt, 1) = 0.5 * gens[1];
    }
    return c;
}

Mat polar_frame_at(const std::vector<Mat>& gens, const Vec& x) {
    return Mat(x(0) * gens[0]).exp() * Mat(x(1) * gens[1]).exp();
}

ConnectionField shear_flat_fixture(const GridChart& chart) {
    require_2d(chart, "shear_flat_fixture");
    const SymmetricPairSpec spec = build_space_form_pair(2, 1, false);
    ConnectionField c(Family::SpaceForm, 2, 1, false, spec.m, chart);
    for (std::size_t pt = 0; pt < c.points(); ++pt) {
        const Vec x = grid_x(chart, pt);
        c.c(pt, 0) = sf_tangent(spec, unit2(0));
        c.c(pt, 1) = (0.4 * x(0) + 1.1) * sf_tangent(spec, unit2(1));
    }
    return c;
}

ConnectionField round_control_fixture(const GridChart& chart) {
    require_2d(chart, "round_control_fixture");
    const SymmetricPairSpec spec = build_space_form_pair(2, 1, false);
    ConnectionField c(Family::SpaceForm, 2, 1, false, spec.m, chart);
    for (std::size_t pt = 0; pt < c.points(); ++pt) {
        const Vec x = grid_x(chart, pt);
        const double theta = 0.25 * x(0) + 0.8;
        c.c(pt, 0) = 0.25 * sf_tangent(spec, unit2(0));
        c.c(pt, 1) = 0.25 * std::sin(theta) * sf_tangent(spec, unit2(1));
    }
    return c;
}

void plant_mc_defect(ConnectionField& c, double size) {
    if (c.family != Family::SpaceForm)
        throw ConfigError("plant_mc_defect: space-form fixtures only");
    const SymmetricPairSpec spec = c.make_spec();
    const Mat bump = size * sf_column(spec, unit2(1), 0);
    for (std::size_t pt = 0; pt < c.points(); ++pt) c.b(pt, 0) += bump;
}

void plant_normal_defect(ConnectionField& c, double size) {
    if (c.family != Family::SpaceForm || c.k < 2)
        throw ConfigError("plant_normal_defect: needs a space-form pair with k >= 2");
    const SymmetricPairSpec spec = c.make_spec();
    const Mat bump = size * sf_column(spec, unit2(1), 1);
    for (std::size_t pt = 0; pt < c.points(); ++pt) c.b(pt, 0) += bump;
}

} // namespace reflow

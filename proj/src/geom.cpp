#include "reflow/geom.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <limits>

namespace reflow {

namespace {

double fam_sign(bool hyperbolic) { return hyperbolic ? -1.0 : 1.0; }

bool inside(const std::vector<int>& idx, const std::vector<int>& counts, int margin) {
    for (std::size_t a = 0; a < idx.size(); ++a)
        if (idx[a] < margin || idx[a] > counts[a] - 1 - margin) return false;
    return true;
}

} // namespace

ProjectionField::ProjectionField(int m_, bool projector_, GridChart chart_)
    : m(m_), projector(projector_), chart(std::move(chart_)) {
    chart.validate();
    buf.assign(chart.size() * sz(), 0.0);
}

ProjectionField project_UK(const FrameField& f, const SymmetricPairSpec& spec) {
    if (spec.lagrangian()) {
        ProjectionField p(f.m, true, f.chart);
        const int n = spec.n;
        for (std::size_t pt = 0; pt < f.chart.size(); ++pt) {
            const Mat F = f.F(pt);
            const Vec u = F.col(n);
            const Vec v = F.col(2 * n + 1);
            const Mat span = u * u.transpose() + v * v.transpose();
            p.pi(pt) = spec.hyperbolic ? Mat(-span * spec.S) : span;
        }
        return p;
    }
    ProjectionField p(f.m, false, f.chart);
    for (std::size_t pt = 0; pt < f.chart.size(); ++pt)
        p.v(pt) = f.F(pt).col(f.m - 1);
    return p;
}

double projection_invariant_residual(const ProjectionField& p,
                                     const SymmetricPairSpec& spec) {
    double worst = 0.0;
    for (std::size_t pt = 0; pt < p.chart.size(); ++pt) {
        double r;
        if (p.projector) {
            const Mat pi = p.pi(pt);
            r = fnorm(pi * pi - pi);
            r = std::max(r, std::abs(pi.trace() - 2.0));
            r = std::max(r, fnorm(pi * spec.J0 - spec.J0 * pi));
        } else {
            const Vec v = p.v(pt);
            r = std::abs(v.dot(spec.S * v) - spec.signature(spec.m - 1));
        }
        worst = std::max(worst, r);
    }
    return worst;
}

double containment_residual(const FrameField& f, int expect_dim) {
    const std::size_t N = f.chart.size();
    Mat cloud(static_cast<Eigen::Index>(N), f.m);
    for (std::size_t pt = 0; pt < N; ++pt)
        cloud.row(static_cast<Eigen::Index>(pt)) = f.F(pt).col(f.m - 1).transpose();
    Eigen::BDCSVD<Mat> svd(cloud);
    const Vec s = svd.singularValues();
    if (expect_dim >= s.size() || s(0) == 0.0) return 0.0;
    return s(expect_dim) / s(0);
}

MetricField::MetricField(int dim_, GridChart chart_)
    : dim(dim_), chart(std::move(chart_)) {
    chart.validate();
    buf.assign(chart.size() * static_cast<std::size_t>(dim) * dim, 0.0);
}

MetricField induced_metric(const ConnectionField& c, double lambda) {
    if (lambda == 0.0) throw ConfigError("induced_metric: lambda must be nonzero");
    MetricField g(c.dirs(), c.chart);
    const double ll = lambda + 1.0 / lambda;
    const double w = fam_sign(c.hyperbolic) * ll * ll;
    for (std::size_t pt = 0; pt < c.points(); ++pt)
        for (int i = 0; i < c.dirs(); ++i)
            for (int j = 0; j <= i; ++j) {
                const double v = w * trace_form(c.c(pt, i), c.c(pt, j));
                g.g(pt)(i, j) = v;
                g.g(pt)(j, i) = v;
            }
    return g;
}

MetricField asymptotic_metric(const ConnectionField& c) {
    MetricField g(c.dirs(), c.chart);
    for (std::size_t pt = 0; pt < c.points(); ++pt)
        for (int i = 0; i < c.dirs(); ++i)
            for (int j = 0; j <= i; ++j) {
                const double v =
                    trace_form(c.beta_inf(pt, i), c.beta_inf(pt, j));
                g.g(pt)(i, j) = v;
                g.g(pt)(j, i) = v;
            }
    return g;
}

double metric_scaling_residual(const ConnectionField& c, double lambda) {
    const MetricField gl = induced_metric(c, lambda);
    const MetricField g1 = induced_metric(c, 1.0);
    const double R = r_lambda(lambda);
    double worst = 0.0;
    for (std::size_t pt = 0; pt < c.points(); ++pt)
        worst = std::max(worst,
                         (gl.g(pt) - R * R * g1.g(pt)).cwiseAbs().maxCoeff());
    return worst;
}

bool metric_nondegenerate(const MetricField& g, double rel_tol) {
    double scale = 0.0;
    for (std::size_t pt = 0; pt < g.chart.size(); ++pt)
        scale = std::max(scale, g.g(pt).cwiseAbs().maxCoeff());
    if (scale == 0.0) return false;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t pt = 0; pt < g.chart.size(); ++pt)
        worst = std::min(worst, std::abs(Mat(g.g(pt)).determinant()) /
                                    std::pow(scale, g.dim));
    return worst >= rel_tol;
}

namespace {

struct ChristoffelField {
    int dim;
    GridChart chart;
    std::vector<double> buf;
    double& G(std::size_t pt, int l, int i, int j) {
        return buf[((pt * dim + l) * static_cast<std::size_t>(dim) + i) * dim + j];
    }
    double G(std::size_t pt, int l, int i, int j) const {
        return buf[((pt * dim + l) * static_cast<std::size_t>(dim) + i) * dim + j];
    }
};

ChristoffelField christoffels(const MetricField& g) {
    const int d = g.dim;
    ChristoffelField C{d, g.chart,
                      std::vector<double>(g.chart.size() * d * d * d, 0.0)};
    const MatField gf = [&g](std::size_t pt) { return Mat(g.g(pt)); };
    for (std::size_t pt = 0; pt < g.chart.size(); ++pt) {
        const std::vector<int> idx = g.chart.unflat(pt);
        std::vector<Mat> dg(static_cast<std::size_t>(d));
        for (int a = 0; a < d; ++a)
            dg[static_cast<std::size_t>(a)] = fd_d1_auto(g.chart, gf, idx, a);
        const Mat ginv = Mat(g.g(pt)).inverse();
        for (int l = 0; l < d; ++l)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j <= i; ++j) {
                    double s = 0.0;
                    for (int t = 0; t < d; ++t)
                        s += ginv(l, t) * 0.5 *
                             (dg[static_cast<std::size_t>(i)](j, t) +
                              dg[static_cast<std::size_t>(j)](i, t) -
                              dg[static_cast<std::size_t>(t)](i, j));
                    C.G(pt, l, i, j) = s;
                    C.G(pt, l, j, i) = s;
                }
    }
    return C;
}

// R^l_kij at an interior point (margin 4), curvature convention fixed so that
// the unit round metric gives K = +1.
double riemann_component(const ChristoffelField& C, const std::vector<int>& idx,
                         std::size_t pt, int l, int k, int i, int j,
                         const std::vector<MatField>& gamma_fields) {
    const Mat dGl_i =
        fd_d1_rich(C.chart, gamma_fields[static_cast<std::size_t>(l)], idx, i);
    const Mat dGl_j =
        fd_d1_rich(C.chart, gamma_fields[static_cast<std::size_t>(l)], idx, j);
    double r = dGl_i(j, k) - dGl_j(i, k);
    for (int m = 0; m < C.dim; ++m)
        r += C.G(pt, l, i, m) * C.G(pt, m, j, k) -
             C.G(pt, l, j, m) * C.G(pt, m, i, k);
    return r;
}

std::vector<MatField> gamma_fields_of(const ChristoffelField& C) {
    std::vector<MatField> fields;
    for (int l = 0; l < C.dim; ++l)
        fields.emplace_back([&C, l](std::size_t pt) {
            Mat M(C.dim, C.dim);
            for (int i = 0; i < C.dim; ++i)
                for (int j = 0; j < C.dim; ++j) M(i, j) = C.G(pt, l, i, j);
            return M;
        });
    return fields;
}

} // namespace

MetricFlatnessReport flat_metric_residual(const MetricField& g) {
    const int d = g.dim;
    const ChristoffelField C = christoffels(g);
    const std::vector<MatField> gf = gamma_fields_of(C);
    MetricFlatnessReport rep;
    for (std::size_t pt = 0; pt < g.chart.size(); ++pt) {
        const std::vector<int> idx = g.chart.unflat(pt);
        if (!inside(idx, g.chart.counts, 4)) continue;
        for (int l = 0; l < d; ++l)
            for (int k = 0; k < d; ++k)
                for (int i = 0; i < d; ++i)
                    for (int j = i + 1; j < d; ++j) {
                        const double r = std::abs(
                            riemann_component(C, idx, pt, l, k, i, j, gf));
                        if (r > rep.worst) {
                            rep.worst = r;
                            rep.worst_point = pt;
                        }
                    }
    }
    return rep;
}

KStats metric_curvature_stats(const MetricField& g) {
    if (g.dim != 2)
        throw ConfigError("metric_curvature_stats: two-dimensional charts only");
    const ChristoffelField C = christoffels(g);
    const std::vector<MatField> gf = gamma_fields_of(C);
    KStats ks;
    ks.min = std::numeric_limits<double>::infinity();
    ks.max = -std::numeric_limits<double>::infinity();
    double sum = 0.0, sum2 = 0.0;
    std::size_t count = 0;
    for (std::size_t pt = 0; pt < g.chart.size(); ++pt) {
        const std::vector<int> idx = g.chart.unflat(pt);
        if (!inside(idx, g.chart.counts, 4)) continue;
        const Mat G = g.g(pt);
        const double det = G(0, 0) * G(1, 1) - G(0, 1) * G(1, 0);
        double K = 0.0;
        for (int l = 0; l < 2; ++l)
            K += G(0, l) * riemann_component(C, idx, pt, l, 1, 0, 1, gf);
        K /= det;
        sum += K;
        sum2 += K * K;
        ks.min = std::min(ks.min, K);
        ks.max = std::max(ks.max, K);
        ++count;
    }
    if (count == 0) throw ConfigError("metric_curvature_stats: chart too small");
    ks.mean = sum / static_cast<double>(count);
    ks.dev = std::sqrt(std::max(0.0, sum2 / static_cast<double>(count) -
                                          ks.mean * ks.mean));
    return ks;
}

SecondFundamentalForm::SecondFundamentalForm(int n_, int k_, GridChart chart_)
    : n(n_), k(k_), chart(std::move(chart_)) {
    chart.validate();
    buf.assign(chart.size() * static_cast<std::size_t>(k) * n * n, 0.0);
}

SecondFundamentalForm second_fundamental_form_alg(const ConnectionField& c,
                                                  double lambda) {
    if (c.family != Family::SpaceForm)
        throw ConfigError("second_fundamental_form: first family only");
    if (lambda == 0.0)
        throw ConfigError("second_fundamental_form: lambda must be nonzero");
    SecondFundamentalForm ii(c.dirs(), c.k, c.chart);
    const double w = lambda * lambda - 1.0 / (lambda * lambda);
    for (std::size_t pt = 0; pt < c.points(); ++pt)
        for (int i = 0; i < c.dirs(); ++i)
            for (int j = 0; j <= i; ++j) {
                const Vec col =
                    0.5 * w *
                    (bracket(c.b(pt, i), c.c(pt, j)) +
                     bracket(c.b(pt, j), c.c(pt, i)))
                        .col(c.m - 1);
                for (int s = 0; s < c.k; ++s) {
                    ii.at(pt, s, i, j) = col(c.n + s);
                    ii.at(pt, s, j, i) = col(c.n + s);
                }
            }
    return ii;
}

SecondFundamentalForm second_fundamental_form_num(const ConnectionField& c,
                                                  const FrameField& f) {
    if (c.family != Family::SpaceForm)
        throw ConfigError("second_fundamental_form: first family only");
    const SymmetricPairSpec spec = c.make_spec();
    SecondFundamentalForm ii(c.dirs(), c.k, c.chart);
    const MatField pos = [&f](std::size_t pt) {
        return Mat(f.F(pt).col(f.m - 1));
    };
    for (std::size_t pt = 0; pt < c.points(); ++pt) {
        const std::vector<int> idx = c.chart.unflat(pt);
        if (!inside(idx, c.chart.counts, 2)) continue;

        // frame-translated codimension directions, re-orthonormalised in the
        // S pairing to scrub integration drift
        std::vector<Vec> N;
        for (int s = 0; s < c.k; ++s) {
            Vec Ns = f.F(pt).col(c.n + s);
            for (const Vec& Nt : N) Ns -= Nt.dot(spec.S * Ns) * Nt;
            Ns /= std::sqrt(std::abs(Ns.dot(spec.S * Ns)));
            N.push_back(Ns);
        }
        for (int i = 0; i < c.dirs(); ++i)
            for (int j = 0; j <= i; ++j) {
                const Vec D = fd_d2_rich(c.chart, pos, idx, i, j).col(0);
                for (int s = 0; s < c.k; ++s) {
                    const double v = D.dot(spec.S * N[static_cast<std::size_t>(s)]);
                    ii.at(pt, s, i, j) = v;
                    ii.at(pt, s, j, i) = v;
                }
            }
    }
    return ii;
}

double ii_compare(const SecondFundamentalForm& x, const SecondFundamentalForm& y,
                  int margin) {
    double worst = 0.0;
    for (std::size_t pt = 0; pt < x.chart.size(); ++pt) {
        if (!inside(x.chart.unflat(pt), x.chart.counts, margin)) continue;
        for (int s = 0; s < x.k; ++s)
            for (int i = 0; i < x.n; ++i)
                for (int j = 0; j < x.n; ++j)
                    worst = std::max(
                        worst, std::abs(x.at(pt, s, i, j) - y.at(pt, s, i, j)));
    }
    return worst;
}

double ii_max(const SecondFundamentalForm& x, int margin) {
    double worst = 0.0;
    for (std::size_t pt = 0; pt < x.chart.size(); ++pt) {
        if (!inside(x.chart.unflat(pt), x.chart.counts, margin)) continue;
        for (int s = 0; s < x.k; ++s)
            for (int i = 0; i < x.n; ++i)
                for (int j = 0; j < x.n; ++j)
                    worst = std::max(worst, std::abs(x.at(pt, s, i, j)));
    }
    return worst;
}

SectionalReport gauss_curvature_check(const ConnectionField& c, double lambda,
                                      double kappa) {
    const SymmetricPairSpec spec = c.make_spec();
    const SecondFundamentalForm ii = second_fundamental_form_alg(c, lambda);
    const MetricField g = induced_metric(c, lambda);
    const double fam = fam_sign(c.hyperbolic);
    const double R = r_lambda(lambda);

    SectionalReport rep;
    rep.expected = fam * kappa / (R * R);
    double sum = 0.0, sum2 = 0.0;
    std::size_t count = 0;
    for (std::size_t pt = 0; pt < c.points(); ++pt) {
        const Mat G = g.g(pt);
        for (int i = 0; i < c.dirs(); ++i)
            for (int j = i + 1; j < c.dirs(); ++j) {
                const double denom = G(i, i) * G(j, j) - G(i, j) * G(i, j);
                if (std::abs(denom) < 1e-14) continue;
                double K = fam * kappa;
                for (int s = 0; s < c.k; ++s)
                    K += spec.signature(c.n + s) *
                         (ii.at(pt, s, i, i) * ii.at(pt, s, j, j) -
                          ii.at(pt, s, i, j) * ii.at(pt, s, i, j)) /
                         denom;
                sum += K;
                sum2 += K * K;
                ++count;
                rep.worst_err = std::max(rep.worst_err, std::abs(K - rep.expected));
            }
    }
    if (count == 0)
        throw ConfigError("gauss_curvature_check: metric is degenerate everywhere");
    rep.mean = sum / static_cast<double>(count);
    rep.dev = std::sqrt(std::max(0.0, sum2 / static_cast<double>(count) -
                                          rep.mean * rep.mean));
    return rep;
}

NormalFlatnessReport normal_bundle_flatness(const ConnectionField& c,
                                            double lambda) {
    if (c.family != Family::SpaceForm || c.k < 2)
        throw ConfigError("normal_bundle_flatness: needs codimension at least two");
    const SecondFundamentalForm ii = second_fundamental_form_alg(c, lambda);
    const MetricField g = induced_metric(c, lambda);
    const int n = c.dirs();

    NormalFlatnessReport rep;
    for (std::size_t pt = 0; pt < c.points(); ++pt) {
        Eigen::JacobiSVD<Mat> svd(Mat(g.g(pt)),
                                  Eigen::ComputeFullU | Eigen::ComputeFullV);
        const Vec sv = svd.singularValues();
        Vec inv = Vec::Zero(sv.size());
        for (int t = 0; t < sv.size(); ++t)
            if (sv(t) > 1e-12 * sv(0)) inv(t) = 1.0 / sv(t);
        const Mat gpinv =
            svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();

        std::vector<Mat> shape;
        for (int s = 0; s < c.k; ++s) {
            Mat I2(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) I2(i, j) = ii.at(pt, s, i, j);
            shape.push_back(gpinv * I2);
        }
        for (int s = 0; s < c.k; ++s)
            for (int t = s + 1; t < c.k; ++t) {
                const double r = fnorm(bracket(shape[static_cast<std::size_t>(s)],
                                               shape[static_cast<std::size_t>(t)]));
                if (r > rep.worst) {
                    rep.worst = r;
                    rep.worst_point = pt;
                }
            }
    }
    return rep;
}

double lagrangian_residual(const ConnectionField& c, double lambda) {
    if (c.family != Family::LagrangianProjective)
        throw ConfigError("lagrangian_residual: second family only");
    const SymmetricPairSpec spec = c.make_spec();
    const Mat zeta = kahler_generator(spec);
    const double ll = lambda + 1.0 / lambda;
    double worst = 0.0;
    for (std::size_t pt = 0; pt < c.points(); ++pt)
        for (int i = 0; i < c.dirs(); ++i)
            for (int j = i + 1; j < c.dirs(); ++j)
                worst = std::max(
                    worst, std::abs(ll * ll *
                                    trace_form(bracket(zeta, Mat(c.c(pt, i))),
                                               Mat(c.c(pt, j)))));
    return worst;
}

double lagrangian_residual_fd(const ConnectionField& c, const FrameField& f) {
    if (c.family != Family::LagrangianProjective)
        throw ConfigError("lagrangian_residual_fd: second family only");
    const SymmetricPairSpec spec = c.make_spec();
    const Mat zeta = kahler_generator(spec);
    const ProjectionField p = project_UK(f, spec);
    const MatField pif = [&p](std::size_t pt) { return Mat(p.pi(pt)); };
    double worst = 0.0;
    for (std::size_t pt = 0; pt < c.points(); ++pt) {
        const std::vector<int> idx = c.chart.unflat(pt);
        if (!inside(idx, c.chart.counts, 2)) continue;
        const Mat F = f.F(pt);
        const Mat Finv = F.inverse();
        std::vector<Mat> X;
        for (int i = 0; i < c.dirs(); ++i)
            X.push_back(Finv * fd_d1_rich(c.chart, pif, idx, i) * F);
        for (int i = 0; i < c.dirs(); ++i)
            for (int j = i + 1; j < c.dirs(); ++j)
                worst = std::max(worst,
                                 std::abs(trace_form(bracket(zeta, X[static_cast<std::size_t>(i)]),
                                                     X[static_cast<std::size_t>(j)])));
    }
    return worst;
}

double curved_flat_residual(const ConnectionField& c) {
    double worst = 0.0;
    for (std::size_t pt = 0; pt < c.points(); ++pt)
        for (int i = 0; i < c.dirs(); ++i)
            for (int j = i + 1; j < c.dirs(); ++j)
                worst = std::max(
                    worst, fnorm(bracket(c.beta_inf(pt, i), c.beta_inf(pt, j))));
    return worst;
}

double asymptotic_deviation(const ConnectionField& c, double lambda) {
    if (lambda == 0.0)
        throw ConfigError("asymptotic_deviation: lambda must be nonzero");
    double worst = 0.0;
    for (std::size_t pt = 0; pt < c.points(); ++pt)
        for (int i = 0; i < c.dirs(); ++i)
            worst = std::max(worst, fnorm(c.c(pt, i) - c.b(pt, i)));
    return worst / (lambda * lambda);
}

Calibration calibrate(const ConnectionField& c) {
    Calibration cal;
    if (c.family == Family::LagrangianProjective) {
        const SymmetricPairSpec spec = c.make_spec();
        Mat pi0 = Mat::Zero(c.m, c.m);
        pi0(c.n, c.n) = 1.0;
        pi0(2 * c.n + 1, 2 * c.n + 1) = 1.0;
        const std::size_t pt0 = c.points() / 2;
        for (int dir = 0; dir < c.dirs(); ++dir) {
            const Mat X = c.c(pt0, dir);
            const double den =
                fam_sign(c.hyperbolic) * trace_form(X, X);
            if (std::abs(den) < 1e-14) continue;
            const Mat Y = bracket(X, pi0);
            cal.kappa0 = std::abs(0.5 * (Y * Y).trace() / den);
            break;
        }
    }
    const MetricField g1 = induced_metric(c, 1.0);
    if (c.dirs() == 2 && metric_nondegenerate(g1)) {
        cal.K1 = metric_curvature_stats(g1).mean;
        cal.kappa = cal.kappa0 * std::abs(cal.K1);
    } else {
        cal.degenerate = true;
        cal.K1 = std::numeric_limits<double>::quiet_NaN();
        cal.kappa = 1.0;
    }
    return cal;
}

GeometryRow full_report(const ConnectionField& c, double lambda,
                        const std::vector<double>& lambda_list) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    GeometryRow row;
    row.family = family_name(c.family);
    row.n = c.n;
    row.k = c.k;
    row.lambda = lambda;
    row.r_lambda = r_lambda(lambda);
    row.metric_scaling = metric_scaling_residual(c, lambda);

    row.sec_mean = nan;
    row.sec_dev = nan;
    const MetricField gl = induced_metric(c, lambda);
    if (c.dirs() == 2 && metric_nondegenerate(gl)) {
        const KStats ks = metric_curvature_stats(gl);
        row.sec_mean = ks.mean;
        row.sec_dev = ks.dev;
    }

    row.normal_comm = (c.family == Family::SpaceForm && c.k >= 2)
                          ? normal_bundle_flatness(c, lambda).worst
                          : nan;
    row.lagrangian = c.family == Family::LagrangianProjective
                         ? lagrangian_residual(c, lambda)
                         : nan;
    row.curved_flat = curved_flat_residual(c);

    const MetricField ga = asymptotic_metric(c);
    row.flat_metric =
        metric_nondegenerate(ga) ? flat_metric_residual(ga).worst : nan;

    row.asym_ratio = nan;
    for (double partner : lambda_list)
        if (std::abs(partner - 10.0 * lambda) <= 1e-9 * std::abs(10.0 * lambda)) {
            const double d10 = asymptotic_deviation(c, partner);
            if (d10 > 0.0)
                row.asym_ratio = asymptotic_deviation(c, lambda) / d10;
            break;
        }

    row.regularity = regularity_check(c).sigma_min;
    return row;
}

} // namespace reflow

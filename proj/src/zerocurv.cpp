#include "reflow/zerocurv.hpp"

#include <Eigen/SVD>

namespace reflow {

MCResidualReport mc_residual(const ConnectionField& c) {
    MCResidualReport rep;
    const GridChart& g = c.chart;
    const int d = g.dim();

    std::vector<MatField> aF, pF, qF;
    for (int dir = 0; dir < d; ++dir) {
        aF.emplace_back([&c, dir](std::size_t pt) { return Mat(c.a(pt, dir)); });
        pF.emplace_back(
            [&c, dir](std::size_t pt) { return Mat(c.b(pt, dir) + c.c(pt, dir)); });
        qF.emplace_back(
            [&c, dir](std::size_t pt) { return Mat(c.c(pt, dir) - c.b(pt, dir)); });
    }

    for (std::size_t pt = 0; pt < g.size(); ++pt) {
        const std::vector<int> idx = g.unflat(pt);
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) {
                const Mat ai = c.a(pt, i), aj = c.a(pt, j);
                const Mat pi = pF[static_cast<std::size_t>(i)](pt);
                const Mat pj = pF[static_cast<std::size_t>(j)](pt);
                const Mat qi = qF[static_cast<std::size_t>(i)](pt);
                const Mat qj = qF[static_cast<std::size_t>(j)](pt);

                std::array<double, 5> r{};
                r[4] = fnorm(bracket(pi, pj));
                r[0] = fnorm(bracket(qi, qj));
                r[3] = fnorm(fd_d1_auto(g, pF[static_cast<std::size_t>(j)], idx, i) -
                             fd_d1_auto(g, pF[static_cast<std::size_t>(i)], idx, j) +
                             bracket(ai, pj) - bracket(aj, pi));
                r[1] = fnorm(fd_d1_auto(g, qF[static_cast<std::size_t>(j)], idx, i) -
                             fd_d1_auto(g, qF[static_cast<std::size_t>(i)], idx, j) +
                             bracket(ai, qj) - bracket(aj, qi));
                r[2] = fnorm(fd_d1_auto(g, aF[static_cast<std::size_t>(j)], idx, i) -
                             fd_d1_auto(g, aF[static_cast<std::size_t>(i)], idx, j) +
                             bracket(ai, aj) + bracket(pi, qj) + bracket(qi, pj));

                for (int p = 0; p < 5; ++p) {
                    rep.by_power[static_cast<std::size_t>(p)] =
                        std::max(rep.by_power[static_cast<std::size_t>(p)], r[static_cast<std::size_t>(p)]);
                    if (r[static_cast<std::size_t>(p)] > rep.worst) {
                        rep.worst = r[static_cast<std::size_t>(p)];
                        rep.worst_power = p - 2;
                        rep.worst_point = pt;
                        rep.worst_i = i;
                        rep.worst_j = j;
                    }
                }
            }
    }
    return rep;
}

PointwiseMCReport mc_residual_at(const ConnectionField& c, double lambda) {
    PointwiseMCReport rep;
    const GridChart& g = c.chart;
    const int d = g.dim();
    std::vector<MatField> alphaF;
    for (int dir = 0; dir < d; ++dir)
        alphaF.emplace_back([&c, dir, lambda](std::size_t pt) {
            return c.alpha(pt, dir, lambda);
        });
    for (std::size_t pt = 0; pt < g.size(); ++pt) {
        const std::vector<int> idx = g.unflat(pt);
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) {
                const double r =
                    fnorm(fd_d1_auto(g, alphaF[static_cast<std::size_t>(j)], idx, i) -
                          fd_d1_auto(g, alphaF[static_cast<std::size_t>(i)], idx, j) +
                          bracket(c.alpha(pt, i, lambda), c.alpha(pt, j, lambda)));
                if (r > rep.worst) {
                    rep.worst = r;
                    rep.worst_point = pt;
                }
            }
    }
    return rep;
}

namespace {

void check_axis_order(const std::vector<int>& order, int d) {
    if (static_cast<int>(order.size()) != d)
        throw ConfigError("integrate_frame: axis order size does not match chart");
    std::vector<bool> seen(static_cast<std::size_t>(d), false);
    for (int a : order) {
        if (a < 0 || a >= d || seen[static_cast<std::size_t>(a)])
            throw ConfigError("integrate_frame: axis order is not a permutation");
        seen[static_cast<std::size_t>(a)] = true;
    }
}

} // namespace

FrameField integrate_frame(const ConnectionField& c, double lambda,
                           const std::vector<int>& axis_order,
                           const IntegrateOptions& opts) {
    if (lambda == 0.0) throw ConfigError("integrate_frame: lambda must be nonzero");
    const GridChart& g = c.chart;
    const int d = g.dim();
    check_axis_order(axis_order, d);
    if (opts.substeps < 1)
        throw ConfigError("integrate_frame: substeps must be positive");

    if (!opts.skip_mc_check) {
        const MCResidualReport mc = mc_residual(c);
        if (mc.worst > opts.mc_tol)
            throw VerificationError(
                "mc", "flatness residual " + std::to_string(mc.worst) +
                          " exceeds the integration gate " +
                          std::to_string(opts.mc_tol));
    }

    const SymmetricPairSpec spec = c.make_spec();
    FrameField f(c.m, lambda, g);
    f.F(0) = Mat::Identity(c.m, c.m);

    // Predecessor rule: decrement the last axis (in sweep order) with a positive
    // index.  Every predecessor has a smaller flat index, so one pass suffices.
    for (std::size_t pt = 1; pt < g.size(); ++pt) {
        std::vector<int> idx = g.unflat(pt);
        int astar = -1;
        for (int oi = d - 1; oi >= 0; --oi) {
            const int a = axis_order[static_cast<std::size_t>(oi)];
            if (idx[static_cast<std::size_t>(a)] > 0) {
                astar = a;
                break;
            }
        }
        idx[static_cast<std::size_t>(astar)] -= 1;
        const std::size_t pred = g.flat(idx);

        const Mat A0 = c.alpha(pred, astar, lambda);
        const Mat A1 = c.alpha(pt, astar, lambda);
        const double h = g.spacing[static_cast<std::size_t>(astar)];
        const double tau = h / opts.substeps;
        Mat F = f.F(pred);
        for (int s = 0; s < opts.substeps; ++s) {
            const double t0 = s * tau;
            auto A = [&](double t) { return Mat(A0 + (t / h) * (A1 - A0)); };
            const Mat Am = A(t0), Ah = A(t0 + 0.5 * tau), Ae = A(t0 + tau);
            const Mat k1 = F * Am;
            const Mat k2 = (F + 0.5 * tau * k1) * Ah;
            const Mat k3 = (F + 0.5 * tau * k2) * Ah;
            const Mat k4 = (F + tau * k3) * Ae;
            F += (tau / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        if (opts.retraction)
            F = 0.5 * (F + spec.S * F.inverse().transpose() * spec.S);
        f.F(pt) = F;
    }
    return f;
}

DriftReport frame_drift(const FrameField& f, const SymmetricPairSpec& spec) {
    DriftReport rep;
    for (std::size_t pt = 0; pt < f.chart.size(); ++pt) {
        const Mat F = f.F(pt);
        double r = fnorm(F.transpose() * spec.S * F - spec.S);
        if (spec.lagrangian()) r = std::max(r, fnorm(F * spec.J0 - spec.J0 * F));
        if (r > rep.worst) {
            rep.worst = r;
            rep.worst_point = pt;
        }
    }
    return rep;
}

double path_independence_residual(const ConnectionField& c, double lambda,
                                  const IntegrateOptions& opts) {
    const int d = c.chart.dim();
    std::vector<int> fwd(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) fwd[static_cast<std::size_t>(i)] = i;
    std::vector<int> rev(fwd.rbegin(), fwd.rend());
    const FrameField f1 = integrate_frame(c, lambda, fwd, opts);
    IntegrateOptions o2 = opts;
    o2.skip_mc_check = true;  // already gated once
    const FrameField f2 = integrate_frame(c, lambda, rev, o2);
    double worst = 0.0;
    for (std::size_t pt = 0; pt < c.points(); ++pt)
        worst = std::max(worst, fnorm(f1.F(pt) - f2.F(pt)));
    return worst;
}

double inversion_conjugation_residual(const FrameField& f_lambda,
                                      const FrameField& f_inverse,
                                      const SymmetricPairSpec& spec) {
    const Mat PQ = spec.P * spec.Q;
    double worst = 0.0;
    for (std::size_t pt = 0; pt < f_lambda.chart.size(); ++pt)
        worst = std::max(worst, fnorm(f_inverse.F(pt) - PQ * f_lambda.F(pt) * PQ));
    return worst;
}

double negation_conjugation_residual(const FrameField& f_lambda,
                                     const FrameField& f_negated,
                                     const SymmetricPairSpec& spec) {
    double worst = 0.0;
    for (std::size_t pt = 0; pt < f_lambda.chart.size(); ++pt)
        worst = std::max(worst,
                         fnorm(f_negated.F(pt) - spec.P * f_lambda.F(pt) * spec.P));
    return worst;
}

FixedPartAuditReport fixed_part_audit(const ConnectionField& c, const FrameField& f,
                                      const SymmetricPairSpec& spec) {
    FixedPartAuditReport rep;
    const GridChart& g = c.chart;
    const MatField frame = [&f](std::size_t pt) { return Mat(f.F(pt)); };
    for (std::size_t pt = 0; pt < g.size(); ++pt) {
        const std::vector<int> idx = g.unflat(pt);
        const Mat Finv = f.F(pt).inverse();
        for (int dir = 0; dir < g.dim(); ++dir) {
            // central differences only: their error expansion has odd
            // derivative orders, which stay in the odd components and drop
            // out of the doubly-even projection.  One-sided stencils mix in
            // even orders and would poison the comparison at h^3.
            if (idx[static_cast<std::size_t>(dir)] < 1 ||
                idx[static_cast<std::size_t>(dir)] >=
                    g.counts[static_cast<std::size_t>(dir)] - 1)
                continue;
            const Mat logd = Finv * fd_d1(g, frame, idx, dir);
            const double r =
                fnorm(project_part(logd, spec, Part::PP) - c.a(pt, dir));
            if (r > rep.worst) {
                rep.worst = r;
                rep.worst_point = pt;
                rep.worst_dir = dir;
            }
        }
    }
    return rep;
}

namespace {

// Commuting constant family for the geodesic-flat construction.  One direction
// is doubly odd; the remaining n-1 live in the mixed odd/even slot and are
// chosen pairwise commuting and orthogonal to the first, so that
// [alpha_i(l), alpha_j(l)] = 0 identically in l.
void vacuum_coefficients(const SymmetricPairSpec& spec, std::vector<Mat>& b_out,
                         std::vector<Mat>& c_out) {
    const int n = spec.n;
    const Mat Z = Mat::Zero(spec.m, spec.m);
    b_out.assign(static_cast<std::size_t>(n), Z);
    c_out.assign(static_cast<std::size_t>(n), Z);

    auto unitize = [](Mat& X) {
        const double t = std::abs(trace_form(X, X));
        X /= std::sqrt(t);
    };

    if (spec.family == Family::SpaceForm) {
        Vec e0 = Vec::Zero(n);
        e0(0) = 1.0;
        Mat c1 = sf_tangent(spec, e0);
        unitize(c1);
        c_out[0] = c1;
        for (int j = 1; j < n; ++j) {
            Vec u = Vec::Zero(n);
            u(j) = 1.0;
            Mat bj = sf_column(spec, u, j - 1);
            unitize(bj);
            b_out[static_cast<std::size_t>(j)] = bj;
        }
    } else {
        const int N = spec.n + 1;
        const Vec dvec = spec.signature.head(N);
        Mat B1 = Mat::Zero(N, N);
        B1(0, N - 1) = 1.0;
        B1(N - 1, 0) = dvec(0) * dvec(N - 1);
        Mat c1 = lag_embed_B(spec, B1);
        unitize(c1);
        c_out[0] = c1;
        for (int j = 1; j < n; ++j) {
            // Traceless diagonals with equal first and last entries commute
            // with B1 and with one another.
            Vec delta = Vec::Zero(N);
            delta(j) = 1.0;
            delta(0) = -0.5;
            delta(N - 1) = -0.5;
            Mat Bj = delta.asDiagonal();
            Mat bj = lag_embed_B(spec, Bj);
            unitize(bj);
            b_out[static_cast<std::size_t>(j)] = bj;
        }
    }
}

} // namespace

VacuumResult vacuum_solution(const SymmetricPairSpec& spec, const GridChart& chart,
                             unsigned seed) {
    chart.validate();
    if (chart.dim() != spec.n)
        throw ConfigError("vacuum_solution: chart dimension must equal n");

    const RankResult rr = rank_oracle(spec, 3, seed);
    if (spec.n > rr.rank) throw RankObstruction(spec.n, rr.rank);

    VacuumResult out{
        ConnectionField(spec.family, spec.n, spec.k, spec.hyperbolic, spec.m, chart),
        rr.rank,
        {},
        {}};
    vacuum_coefficients(spec, out.b_coeffs, out.c_coeffs);
    for (std::size_t pt = 0; pt < out.field.points(); ++pt)
        for (int dir = 0; dir < spec.n; ++dir) {
            out.field.b(pt, dir) = out.b_coeffs[static_cast<std::size_t>(dir)];
            out.field.c(pt, dir) = out.c_coeffs[static_cast<std::size_t>(dir)];
        }
    return out;
}

RegularityReport regularity_check(const ConnectionField& c) {
    RegularityReport rep;
    rep.sigma_min = std::numeric_limits<double>::infinity();
    const int d = c.dirs();
    Mat stack(d, c.m * c.m);
    for (std::size_t pt = 0; pt < c.points(); ++pt) {
        for (int dir = 0; dir < d; ++dir) {
            const Mat ci = c.c(pt, dir);
            stack.row(dir) = Eigen::Map<const Vec>(ci.data(), c.m * c.m).transpose();
        }
        Eigen::JacobiSVD<Mat> svd(stack);
        const double smin = svd.singularValues().tail(1)(0);
        if (smin < rep.sigma_min) {
            rep.sigma_min = smin;
            rep.worst_point = pt;
        }
    }
    return rep;
}

} // namespace reflow

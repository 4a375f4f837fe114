#include "reflow/pair.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace reflow {

Vec coords_against(const Mat& X, const std::vector<Mat>& basis) {
    if (basis.empty()) return Vec(0);
    const auto rows = basis[0].size();
    Mat A(rows, static_cast<Eigen::Index>(basis.size()));
    for (std::size_t j = 0; j < basis.size(); ++j)
        A.col(static_cast<Eigen::Index>(j)) =
            Eigen::Map<const Vec>(basis[j].data(), rows);
    Vec b = Eigen::Map<const Vec>(X.data(), rows);
    return A.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(b);
}

int span_rank(const std::vector<Mat>& mats, double tol) {
    if (mats.empty()) return 0;
    const auto rows = mats[0].size();
    Mat A(rows, static_cast<Eigen::Index>(mats.size()));
    for (std::size_t j = 0; j < mats.size(); ++j)
        A.col(static_cast<Eigen::Index>(j)) =
            Eigen::Map<const Vec>(mats[j].data(), rows);
    Eigen::JacobiSVD<Mat> svd(A);
    int r = 0;
    const double cut = tol * std::max(1.0, svd.singularValues()(0));
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > cut) ++r;
    return r;
}

std::string family_name(Family f) {
    return f == Family::SpaceForm ? "space_form" : "lagrangian";
}

double SymmetricPairSpec::ambient_residual(const Mat& X) const {
    double r = fnorm(X.transpose() * S + S * X);
    if (lagrangian()) {
        r = std::max(r, fnorm(X * J0 - J0 * X));
        r = std::max(r, std::abs((J0 * X).trace()));
    }
    return r;
}

SymmetricPairSpec build_space_form_pair(int n, int k, bool hyperbolic) {
    if (n < 2) throw ConfigError("space_form: n must be >= 2");
    if (k < 1) throw ConfigError("space_form: k must be >= 1");
    SymmetricPairSpec s;
    s.family = Family::SpaceForm;
    s.n = n;
    s.k = k;
    s.m = n + k + 1;
    s.hyperbolic = hyperbolic;
    s.P = Mat::Identity(s.m, s.m);
    for (int i = n; i < s.m; ++i) s.P(i, i) = -1.0;
    s.Q = Mat::Identity(s.m, s.m);
    s.Q(s.m - 1, s.m - 1) = -1.0;
    s.signature = Vec::Ones(s.m);
    if (hyperbolic) s.signature(s.m - 1) = -1.0;
    s.S = s.signature.asDiagonal();
    return s;
}

SymmetricPairSpec build_lagrangian_pair(int n, bool hyperbolic) {
    if (n < 2) throw ConfigError("lagrangian: n must be >= 2");
    SymmetricPairSpec s;
    s.family = Family::LagrangianProjective;
    s.n = n;
    s.k = n;
    const int N = n + 1;
    s.m = 2 * N;
    s.hyperbolic = hyperbolic;
    s.P = Mat::Identity(s.m, s.m);
    for (int i = N; i < s.m; ++i) s.P(i, i) = -1.0;
    s.Q = Mat::Identity(s.m, s.m);
    s.Q(n, n) = -1.0;
    s.Q(s.m - 1, s.m - 1) = -1.0;
    s.signature = Vec::Ones(s.m);
    if (hyperbolic) {
        s.signature(n) = -1.0;          // last entry of each complex block:
        s.signature(s.m - 1) = -1.0;    // S must commute with J0
    }
    s.S = s.signature.asDiagonal();
    s.J0 = Mat::Zero(s.m, s.m);
    for (int i = 0; i < N; ++i) {
        s.J0(i, N + i) = -1.0;
        s.J0(N + i, i) = 1.0;
    }
    return s;
}

const Mat& FourComponents::part(Part p) const {
    switch (p) {
        case Part::PP: return pp;
        case Part::PM: return pm;
        case Part::MP: return mp;
        default: return mm;
    }
}

FourComponents decompose(const Mat& X, const SymmetricPairSpec& spec,
                         double membership_tol) {
    if (X.rows() != spec.m || X.cols() != spec.m)
        throw ConfigError("decompose: wrong matrix size");
    const double res = spec.ambient_residual(X);
    if (res > membership_tol * std::max(1.0, fnorm(X)))
        throw MembershipError("decompose: input not in the ambient algebra", res);
    const Mat qq = spec.Q * X * spec.Q;
    const Mat pp_ = spec.P * X * spec.P;
    const Mat qp = spec.Q * pp_ * spec.Q;
    FourComponents c;
    c.pp = 0.25 * (X + qq + pp_ + qp);
    c.pm = 0.25 * (X + qq - pp_ - qp);
    c.mp = 0.25 * (X - qq + pp_ - qp);
    c.mm = 0.25 * (X - qq - pp_ + qp);
    return c;
}

Mat project_part(const Mat& X, const SymmetricPairSpec& spec, Part part) {
    const double e = (part == Part::PP || part == Part::PM) ? 1.0 : -1.0;
    const double d = (part == Part::PP || part == Part::MP) ? 1.0 : -1.0;
    return 0.25 * (X + e * spec.Q * X * spec.Q + d * spec.P * X * spec.P +
                   e * d * spec.Q * spec.P * X * spec.P * spec.Q);
}

double off_part_residual(const Mat& X, const SymmetricPairSpec& spec, Part part) {
    return fnorm(X - project_part(X, spec, part));
}

namespace {

// generator E_ij - (s_i s_j) E_ji of the form-skew algebra
Mat sf_gen(const SymmetricPairSpec& s, int i, int j) {
    Mat g = Mat::Zero(s.m, s.m);
    g(i, j) = 1.0;
    g(j, i) = -s.signature(i) * s.signature(j);
    return g;
}

void push_normalized(SubspaceBasis& b, const Mat& g) {
    const double f = trace_form(g, g);
    const double sgn = f >= 0 ? 1.0 : -1.0;
    b.mats.push_back(g / std::sqrt(std::abs(f)));
    b.form_sign.push_back(sgn);
}

} // namespace

SubspaceBasis subspace_basis(const SymmetricPairSpec& spec, Part part) {
    SubspaceBasis b;
    const int n = spec.n, k = spec.k, m = spec.m;
    if (spec.family == Family::SpaceForm) {
        switch (part) {
            case Part::PP:
                for (int i = 0; i < n; ++i)
                    for (int j = i + 1; j < n; ++j) push_normalized(b, sf_gen(spec, i, j));
                for (int i = n; i < n + k; ++i)
                    for (int j = i + 1; j < n + k; ++j) push_normalized(b, sf_gen(spec, i, j));
                break;
            case Part::PM:
                for (int j = 0; j < k; ++j)
                    for (int i = 0; i < n; ++i) push_normalized(b, sf_gen(spec, i, n + j));
                break;
            case Part::MP:
                for (int j = 0; j < k; ++j) push_normalized(b, sf_gen(spec, n + j, m - 1));
                break;
            case Part::MM:
                for (int i = 0; i < n; ++i) push_normalized(b, sf_gen(spec, i, m - 1));
                break;
        }
        return b;
    }
    // Lagrangian family, real model of the special-unitary algebra
    const int N = n + 1;
    const Vec d = spec.signature.head(N);
    auto embedA = [&](const Mat& A) { return lag_embed_A(spec, A); };
    auto embedB = [&](const Mat& B) { return lag_embed_B(spec, B); };
    switch (part) {
        case Part::PP:
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    Mat A = Mat::Zero(N, N);
                    A(i, j) = 1.0;
                    A(j, i) = -d(i) * d(j);
                    push_normalized(b, embedA(A));
                }
            break;
        case Part::MP:
            for (int i = 0; i < n; ++i) {
                Mat A = Mat::Zero(N, N);
                A(i, n) = 1.0;
                A(n, i) = -d(i) * d(n);
                push_normalized(b, embedA(A));
            }
            break;
        case Part::PM:
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    Mat B = Mat::Zero(N, N);
                    B(i, j) = 1.0;
                    B(j, i) = d(i) * d(j);
                    push_normalized(b, embedB(B));
                }
            // traceless diagonal family, staircase form so the basis stays
            // orthogonal under the trace form
            for (int j = 1; j <= n; ++j) {
                Mat B = Mat::Zero(N, N);
                for (int i = 0; i < j; ++i) B(i, i) = 1.0;
                B(j, j) = -static_cast<double>(j);
                push_normalized(b, embedB(B));
            }
            break;
        case Part::MM:
            for (int i = 0; i < n; ++i) {
                Mat B = Mat::Zero(N, N);
                B(i, n) = 1.0;
                B(n, i) = d(i) * d(n);
                push_normalized(b, embedB(B));
            }
            break;
    }
    return b;
}

std::vector<Mat> ambient_basis(const SymmetricPairSpec& spec) {
    std::vector<Mat> out;
    for (Part p : {Part::PP, Part::PM, Part::MP, Part::MM}) {
        auto b = subspace_basis(spec, p);
        out.insert(out.end(), b.mats.begin(), b.mats.end());
    }
    return out;
}

Mat random_in_part(const SymmetricPairSpec& spec, Part part, Rng& rng) {
    auto b = subspace_basis(spec, part);
    Mat X = Mat::Zero(spec.m, spec.m);
    for (const auto& g : b.mats) X += rng.normal() * g;
    return X;
}

Mat random_ambient(const SymmetricPairSpec& spec, Rng& rng) {
    Mat X = Mat::Zero(spec.m, spec.m);
    for (const auto& g : ambient_basis(spec)) X += rng.normal() * g;
    return X;
}

Mat sf_tangent(const SymmetricPairSpec& spec, const Vec& v) {
    Mat X = Mat::Zero(spec.m, spec.m);
    const int last = spec.m - 1;
    for (int i = 0; i < spec.n; ++i) {
        X(i, last) = v(i);
        X(last, i) = -spec.signature(i) * spec.signature(last) * v(i);
    }
    return X;
}

Mat sf_column(const SymmetricPairSpec& spec, const Vec& u, int col) {
    Mat X = Mat::Zero(spec.m, spec.m);
    const int c = spec.n + col;
    for (int i = 0; i < spec.n; ++i) {
        X(i, c) = u(i);
        X(c, i) = -spec.signature(i) * spec.signature(c) * u(i);
    }
    return X;
}

Mat sf_normal(const SymmetricPairSpec& spec, const Vec& w) {
    Mat X = Mat::Zero(spec.m, spec.m);
    const int last = spec.m - 1;
    for (int j = 0; j < spec.k; ++j) {
        X(spec.n + j, last) = w(j);
        X(last, spec.n + j) =
            -spec.signature(spec.n + j) * spec.signature(last) * w(j);
    }
    return X;
}

Mat lag_embed_A(const SymmetricPairSpec& spec, const Mat& A) {
    const int N = spec.n + 1;
    Mat X = Mat::Zero(spec.m, spec.m);
    X.topLeftCorner(N, N) = A;
    X.bottomRightCorner(N, N) = A;
    return X;
}

Mat lag_embed_B(const SymmetricPairSpec& spec, const Mat& B) {
    const int N = spec.n + 1;
    Mat X = Mat::Zero(spec.m, spec.m);
    X.topRightCorner(N, N) = -B;
    X.bottomLeftCorner(N, N) = B;
    return X;
}

Mat lag_tangent(const SymmetricPairSpec& spec, const Vec& beta) {
    const int N = spec.n + 1;
    const Vec d = spec.signature.head(N);
    Mat B = Mat::Zero(N, N);
    for (int i = 0; i < spec.n; ++i) {
        B(i, spec.n) = beta(i);
        B(spec.n, i) = d(i) * d(spec.n) * beta(i);
    }
    return lag_embed_B(spec, B);
}

Mat kahler_generator(const SymmetricPairSpec& spec) {
    if (!spec.lagrangian())
        throw ConfigError("kahler_generator: Lagrangian family only");
    const int N = spec.n + 1;
    Mat D = Mat::Identity(N, N);
    D(spec.n, spec.n) = -static_cast<double>(spec.n);
    D /= static_cast<double>(N);
    Mat z = Mat::Zero(spec.m, spec.m);
    z.topRightCorner(N, N) = -D;
    z.bottomLeftCorner(N, N) = D;
    return z;
}

double BracketReport::max() const {
    return std::max(std::max(pp_mm, pp_mp), std::max(pm_mm, pm_mp));
}

BracketReport check_bracket_relations(const SymmetricPairSpec& spec, int trials,
                                      std::uint64_t seed) {
    if (trials < 1) throw ConfigError("check_bracket_relations: trials >= 1");
    Rng rng(seed);
    BracketReport rep;
    for (int t = 0; t < trials; ++t) {
        const Mat xpp = random_in_part(spec, Part::PP, rng);
        const Mat xpm = random_in_part(spec, Part::PM, rng);
        const Mat xmp = random_in_part(spec, Part::MP, rng);
        const Mat xmm = random_in_part(spec, Part::MM, rng);
        rep.pp_mm = std::max(rep.pp_mm,
                             off_part_residual(bracket(xpp, xmm), spec, Part::MM));
        rep.pp_mp = std::max(rep.pp_mp,
                             off_part_residual(bracket(xpp, xmp), spec, Part::MP));
        rep.pm_mm = std::max(rep.pm_mm,
                             off_part_residual(bracket(xpm, xmm), spec, Part::MP));
        rep.pm_mp = std::max(rep.pm_mp,
                             off_part_residual(bracket(xpm, xmp), spec, Part::MM));
    }
    return rep;
}

double lie_triple_residual(const SymmetricPairSpec& spec, Part part, int trials,
                           std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        const Mat X = random_in_part(spec, part, rng);
        const Mat Y = random_in_part(spec, part, rng);
        const Mat Z = random_in_part(spec, part, rng);
        worst = std::max(worst,
                         off_part_residual(bracket(X, bracket(Y, Z)), spec, part));
    }
    return worst;
}

namespace {

// orthonormalize (Frobenius) the span of `mats`, dropping near-null directions
std::vector<Mat> orthonormal_span(const std::vector<Mat>& mats, double tol) {
    std::vector<Mat> out;
    for (const auto& g : mats) {
        Mat v = g;
        for (const auto& u : out) v -= (u.array() * v.array()).sum() * u;
        const double norm = fnorm(v);
        if (norm > tol) out.push_back(v / norm);
    }
    return out;
}

double worst_pair_bracket(const std::vector<Mat>& basis) {
    double w = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i + 1; j < basis.size(); ++j)
            w = std::max(w, fnorm(bracket(basis[i], basis[j])));
    return w;
}

} // namespace

RankResult rank_oracle(const SymmetricPairSpec& spec, int trials,
                       std::uint64_t seed, double svd_tol) {
    if (trials < 1) throw ConfigError("rank_oracle: trials >= 1");
    std::vector<Mat> u_minus;
    {
        auto pm = subspace_basis(spec, Part::PM);
        auto mm = subspace_basis(spec, Part::MM);
        u_minus.insert(u_minus.end(), pm.mats.begin(), pm.mats.end());
        u_minus.insert(u_minus.end(), mm.mats.begin(), mm.mats.end());
    }
    Rng rng(seed);
    RankResult best;
    double best_sigma = -1.0;
    for (int t = 0; t < trials; ++t) {
        std::vector<Mat> space = u_minus;
        // greedy descent: intersect with the centralizer of a random element
        // until the remaining space is abelian
        for (int guard = 0; guard < 64 && !space.empty(); ++guard) {
            if (worst_pair_bracket(space) < 1e-10) break;
            Mat X = Mat::Zero(spec.m, spec.m);
            for (const auto& v : space) X += rng.normal() * v;
            // solve [X, Y] = 0 for Y in span(space)
            Mat L(spec.m * spec.m, static_cast<Eigen::Index>(space.size()));
            for (std::size_t j = 0; j < space.size(); ++j) {
                Mat br = bracket(X, space[j]);
                L.col(static_cast<Eigen::Index>(j)) =
                    Eigen::Map<const Vec>(br.data(), spec.m * spec.m);
            }
            Eigen::JacobiSVD<Mat> svd(L, Eigen::ComputeFullV);
            const auto& sv = svd.singularValues();
            const double cut = svd_tol * std::max(1.0, sv.size() ? sv(0) : 0.0);
            std::vector<Mat> next;
            for (int c = 0; c < svd.matrixV().cols(); ++c) {
                const double s = c < sv.size() ? sv(c) : 0.0;
                if (s > cut) continue;
                Mat Y = Mat::Zero(spec.m, spec.m);
                for (std::size_t j = 0; j < space.size(); ++j)
                    Y += svd.matrixV()(static_cast<Eigen::Index>(j), c) * space[j];
                next.push_back(Y);
            }
            space = orthonormal_span(next, 1e-10);
        }
        const int dim = static_cast<int>(space.size());
        std::vector<Mat> tang;
        for (const auto& v : space) tang.push_back(project_part(v, spec, Part::MM));
        const int trank = span_rank(tang, svd_tol);
        // largest dimension wins; ties broken by the tangent-projection rank,
        // then by the smallest singular value of the tangent projections
        double sigma = 0.0;
        if (!tang.empty()) {
            Mat A(spec.m * spec.m, static_cast<Eigen::Index>(tang.size()));
            for (std::size_t j = 0; j < tang.size(); ++j)
                A.col(static_cast<Eigen::Index>(j)) =
                    Eigen::Map<const Vec>(tang[j].data(), spec.m * spec.m);
            Eigen::JacobiSVD<Mat> svd(A);
            sigma = svd.singularValues().tail(1)(0);
        }
        if (dim > best.rank ||
            (dim == best.rank &&
             (trank > best.tangent_rank ||
              (trank == best.tangent_rank && sigma > best_sigma)))) {
            best.rank = dim;
            best.basis = space;
            best.tangent_rank = trank;
            best_sigma = sigma;
        }
    }
    return best;
}

} // namespace reflow

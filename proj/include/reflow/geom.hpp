#pragma once

#include <string>

#include "reflow/connection.hpp"
#include "reflow/zerocurv.hpp"

namespace reflow {

// ---------------------------------------------------------------------------
// target-space points

// Image of the canonical base point under each frame.  First family: a unit
// column in R^m.  Second family: a rank-two S-orthogonal projector.
struct ProjectionField {
    int m = 0;
    bool projector = false;
    GridChart chart;
    std::vector<double> buf;

    ProjectionField(int m_, bool projector_, GridChart chart_);

    std::size_t sz() const {
        return static_cast<std::size_t>(m) * (projector ? static_cast<std::size_t>(m) : 1u);
    }
    Eigen::Map<Vec> v(std::size_t pt) { return {buf.data() + pt * sz(), m}; }
    Eigen::Map<const Vec> v(std::size_t pt) const { return {buf.data() + pt * sz(), m}; }
    Eigen::Map<Mat> pi(std::size_t pt) { return {buf.data() + pt * sz(), m, m}; }
    Eigen::Map<const Mat> pi(std::size_t pt) const { return {buf.data() + pt * sz(), m, m}; }
};

ProjectionField project_UK(const FrameField& f, const SymmetricPairSpec& spec);

// Pointwise defect of the structural identities of the projected field
// (unit S-length for the first family; idempotence, trace two and commutation
// with the complex structure for the second).
double projection_invariant_residual(const ProjectionField& p,
                                     const SymmetricPairSpec& spec);

// Smallest principal angle gap of the position cloud: ratio of singular value
// number expect_dim (0-based) to the largest one.  Near zero means the image
// stays inside a linear subspace of that dimension (a great subsphere).
double containment_residual(const FrameField& f, int expect_dim);

// ---------------------------------------------------------------------------
// metrics

struct MetricField {
    int dim = 0;
    GridChart chart;
    std::vector<double> buf;

    MetricField(int dim_, GridChart chart_);
    Eigen::Map<Mat> g(std::size_t pt) {
        return {buf.data() + pt * static_cast<std::size_t>(dim) * dim, dim, dim};
    }
    Eigen::Map<const Mat> g(std::size_t pt) const {
        return {buf.data() + pt * static_cast<std::size_t>(dim) * dim, dim, dim};
    }
};

// First fundamental form of the parameter-lambda member, computed from the
// stored coefficients (only the doubly-odd part moves the base point):
// g_ij = sign * (l + 1/l)^2 <c_i, c_j>.
MetricField induced_metric(const ConnectionField& c, double lambda);

// Gram matrix of b_i + c_i in the invariant form: the limiting flat metric.
MetricField asymptotic_metric(const ConnectionField& c);

// max_x |g_lambda - R_lambda^2 g_1|; an algebraic identity, so the result is
// pure roundoff.
double metric_scaling_residual(const ConnectionField& c, double lambda);

bool metric_nondegenerate(const MetricField& g, double rel_tol = 1e-8);

// Curvature tensor of a metric field by finite differences (Christoffel
// symbols with Richardson first derivatives, differentiated again); evaluated
// on the interior with a margin of four points.
struct MetricFlatnessReport {
    double worst = 0.0;            // largest |R^l_kij|
    std::size_t worst_point = 0;
    bool pass(double tol) const { return worst <= tol; }
};

MetricFlatnessReport flat_metric_residual(const MetricField& g);

// Gauss curvature statistics of a two-dimensional metric field over the same
// interior margin.
struct KStats {
    double mean = 0.0;
    double dev = 0.0;
    double min = 0.0;
    double max = 0.0;
};

KStats metric_curvature_stats(const MetricField& g);

// ---------------------------------------------------------------------------
// second fundamental form (first family)

struct SecondFundamentalForm {
    int n = 0;
    int k = 0;
    GridChart chart;
    std::vector<double> buf;

    SecondFundamentalForm(int n_, int k_, GridChart chart_);
    double& at(std::size_t pt, int s, int i, int j) {
        return buf[((pt * k + s) * static_cast<std::size_t>(n) + i) * n + j];
    }
    double at(std::size_t pt, int s, int i, int j) const {
        return buf[((pt * k + s) * static_cast<std::size_t>(n) + i) * n + j];
    }
};

// Components against the canonical codimension directions, straight from the
// coefficients: (l^2 - 1/l^2) * (1/2) [b_i, c_j] + [b_j, c_i] applied to the
// base column.  No frames or derivatives involved.
SecondFundamentalForm second_fundamental_form_alg(const ConnectionField& c,
                                                  double lambda);

// Same components measured from the integrated frame: Richardson second
// derivatives of the position field, paired with the frame-translated
// (re-orthonormalised) codimension directions.  Only margin-2 interior points
// are filled.
SecondFundamentalForm second_fundamental_form_num(const ConnectionField& c,
                                                  const FrameField& f);

double ii_compare(const SecondFundamentalForm& x, const SecondFundamentalForm& y,
                  int margin);
double ii_max(const SecondFundamentalForm& x, int margin);

// ---------------------------------------------------------------------------
// curvature and flatness checks

// Gauss-equation curvature of the plane sections: ambient term plus the
// codimension sum of II minors over metric minors.  kappa is the calibrated
// ambient scale (1 for the canonical quadrics).
struct SectionalReport {
    double mean = 0.0;
    double dev = 0.0;
    double expected = 0.0;
    double worst_err = 0.0;
};

SectionalReport gauss_curvature_check(const ConnectionField& c, double lambda,
                                      double kappa = 1.0);

// Commutators of the shape operators (metric pseudo-inverse times II): zero
// iff the normal bundle is flat.
struct NormalFlatnessReport {
    double worst = 0.0;
    std::size_t worst_point = 0;
    bool pass(double tol) const { return worst <= tol; }
};

NormalFlatnessReport normal_bundle_flatness(const ConnectionField& c, double lambda);

// Symplectic pairing of the tangent directions through the center of the
// isotropy algebra, from stored coefficients (second family).  Exact-zero is
// the expected outcome.
double lagrangian_residual(const ConnectionField& c, double lambda);

// Same pairing measured from the projected field by finite differences.
double lagrangian_residual_fd(const ConnectionField& c, const FrameField& f);

// max_x |[b_i + c_i, b_j + c_j]|: the commuting property of the flat limit.
double curved_flat_residual(const ConnectionField& c);

// max_i |c_i - b_i| / lambda^2: exact distance of beta(lambda)/lambda from its
// limit.  Halving per decade of lambda is quadratic: the ratio at (l, 10 l)
// is exactly 100.
double asymptotic_deviation(const ConnectionField& c, double lambda);

// ---------------------------------------------------------------------------
// calibration and reporting

struct Calibration {
    double kappa0 = 1.0;   // embedding scale of the target pairing
    double K1 = 0.0;       // measured curvature of the lambda = 1 member
    double kappa = 1.0;    // kappa0 * |K1|, or the family default of 1
    bool degenerate = false;
};

Calibration calibrate(const ConnectionField& c);

// One row of the scan table; NaN marks fields that do not apply to the
// fixture (they are printed as "na").
struct GeometryRow {
    std::string family;
    int n = 0;
    int k = 0;
    double lambda = 0.0;
    double r_lambda = 0.0;
    double metric_scaling = 0.0;
    double sec_mean = 0.0;
    double sec_dev = 0.0;
    double normal_comm = 0.0;
    double lagrangian = 0.0;
    double curved_flat = 0.0;
    double flat_metric = 0.0;
    double asym_ratio = 0.0;
    double regularity = 0.0;
};

GeometryRow full_report(const ConnectionField& c, double lambda,
                        const std::vector<double>& lambda_list);

} // namespace reflow

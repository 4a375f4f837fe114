#pragma once

#include <array>

#include "reflow/connection.hpp"

namespace reflow {

// Residual of the flatness equations for alpha(lambda) = a + b(l - 1/l) + c(l + 1/l),
// reported per power of lambda (index = power + 2, powers -2..2).  Derivatives are
// taken with Richardson-extrapolated central differences away from the boundary and
// second-order stencils on it.
struct MCResidualReport {
    std::array<double, 5> by_power{};
    double worst = 0.0;
    int worst_power = 0;
    std::size_t worst_point = 0;
    int worst_i = 0;
    int worst_j = 0;
    bool pass(double tol) const { return worst <= tol; }
};

MCResidualReport mc_residual(const ConnectionField& c);

// Flatness of the single form alpha(lambda) at one value of the parameter
// (curl plus bracket).  Fixtures that are flat only at lambda = 1 are gated
// with this instead of the coefficient-wise report.
struct PointwiseMCReport {
    double worst = 0.0;
    std::size_t worst_point = 0;
    bool pass(double tol) const { return worst <= tol; }
};

PointwiseMCReport mc_residual_at(const ConnectionField& c, double lambda);

struct IntegrateOptions {
    int substeps = 4;
    double mc_tol = 1e-4;     // gate on mc_residual before integrating
    bool skip_mc_check = false;
    bool retraction = false;  // re-project onto the S-orthogonal group after each step
};

// Solve dF = F * alpha(lambda) over the chart by classical RK4, sweeping axes in
// the given order from the base point (index 0...0, frame = identity).  The
// connection is interpolated linearly along each cell edge.
FrameField integrate_frame(const ConnectionField& c, double lambda,
                           const std::vector<int>& axis_order,
                           const IntegrateOptions& opts = {});

struct DriftReport {
    double worst = 0.0;
    std::size_t worst_point = 0;
    bool pass(double tol) const { return worst <= tol; }
};

// Deviation of each frame from the structure group: |F^T S F - S|, plus
// |F J0 - J0 F| for the Lagrangian family.
DriftReport frame_drift(const FrameField& f, const SymmetricPairSpec& spec);

// Integrate with two opposite axis sweeps and return the largest pointwise
// frame discrepancy.
double path_independence_residual(const ConnectionField& c, double lambda,
                                  const IntegrateOptions& opts = {});

// F(1/l) should equal (PQ) F(l) (PQ) and F(-l) should equal P F(l) P whenever
// both frames were integrated from the same connection with the same sweep.
double inversion_conjugation_residual(const FrameField& f_lambda,
                                      const FrameField& f_inverse,
                                      const SymmetricPairSpec& spec);
double negation_conjugation_residual(const FrameField& f_lambda,
                                     const FrameField& f_negated,
                                     const SymmetricPairSpec& spec);

// Compare the doubly-even part of the numeric log-derivative F^{-1} dF with the
// stored coefficient a.  On data whose b,c parts dominate, the finite-difference
// error is odd under the second involution and cancels out of this component.
struct FixedPartAuditReport {
    double worst = 0.0;
    std::size_t worst_point = 0;
    int worst_dir = 0;
    bool pass(double tol) const { return worst <= tol; }
};

FixedPartAuditReport fixed_part_audit(const ConnectionField& c, const FrameField& f,
                                      const SymmetricPairSpec& spec);

// Constant commuting connection data with rank-many independent directions.
// The verdict comes from rank_oracle; construction then places one generator in
// the doubly-odd slot and the rest in mixed slots chosen so that every
// alpha_i(lambda) commutes with every alpha_j(lambda) identically in lambda.
struct VacuumResult {
    ConnectionField field;
    int rank = 0;
    std::vector<Mat> b_coeffs;
    std::vector<Mat> c_coeffs;
};

VacuumResult vacuum_solution(const SymmetricPairSpec& spec, const GridChart& chart,
                             unsigned seed);

// Smallest singular value of the stacked, vectorised c coefficients over the
// grid; zero means the c family is linearly dependent somewhere.
struct RegularityReport {
    double sigma_min = 0.0;
    std::size_t worst_point = 0;
    bool pass(double tol) const { return sigma_min >= tol; }
};

RegularityReport regularity_check(const ConnectionField& c);

} // namespace reflow

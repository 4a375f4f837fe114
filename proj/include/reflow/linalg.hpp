#pragma once

#include <Eigen/Dense>
#include <vector>

namespace reflow {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

inline double fnorm(const Mat& X) { return X.norm(); }

inline Mat bracket(const Mat& X, const Mat& Y) { return X * Y - Y * X; }

// invariant pairing used throughout: <X,Y> = -tr(XY)/2
inline double trace_form(const Mat& X, const Mat& Y) {
    return -0.5 * (X * Y).trace();
}

// coordinates of X against a list of matrices, via least squares on the
// vectorized problem (bases here are small: dim <= ~40, entries m^2 <= ~200)
Vec coords_against(const Mat& X, const std::vector<Mat>& basis);

// rank of the span of a list of matrices (singular values above tol)
int span_rank(const std::vector<Mat>& mats, double tol = 1e-9);

} // namespace reflow

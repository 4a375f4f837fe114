#pragma once

#include <vector>

#include "reflow/linalg.hpp"
#include "reflow/pair.hpp"

namespace reflow {

// matrix-coefficient Laurent polynomial sum_j A_j lambda^j, j = -degree..degree
struct LaurentMatrixPoly {
    int degree = 0;
    std::vector<Mat> coeffs;  // size 2*degree+1, index j+degree

    explicit LaurentMatrixPoly(int deg = 0, int m = 0)
        : degree(deg), coeffs(static_cast<std::size_t>(2 * deg + 1),
                              Mat::Zero(m, m)) {}

    Mat& coeff(int j) { return coeffs[static_cast<std::size_t>(j + degree)]; }
    const Mat& coeff(int j) const {
        return coeffs[static_cast<std::size_t>(j + degree)];
    }
};

Mat eval(const LaurentMatrixPoly& p, double lambda);

struct TwistReport {
    bool pass = true;
    double residual = 0.0;
};

// loop-algebra membership at coefficient level:
//   P A_j P = (-1)^j A_j   and   (-1)^j Q A_j Q = A_{-j}
// (coefficients are real by construction, which settles the conjugation
// condition)
TwistReport is_twisted(const LaurentMatrixPoly& p, const SymmetricPairSpec& spec,
                       double tol);

// homothety factor |(lambda + 1/lambda)/2| >= 1
double r_lambda(double lambda);

} // namespace reflow

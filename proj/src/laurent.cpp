#include "reflow/laurent.hpp"

#include <cmath>

namespace reflow {

Mat eval(const LaurentMatrixPoly& p, double lambda) {
    if (lambda == 0.0) throw ConfigError("eval: lambda must be nonzero");
    const int msize = p.coeffs.empty() ? 0 : static_cast<int>(p.coeffs[0].rows());
    Mat out = Mat::Zero(msize, msize);
    for (int j = -p.degree; j <= p.degree; ++j)
        out += p.coeff(j) * std::pow(lambda, j);
    return out;
}

TwistReport is_twisted(const LaurentMatrixPoly& p, const SymmetricPairSpec& spec,
                       double tol) {
    TwistReport rep;
    for (int j = -p.degree; j <= p.degree; ++j) {
        const double parity = (j % 2 == 0) ? 1.0 : -1.0;
        const Mat& A = p.coeff(j);
        rep.residual =
            std::max(rep.residual, fnorm(spec.P * A * spec.P - parity * A));
        rep.residual = std::max(
            rep.residual, fnorm(parity * spec.Q * A * spec.Q - p.coeff(-j)));
    }
    rep.pass = rep.residual <= tol;
    return rep;
}

double r_lambda(double lambda) {
    if (lambda == 0.0) throw ConfigError("r_lambda: lambda must be nonzero");
    return std::abs(0.5 * (lambda + 1.0 / lambda));
}

} // namespace reflow

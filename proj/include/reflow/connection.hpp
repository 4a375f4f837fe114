#pragma once

#include <functional>
#include <string>

#include "reflow/grid.hpp"
#include "reflow/laurent.hpp"
#include "reflow/linalg.hpp"
#include "reflow/pair.hpp"

namespace reflow {

// Grid-valued connection data: for each grid point and coordinate direction a
// triple (a, b, c) with a in u^{++}, b in u^{+-}, c in u^{--}; the direction
// form at loop parameter lambda is  a + b (lambda - 1/lambda) + c (lambda + 1/lambda).
class ConnectionField {
public:
    ConnectionField(Family family, int n, int k, bool hyperbolic, int m,
                    GridChart chart);

    Family family;
    int n, k, m;
    bool hyperbolic;
    GridChart chart;

    int dirs() const { return chart.dim(); }
    std::size_t points() const { return chart.size(); }

    Eigen::Map<Mat> a(std::size_t pt, int dir) { return map(pt, dir, 0); }
    Eigen::Map<Mat> b(std::size_t pt, int dir) { return map(pt, dir, 1); }
    Eigen::Map<Mat> c(std::size_t pt, int dir) { return map(pt, dir, 2); }
    Eigen::Map<const Mat> a(std::size_t pt, int dir) const { return map(pt, dir, 0); }
    Eigen::Map<const Mat> b(std::size_t pt, int dir) const { return map(pt, dir, 1); }
    Eigen::Map<const Mat> c(std::size_t pt, int dir) const { return map(pt, dir, 2); }

    Mat alpha(std::size_t pt, int dir, double lambda) const;
    Mat beta(std::size_t pt, int dir, double lambda) const;     // b (l-1/l) + c (l+1/l)
    Mat beta_inf(std::size_t pt, int dir) const;                // b + c

    LaurentMatrixPoly assemble_poly(std::size_t pt, int dir) const;

    SymmetricPairSpec make_spec() const;

    std::vector<double>& raw() { return buf_; }
    const std::vector<double>& raw() const { return buf_; }

private:
    std::size_t offset(std::size_t pt, int dir, int which) const {
        return ((pt * static_cast<std::size_t>(dirs()) +
                 static_cast<std::size_t>(dir)) * 3 +
                static_cast<std::size_t>(which)) *
               static_cast<std::size_t>(m) * static_cast<std::size_t>(m);
    }
    Eigen::Map<Mat> map(std::size_t pt, int dir, int which) {
        return Eigen::Map<Mat>(buf_.data() + offset(pt, dir, which), m, m);
    }
    Eigen::Map<const Mat> map(std::size_t pt, int dir, int which) const {
        return Eigen::Map<const Mat>(buf_.data() + offset(pt, dir, which), m, m);
    }
    std::vector<double> buf_;
};

// integrated frame on the grid for one loop-parameter value
class FrameField {
public:
    FrameField(int m, double lambda, GridChart chart);

    int m;
    double lambda;
    GridChart chart;

    Eigen::Map<Mat> F(std::size_t pt) {
        return Eigen::Map<Mat>(buf_.data() + pt * sz(), m, m);
    }
    Eigen::Map<const Mat> F(std::size_t pt) const {
        return Eigen::Map<const Mat>(buf_.data() + pt * sz(), m, m);
    }

    std::vector<double>& raw() { return buf_; }
    const std::vector<double>& raw() const { return buf_; }

private:
    std::size_t sz() const {
        return static_cast<std::size_t>(m) * static_cast<std::size_t>(m);
    }
    std::vector<double> buf_;
};

struct DegreeReport {
    bool pass = true;
    double worst = 0.0;
    std::size_t worst_point = 0;
    int worst_dir = 0;
};

// subspace membership of every stored coefficient (distance to the asserted
// component, including any non-algebra contamination)
DegreeReport connection_degree_check(const ConnectionField& c,
                                     const SymmetricPairSpec& spec,
                                     double tol = 1e-10);

// --- binary container I/O (little-endian, binary64) -----------------------
void write_connection(const std::string& path, const ConnectionField& c);
ConnectionField read_connection(const std::string& path);
void write_frame(const std::string& path, const FrameField& f, Family family,
                 int n, int k, bool hyperbolic);
FrameField read_frame(const std::string& path);

// --- finite-difference stencils over the grid ------------------------------
using MatField = std::function<Mat(std::size_t)>;

// first derivative along `axis`: 2nd-order central in the interior, 2nd-order
// one-sided at the boundary
Mat fd_d1(const GridChart& g, const MatField& f, const std::vector<int>& idx,
          int axis);

// extrapolated first derivative (needs margin 2 from the boundary)
Mat fd_d1_rich(const GridChart& g, const MatField& f,
               const std::vector<int>& idx, int axis);

// Richardson stencil where two neighbours exist on both sides, otherwise the
// plain second-order stencil.
Mat fd_d1_auto(const GridChart& g, const MatField& f, const std::vector<int>& idx,
               int axis);

// extrapolated second derivative d^2/(dx_a dx_b) (needs margin 2)
Mat fd_d2_rich(const GridChart& g, const MatField& f,
               const std::vector<int>& idx, int a, int b);

} // namespace reflow

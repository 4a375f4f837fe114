#pragma once

#include "reflow/connection.hpp"

namespace reflow {

struct KinkParams {
    double amplitude = 0.2;  // overall scale of the odd coefficients
    double tilt = 0.25;      // boost/rotation of the travelling profile
    double offset = 0.55;    // keeps the profile argument away from zero
};

// Single travelling-wave profile for the first configuration (n = 2), compact
// signature.  The mixed coefficients sit in the given codimension column.
ConnectionField compact_kink(const GridChart& chart, int k, const KinkParams& p = {},
                             int column = 0);

// Same construction for the hyperbolic signature; the profile argument stays
// positive on the chart.
ConnectionField hyperbolic_kink(const GridChart& chart, int k,
                                const KinkParams& p = {}, int column = 0);

// Rotate the first two codimension columns by the linear angle field
// phi = gx*x1 + gy*x2.  Frames pick up a right factor exp(phi * rotator), so
// every invariant of the data is preserved exactly.
ConnectionField gauge_normal_rotation(const ConnectionField& c, double gx, double gy);

// Two commuting-chart generators in the doubly-odd slot (seeded mix of the
// canonical basis, unit size up to the fixed amplitudes).
std::vector<Mat> polar_generators(const SymmetricPairSpec& spec, unsigned seed);

// Product-of-exponentials fixture F = exp(x1 X1) exp(x2 X2): a = even part of
// F^-1 dF, c = half its doubly-odd part, b = 0.  The assembled form is flat at
// lambda = 1 only; the c family stays pointwise independent on the chart.
ConnectionField polar_fixture(const SymmetricPairSpec& spec, const GridChart& chart,
                              unsigned seed);

// Closed form of the same frame, usable as an integration oracle.
Mat polar_frame_at(const std::vector<Mat>& gens, const Vec& x);

// Metric-only fixtures (their asymptotic metric is the point): a flat metric
// with non-constant coefficients, and a unit-curvature control surface.
ConnectionField shear_flat_fixture(const GridChart& chart);
ConnectionField round_control_fixture(const GridChart& chart);

// Planted defects for the named failure paths: break flatness, or curve the
// normal bundle of a codimension-2 fixture.
void plant_mc_defect(ConnectionField& c, double size);
void plant_normal_defect(ConnectionField& c, double size);

} // namespace reflow

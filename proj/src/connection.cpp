#include "reflow/connection.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

namespace reflow {

ConnectionField::ConnectionField(Family family_, int n_, int k_, bool hyperbolic_,
                                 int m_, GridChart chart_)
    : family(family_), n(n_), k(k_), m(m_), hyperbolic(hyperbolic_),
      chart(std::move(chart_)) {
    chart.validate();
    buf_.assign(points() * static_cast<std::size_t>(dirs()) * 3 *
                    static_cast<std::size_t>(m) * static_cast<std::size_t>(m),
                0.0);
}

Mat ConnectionField::alpha(std::size_t pt, int dir, double lambda) const {
    if (lambda == 0.0) throw ConfigError("alpha: lambda must be nonzero");
    return a(pt, dir) + (lambda - 1.0 / lambda) * b(pt, dir) +
           (lambda + 1.0 / lambda) * c(pt, dir);
}

Mat ConnectionField::beta(std::size_t pt, int dir, double lambda) const {
    if (lambda == 0.0) throw ConfigError("beta: lambda must be nonzero");
    return (lambda - 1.0 / lambda) * b(pt, dir) +
           (lambda + 1.0 / lambda) * c(pt, dir);
}

Mat ConnectionField::beta_inf(std::size_t pt, int dir) const {
    return b(pt, dir) + c(pt, dir);
}

LaurentMatrixPoly ConnectionField::assemble_poly(std::size_t pt, int dir) const {
    LaurentMatrixPoly p(1, m);
    p.coeff(0) = a(pt, dir);
    p.coeff(1) = b(pt, dir) + c(pt, dir);
    p.coeff(-1) = c(pt, dir) - b(pt, dir);
    return p;
}

SymmetricPairSpec ConnectionField::make_spec() const {
    return family == Family::SpaceForm
               ? build_space_form_pair(n, k, hyperbolic)
               : build_lagrangian_pair(n, hyperbolic);
}

FrameField::FrameField(int m_, double lambda_, GridChart chart_)
    : m(m_), lambda(lambda_), chart(std::move(chart_)) {
    chart.validate();
    buf_.assign(chart.size() * sz(), 0.0);
}

DegreeReport connection_degree_check(const ConnectionField& c,
                                     const SymmetricPairSpec& spec, double tol) {
    DegreeReport rep;
    const Part parts[3] = {Part::PP, Part::PM, Part::MM};
    for (std::size_t pt = 0; pt < c.points(); ++pt)
        for (int dir = 0; dir < c.dirs(); ++dir)
            for (int w = 0; w < 3; ++w) {
                const Mat X = w == 0   ? Mat(c.a(pt, dir))
                              : w == 1 ? Mat(c.b(pt, dir))
                                       : Mat(c.c(pt, dir));
                const double r = std::max(spec.ambient_residual(X),
                                          off_part_residual(X, spec, parts[w]));
                if (r > rep.worst) {
                    rep.worst = r;
                    rep.worst_point = pt;
                    rep.worst_dir = dir;
                }
            }
    rep.pass = rep.worst <= tol;
    return rep;
}

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
    os.write(reinterpret_cast<const char*>(&v), 4);
}
void put_i32(std::ostream& os, std::int32_t v) {
    os.write(reinterpret_cast<const char*>(&v), 4);
}
void put_u8(std::ostream& os, std::uint8_t v) {
    os.write(reinterpret_cast<const char*>(&v), 1);
}
void put_f64(std::ostream& os, double v) {
    os.write(reinterpret_cast<const char*>(&v), 8);
}
std::uint32_t get_u32(std::istream& is) {
    std::uint32_t v;
    is.read(reinterpret_cast<char*>(&v), 4);
    return v;
}
std::int32_t get_i32(std::istream& is) {
    std::int32_t v;
    is.read(reinterpret_cast<char*>(&v), 4);
    return v;
}
std::uint8_t get_u8(std::istream& is) {
    std::uint8_t v;
    is.read(reinterpret_cast<char*>(&v), 1);
    return v;
}
double get_f64(std::istream& is) {
    double v;
    is.read(reinterpret_cast<char*>(&v), 8);
    return v;
}

struct Header {
    Family family;
    int n, k, m;
    bool hyperbolic;
    GridChart chart;
};

void write_header(std::ostream& os, const char magic[4], const Header& h) {
    os.write(magic, 4);
    put_u32(os, 1);  // container version
    put_u32(os, h.family == Family::SpaceForm ? 0u : 1u);
    put_i32(os, h.n);
    put_i32(os, h.k);
    put_u8(os, h.hyperbolic ? 1 : 0);
    put_i32(os, h.m);
    put_i32(os, h.chart.dim());
    for (int i = 0; i < h.chart.dim(); ++i) {
        put_i32(os, h.chart.counts[static_cast<std::size_t>(i)]);
        put_f64(os, h.chart.spacing[static_cast<std::size_t>(i)]);
        put_f64(os, h.chart.origin[static_cast<std::size_t>(i)]);
    }
}

Header read_header(std::istream& is, const char magic[4], const std::string& path) {
    char got[4];
    is.read(got, 4);
    if (!is || std::memcmp(got, magic, 4) != 0)
        throw IoError("bad container magic in " + path);
    const std::uint32_t version = get_u32(is);
    if (version != 1)
        throw IoError("unsupported container version in " + path);
    Header h;
    h.family = get_u32(is) == 0 ? Family::SpaceForm : Family::LagrangianProjective;
    h.n = get_i32(is);
    h.k = get_i32(is);
    h.hyperbolic = get_u8(is) != 0;
    h.m = get_i32(is);
    const int dim = get_i32(is);
    if (!is || dim < 1 || dim > 8 || h.m < 2 || h.m > 64)
        throw IoError("corrupt container header in " + path);
    h.chart.counts.resize(static_cast<std::size_t>(dim));
    h.chart.spacing.resize(static_cast<std::size_t>(dim));
    h.chart.origin.resize(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
        h.chart.counts[static_cast<std::size_t>(i)] = get_i32(is);
        h.chart.spacing[static_cast<std::size_t>(i)] = get_f64(is);
        h.chart.origin[static_cast<std::size_t>(i)] = get_f64(is);
    }
    if (!is) throw IoError("truncated container header in " + path);
    return h;
}

} // namespace

void write_connection(const std::string& path, const ConnectionField& c) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for write: " + path);
    write_header(os, "RFCF", {c.family, c.n, c.k, c.m, c.hyperbolic, c.chart});
    os.write(reinterpret_cast<const char*>(c.raw().data()),
             static_cast<std::streamsize>(c.raw().size() * sizeof(double)));
    if (!os) throw IoError("write failed: " + path);
}

ConnectionField read_connection(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open: " + path);
    const Header h = read_header(is, "RFCF", path);
    ConnectionField c(h.family, h.n, h.k, h.hyperbolic, h.m, h.chart);
    is.read(reinterpret_cast<char*>(c.raw().data()),
            static_cast<std::streamsize>(c.raw().size() * sizeof(double)));
    if (!is) throw IoError("truncated connection data in " + path);
    return c;
}

void write_frame(const std::string& path, const FrameField& f, Family family,
                 int n, int k, bool hyperbolic) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for write: " + path);
    write_header(os, "RFFF", {family, n, k, f.m, hyperbolic, f.chart});
    put_f64(os, f.lambda);
    os.write(reinterpret_cast<const char*>(f.raw().data()),
             static_cast<std::streamsize>(f.raw().size() * sizeof(double)));
    if (!os) throw IoError("write failed: " + path);
}

FrameField read_frame(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open: " + path);
    const Header h = read_header(is, "RFFF", path);
    const double lambda = get_f64(is);
    FrameField f(h.m, lambda, h.chart);
    is.read(reinterpret_cast<char*>(f.raw().data()),
            static_cast<std::streamsize>(f.raw().size() * sizeof(double)));
    if (!is) throw IoError("truncated frame data in " + path);
    return f;
}

namespace {

Mat shifted(const GridChart& g, const MatField& f, std::vector<int> idx, int axis,
            int step) {
    idx[static_cast<std::size_t>(axis)] += step;
    return f(g.flat(idx));
}

} // namespace

Mat fd_d1(const GridChart& g, const MatField& f, const std::vector<int>& idx,
          int axis) {
    const int i = idx[static_cast<std::size_t>(axis)];
    const int N = g.counts[static_cast<std::size_t>(axis)];
    const double h = g.spacing[static_cast<std::size_t>(axis)];
    if (i == 0)
        return (-3.0 * f(g.flat(idx)) + 4.0 * shifted(g, f, idx, axis, 1) -
                shifted(g, f, idx, axis, 2)) /
               (2.0 * h);
    if (i == N - 1)
        return (3.0 * f(g.flat(idx)) - 4.0 * shifted(g, f, idx, axis, -1) +
                shifted(g, f, idx, axis, -2)) /
               (2.0 * h);
    return (shifted(g, f, idx, axis, 1) - shifted(g, f, idx, axis, -1)) /
           (2.0 * h);
}

Mat fd_d1_rich(const GridChart& g, const MatField& f,
               const std::vector<int>& idx, int axis) {
    const double h = g.spacing[static_cast<std::size_t>(axis)];
    const Mat d_h =
        (shifted(g, f, idx, axis, 1) - shifted(g, f, idx, axis, -1)) / (2.0 * h);
    const Mat d_2h =
        (shifted(g, f, idx, axis, 2) - shifted(g, f, idx, axis, -2)) / (4.0 * h);
    return (4.0 * d_h - d_2h) / 3.0;
}

Mat fd_d1_auto(const GridChart& g, const MatField& f, const std::vector<int>& idx,
               int axis) {
    const int i = idx[static_cast<std::size_t>(axis)];
    const int N = g.counts[static_cast<std::size_t>(axis)];
    if (i >= 2 && i <= N - 3) return fd_d1_rich(g, f, idx, axis);
    return fd_d1(g, f, idx, axis);
}

Mat fd_d2_rich(const GridChart& g, const MatField& f,
               const std::vector<int>& idx, int a, int b) {
    const double ha = g.spacing[static_cast<std::size_t>(a)];
    if (a == b) {
        const Mat f0 = f(g.flat(idx));
        const Mat d_h = (shifted(g, f, idx, a, 1) - 2.0 * f0 +
                         shifted(g, f, idx, a, -1)) /
                        (ha * ha);
        const Mat d_2h = (shifted(g, f, idx, a, 2) - 2.0 * f0 +
                          shifted(g, f, idx, a, -2)) /
                         (4.0 * ha * ha);
        return (4.0 * d_h - d_2h) / 3.0;
    }
    const double hb = g.spacing[static_cast<std::size_t>(b)];
    // explicit Mat return: a deduced return type would hand back an Eigen
    // expression referencing the four at() temporaries after they die
    auto cross = [&](int s) -> Mat {
        auto at = [&](int da, int db) {
            std::vector<int> j = idx;
            j[static_cast<std::size_t>(a)] += da * s;
            j[static_cast<std::size_t>(b)] += db * s;
            return f(g.flat(j));
        };
        return (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) /
               (4.0 * ha * hb * s * s);
    };
    return (4.0 * cross(1) - cross(2)) / 3.0;
}

} // namespace reflow

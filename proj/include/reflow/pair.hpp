#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "reflow/error.hpp"
#include "reflow/linalg.hpp"
#include "reflow/rng.hpp"

namespace reflow {

enum class Family { SpaceForm, LagrangianProjective };

// simultaneous eigenspace label; first sign is the Ad_Q eigenvalue, second the
// Ad_P eigenvalue
enum class Part { PP, PM, MP, MM };

std::string family_name(Family f);

// One involution configuration: ambient matrix algebra u = {X : X^T S + S X = 0}
// (intersected with the J0-commutant, trace condition for the complex-model
// family), two commuting involutions Ad_P and Ad_Q, and a metric calibration
// constant.
struct SymmetricPairSpec {
    Family family;
    int n = 0;           // dimension of the tangent space u^{--}
    int k = 0;           // number of u^{-+} directions (Lagrangian: k == n)
    int m = 0;           // ambient matrix size
    bool hyperbolic = false;
    Mat P, Q, S;
    Vec signature;       // diag of S
    Mat J0;              // complex structure (Lagrangian family; else 0x0)
    double curvature_scale = 1.0;

    bool lagrangian() const { return family == Family::LagrangianProjective; }

    // distance from the ambient algebra (form-skewness; plus J0 commutation
    // and trace condition for the Lagrangian family)
    double ambient_residual(const Mat& X) const;
};

SymmetricPairSpec build_space_form_pair(int n, int k, bool hyperbolic);
SymmetricPairSpec build_lagrangian_pair(int n, bool hyperbolic);

struct FourComponents {
    Mat pp, pm, mp, mm;
    Mat sum() const { return pp + pm + mp + mm; }
    const Mat& part(Part p) const;
};

// simultaneous eigenspace projections
// X_{ed} = (X + e QXQ + d PXP + ed QPXPQ) / 4
FourComponents decompose(const Mat& X, const SymmetricPairSpec& spec,
                         double membership_tol = 1e-8);

Mat project_part(const Mat& X, const SymmetricPairSpec& spec, Part part);

// norm of the piece of X lying outside the given component
double off_part_residual(const Mat& X, const SymmetricPairSpec& spec, Part part);

// Basis of one component, orthogonal under the trace form; form_sign[i] is the
// sign of <b_i, b_i> (indefinite forms appear in the hyperbolic variants),
// and |<b_i, b_i>| = 1.
struct SubspaceBasis {
    std::vector<Mat> mats;
    std::vector<double> form_sign;
    int dim() const { return static_cast<int>(mats.size()); }
};

SubspaceBasis subspace_basis(const SymmetricPairSpec& spec, Part part);
std::vector<Mat> ambient_basis(const SymmetricPairSpec& spec);

Mat random_in_part(const SymmetricPairSpec& spec, Part part, Rng& rng);
Mat random_ambient(const SymmetricPairSpec& spec, Rng& rng);

// --- structural element constructors -------------------------------------
// space-form family: column vectors hung off the distinguished last column /
// the n x k block
Mat sf_tangent(const SymmetricPairSpec& spec, const Vec& v);          // u^{--}
Mat sf_column(const SymmetricPairSpec& spec, const Vec& u, int col);  // u^{+-}, col in 0..k-1
Mat sf_normal(const SymmetricPairSpec& spec, const Vec& w);           // u^{-+}

// Lagrangian family: block embeddings of the complex model
Mat lag_embed_A(const SymmetricPairSpec& spec, const Mat& A);  // [[A,0],[0,A]]
Mat lag_embed_B(const SymmetricPairSpec& spec, const Mat& B);  // [[0,-B],[B,0]]
Mat lag_tangent(const SymmetricPairSpec& spec, const Vec& beta);  // u^{--}

// generator of the invariant Kaehler form: omega(X,Y) = <[zeta,X],Y>;
// ad(zeta) squares to -1 on the Ad_Q-odd part
Mat kahler_generator(const SymmetricPairSpec& spec);

// --- randomized structural checks ----------------------------------------
struct BracketReport {
    // component of [x, y] outside the asserted target space, worst over trials:
    //   [u^{++}, u^{--}] in u^{--}; [u^{++}, u^{-+}] in u^{-+};
    //   [u^{+-}, u^{--}] in u^{-+}; [u^{+-}, u^{-+}] in u^{--}
    double pp_mm = 0, pp_mp = 0, pm_mm = 0, pm_mp = 0;
    double max() const;
};

BracketReport check_bracket_relations(const SymmetricPairSpec& spec, int trials,
                                      std::uint64_t seed);

// worst component of [X,[Y,Z]] outside `part` for X,Y,Z random in `part`
double lie_triple_residual(const SymmetricPairSpec& spec, Part part, int trials,
                           std::uint64_t seed);

// --- rank -----------------------------------------------------------------
struct RankResult {
    int rank = 0;                 // max abelian dimension found in u_- = u^{+-} + u^{--}
    std::vector<Mat> basis;       // an abelian basis realizing it
    int tangent_rank = 0;         // rank of the u^{--} projections of that basis
};

// randomized greedy maximal-abelian search in u_-; deterministic given seed
RankResult rank_oracle(const SymmetricPairSpec& spec, int trials,
                       std::uint64_t seed, double svd_tol = 1e-9);

} // namespace reflow

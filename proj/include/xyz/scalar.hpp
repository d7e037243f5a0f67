#pragma once

#include "xyz/spectrum.hpp"

namespace xyz {

enum class Side { left, right };

// Coefficients u_a(zeta_a^{(h)}) stored as an N x 2 table (row a, column h).
struct SeparateState {
    Side side = Side::left;
    Mat coeffs;
    GaugeFrame frame;
};

// Separate state whose SOV coefficients are the Q-ratios of a transfer eigenvalue.
SeparateState eigen_separate_state(const Spectrum& sp, const Vec& xs, Side side);

// sum_h prod_a u_a(zeta_a^{(h_a)}) V(h) (basis element at h); a left state is a row.
Mat materialize(const SeparateState& s, const SovBasis& basis);

// det_N M with M_ab = sum_h u_a(h) v_a(h) (eta_a^{(h)})^{b-1}.
cplx pairing_determinant(const SeparateState& u, const SeparateState& v, const Model& m);
// Direct contraction of the materialised covector and vector.
cplx pairing_direct(const SeparateState& u, const SeparateState& v, const SovBasis& basis);
// Brute-force sum_h V(h) prod_a u_a v_a.
cplx pairing_vandermonde_sum(const SeparateState& u, const SeparateState& v, const Model& m);

struct GramReport {
    Mat determinant;  // pairings via the determinant formula
    Mat direct;       // pairings via dense contraction
    double offdiag_ratio = 0;   // max |G_ij| / sqrt(|G_ii| |G_jj|)
    double min_diag = 0;        // min |G_ii| relative to max |G_ii|
    double formula_vs_direct = 0;  // max |det - direct| on the diagonal scale
};

GramReport gram_report(const Spectrum& sp, const SovBasis& basis, const std::vector<Vec>& xs);

}  // namespace xyz

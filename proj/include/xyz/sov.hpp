#pragma once

#include <array>
#include <vector>

#include "xyz/gauge.hpp"

namespace xyz {

// Bits h_1..h_N packed as index = sum_a 2^(a-1) h_a.
struct HTuple {
    int n = 0;
    int index = 0;
    int bit(int a) const { return (index >> a) & 1; }  // a is 0-based
    HTuple flipped(int a) const { return {n, index ^ (1 << a)}; }
    static HTuple ones(int n) { return {n, (1 << n) - 1}; }
};

// The eight boundary nodes zeta_{-a}: four base points and their shifts by pi*omega.
std::array<cplx, 8> boundary_zeta(const Model& m);

// zeta_a^{(h)} = xi_a + (h - 1/2) eta for a in 0..N-1.
cplx sov_zeta(const Model& m, int a, int h);
// Separated coordinate eta_a^{(h)} = theta_4^2/theta_2^2 at nome omega.
cplx sov_eta(const Model& m, int a, int h);
// prod_{b<a} (eta_a^{(h_a)} - eta_b^{(h_b)}).
cplx vandermonde(const Model& m, const HTuple& h);
// Smallest pairwise gap between all 2N separated coordinates.
double sov_eta_gap(const Model& m);
// Right-basis normaliser constant k_a.
cplx sov_k(const Model& m, int a);
// a_h(l) = prod_n theta(l - zeta_n^{(h_n)}).
cplx a_h(const Model& m, const HTuple& h, cplx l);

// Unnormalised pseudo-eigenstates.
RowVec sov_left_unnormalized(const Gauge& g, cplx beta, const HTuple& h);
Vec sov_right_unnormalized(const Gauge& g, cplx beta, const HTuple& h);
RowVec sov_left_unnormalized(const Gauge& g, cplx beta, const HTuple& h, const std::vector<int>& order);
// n_beta from the all-ones overlap.
cplx sov_norm(const Gauge& g, cplx beta);

// Pseudo-eigenvalues acting on the unnormalised states:
//   <beta,h| B(l|beta) = coef * <beta-2,h| and B(l|beta)|beta,h> = coef * |beta+2,h>.
cplx pseudo_eigenvalue_left(const Gauge& g, cplx beta, const HTuple& h, cplx l);
cplx pseudo_eigenvalue_right(const Gauge& g, cplx beta, const HTuple& h, cplx l);

// Left covectors <beta,h| and right vectors |beta+2,h>, both normalised by n_{beta+2}.
class SovBasis {
public:
    SovBasis(const Model& m, const GaugeFrame& f);

    const Model& model() const { return m_; }
    const GaugeFrame& frame() const { return f_; }
    const Gauge& gauge() const { return g_; }
    int size() const { return int(left_.size()); }
    int n() const { return m_.n(); }
    HTuple tuple(int i) const { return {m_.n(), i}; }

    const RowVec& left(int i) const { return left_[i]; }
    const Vec& right(int i) const { return right_[i]; }
    const Mat& UL() const { return ul_; }
    const Mat& UR() const { return ur_; }
    cplx vdm(int i) const { return vdm_[i]; }
    cplx n_beta() const { return norm_; }
    double cond_left() const { return cond_l_; }
    double cond_right() const { return cond_r_; }
    int rank_left() const { return rank_l_; }
    int rank_right() const { return rank_r_; }

    // Overlap matrix UL * UR.
    Mat overlaps() const { return ul_ * ur_; }
    // Max relative deviation of the overlaps from diag(1/V(h)); off-diagonals relative to the diagonal scale.
    double mjj_residual() const;
    double offdiag_residual() const;
    // sum_h V(h) |beta+2,h><beta,h| against the identity.
    double identity_residual() const;

    // Predicted <beta,h| A_-(l|beta+2) from boundary-node data and shift terms.
    RowVec interp_left_A(int i, cplx l) const;
    // Predicted D_-(l|beta+2) |beta+2,h>.
    Vec interp_right_D(int i, cplx l) const;

private:
    const Model& m_;
    GaugeFrame f_;
    Gauge g_;
    std::vector<RowVec> left_;
    std::vector<Vec> right_;
    std::vector<cplx> vdm_;
    Mat ul_, ur_;
    cplx norm_;
    double cond_l_ = 0, cond_r_ = 0;
    int rank_l_ = 0, rank_r_ = 0;
};

// Sampled non-degeneracy of K_-(l|beta)_12 and Ktilde_-(l|-beta)_21 (relative magnitudes).
double nondegeneracy_margin(const Gauge& g, cplx beta);

}  // namespace xyz

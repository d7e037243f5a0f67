#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "xyz/elliptic.hpp"

namespace xyz {

struct BoundaryParams {
    cplx zeta{0.0};
    cplx kappa{0.0};
    cplx tau{0.0};
};

struct ModelParams {
    int n_sites = 0;
    cplx eta{0.37, 0.11};
    cplx omega{0.0, 1.6};
    std::vector<cplx> xi;
    BoundaryParams minus;
    BoundaryParams plus;

    void validate() const;
};

// Reproducible generic sample; resamples until the separation margins hold.
ModelParams sample_params(int n_sites, std::uint64_t seed);

// Smallest reduced distance between xi_a and xi_b + r eta (r in -1,0,1) mod (pi, pi omega).
double esov_margin(const ModelParams& p);

struct Weights {
    cplx a, b, c, d;
};

// Operators on aux (slowest, 2-dim) x sites (site 1 fastest): dimension 2 * 2^N.
struct AuxBlocks {
    Mat A, B, C, D;
};

AuxBlocks split_aux(const Mat& m);
Mat join_aux(const AuxBlocks& b);
Mat aux_embed(const Mat2& k, int dim);
// Partial transpose in auxiliary space.
Mat aux_transpose(const Mat& m);
// One-site operator embedded in the 2^N chain space.
Mat site_op(const Mat2& op, int site, int n_sites);

class Model {
public:
    explicit Model(ModelParams p);

    const ModelParams& params() const { return p_; }
    const Thetas& thetas() const { return th_; }
    int n() const { return p_.n_sites; }
    int dim() const { return 1 << p_.n_sites; }
    cplx eta() const { return p_.eta; }

    cplx th(cplx z) const { return th_.th(z); }
    cplx t(int a, cplx z) const { return th_.t(a, z); }

    Weights weights(cplx l) const;
    Mat4 r_matrix(cplx l) const;
    // Weights through the sn-form with the prefactor f(lambda).
    Weights weights_sn_form(cplx l) const;

    // Raw scalar solution K(l; zeta, kappa, tau).
    Mat2 k_raw(cplx l, const BoundaryParams& bp) const;
    // theta_4(2l|2w) K(l), finite everywhere.
    Mat2 k_raw_reg(cplx l, const BoundaryParams& bp) const;
    Mat2 k_minus(cplx l) const { return k_raw(l - p_.eta / 2.0, p_.minus); }
    Mat2 k_plus(cplx l) const { return k_raw(l + p_.eta / 2.0, p_.plus); }
    Mat2 k_minus_reg(cplx l) const { return k_raw_reg(l - p_.eta / 2.0, p_.minus); }
    Mat2 k_plus_reg(cplx l) const { return k_raw_reg(l + p_.eta / 2.0, p_.plus); }

    Mat monodromy(cplx l) const;
    Mat hat_monodromy(cplx l) const;
    Mat u_minus(cplx l) const;
    // theta_4(2l - eta|2w) U_-(l), pole-free.
    Mat u_minus_reg(cplx l) const;
    Mat u_plus_t(cplx l) const;
    Mat transfer(cplx l) const;
    // theta_4(2l+eta) theta_4(2l-eta) T(l) without evaluating any K pole.
    Mat transfer_hat(cplx l) const;
    Mat u_tilde(cplx l) const;

    // Scalar functions.
    cplx p_fn(cplx l) const;
    cplx p_fn_alt(cplx l) const;
    cplx a_bulk(cplx l) const;
    cplx d_bulk(cplx l) const { return a_bulk(l - p_.eta); }
    cplx det_q_bulk(cplx l) const { return a_bulk(l + p_.eta / 2.0) * d_bulk(l - p_.eta / 2.0); }
    cplx g_fn(cplx l, const BoundaryParams& bp) const;
    cplx g_minus(cplx l) const { return g_fn(l, p_.minus); }
    cplx g_plus(cplx l) const { return g_fn(l, p_.plus); }
    cplx a_hat_minus(cplx l) const { return g_minus(l) * a_bulk(l) * d_bulk(-l); }
    cplx det_q_k_minus(cplx l) const;
    cplx det_q_k_plus(cplx l) const;
    // Explicit form of det_q U_-(l).
    cplx det_q_u_minus_explicit(cplx l) const;

    // Closed forms of theta_4(2l+eta)theta_4(2l-eta) t(l) at the four boundary nodes.
    std::array<cplx, 4> boundary_node_values() const;
    std::array<cplx, 4> boundary_nodes() const;

    Mat xyz_hamiltonian() const;

private:
    ModelParams p_;
    Thetas th_;
};

// Operator residual of det_q U_-; returns the scalar and fills the two epsilon forms' residuals.
struct QuantumDet {
    cplx value;
    double scalar_resid_plus;
    double scalar_resid_minus;
    double eps_agreement;
};
QuantumDet quantum_det_u_minus(const Model& m, cplx l);

struct Eigenpair {
    cplx value;
    Vec right;
    RowVec left;
};

// Dense eigen-decomposition of T(lambda_star) with dual left covectors.
std::vector<Eigenpair> oracle_diagonalize(const Model& m, cplx lambda_star);

}  // namespace xyz

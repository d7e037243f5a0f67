#pragma once

#include <cstdint>

#include "xyz/vertex.hpp"

namespace xyz {

struct GaugeFrame {
    cplx alpha{0.0};
    cplx beta{0.0};
    double fix_residual = 0.0;  // max relative |K+^(L)_12| (or _21) over the probe points
    int branches = 0;           // distinct Newton branches seen during fixing
};

enum class GaugeFamily { B_left, C_left };

enum class GenOp { A, B, C, D };

// Gauged K_- variants: plain K_-(l|b) and the tilde matrix appearing in the right SOV construction.
enum class KMinusKind { plain, tilde };

struct KPlusLR {
    Mat2 L;
    Mat2 R;
};

// Intertwining vectors, gauged generators and gauged boundary matrices at fixed alpha.
class Gauge {
public:
    Gauge(const Model& m, cplx alpha);

    const Model& model() const { return m_; }
    cplx alpha() const { return alpha_; }

    Vec2 X(cplx b, cplx l) const;
    Vec2 Y(cplx b, cplx l) const { return X(-b, l); }
    Row2 Xbar(cplx b, cplx l) const;
    Row2 Ybar(cplx b, cplx l) const;
    Row2 Xtil(cplx b, cplx l) const;
    Row2 Ytil(cplx b, cplx l) const;
    // Rescaled vectors used by K+^(L)/(R); arguments are the labels of the underlying X, Y.
    Vec2 Yhat(cplx beta_minus_1, cplx l) const;
    Vec2 Xhat(cplx beta_plus_3, cplx l) const;
    Row2 Yund(cplx b, cplx l) const;
    Row2 Xund(cplx b, cplx l) const;

    // Dynamical 6-vertex R-matrix.
    Mat4 dynamical_r(cplx l, cplx b) const;

    // r(l) = theta_4(2l - eta|2w) theta(l + (alpha + 1/2) eta).
    cplx r_fn(cplx l) const;
    // Rescaled generator r(l) * X_-(l|b) with the shifted labels fixed by the construction.
    Mat op(GenOp which, cplx l, cplx b) const;
    // Unrescaled generator (direct contraction of U_-).
    Mat op_raw(GenOp which, cplx l, cplx b) const;

    // Bulk gauged monodromy entries M(l|b)_{ij} and the hatted counterpart.
    struct Bulk {
        Mat M[2][2];
        Mat Mbar[2][2];
    };
    Bulk bulk(cplx l, cplx b) const;

    KPlusLR k_plus_lr(cplx l, cplx b) const;
    Mat2 k_minus_gauged(cplx l, cplx b, KMinusKind kind) const;

    // Reference covector <b| and vector |b1> (b1 = beta + 1 in the C-family labelling).
    RowVec left_reference(cplx b) const;
    Vec right_reference(cplx b1) const;

    // Scalar normaliser A_-^{scalar}(l) = r(l) g_-(l) a(l) d(-l).
    cplx a_scalar(cplx l) const;

private:
    Row2 contract_row(const Row2& co, const Mat2& k) const;
    Mat contract(const Row2& co, const Mat& u, const Vec2& v) const;
    Mat slot(GenOp which, cplx l, cplx b, const Mat& u) const;

    const Model& m_;
    cplx alpha_;
};

// Scalar gauge condition g(shift, l) whose zero set fixes the frame.
cplx gauge_condition(const Model& m, GaugeFamily family, cplx shift, cplx l);

// Newton multistart on the scalar gauge condition; beta is kept as given.
GaugeFrame fix_gauge(const Model& m, GaugeFamily family, cplx beta, std::uint64_t seed = 0);

// Relative size of the entry that the family forces to zero, at lambda.
double gauge_entry_residual(const Model& m, const GaugeFrame& f, GaugeFamily family, cplx l);

// Reject frames whose beta makes the commutation coefficients singular.
void check_frame(const Model& m, const GaugeFrame& f);

cplx a_plus(const Model& m, const GaugeFrame& f, cplx l);
cplx d_plus(const Model& m, const GaugeFrame& f, cplx l);

}  // namespace xyz

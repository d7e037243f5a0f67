#pragma once

#include <vector>

#include "xyz/types.hpp"

namespace xyz {

// Period ratio entering a theta series; nome q = exp(i*pi*omega).
class HalfPeriodRatio {
public:
    explicit HalfPeriodRatio(cplx omega);
    cplx omega() const { return omega_; }
    cplx nome() const { return nome_; }
    HalfPeriodRatio doubled() const { return HalfPeriodRatio(2.0 * omega_); }

private:
    cplx omega_;
    cplx nome_;
};

// Jacobi theta function theta_index(z | ratio), Gradshteyn-Ryzhik series.
cplx theta(int index, cplx z, const HalfPeriodRatio& ratio);

// Same series with an explicit term cap; used to probe truncation.
cplx theta_series(int index, cplx z, const HalfPeriodRatio& ratio, int max_terms, double cutoff);

// Worst ratio sum|term| / |sum| for theta_1 and theta_4 over the fundamental strip; log10 of it
// is the number of digits lost to cancellation (grows as |nome| -> 1).
double theta_cancellation(const HalfPeriodRatio& ratio);

struct EllipticModuli {
    cplx k;
    cplx k_prime;
    cplx K_k;
};

// Moduli built from theta constants at ratio 2*omega.
EllipticModuli elliptic_moduli(const HalfPeriodRatio& ratio);

enum class JacobiFn { sn, cn, dn };

// Jacobi elliptic function at the reduced argument lambda (z~ = 2 K_k lambda).
cplx jacobi(JacobiFn fn, cplx lambda, const HalfPeriodRatio& ratio);

// Order-M elliptic polynomial: P(l+pi) = (-1)^M P(l),
// P(l + 2 pi omega) = (-exp(-2il)/q^2)^M exp(2i alpha) P(l).
struct EllipticPolySpec {
    int order;
    cplx norm;
};

cplx elliptic_interpolate(const EllipticPolySpec& spec, const std::vector<cplx>& nodes,
                          const std::vector<cplx>& values, cplx eval_at,
                          const HalfPeriodRatio& ratio);

// Theta helpers bound to one omega: th = theta_1(.|omega), t(a,.) = theta_a(.|2 omega),
// tw(a,.) = theta_a(.|omega).
class Thetas {
public:
    explicit Thetas(cplx omega) : w_(omega), w2_(2.0 * omega) {}
    cplx th(cplx z) const { return theta(1, z, w_); }
    cplx t(int a, cplx z) const { return theta(a, z, w2_); }
    cplx tw(int a, cplx z) const { return theta(a, z, w_); }
    const HalfPeriodRatio& ratio() const { return w_; }
    const HalfPeriodRatio& ratio2() const { return w2_; }
    cplx omega() const { return w_.omega(); }
    cplx nome() const { return w_.nome(); }

private:
    HalfPeriodRatio w_;
    HalfPeriodRatio w2_;
};

}  // namespace xyz

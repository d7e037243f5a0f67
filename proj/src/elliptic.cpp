#include "xyz/elliptic.hpp"

#include <cmath>

namespace xyz {

HalfPeriodRatio::HalfPeriodRatio(cplx omega) : omega_(omega) {
    if (!(omega.imag() > 0.0)) throw ParameterError("theta: Im(omega) must be positive");
    nome_ = std::exp(I1 * kPi * omega);
    if (std::abs(nome_) > 0.95) throw ParameterError("theta: |nome| exceeds 0.95");
}

namespace {

constexpr int kMaxTerms = 64;
constexpr double kCutoff = 1e-16;

cplx raw_series(int index, cplx z, cplx tau, int max_terms, double cutoff) {
    const cplx ipt = I1 * kPi * tau;
    cplx sum = 0.0;
    if (index == 1 || index == 2) {
        for (int n = 0; n < max_terms; ++n) {
            double h = n + 0.5;
            cplx qn = std::exp(ipt * (h * h));
            cplx term = (index == 1) ? ((n % 2 ? -2.0 : 2.0) * qn * std::sin((2.0 * n + 1.0) * z))
                                     : (2.0 * qn * std::cos((2.0 * n + 1.0) * z));
            sum += term;
            if (n > 0 && std::abs(term) < cutoff * std::abs(sum)) break;
        }
        return sum;
    }
    sum = 1.0;
    for (int n = 1; n < max_terms; ++n) {
        cplx qn = std::exp(ipt * double(n * n));
        double sg = (index == 4 && n % 2) ? -2.0 : 2.0;
        cplx term = sg * qn * std::cos(2.0 * n * z);
        sum += term;
        if (std::abs(term) < cutoff * std::abs(sum)) break;
    }
    return sum;
}

}  // namespace

cplx theta_series(int index, cplx z, const HalfPeriodRatio& ratio, int max_terms, double cutoff) {
    if (index < 1 || index > 4) throw ParameterError("theta: index must be in 1..4");
    const cplx tau = ratio.omega();
    const cplx pt = kPi * tau;

    // Strip reduction along pi*tau: theta_a(z0 + m pi tau) = s^m exp(-i(2 m z0 + pi tau m^2)) theta_a(z0).
    double m_d = std::round(z.imag() / pt.imag());
    if (std::abs(m_d) > 64) throw ParameterError("theta: argument too far from the fundamental strip");
    int m = int(m_d);
    cplx z0 = z - double(m) * pt;
    cplx log_factor = -I1 * (2.0 * double(m) * z0 + pt * double(m) * double(m));
    double sign = 1.0;
    if ((index == 1 || index == 4) && (m % 2)) sign = -sign;

    // Real reduction into [-pi/2, pi/2).
    double k = std::floor((z0.real() + kPi / 2) / kPi);
    z0 -= k * kPi;
    if ((index == 1 || index == 2) && (long(k) % 2)) sign = -sign;

    return sign * std::exp(log_factor) * raw_series(index, z0, tau, max_terms, cutoff);
}

cplx theta(int index, cplx z, const HalfPeriodRatio& ratio) {
    return theta_series(index, z, ratio, kMaxTerms, kCutoff);
}

double theta_cancellation(const HalfPeriodRatio& ratio) {
    const cplx ipt = I1 * kPi * ratio.omega();
    double worst = 1.0;
    // Sample the fundamental strip; sum |terms| / |sum| estimates digits lost to cancellation.
    for (double x : {0.1, 0.4, 0.9, 1.3})
        for (double yf : {-0.45, 0.0, 0.45}) {
            cplx z(x, yf * (kPi * ratio.omega()).imag());
            for (int index : {1, 4}) {
                cplx sum = index == 1 ? 0.0 : 1.0;
                double mag = std::abs(sum);
                for (int n = index == 1 ? 0 : 1; n < kMaxTerms; ++n) {
                    cplx term = index == 1 ? (n % 2 ? -2.0 : 2.0) * std::exp(ipt * ((n + 0.5) * (n + 0.5))) *
                                                 std::sin((2.0 * n + 1.0) * z)
                                           : (n % 2 ? -2.0 : 2.0) * std::exp(ipt * double(n * n)) * std::cos(2.0 * n * z);
                    sum += term;
                    mag += std::abs(term);
                }
                worst = std::max(worst, mag / std::max(std::abs(sum), 1e-300));
            }
        }
    return worst;
}

EllipticModuli elliptic_moduli(const HalfPeriodRatio& ratio) {
    HalfPeriodRatio r2 = ratio.doubled();
    cplx t2 = theta(2, 0.0, r2), t3 = theta(3, 0.0, r2), t4 = theta(4, 0.0, r2);
    return {t2 * t2 / (t3 * t3), t4 * t4 / (t3 * t3), t3 * t3 / 2.0};
}

cplx jacobi(JacobiFn fn, cplx lambda, const HalfPeriodRatio& ratio) {
    HalfPeriodRatio r2 = ratio.doubled();
    EllipticModuli mod = elliptic_moduli(ratio);
    cplx den = theta(4, lambda, r2);
    if (std::abs(den) < 1e-14) throw PoleError("jacobi: theta_4 vanishes");
    switch (fn) {
        case JacobiFn::sn:
            return theta(1, lambda, r2) / (std::sqrt(mod.k) * den);
        case JacobiFn::cn:
            return std::sqrt(mod.k_prime / mod.k) * theta(2, lambda, r2) / den;
        case JacobiFn::dn:
            return std::sqrt(mod.k_prime) * theta(3, lambda, r2) / den;
    }
    throw ParameterError("jacobi: unknown function");
}

cplx elliptic_interpolate(const EllipticPolySpec& spec, const std::vector<cplx>& nodes,
                          const std::vector<cplx>& values, cplx eval_at,
                          const HalfPeriodRatio& ratio) {
    if (spec.order < 1) throw ParameterError("interpolate: order must be >= 1");
    if (int(nodes.size()) != spec.order || values.size() != nodes.size())
        throw ParameterError("interpolate: node count must equal the order");
    HalfPeriodRatio r2 = ratio.doubled();
    auto th = [&](cplx z) { return theta(1, z, r2); };
    cplx total = 0.0;
    for (cplx x : nodes) total += x;
    cplx norm = th(spec.norm - total);
    if (std::abs(norm) < 1e-12) throw DegeneracyError("interpolate: degenerate normalization");
    cplx out = 0.0;
    for (size_t a = 0; a < nodes.size(); ++a) {
        cplx c = th(spec.norm + nodes[a] - eval_at - total) / norm;
        for (size_t b = 0; b < nodes.size(); ++b) {
            if (b == a) continue;
            cplx d = th(nodes[a] - nodes[b]);
            if (std::abs(d) < 1e-10) throw DegeneracyError("interpolate: coincident nodes");
            c *= th(eval_at - nodes[b]) / d;
        }
        out += c * values[a];
    }
    return out;
}

}  // namespace xyz

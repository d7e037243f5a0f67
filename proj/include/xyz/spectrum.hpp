#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "xyz/sov.hpp"

namespace xyz {

// Interpolation data for t_hat(l) = theta_4(2l+eta)theta_4(2l-eta) t(l), an even elliptic
// polynomial fixed by its values on the 4 boundary nodes and the N nodes zeta_n^{(0)}.
class Spectrum {
public:
    Spectrum(const Model& m, const GaugeFrame& f);

    const Model& model() const { return m_; }
    const GaugeFrame& frame() const { return f_; }
    int n() const { return m_.n(); }

    const std::vector<cplx>& nodes() const { return nodes_; }
    const std::array<cplx, 4>& boundary_values() const { return bvals_; }
    const std::vector<cplx>& q() const { return q_; }
    double q_scale() const { return q_scale_; }

    // Lagrange function attached to node a (0..3 boundary, 4.. bulk).
    cplx lagrange(int a, cplx x) const;
    cplx j(cplx x) const;
    cplx t_hat(cplx x, const Vec& xs) const;
    cplx t_fn(cplx x, const Vec& xs) const;
    static cplx t_hat_denominator(const Model& m, cplx x);

    // a(l) = a_+(l) A_-^{scalar}(l), the coefficient in the right Q-ratios.
    cplx a_coef(cplx x) const;
    // d coefficient entering the left Q-ratios at bulk node a.
    cplx d_coef(int a) const;
    // hat a(l) = theta_4(2l+eta) theta_4(2l-eta) a(l).
    cplx a_hat(cplx x) const;

    Vec residual(const Vec& xs) const;
    Mat jacobian(const Vec& xs) const;
    double relative_residual(const Vec& xs) const;

private:
    const Model& m_;
    GaugeFrame f_;
    Gauge g_;
    std::vector<cplx> nodes_;
    std::array<cplx, 4> bvals_;
    std::vector<cplx> q_;
    double q_scale_ = 0;
    Vec j1_;  // j(zeta_n^{(1)})
    Mat l1_;  // l_{4+a}(zeta_n^{(1)})
};

struct NewtonResult {
    Vec x;
    double residual = 0;  // relative to max |q_n|
    int iterations = 0;
    bool converged = false;
};

NewtonResult newton_solve(const Spectrum& sp, Vec x0, int max_iter = 100);

struct SpectrumSolution {
    Vec x;
    double residual = 0;
    int oracle_index = -1;
    double oracle_distance = 0;
};

// x_n = t_hat(zeta_n^{(0)}) of each oracle eigenpair, via Rayleigh quotients of the hatted transfer matrix.
std::vector<Vec> oracle_x(const Spectrum& sp, const std::vector<Eigenpair>& oracle);

struct SolveOptions {
    int multistart = 0;  // number of random starts (0 = 16 * 2^N)
    std::uint64_t seed = 0;
    double dedup = 1e-6;
};

struct SolveReport {
    std::vector<SpectrumSolution> solutions;  // oracle-seeded path
    std::vector<SpectrumSolution> multistart;  // seed-free path: homotopy end points then random starts
    int expected = 0;
    bool complete() const { return int(solutions.size()) == expected; }
    bool multistart_complete() const { return int(multistart.size()) == expected; }
};

// Max-norm distance relative to the larger vector.
double x_distance(const Vec& a, const Vec& b);

// Total-degree homotopy from y_n^2 = 1 to the rescaled quadratic system; returns path end points.
std::vector<Vec> homotopy_solve(const Spectrum& sp, std::uint64_t seed);

SolveReport solve_spectrum(const Spectrum& sp, const std::vector<Vec>& seeds, const SolveOptions& opt);

// Nearest oracle x-vector; fills oracle_index / oracle_distance.
void pair_with_oracle(std::vector<SpectrumSolution>& sols, const std::vector<Vec>& oracle);

// Right eigenstate sum_h prod_a [t(zeta_a^0)/a(-zeta_a^0)]^{h_a} V(h) |beta+2,h> and
// left eigenstate sum_h prod_a [d(zeta_a^1)/t(zeta_a^1)]^{h_a} V(h) <beta,h|.
std::vector<cplx> right_q_ratios(const Spectrum& sp, const Vec& xs);
std::vector<cplx> left_q_ratios(const Spectrum& sp, const Vec& xs);
Vec right_eigenstate(const Spectrum& sp, const SovBasis& basis, const Vec& xs);
RowVec left_eigenstate(const Spectrum& sp, const SovBasis& basis, const Vec& xs);

}  // namespace xyz

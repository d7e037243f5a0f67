#include "helpers.hpp"

using namespace xyz;
using xyz::testing::draw;

namespace {

Mat kron(const Mat& a, const Mat& c) {
    Mat o(a.rows() * c.rows(), a.cols() * c.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) o.block(i * c.rows(), j * c.cols(), c.rows(), c.cols()) = a(i, j) * c;
    return o;
}

bool is_scalar(const Mat& m, cplx& value, double tol) {
    value = m.trace() / double(m.rows());
    return rel_diff(m, Mat(value * Mat::Identity(m.rows(), m.cols()))) < tol;
}

}  // namespace

TEST_CASE("R-matrix weights and Yang-Baxter equation") {
    Model m(sample_params(0, 1));
    Weights w0 = m.weights(0.0);
    CHECK(std::abs(w0.b) < 1e-15);
    CHECK(std::abs(w0.d) < 1e-15);
    Mat4 perm = Mat4::Zero();
    perm(0, 0) = perm(3, 3) = perm(1, 2) = perm(2, 1) = 1.0;
    CHECK(rel_diff(Mat(m.r_matrix(0.0)), Mat(w0.a * perm)) < 1e-14);

    std::mt19937_64 rng(4);
    const cplx l = draw(rng), mu = draw(rng);
    Mat i2 = Mat::Identity(2, 2);
    auto r12 = [&](cplx x) { return kron(Mat(m.r_matrix(x)), i2); };
    auto r23 = [&](cplx x) { return kron(i2, Mat(m.r_matrix(x))); };
    Mat p23 = kron(i2, Mat(perm));
    auto r13 = [&](cplx x) { return Mat(p23 * r12(x) * p23); };
    CHECK(rel_diff(r12(l - mu) * r13(l) * r23(mu), r23(mu) * r13(l) * r12(l - mu)) < 1e-11);
}

TEST_CASE("boundary matrix") {
    ModelParams p = sample_params(0, 2);
    p.minus.kappa = 0.0;
    Model m(p);
    Mat2 k = m.k_raw(0.17, p.minus);
    CHECK(std::abs(k(0, 1)) < 1e-15);
    CHECK(std::abs(k(1, 0)) < 1e-15);
    Model g(sample_params(0, 2));
    std::mt19937_64 rng(5);
    cplx l = draw(rng);
    cplx e = g.eta();
    CHECK(rel_diff(g.det_q_k_minus(l), g.p_fn(l - e / 2.0) * g.g_minus(l + e / 2.0) * g.g_minus(-l + e / 2.0)) < 1e-10);
}

TEST_CASE("bulk monodromy") {
    ModelParams p1 = sample_params(1, 3);
    Model m1(p1);
    const cplx l{0.21, -0.04};
    // One site: the monodromy is a single R-matrix in aux x site order.
    CHECK(rel_diff(m1.monodromy(l), Mat(m1.r_matrix(l - p1.xi[0] - p1.eta / 2.0))) < 1e-14);

    Model m(sample_params(2, 3));
    const cplx e = m.eta();
    cplx v;
    // Inversion: M(l + eta/2) Mhat(eta/2 - l) is the bulk quantum determinant times the identity.
    CHECK(is_scalar(m.monodromy(l + e / 2.0) * m.hat_monodromy(e / 2.0 - l), v, 1e-10));
    CHECK(rel_diff(v, m.det_q_bulk(l)) < 1e-10);

    // Bilinear exchange R12(l-mu) M1(l) M2(mu) = M2(mu) M1(l) R12(l-mu) on aux1 x aux2 x chain.
    const cplx mu{-0.12, 0.09};
    const int d = m.dim();
    auto on1 = [&](const Mat& u) {
        AuxBlocks b = split_aux(u);
        Mat i2 = Mat::Identity(2, 2);
        return join_aux({kron(i2, b.A), kron(i2, b.B), kron(i2, b.C), kron(i2, b.D)});
    };
    Mat r = kron(Mat(m.r_matrix(l - mu)), Mat::Identity(d, d));
    Mat m1l = on1(m.monodromy(l)), m2 = kron(Mat::Identity(2, 2), m.monodromy(mu));
    CHECK(rel_diff(r * m1l * m2, m2 * m1l * r) < 1e-10);
}

TEST_CASE("boundary monodromy") {
    Model m0(sample_params(0, 4));
    const cplx l{0.13, 0.05};
    CHECK(rel_diff(m0.u_minus(l), Mat(m0.k_minus(l))) < 1e-15);
    QuantumDet q0 = quantum_det_u_minus(m0, l);
    CHECK(rel_diff(q0.value, m0.det_q_k_minus(l)) < 1e-10);

    Model m(sample_params(2, 4));
    QuantumDet q = quantum_det_u_minus(m, l);
    CHECK(q.eps_agreement < 1e-10);
    CHECK(rel_diff(q.value, m.det_q_k_minus(l) * m.det_q_bulk(l) * m.det_q_bulk(-l)) < 1e-9);

    AuxBlocks u = split_aux(m.u_minus(l)), ut = split_aux(m.u_tilde(l));
    Weights w = m.weights(2.0 * l);
    CHECK(rel_diff(ut.A, Mat(u.D * w.b - u.A * w.c)) < 1e-10);

    cplx v;
    CHECK(is_scalar(m.u_minus(m.eta() / 2.0), v, 1e-10));
}

TEST_CASE("transfer matrix") {
    Model m(sample_params(3, 5));
    const cplx l{0.11, -0.07}, mu{-0.2, 0.1};
    Mat t = m.transfer(l), tm = m.transfer(mu);
    CHECK(rel_diff(m.transfer(-l), t) < 1e-10);
    CHECK((t * tm - tm * t).norm() / (t.norm() * tm.norm()) < 1e-10);
    const cplx z = m.eta() / 2.0;
    cplx v;
    CHECK(is_scalar(m.transfer(z), v, 1e-10));
    CHECK(rel_diff(v * Spectrum::t_hat_denominator(m, z), m.boundary_node_values()[0]) < 1e-10);
    auto nodes = m.boundary_nodes();
    for (int a = 0; a < 4; ++a) {
        CHECK(is_scalar(m.transfer_hat(nodes[a]), v, 1e-9));
        CHECK(rel_diff(v, m.boundary_node_values()[a]) < 1e-9);
        CHECK(rel_diff(m.transfer_hat(-nodes[a]), m.transfer_hat(nodes[a])) < 1e-9);
    }
}

TEST_CASE("open XYZ Hamiltonian") {
    ModelParams p = sample_params(2, 6);
    for (auto& x : p.xi) x = 0.0;
    p.minus.kappa = p.plus.kappa = 0.0;
    Model m(p);
    Mat h = m.xyz_hamiltonian();
    CHECK(h.rows() == 4);
    const cplx l{0.1, 0.05};
    Mat t = m.transfer(l);
    CHECK((h * t - t * h).norm() / (h.norm() * t.norm()) < 1e-10);

    ModelParams iso = sample_params(2, 6);
    iso.omega = {0.0, 8.0};
    for (auto& x : iso.xi) x = 0.0;
    Model mi(iso);
    Mat hi = mi.xyz_hamiltonian();
    // k -> 0: the X and Y couplings both tend to 1.
    Mat2 sx, sy;
    sx << 0.0, 1.0, 1.0, 0.0;
    sy << 0.0, -I1, I1, 0.0;
    Mat xx = site_op(sx, 1, 2) * site_op(sx, 2, 2), yy = site_op(sy, 1, 2) * site_op(sy, 2, 2);
    cplx jx = (xx.adjoint() * hi).trace() / 4.0, jy = (yy.adjoint() * hi).trace() / 4.0;
    CHECK(std::abs(jx - 1.0) < 1e-8);
    CHECK(std::abs(jy - 1.0) < 1e-8);
    CHECK_THROWS_AS(Model(sample_params(1, 1)).xyz_hamiltonian(), ParameterError);
}

TEST_CASE("oracle diagonalization") {
    Model m(sample_params(2, 7));
    auto eig = oracle_diagonalize(m, {0.23, -0.06});
    REQUIRE(eig.size() == 4);
    for (std::size_t i = 0; i < eig.size(); ++i)
        for (std::size_t j = 0; j < eig.size(); ++j) {
            cplx o = (eig[i].left * eig[j].right)(0, 0);
            CHECK(std::abs(o - (i == j ? 1.0 : 0.0)) < 1e-9);
        }
}

TEST_CASE("parameter validation and sampling") {
    ModelParams p = sample_params(2, 8);
    CHECK(esov_margin(p) >= 0.03);
    CHECK(sample_params(2, 8).xi == p.xi);
    p.xi.pop_back();
    CHECK_THROWS_AS(p.validate(), ParameterError);
    ModelParams big = sample_params(0, 1);
    big.n_sites = 11;
    CHECK_THROWS_AS(big.validate(), ParameterError);
    ModelParams bad = sample_params(2, 8);
    bad.xi[1] = bad.xi[0] + bad.eta;
    CHECK(esov_margin(bad) < 1e-12);
}

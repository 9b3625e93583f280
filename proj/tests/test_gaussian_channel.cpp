#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "bgc/gaussian_channel.hpp"
#include "bgc/phase_space.hpp"

using namespace bgc;

TEST_CASE("Pade exponential agrees with Eigen's matrix exponential")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int k = 0; k < 50; ++k) {
        Mat2 a;
        a << u(rng), u(rng), u(rng), u(rng);
        const Mat2 ref = a.exp();
        const double err = (expm_pade6(a) - ref).cwiseAbs().maxCoeff();
        CHECK(err <= 1e-13 * std::max(1.0, ref.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("adaptive Simpson on known integrals")
{
    CHECK(std::abs(adaptive_simpson([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-13) - (std::exp(1.0) - 1.0)) < 1e-12);
    CHECK(std::abs(adaptive_simpson([](double x) { return std::sin(x); }, 0.0, kPi, 1e-13) - 2.0) < 1e-12);
}

TEST_CASE("free particle matrices in closed form")
{
    const double s = 0.8, t = 1.7;
    const GaussianChannelMatrices m = semigroup_matrices(free_particle_spec(s), t);
    Mat2 r, d;
    r << 1.0, 0.0, t, 1.0;
    d << t, t * t / 2.0, t * t / 2.0, t * t * t / 3.0;
    d *= s * s;
    CHECK((m.r - r).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((m.d - d).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(cp_check(m));
}

TEST_CASE("general quadratic Hamiltonian: D by Gauss-Kronrod over Eigen's exponential")
{
    LindbladLinearSpec spec = free_particle_spec(0.6);
    spec.q_mat << 1.0, 0.2, 0.2, 0.7;
    const double t = 1.3;
    const GaussianChannelMatrices m = semigroup_matrices(spec, t);
    const Mat2 omega = symplectic_form();
    const CMat2 k = dissipation_matrix(spec);
    const Mat2 a = omega * spec.q_mat + k.imag() * omega;
    CHECK((m.r - (t * a).exp()).cwiseAbs().maxCoeff() < 1e-13);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            auto f = [&](double s) {
                const Mat2 r = (s * a).exp();
                return (r * k.real() * r.transpose())(i, j);
            };
            const double ref = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, t, 10, 1e-13);
            CHECK(std::abs(m.d(i, j) - ref) < 1e-10);
        }
}

TEST_CASE("semigroup composition of channel matrices")
{
    LindbladLinearSpec spec = free_particle_spec(1.1);
    spec.q_mat << 1.0, 0.0, 0.0, 0.5;
    const double s = 0.4, t = 0.9;
    const auto ms = semigroup_matrices(spec, s), mt = semigroup_matrices(spec, t);
    const auto mst = semigroup_matrices(spec, s + t);
    CHECK((mt.r * ms.r - mst.r).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((mt.r * ms.d * mt.r.transpose() + mt.d - mst.d).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("channel moves the mean along the free flow and adds 2D to the covariance")
{
    const double hb = 0.7, s = 0.9, t = 0.6;
    const StateSum st = coherent_state(Vec2(1.2, -0.3), 1.4, hb);
    const auto m = semigroup_matrices(free_particle_spec(s), t);
    const CharFunction chi0 = [&](const Vec2& xi) { return char_eval(st, xi); };
    // mean from the first derivative: <x> = -i hbar grad chi(0)
    const double h = 1e-5;
    const cplx dp = (apply_gaussian_channel(chi0, m, Vec2(h, 0), hb) - apply_gaussian_channel(chi0, m, Vec2(-h, 0), hb)) / (2 * h);
    const cplx dq = (apply_gaussian_channel(chi0, m, Vec2(0, h), hb) - apply_gaussian_channel(chi0, m, Vec2(0, -h), hb)) / (2 * h);
    CHECK(std::abs((cplx(0, -hb) * dp).real() - 1.2) < 1e-8);
    CHECK(std::abs((cplx(0, -hb) * dq).real() - (-0.3 + t * 1.2)) < 1e-8);
}

TEST_CASE("complete positivity check rejects an unphysical noise matrix")
{
    GaussianChannelMatrices m;
    m.r = Mat2::Identity();
    m.d = Mat2::Zero();
    CHECK(cp_check(m));
    m.r << 2.0, 0.0, 0.0, 2.0;  // amplification without noise
    CHECK_FALSE(cp_check(m));
    m.d = -0.1 * Mat2::Identity();
    m.r = Mat2::Identity();
    CHECK_FALSE(cp_check(m));
}

#include "bgc/gaussian_channel.hpp"

#include <cmath>

#include "bgc/phase_space.hpp"

namespace bgc {

LindbladLinearSpec free_particle_spec(double sigma)
{
    LindbladLinearSpec s;
    s.q_mat << 1.0, 0.0, 0.0, 0.0;
    s.l_vecs.push_back(CVec2(-sigma, 0.0));
    return s;
}

CMat2 dissipation_matrix(const LindbladLinearSpec& spec)
{
    CMat2 k = CMat2::Zero();
    for (const auto& l : spec.l_vecs) k += l.conjugate() * l.transpose();
    return k;
}

Mat2 expm_pade6(const Mat2& a)
{
    static constexpr double c[7] = {1.0,          0.5,           5.0 / 44.0,     1.0 / 66.0,
                                    1.0 / 792.0,  1.0 / 15840.0, 1.0 / 665280.0};
    const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
    int s = 0;
    if (norm > 0.5) s = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    const Mat2 x = a / std::ldexp(1.0, s);
    Mat2 pw = Mat2::Identity();
    Mat2 num = Mat2::Zero(), den = Mat2::Zero();
    for (int k = 0; k <= 6; ++k) {
        num += c[k] * pw;
        den += ((k % 2) ? -c[k] : c[k]) * pw;
        pw = pw * x;
    }
    Mat2 r = den.partialPivLu().solve(num);
    for (int k = 0; k < s; ++k) r = r * r;
    return r;
}

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa,
                    double fm, double fb, double whole, double tol, int depth)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double diff = left + right - whole;
    if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol)
{
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, tol, 50);
}

GaussianChannelMatrices semigroup_matrices(const LindbladLinearSpec& spec, double t)
{
    require(std::isfinite(t) && t >= 0.0, "time must be >= 0");
    require((spec.q_mat - spec.q_mat.transpose()).cwiseAbs().maxCoeff() <= 1e-14 *
                std::max(1.0, spec.q_mat.cwiseAbs().maxCoeff()),
            "Hamiltonian matrix must be symmetric");
    const Mat2 omega = symplectic_form();
    const CMat2 k = dissipation_matrix(spec);
    const Mat2 re_k = k.real();
    const Mat2 a = omega * spec.q_mat + k.imag() * omega;

    GaussianChannelMatrices m;
    m.t = t;
    const Mat2 a2 = a * a;
    const double an = a.cwiseAbs().maxCoeff();
    if (a2.cwiseAbs().maxCoeff() <= 1e-14 * an * an) {
        m.r = Mat2::Identity() + t * a;
        m.d = re_k * t + (a * re_k + re_k * a.transpose()) * (t * t / 2.0) +
              a * re_k * a.transpose() * (t * t * t / 3.0);
        return m;
    }
    m.r = expm_pade6(t * a);
    auto entry = [&](int i, int j) {
        return adaptive_simpson(
            [&](double s) {
                const Mat2 r = expm_pade6(s * a);
                return (r * re_k * r.transpose())(i, j);
            },
            0.0, t, 1e-12);
    };
    m.d(0, 0) = entry(0, 0);
    m.d(1, 1) = entry(1, 1);
    m.d(0, 1) = m.d(1, 0) = entry(0, 1);
    return m;
}

cplx apply_gaussian_channel(const CharFunction& chi, const GaussianChannelMatrices& m,
                            const Vec2& xi, double hbar)
{
    const double damp = xi.dot(m.d * xi) / (2.0 * hbar);
    return std::exp(-damp) * chi(m.r.transpose() * xi);
}

bool cp_check(const GaussianChannelMatrices& m)
{
    const cplx i(0.0, 1.0);
    const Mat2 omega = symplectic_form();
    const CMat2 h = m.d.cast<cplx>() + i * omega.cast<cplx>() -
                    i * (m.r.transpose() * omega * m.r).cast<cplx>();
    Eigen::SelfAdjointEigenSolver<CMat2> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -1e-12;
}

} // namespace bgc

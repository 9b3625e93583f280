#pragma once

#include <functional>
#include <vector>

#include "bgc/common.hpp"

namespace bgc {

/// H = x.Q x/2 and L_k = l_k . Omega x.
struct LindbladLinearSpec {
    Mat2 q_mat = Mat2::Zero();
    std::vector<CVec2> l_vecs;
};

struct GaussianChannelMatrices {
    Mat2 r = Mat2::Identity();
    Mat2 d = Mat2::Zero();
    double t = 0.0;
};

/// Free particle with L = sigma q: Q = diag(1,0), l = (-sigma, 0).
LindbladLinearSpec free_particle_spec(double sigma);

/// K = sum_k conj(l_k) l_k^T
CMat2 dissipation_matrix(const LindbladLinearSpec& spec);

/// Scaling-and-squaring with a diagonal Pade(6,6) approximant.
Mat2 expm_pade6(const Mat2& a);

/// Adaptive Simpson quadrature on [a,b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol);

GaussianChannelMatrices semigroup_matrices(const LindbladLinearSpec& spec, double t);

using CharFunction = std::function<cplx(const Vec2&)>;

/// chi_out(xi) = exp(-xi.D xi/2 hbar) chi(R^T xi).
cplx apply_gaussian_channel(const CharFunction& chi, const GaussianChannelMatrices& m,
                            const Vec2& xi, double hbar);

bool cp_check(const GaussianChannelMatrices& m);

} // namespace bgc

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bgc/phase_space.hpp"

namespace bgc {

/// Uniform (p,q) grid with endpoints included. values are row-major with one
/// row per p node and q contiguous.
struct PhaseSpaceGrid {
    double p_min = -10.0, p_max = 10.0;
    double q_min = -10.0, q_max = 10.0;
    std::size_t n_p = 512, n_q = 512;
    std::vector<cplx> values;

    double dp() const { return (p_max - p_min) / static_cast<double>(n_p - 1); }
    double dq() const { return (q_max - q_min) / static_cast<double>(n_q - 1); }
    double p(std::size_t i) const { return p_min + dp() * static_cast<double>(i); }
    double q(std::size_t j) const { return q_min + dq() * static_cast<double>(j); }
    cplx& at(std::size_t i, std::size_t j) { return values[i * n_q + j]; }
    const cplx& at(std::size_t i, std::size_t j) const { return values[i * n_q + j]; }

    void allocate() { values.assign(n_p * n_q, cplx(0.0)); }
    /// sum of values times the cell area
    cplx mass() const;
};

void validate(const PhaseSpaceGrid& grid);

PhaseSpaceGrid sample_wigner(const StateSum& state, PhaseSpaceGrid grid);

double max_abs_diff(const PhaseSpaceGrid& a, const PhaseSpaceGrid& b);

/// CSV with columns p,q,re_w,im_w; outer loop over q, inner over p.
void write_grid_csv(const PhaseSpaceGrid& grid, const std::string& path);

} // namespace bgc

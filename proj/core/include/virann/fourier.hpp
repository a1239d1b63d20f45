#pragma once

#include <vector>

#include "virann/types.hpp"

namespace virann::fourier {

// Forward DFT, F_n = (1/G) sum_j f_j e^{-i n theta_j}, stored in FFT order.
std::vector<cplx> analyze(const std::vector<cplx>& samples);
// Inverse of analyze.
std::vector<cplx> synthesize(const std::vector<cplx>& coeffs);

// Signed frequency of FFT slot j for length G.
inline int frequency(int j, int G) { return j <= G / 2 ? j : j - G; }

// Spectral theta-derivative of periodic samples on a uniform grid.
std::vector<cplx> derivative(const std::vector<cplx>& samples);

inline double grid_point(int j, int G) { return 2.0 * 3.14159265358979323846 * j / G; }

}  // namespace virann::fourier

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hkprop/types.hpp"

namespace hkprop::fft {

/// Unnormalized forward DFT, in place.
void forward(Eigen::VectorXcd& data);

/// Inverse DFT, normalized by 1/n, in place.
void inverse(Eigen::VectorXcd& data);

/// Angular wavenumbers 2*pi*m/length in FFT storage order
/// (m = 0, 1, ..., n/2-1, -n/2, ..., -1).
Eigen::VectorXd wavenumbers(int n, double length);

/// Spectral upsampling by an integer factor (zero padding in frequency).
Eigen::VectorXcd upsample(const Eigen::VectorXcd& data, int factor);

}  // namespace hkprop::fft

#pragma once

#include <random>

#include "hkprop/types.hpp"
#include "hkprop/wavepackets.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace hkprop::testutil {

inline std::mt19937_64 rng(std::uint64_t seed = 12345) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& gen, double lo, double hi)
{
	return lo + (hi - lo) * (static_cast<double>(gen() >> 11) * 0x1.0p-53);
}

inline PhasePoint random_point(std::mt19937_64& gen, int d, double scale = 2.0)
{
	Eigen::VectorXd q(d), p(d);
	for (int i = 0; i < d; ++i) {
		q[i] = uniform(gen, -scale, scale);
		p[i] = uniform(gen, -scale, scale);
	}
	return {q, p};
}

/// Random element of the Siegel half space: Re symmetric, Im = L L^T + delta.
inline wavepackets::SiegelMatrix random_siegel(std::mt19937_64& gen, int d, double spread = 1.0)
{
	Eigen::MatrixXd re(d, d), L(d, d);
	for (int i = 0; i < d; ++i)
		for (int j = 0; j < d; ++j) {
			re(i, j) = uniform(gen, -spread, spread);
			L(i, j) = uniform(gen, -spread, spread);
		}
	re = (0.5 * (re + re.transpose())).eval();
	Eigen::MatrixXd im = L * L.transpose() + 0.3 * Eigen::MatrixXd::Identity(d, d);
	return wavepackets::SiegelMatrix(re.cast<Complex>() + kI * im.cast<Complex>());
}

/// Random symplectic matrix exp(J S) with S symmetric.
inline Eigen::MatrixXd random_symplectic(std::mt19937_64& gen, int d, double spread = 0.8)
{
	const int n = 2 * d;
	Eigen::MatrixXd S(n, n);
	for (int i = 0; i < n; ++i)
		for (int j = 0; j < n; ++j) S(i, j) = uniform(gen, -spread, spread);
	S = (0.5 * (S + S.transpose())).eval();
	return (symplectic_J(d) * S).exp();
}

/// Brute-force overlap by grid quadrature, the independent oracle for the
/// closed-form inner product.
inline Complex overlap_by_quadrature(const wavepackets::GaussianWavePacket& a,
                                     const wavepackets::GaussianWavePacket& b, int n = 16384,
                                     double pad = 12.0)
{
	const double sa = std::sqrt(a.eps / a.width.min_imag_eigenvalue());
	const double sb = std::sqrt(b.eps / b.width.min_imag_eigenvalue());
	const double lo = std::min(a.center.q[0] - pad * sa, b.center.q[0] - pad * sb);
	const double hi = std::max(a.center.q[0] + pad * sa, b.center.q[0] + pad * sb);
	const double h = (hi - lo) / n;
	Complex acc = 0.0;
	for (int i = 0; i < n; ++i) {
		Eigen::VectorXd x(1);
		x[0] = lo + h * i;
		acc += std::conj(a.value_at(x)) * b.value_at(x);
	}
	return acc * h;
}

}  // namespace hkprop::testutil

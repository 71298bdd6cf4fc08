#pragma once

#include <functional>
#include <span>
#include <vector>

#include "hkprop/wavepackets.hpp"

namespace hkprop::reference {

using wavepackets::GridFunction;

struct SplitStepOptions {
	double dt = 1e-3;
	bool warn_boundary_mass = true;
};

/// Strang splitting for i eps d/dt psi = (-eps^2/2 Lap + V(x)) psi with a
/// spectral kinetic step and the exact pointwise potential exponential
/// (matrix exponential for two levels). The potential is time independent.
GridFunction split_step(const GridFunction& psi0,
                        const std::function<Eigen::MatrixXcd(double)>& potential, double t0, double t1,
                        const SplitStepOptions& opts = {});

/// Scalar-potential convenience overload.
GridFunction split_step(const GridFunction& psi0, const std::function<double(double)>& potential,
                        double t0, double t1, const SplitStepOptions& opts = {});

struct ToySolveOptions {
	double rtol = 1e-11;
	double atol = 1e-13;
};

/// Exact (in eps) transport solution for the d = 1 two-level symbol with
/// eigenvalues p -+ k q: the equation reduces along characteristics to a
/// 2x2 ODE in the spatial variable, solved once as a fundamental matrix
/// over all needed points, re-unitarized, and composed per grid point.
/// psi0 must be a two-level grid function; the shifted argument is
/// evaluated spectrally.
std::vector<GridFunction> solve_toy_exact(double k, double theta, const GridFunction& psi0, double t0,
                                          std::span<const double> times, const ToySolveOptions& opts = {});

GridFunction solve_toy_exact(double k, double theta, const GridFunction& psi0, double t0, double t1,
                             const ToySolveOptions& opts = {});

/// Leading-order transfer coefficient of the toy transport ODE: the
/// sqrt(eps)-scaled amplitude deposited on the other eigenvector branch by
/// one generic crossing, with its Fresnel phase.
Complex toy_transfer_coefficient(double k, double theta);

/// Two-term small-eps asymptotics of the toy transport ODE for data
/// a0 * Y_-(sigma0) with sigma0 < 0: adiabatic term on Y_- plus (for
/// sigma > 0) the sqrt(eps) transition term on Y_+.
Eigen::Vector2cd friedrichs_asymptotic(double k, double theta, double eps, double sigma0, double sigma,
                                       Complex a0 = Complex(1.0, 0.0));

/// Fixed eigenvectors of the toy coupling matrix, (e^{i theta x}, +-1)/sqrt(2).
Eigen::Vector2cd toy_eigenvector_plus(double theta, double x);
Eigen::Vector2cd toy_eigenvector_minus(double theta, double x);

}  // namespace hkprop::reference

#include "hkprop/reference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "hkprop/fft.hpp"
#include "hkprop/ode.hpp"

namespace hkprop::reference {

namespace {

/// exp(-i tau H / eps) for a Hermitian 2x2 H, via the trace/traceless split.
Eigen::Matrix2cd hermitian_phase(const Eigen::Matrix2cd& H, double tau_over_eps)
{
	const Complex tr = 0.5 * (H(0, 0) + H(1, 1));
	Eigen::Matrix2cd B = H - tr.real() * Eigen::Matrix2cd::Identity();
	const double r = std::sqrt(std::abs(std::norm(B(0, 0)) + std::norm(B(0, 1))));
	const Complex phase = std::exp(Complex(0, -tau_over_eps * tr.real()));
	if (r < 1e-300) return phase * Eigen::Matrix2cd::Identity();
	const double ang = tau_over_eps * r;
	return phase * (std::cos(ang) * Eigen::Matrix2cd::Identity() -
	                kI * std::sin(ang) / r * B);
}

void check_boundary_mass(const GridFunction& f, const char* where)
{
	const long n = f.size();
	double edge = 0.0, peak = 0.0;
	for (int l = 0; l < f.levels(); ++l) {
		edge = std::max({edge, std::abs(f.values(0, l)), std::abs(f.values(n - 1, l))});
		peak = std::max(peak, f.values.col(l).cwiseAbs().maxCoeff());
	}
	if (edge > 1e-12 * std::max(peak, 1e-300))
		std::fprintf(stderr, "hkprop: warning: %s: boundary amplitude %.2e of peak %.2e\n", where, edge,
		             peak);
}

}  // namespace

GridFunction split_step(const GridFunction& psi0,
                        const std::function<Eigen::MatrixXcd(double)>& potential, double t0, double t1,
                        const SplitStepOptions& opts)
{
	if (psi0.grid.dim() != 1) throw ConfigError("split_step: implemented for d = 1");
	if (t1 == t0) return psi0;
	if (t1 < t0) throw ConfigError("split_step: backward evolution not supported");
	if (opts.warn_boundary_mass) check_boundary_mass(psi0, "split_step input");

	const auto& ax = psi0.grid.axes[0];
	const int n = ax.n;
	const int levels = psi0.levels();
	const double eps = psi0.eps;
	const long steps = std::max<long>(1, static_cast<long>(std::ceil((t1 - t0) / opts.dt)));
	const double dt = (t1 - t0) / static_cast<double>(steps);

	// kinetic phase exp(-i dt eps k^2 / 2) in FFT order
	const Eigen::VectorXd kf = fft::wavenumbers(n, ax.hi - ax.lo);
	Eigen::VectorXcd kin(n);
	for (int i = 0; i < n; ++i) kin[i] = std::exp(Complex(0, -0.5 * dt * eps * kf[i] * kf[i]));

	// pointwise potential propagators for half and full steps
	std::vector<Eigen::Matrix2cd> vhalf, vfull;
	Eigen::VectorXcd shalf(n), sfull(n);
	const bool matrix_potential = levels == 2;
	for (int i = 0; i < n; ++i) {
		const Eigen::MatrixXcd V = potential(ax.coord(i));
		if (matrix_potential) {
			if (V.rows() != 2) throw ConfigError("split_step: potential level count mismatch");
			vhalf.push_back(hermitian_phase(V, 0.5 * dt / eps));
			vfull.push_back(hermitian_phase(V, dt / eps));
		} else {
			if (V.rows() != 1) throw ConfigError("split_step: potential level count mismatch");
			shalf[i] = std::exp(Complex(0, -0.5 * dt * V(0, 0).real() / eps));
			sfull[i] = shalf[i] * shalf[i];
		}
	}

	Eigen::MatrixXcd psi = psi0.values;
	auto apply_potential = [&](bool half) {
		if (matrix_potential) {
			const auto& table = half ? vhalf : vfull;
			for (int i = 0; i < n; ++i) {
				const Eigen::Vector2cd v = table[static_cast<std::size_t>(i)] *
				                           Eigen::Vector2cd(psi(i, 0), psi(i, 1));
				psi(i, 0) = v[0];
				psi(i, 1) = v[1];
			}
		} else {
			psi.col(0).array() *= (half ? shalf : sfull).array();
		}
	};
	auto apply_kinetic = [&]() {
		for (int l = 0; l < levels; ++l) {
			Eigen::VectorXcd col = psi.col(l);
			fft::forward(col);
			col.array() *= kin.array();
			fft::inverse(col);
			psi.col(l) = col;
		}
	};

	apply_potential(true);
	for (long s = 0; s + 1 < steps; ++s) {
		apply_kinetic();
		apply_potential(false);
	}
	apply_kinetic();
	apply_potential(true);

	GridFunction out = psi0;
	out.values = std::move(psi);
	if (opts.warn_boundary_mass) check_boundary_mass(out, "split_step output");
	return out;
}

GridFunction split_step(const GridFunction& psi0, const std::function<double(double)>& potential,
                        double t0, double t1, const SplitStepOptions& opts)
{
	return split_step(
	    psi0,
	    [&potential](double x) {
		    Eigen::MatrixXcd v(1, 1);
		    v(0, 0) = potential(x);
		    return v;
	    },
	    t0, t1, opts);
}

namespace {

/// Fundamental matrix of i eps M' = k s V_theta(s) M at all requested
/// points, unitarized by the polar projection.
std::map<double, Eigen::Matrix2cd> toy_fundamental_matrix(double k, double theta, double eps,
                                                          std::vector<double> sigmas,
                                                          const ToySolveOptions& opts)
{
	std::sort(sigmas.begin(), sigmas.end());
	sigmas.erase(std::unique(sigmas.begin(), sigmas.end()), sigmas.end());

	auto rhs = [k, theta, eps](double s, const Eigen::VectorXcd& y) {
		const Complex e = std::polar(1.0, theta * s);
		const Complex w = Complex(0, -k * s / eps);
		Eigen::VectorXcd dy(4);
		// column-major 2x2: [m00 m10 m01 m11]; dM = w * V * M
		dy[0] = w * e * y[1];
		dy[1] = w * std::conj(e) * y[0];
		dy[2] = w * e * y[3];
		dy[3] = w * std::conj(e) * y[2];
		return dy;
	};

	Eigen::VectorXcd m0(4);
	m0 << 1.0, 0.0, 0.0, 1.0;
	ode::Options oo;
	oo.rtol = opts.rtol;
	oo.atol = opts.atol;

	std::map<double, Eigen::Matrix2cd> out;
	ode::integrate_at_times<Eigen::VectorXcd>(
	    rhs, sigmas, m0,
	    [&](std::size_t, double s, const Eigen::VectorXcd& y) {
		    Eigen::Matrix2cd M;
		    M << y[0], y[2], y[1], y[3];
		    Eigen::JacobiSVD<Eigen::Matrix2cd> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
		    out[s] = svd.matrixU() * svd.matrixV().adjoint();
	    },
	    oo);
	return out;
}

Eigen::MatrixXcd spectral_shift(const Eigen::MatrixXcd& values, const wavepackets::GridAxis& ax,
                                double shift)
{
	Eigen::MatrixXcd out = values;
	const Eigen::VectorXd kf = fft::wavenumbers(ax.n, ax.hi - ax.lo);
	for (int l = 0; l < out.cols(); ++l) {
		Eigen::VectorXcd col = out.col(l);
		fft::forward(col);
		for (int i = 0; i < ax.n; ++i) col[i] *= std::exp(Complex(0, -kf[i] * shift));
		fft::inverse(col);
		out.col(l) = col;
	}
	return out;
}

}  // namespace

std::vector<GridFunction> solve_toy_exact(double k, double theta, const GridFunction& psi0, double t0,
                                          std::span<const double> times, const ToySolveOptions& opts)
{
	if (psi0.grid.dim() != 1 || psi0.levels() != 2)
		throw ConfigError("solve_toy_exact: needs a two-level d = 1 grid function");
	const auto& ax = psi0.grid.axes[0];

	std::vector<double> sigmas;
	sigmas.reserve(static_cast<std::size_t>(ax.n) * (times.size() + 1));
	for (int i = 0; i < ax.n; ++i) sigmas.push_back(ax.coord(i));
	for (double t : times)
		for (int i = 0; i < ax.n; ++i) sigmas.push_back(ax.coord(i) - (t - t0));
	const auto M = toy_fundamental_matrix(k, theta, psi0.eps, std::move(sigmas), opts);

	std::vector<GridFunction> out;
	out.reserve(times.size());
	for (double t : times) {
		const double delta = t - t0;
		GridFunction f = psi0;
		if (delta != 0.0) f.values = spectral_shift(psi0.values, ax, delta);
		for (int i = 0; i < ax.n; ++i) {
			const double x = ax.coord(i);
			const Eigen::Matrix2cd R = M.at(x) * M.at(x - delta).adjoint();
			const Eigen::Vector2cd v = R * Eigen::Vector2cd(f.values(i, 0), f.values(i, 1));
			f.values(i, 0) = v[0];
			f.values(i, 1) = v[1];
		}
		out.push_back(std::move(f));
	}
	return out;
}

GridFunction solve_toy_exact(double k, double theta, const GridFunction& psi0, double t0, double t1,
                             const ToySolveOptions& opts)
{
	const double ts[1] = {t1};
	return solve_toy_exact(k, theta, psi0, t0, std::span<const double>(ts, 1), opts)[0];
}

Complex toy_transfer_coefficient(double k, double theta)
{
	const double sgn = k > 0 ? 1.0 : -1.0;
	return -kI * (theta / 2.0) * std::sqrt(M_PI / std::abs(k)) * std::polar(1.0, sgn * M_PI / 4.0);
}

Eigen::Vector2cd toy_eigenvector_plus(double theta, double x)
{
	return Eigen::Vector2cd(std::polar(1.0, theta * x), 1.0) / std::sqrt(2.0);
}

Eigen::Vector2cd toy_eigenvector_minus(double theta, double x)
{
	return Eigen::Vector2cd(std::polar(1.0, theta * x), -1.0) / std::sqrt(2.0);
}

Eigen::Vector2cd friedrichs_asymptotic(double k, double theta, double eps, double sigma0, double sigma,
                                       Complex a0)
{
	if (sigma0 >= 0.0) throw ConfigError("friedrichs_asymptotic: needs sigma0 < 0");
	const Complex common = a0 * std::polar(1.0, -0.5 * theta * (sigma - sigma0));
	Eigen::Vector2cd out =
	    common * std::exp(Complex(0, 0.5 * k * (sigma * sigma - sigma0 * sigma0) / eps)) *
	    toy_eigenvector_minus(theta, sigma);
	if (sigma > 0.0) {
		out += std::sqrt(eps) * toy_transfer_coefficient(k, theta) * common *
		       std::exp(Complex(0, -0.5 * k * (sigma * sigma + sigma0 * sigma0) / eps)) *
		       toy_eigenvector_plus(theta, sigma);
	}
	return out;
}

}  // namespace hkprop::reference

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hkprop/types.hpp"

namespace hkprop::wavepackets {

/// Complex symmetric d x d matrix with positive definite imaginary part
/// (admissible Gaussian width). The constructor validates membership.
class SiegelMatrix {
public:
	explicit SiegelMatrix(Eigen::MatrixXcd gamma);
	static SiegelMatrix standard(int d);  // i * Id

	const Eigen::MatrixXcd& mat() const { return gamma_; }
	int dim() const { return static_cast<int>(gamma_.rows()); }
	Eigen::MatrixXd imag() const { return gamma_.imag(); }
	double min_imag_eigenvalue() const;

private:
	Eigen::MatrixXcd gamma_;
};

/// det^{1/4}(Im Gamma), the positive normalization constant.
double c_gamma(const SiegelMatrix& width);

/// amplitude * (pi eps)^{-d/4} * exp((i/eps)[p.(x-q) + Gamma (x-q).(x-q)/2]).
/// With amplitude == c_gamma(width) the packet has unit L2 norm.
struct GaussianWavePacket {
	double eps = 1.0;
	PhasePoint center;
	SiegelMatrix width;
	Complex amplitude{1.0, 0.0};

	GaussianWavePacket(double eps_, PhasePoint z, SiegelMatrix w, Complex amp)
	    : eps(eps_), center(std::move(z)), width(std::move(w)), amplitude(amp) {}

	/// Unit-norm packet with the given width.
	static GaussianWavePacket normalized(double eps, PhasePoint z, SiegelMatrix w);
	/// Unit-norm packet with the standard width i*Id.
	static GaussianWavePacket standard(double eps, PhasePoint z);

	int dim() const { return center.dim(); }
	double norm() const;  // |amplitude| / c_gamma
	Complex value_at(const Eigen::VectorXd& x) const;
};

struct GridAxis {
	double lo = 0.0;
	double hi = 1.0;
	int n = 2;
	double step() const { return (hi - lo) / n; }
	double coord(int i) const { return lo + step() * i; }
};

/// Uniform tensor grid, endpoint-exclusive per axis (periodic convention).
struct Grid {
	std::vector<GridAxis> axes;

	int dim() const { return static_cast<int>(axes.size()); }
	long size() const;
	double cell_volume() const;
	Eigen::VectorXd coord(long flat) const;
	bool operator==(const Grid& other) const;

	static Grid uniform_1d(double lo, double hi, int n) { return Grid{{GridAxis{lo, hi, n}}}; }
};

/// Complex function values on a grid, one column per level, tagged with eps.
struct GridFunction {
	Grid grid;
	double eps = 1.0;
	Eigen::MatrixXcd values;  // grid.size() x levels

	int levels() const { return static_cast<int>(values.cols()); }
	long size() const { return static_cast<long>(values.rows()); }

	static GridFunction zero(const Grid& g, double eps, int levels = 1);
};

/// Grid sized for a packet: center +- 8 std deviations per axis, resolution
/// of at least `points_per_length` nodes per sqrt(eps) length scale, rounded
/// up to a power of two.
Grid grid_for_packet(const GaussianWavePacket& packet, int points_per_length = 32, double pad_sigmas = 8.0);

/// Pointwise packet values; warns (stderr, once per call) when the grid is
/// under-resolved.
GridFunction evaluate(const GaussianWavePacket& packet, const Grid& grid);

/// Add amplitude-weighted packet values into one level of an existing grid
/// function (synthesis workhorse).
void accumulate(GridFunction& into, int level, const GaussianWavePacket& packet, Complex scale);

/// Closed-form inner product <a, b>, antilinear in the first argument.
Complex overlap(const GaussianWavePacket& a, const GaussianWavePacket& b);

double l2_norm(const GridFunction& f);
Complex inner(const GridFunction& a, const GridFunction& b);

/// Coefficients <g_z, f> of a scalar grid function against standard-width
/// packets at the given phase-space nodes.
Eigen::VectorXcd analyze(const GridFunction& f, std::span<const PhasePoint> nodes);

/// (2 pi eps)^{-d} sum_j w_j c_j g_{z_j} evaluated on the grid.
GridFunction synthesize(const Eigen::VectorXcd& coeffs, std::span<const PhasePoint> nodes,
                        const Eigen::VectorXd& weights, double eps, const Grid& grid);

/// Sigma_k norm: sup over |a|+|b| <= k of || x^a (eps d/dx)^b f ||_{L2}
/// (d = 1, spectral differentiation).
double sigma_norm(const GridFunction& f, int k);

}  // namespace hkprop::wavepackets

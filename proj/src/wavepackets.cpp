#include "hkprop/wavepackets.hpp"

#include <cmath>
#include <cstdio>

#include "hkprop/fft.hpp"

namespace hkprop::wavepackets {

SiegelMatrix::SiegelMatrix(Eigen::MatrixXcd gamma) : gamma_(std::move(gamma))
{
	if (gamma_.rows() != gamma_.cols()) throw ConfigError("SiegelMatrix: not square");
	const double asym = (gamma_ - gamma_.transpose()).norm();
	if (asym > 1e-12 * std::max(1.0, gamma_.norm()))
		throw ConfigError("SiegelMatrix: width matrix is not symmetric");
	gamma_ = 0.5 * (gamma_ + gamma_.transpose()).eval();
	Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gamma_.imag());
	if (es.eigenvalues().minCoeff() <= 0.0)
		throw ConfigError("SiegelMatrix: imaginary part is not positive definite");
}

SiegelMatrix SiegelMatrix::standard(int d)
{
	return SiegelMatrix(kI * Eigen::MatrixXcd::Identity(d, d));
}

double SiegelMatrix::min_imag_eigenvalue() const
{
	Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gamma_.imag());
	return es.eigenvalues().minCoeff();
}

double c_gamma(const SiegelMatrix& width)
{
	Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(width.imag());
	return std::exp(0.25 * es.eigenvalues().array().log().sum());
}

GaussianWavePacket GaussianWavePacket::normalized(double eps, PhasePoint z, SiegelMatrix w)
{
	const double c = c_gamma(w);
	return GaussianWavePacket(eps, std::move(z), std::move(w), Complex(c, 0.0));
}

GaussianWavePacket GaussianWavePacket::standard(double eps, PhasePoint z)
{
	const int d = z.dim();
	return normalized(eps, std::move(z), SiegelMatrix::standard(d));
}

double GaussianWavePacket::norm() const { return std::abs(amplitude) / c_gamma(width); }

Complex GaussianWavePacket::value_at(const Eigen::VectorXd& x) const
{
	const int d = dim();
	const Eigen::VectorXd dx = x - center.q;
	const Complex quad = 0.5 * (dx.cast<Complex>().dot(width.mat() * dx.cast<Complex>()));
	// VectorXcd::dot conjugates the first argument; dx is real so this is the plain bilinear form
	const Complex expo = (kI / eps) * (center.p.dot(dx) + quad);
	return amplitude * std::pow(M_PI * eps, -0.25 * d) * std::exp(expo);
}

long Grid::size() const
{
	long n = 1;
	for (const auto& a : axes) n *= a.n;
	return n;
}

double Grid::cell_volume() const
{
	double v = 1.0;
	for (const auto& a : axes) v *= a.step();
	return v;
}

Eigen::VectorXd Grid::coord(long flat) const
{
	Eigen::VectorXd x(dim());
	for (int a = dim() - 1; a >= 0; --a) {
		const long n = axes[static_cast<std::size_t>(a)].n;
		x[a] = axes[static_cast<std::size_t>(a)].coord(static_cast<int>(flat % n));
		flat /= n;
	}
	return x;
}

bool Grid::operator==(const Grid& other) const
{
	if (axes.size() != other.axes.size()) return false;
	for (std::size_t i = 0; i < axes.size(); ++i) {
		if (axes[i].lo != other.axes[i].lo || axes[i].hi != other.axes[i].hi || axes[i].n != other.axes[i].n)
			return false;
	}
	return true;
}

GridFunction GridFunction::zero(const Grid& g, double eps, int levels)
{
	GridFunction f;
	f.grid = g;
	f.eps = eps;
	f.values = Eigen::MatrixXcd::Zero(g.size(), levels);
	return f;
}

namespace {

int next_pow2(double x)
{
	int n = 2;
	while (n < x && n < (1 << 24)) n *= 2;
	return n;
}

}  // namespace

Grid grid_for_packet(const GaussianWavePacket& packet, int points_per_length, double pad_sigmas)
{
	const double eps = packet.eps;
	Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(packet.width.imag());
	const double lmin = es.eigenvalues().minCoeff();
	const double lmax = es.eigenvalues().maxCoeff();
	const double sigma = std::sqrt(eps / lmin);
	const double gnorm = packet.width.mat().norm();
	Grid g;
	for (int a = 0; a < packet.dim(); ++a) {
		const double lo = packet.center.q[a] - pad_sigmas * sigma;
		const double hi = packet.center.q[a] + pad_sigmas * sigma;
		const double kmax =
		    (packet.center.p.cwiseAbs().maxCoeff() + gnorm * pad_sigmas * sigma) / eps + 1.0;
		const double step_packet = std::sqrt(eps / lmax) / points_per_length;
		const double step_phase = 2.0 * M_PI / (8.0 * kmax);
		const double step = std::min(step_packet, step_phase);
		g.axes.push_back(GridAxis{lo, hi, next_pow2((hi - lo) / step)});
	}
	return g;
}

namespace {

void accumulate_1d(GridFunction& into, int level, const GaussianWavePacket& packet, Complex scale)
{
	const auto& ax = into.grid.axes[0];
	const long n = ax.n;
	const double eps = packet.eps;
	const double q = packet.center.q[0];
	const double p = packet.center.p[0];
	const Complex gam = packet.width.mat()(0, 0);
	const Complex c2 = kI * gam / (2.0 * eps);
	const Complex c1 = kI * p / eps;
	const Complex pref = scale * packet.amplitude * std::pow(M_PI * eps, -0.25);

	Eigen::ArrayXd dx(n);
	for (long i = 0; i < n; ++i) dx[i] = ax.coord(static_cast<int>(i)) - q;
	into.values.col(level).array() += pref * (c2 * dx.square().cast<Complex>() + c1 * dx.cast<Complex>()).exp();
}

}  // namespace

void accumulate(GridFunction& into, int level, const GaussianWavePacket& packet, Complex scale)
{
	if (into.grid.dim() != packet.dim()) throw ConfigError("accumulate: dimension mismatch");
	if (into.grid.dim() == 1) {
		accumulate_1d(into, level, packet, scale);
		return;
	}
	for (long i = 0; i < into.size(); ++i)
		into.values(i, level) += scale * packet.value_at(into.grid.coord(i));
}

GridFunction evaluate(const GaussianWavePacket& packet, const Grid& grid)
{
	if (grid.dim() != packet.dim()) throw ConfigError("evaluate: dimension mismatch");
	Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(packet.width.imag());
	const double lmax = es.eigenvalues().maxCoeff();
	const double resolved = std::sqrt(packet.eps / lmax) / 16.0;
	for (const auto& ax : grid.axes) {
		if (ax.step() > resolved) {
			std::fprintf(stderr,
			             "hkprop: warning: grid step %.3g under-resolves packet scale %.3g\n",
			             ax.step(), resolved * 16.0);
			break;
		}
	}
	GridFunction f = GridFunction::zero(grid, packet.eps, 1);
	accumulate(f, 0, packet, Complex(1.0, 0.0));
	return f;
}

Complex overlap(const GaussianWavePacket& a, const GaussianWavePacket& b)
{
	if (a.eps != b.eps) throw ConfigError("overlap: mismatched eps");
	if (a.dim() != b.dim()) throw ConfigError("overlap: dimension mismatch");
	const int d = a.dim();
	const double eps = a.eps;

	const Eigen::MatrixXcd g1c = a.width.mat().conjugate();
	const Eigen::MatrixXcd& g2 = b.width.mat();
	const Eigen::MatrixXcd M = g2 - g1c;
	const Eigen::VectorXcd q1 = a.center.q.cast<Complex>(), q2 = b.center.q.cast<Complex>();
	const Eigen::VectorXcd p1 = a.center.p.cast<Complex>(), p2 = b.center.p.cast<Complex>();

	auto bil = [](const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) {
		return (u.array() * v.array()).sum();  // unconjugated pairing
	};
	const Eigen::VectorXcd bvec = -(g2 * q2) + g1c * q1 + (p2 - p1);
	const Complex cconst =
	    0.5 * bil(q2, g2 * q2) - 0.5 * bil(q1, g1c * q1) - bil(p2, q2) + bil(p1, q1);
	const Eigen::VectorXcd xstar = -M.fullPivLu().solve(bvec);
	const Complex estar = cconst + 0.5 * bil(bvec, xstar);

	Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(-kI * M);
	Complex det_root(1.0, 0.0);
	for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) det_root *= std::sqrt(es.eigenvalues()[i]);

	return std::conj(a.amplitude) * b.amplitude * std::pow(2.0, 0.5 * d) / det_root *
	       std::exp((kI / eps) * estar);
}

double l2_norm(const GridFunction& f) { return f.values.norm() * std::sqrt(f.grid.cell_volume()); }

Complex inner(const GridFunction& a, const GridFunction& b)
{
	if (!(a.grid == b.grid) || a.levels() != b.levels()) throw ConfigError("inner: grid mismatch");
	Complex s = 0.0;
	for (int l = 0; l < a.levels(); ++l) s += a.values.col(l).dot(b.values.col(l));
	return s * a.grid.cell_volume();
}

Eigen::VectorXcd analyze(const GridFunction& f, std::span<const PhasePoint> nodes)
{
	if (f.levels() != 1) throw ConfigError("analyze expects a scalar grid function");
	const double vol = f.grid.cell_volume();
	Eigen::VectorXcd coeffs(static_cast<Eigen::Index>(nodes.size()));

	if (f.grid.dim() == 1) {
		const auto& ax = f.grid.axes[0];
		const long n = ax.n;
		Eigen::ArrayXd x(n);
		for (long i = 0; i < n; ++i) x[i] = ax.coord(static_cast<int>(i));
		const double eps = f.eps;
		const double pref = std::pow(M_PI * eps, -0.25) * vol;
		for (std::size_t j = 0; j < nodes.size(); ++j) {
			const double q = nodes[j].q[0], p = nodes[j].p[0];
			const Eigen::ArrayXd dx = x - q;
			// conjugate of the standard packet: exp(-dx^2/(2 eps) - i p dx / eps)
			const Eigen::ArrayXcd gbar =
			    (-dx.square() / (2.0 * eps)).cast<Complex>() + Complex(0, -1) / eps * (p * dx).cast<Complex>();
			coeffs[static_cast<Eigen::Index>(j)] = pref * (gbar.exp() * f.values.col(0).array()).sum();
		}
		return coeffs;
	}

	for (std::size_t j = 0; j < nodes.size(); ++j) {
		const GaussianWavePacket g = GaussianWavePacket::standard(f.eps, nodes[j]);
		Complex acc = 0.0;
		for (long i = 0; i < f.size(); ++i)
			acc += std::conj(g.value_at(f.grid.coord(i))) * f.values(i, 0);
		coeffs[static_cast<Eigen::Index>(j)] = acc * vol;
	}
	return coeffs;
}

GridFunction synthesize(const Eigen::VectorXcd& coeffs, std::span<const PhasePoint> nodes,
                        const Eigen::VectorXd& weights, double eps, const Grid& grid)
{
	if (static_cast<std::size_t>(coeffs.size()) != nodes.size() ||
	    static_cast<std::size_t>(weights.size()) != nodes.size())
		throw ConfigError("synthesize: coefficients not aligned with rule nodes");
	GridFunction out = GridFunction::zero(grid, eps, 1);
	const int d = grid.dim();
	const double pref = std::pow(2.0 * M_PI * eps, -d);
	for (std::size_t j = 0; j < nodes.size(); ++j) {
		const Complex scale = pref * weights[static_cast<Eigen::Index>(j)] * coeffs[static_cast<Eigen::Index>(j)];
		if (scale == Complex(0.0, 0.0)) continue;
		accumulate(out, 0, GaussianWavePacket::standard(eps, nodes[j]), scale);
	}
	return out;
}

double sigma_norm(const GridFunction& f, int k)
{
	if (k < 0 || k > 2) throw ConfigError("sigma_norm: k must be in 0..2");
	if (f.grid.dim() != 1) throw ConfigError("sigma_norm: implemented for d = 1");
	const auto& ax = f.grid.axes[0];
	const double len = ax.hi - ax.lo;
	const Eigen::VectorXd kfreq = fft::wavenumbers(ax.n, len);
	const double vol = f.grid.cell_volume();

	Eigen::ArrayXd x(ax.n);
	for (int i = 0; i < ax.n; ++i) x[i] = ax.coord(i);

	double best = 0.0;
	for (int lvl = 0; lvl < f.levels(); ++lvl) {
		Eigen::VectorXcd db = f.values.col(lvl);
		for (int b = 0; b <= k; ++b) {
			if (b > 0) {
				fft::forward(db);
				db.array() *= (kI * f.eps) * kfreq.array().cast<Complex>();
				fft::inverse(db);
			}
			Eigen::ArrayXcd g = db.array();
			for (int a = 0; a + b <= k; ++a) {
				if (a > 0) g *= x.cast<Complex>();
				best = std::max(best, std::sqrt(g.abs2().sum() * vol));
			}
		}
	}
	return best;
}

}  // namespace hkprop::wavepackets

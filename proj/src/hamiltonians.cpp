#include "hkprop/hamiltonians.hpp"

#include <cmath>

namespace hkprop::hamiltonians {

namespace {

double get_param(const std::map<std::string, double>& params, const std::string& key, double fallback)
{
	auto it = params.find(key);
	return it == params.end() ? fallback : it->second;
}

ScalarLevel make_linear_level(std::string name, const Eigen::VectorXd& g, double c)
{
	ScalarLevel lvl;
	lvl.dim = static_cast<int>(g.size()) / 2;
	lvl.name = std::move(name);
	lvl.kind = FlowKind::linear;
	lvl.lin_g = g;
	lvl.shift_c = c;
	const int n = static_cast<int>(g.size());
	lvl.value = [g, c](double, const PhasePoint& z) { return g.dot(z.flat()) + c; };
	lvl.grad = [g](double, const PhasePoint&) { return g; };
	lvl.hess = [n](double, const PhasePoint&) { return Eigen::MatrixXd::Zero(n, n).eval(); };
	return lvl;
}

ScalarLevel make_quadratic_level(std::string name, const Eigen::MatrixXd& Q, double c)
{
	ScalarLevel lvl;
	lvl.dim = static_cast<int>(Q.rows()) / 2;
	lvl.name = std::move(name);
	lvl.kind = FlowKind::quadratic;
	lvl.quad_Q = Q;
	lvl.shift_c = c;
	lvl.value = [Q, c](double, const PhasePoint& z) {
		const Eigen::VectorXd v = z.flat();
		return 0.5 * v.dot(Q * v) + c;
	};
	lvl.grad = [Q](double, const PhasePoint& z) { return (Q * z.flat()).eval(); };
	lvl.hess = [Q](double, const PhasePoint&) { return Q; };
	return lvl;
}

Eigen::MatrixXcd scalar_as_matrix(double v)
{
	Eigen::MatrixXcd m(1, 1);
	m(0, 0) = v;
	return m;
}

/// Wrap a scalar level as a 1x1 Hermitian symbol.
HermitianSymbol wrap_scalar(ScalarLevel lvl)
{
	HermitianSymbol sym;
	sym.dim = lvl.dim;
	sym.levels = 1;
	sym.name = lvl.name;
	const ScalarLevel l = lvl;
	sym.eval = [l](double t, const PhasePoint& z) { return scalar_as_matrix(l.value(t, z)); };
	sym.grad = [l](double t, const PhasePoint& z) {
		const Eigen::VectorXd g = l.grad(t, z);
		std::vector<Eigen::MatrixXcd> out(static_cast<std::size_t>(g.size()));
		for (Eigen::Index j = 0; j < g.size(); ++j) out[static_cast<std::size_t>(j)] = scalar_as_matrix(g[j]);
		return out;
	};
	sym.hess = [l](double t, const PhasePoint& z) {
		const Eigen::MatrixXd h = l.hess(t, z);
		const auto n = h.rows();
		std::vector<Eigen::MatrixXcd> out(static_cast<std::size_t>(n * n));
		for (Eigen::Index j = 0; j < n; ++j)
			for (Eigen::Index m = 0; m < n; ++m) out[static_cast<std::size_t>(j * n + m)] = scalar_as_matrix(h(j, m));
		return out;
	};
	sym.level_fn = {std::move(lvl)};
	return sym;
}

}  // namespace

Eigen::Matrix2cd pauli_form(const Eigen::Vector3d& u)
{
	Eigen::Matrix2cd m;
	m << u[0], Complex(u[1], u[2]), Complex(u[1], -u[2]), -u[0];
	return m;
}

EigenSystem HermitianSymbol::eigensystem(double t, const PhasePoint& z) const
{
	if (levels != 2 || !has_sc_form())
		throw ConfigError("eigensystem requires a two-level symbol with sc_form: " + name);
	const ScForm sc = sc_form(t, z);
	EigenSystem es;
	es.h1 = sc.v - sc.f;
	es.h2 = sc.v + sc.f;
	const Eigen::Matrix2cd us = pauli_form(sc.u);
	es.P2 = 0.5 * (Eigen::Matrix2cd::Identity() + us);
	es.P1 = 0.5 * (Eigen::Matrix2cd::Identity() - us);
	return es;
}

HermitianSymbol build_toy_model(double k, double theta)
{
	if (k == 0.0) throw ConfigError("toy model requires k != 0 (crossing set degenerates)");
	if (theta < 0.0) throw ConfigError("toy model requires theta >= 0");

	HermitianSymbol sym;
	sym.dim = 1;
	sym.levels = 2;
	sym.name = "toy";
	sym.x_only_eigenvectors = true;

	sym.eval = [k, theta](double, const PhasePoint& z) {
		const double q = z.q[0], p = z.p[0];
		const Complex e = std::polar(1.0, theta * q);
		Eigen::MatrixXcd H(2, 2);
		H << p, k * q * e, k * q * std::conj(e), p;
		return H;
	};
	sym.grad = [k, theta](double, const PhasePoint& z) {
		const double q = z.q[0];
		const Complex e = std::polar(1.0, theta * q);
		std::vector<Eigen::MatrixXcd> g(2, Eigen::MatrixXcd::Zero(2, 2));
		const Complex dq = k * Complex(1.0, theta * q) * e;
		g[0](0, 1) = dq;
		g[0](1, 0) = std::conj(dq);
		g[1] = Eigen::Matrix2cd::Identity();
		return g;
	};
	sym.hess = [k, theta](double, const PhasePoint& z) {
		const double q = z.q[0];
		const Complex e = std::polar(1.0, theta * q);
		std::vector<Eigen::MatrixXcd> h(4, Eigen::MatrixXcd::Zero(2, 2));
		const Complex dqq = k * Complex(-theta * theta * q, 2.0 * theta) * e;
		h[0](0, 1) = dqq;
		h[0](1, 0) = std::conj(dqq);
		return h;
	};
	sym.sc_form = [k, theta](double, const PhasePoint& z) {
		const double q = z.q[0], p = z.p[0];
		ScForm sc;
		sc.v = p;
		sc.f = k * q;
		sc.u = Eigen::Vector3d(0.0, std::cos(theta * q), std::sin(theta * q));
		sc.grad_v = (Eigen::VectorXd(2) << 0.0, 1.0).finished();
		sc.grad_f = (Eigen::VectorXd(2) << k, 0.0).finished();
		sc.dt_f = 0.0;
		sc.grad_u = Eigen::Matrix<double, 3, Eigen::Dynamic>::Zero(3, 2);
		sc.grad_u.col(0) = theta * Eigen::Vector3d(0.0, -std::sin(theta * q), std::cos(theta * q));
		return sc;
	};

	sym.level_fn = {
	    make_linear_level("toy.h1", (Eigen::VectorXd(2) << -k, 1.0).finished(), 0.0),
	    make_linear_level("toy.h2", (Eigen::VectorXd(2) << k, 1.0).finished(), 0.0),
	};
	return sym;
}

namespace {

HermitianSymbol build_diagonal2(double offset)
{
	HermitianSymbol sym;
	sym.dim = 1;
	sym.levels = 2;
	sym.name = "diagonal2";
	sym.x_only_eigenvectors = true;

	sym.eval = [offset](double, const PhasePoint& z) {
		const double hh = 0.5 * (z.q.squaredNorm() + z.p.squaredNorm());
		Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(2, 2);
		H(0, 0) = hh + offset;
		H(1, 1) = hh;
		return H;
	};
	sym.grad = [](double, const PhasePoint& z) {
		std::vector<Eigen::MatrixXcd> g(2);
		g[0] = z.q[0] * Eigen::Matrix2cd::Identity();
		g[1] = z.p[0] * Eigen::Matrix2cd::Identity();
		return g;
	};
	sym.hess = [](double, const PhasePoint&) {
		std::vector<Eigen::MatrixXcd> h(4, Eigen::MatrixXcd::Zero(2, 2));
		h[0] = Eigen::Matrix2cd::Identity();
		h[3] = Eigen::Matrix2cd::Identity();
		return h;
	};
	sym.sc_form = [offset](double, const PhasePoint& z) {
		ScForm sc;
		const double hh = 0.5 * (z.q.squaredNorm() + z.p.squaredNorm());
		sc.v = hh + 0.5 * offset;
		sc.f = 0.5 * offset;
		sc.u = Eigen::Vector3d(1.0, 0.0, 0.0);
		sc.grad_v = (Eigen::VectorXd(2) << z.q[0], z.p[0]).finished();
		sc.grad_f = Eigen::VectorXd::Zero(2);
		sc.grad_u = Eigen::Matrix<double, 3, Eigen::Dynamic>::Zero(3, 2);
		return sc;
	};

	const Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(2, 2);
	sym.level_fn = {
	    make_quadratic_level("diagonal2.h1", Q, 0.0),
	    make_quadratic_level("diagonal2.h2", Q, offset),
	};
	return sym;
}

}  // namespace

HermitianSymbol build_scalar(const std::string& name, const std::map<std::string, double>& params)
{
	if (name == "free" || name == "harmonic") {
		const int d = static_cast<int>(get_param(params, "d", 1.0));
		if (d < 1) throw ConfigError("dimension must be >= 1");
		Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(2 * d, 2 * d);
		Q.bottomRightCorner(d, d) = Eigen::MatrixXd::Identity(d, d);
		if (name == "harmonic") Q.topLeftCorner(d, d) = Eigen::MatrixXd::Identity(d, d);
		return wrap_scalar(make_quadratic_level(name, Q, 0.0));
	}
	if (name == "torus") {
		const double v0 = get_param(params, "V0", 1.0);
		ScalarLevel lvl;
		lvl.dim = 1;
		lvl.name = "torus";
		lvl.kind = FlowKind::generic;
		lvl.value = [v0](double, const PhasePoint& z) {
			return 0.5 * z.p[0] * z.p[0] + v0 * std::cos(z.q[0]);
		};
		lvl.grad = [v0](double, const PhasePoint& z) {
			return (Eigen::VectorXd(2) << -v0 * std::sin(z.q[0]), z.p[0]).finished();
		};
		lvl.hess = [v0](double, const PhasePoint& z) {
			Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2, 2);
			h(0, 0) = -v0 * std::cos(z.q[0]);
			h(1, 1) = 1.0;
			return h;
		};
		return wrap_scalar(std::move(lvl));
	}
	if (name == "linear+" || name == "linear-") {
		const double k = get_param(params, "k", 1.0);
		if (k == 0.0) throw ConfigError("linear level requires k != 0");
		const double s = name == "linear+" ? 1.0 : -1.0;
		return wrap_scalar(make_linear_level(name, (Eigen::VectorXd(2) << s * k, 1.0).finished(), 0.0));
	}
	throw ConfigError("unknown scalar Hamiltonian: " + name);
}

HermitianSymbol build(const std::string& name, const std::map<std::string, double>& params)
{
	if (name == "toy") return build_toy_model(get_param(params, "k", 1.0), get_param(params, "theta", 0.5));
	if (name == "diagonal2") return build_diagonal2(get_param(params, "offset", 2.0));
	return build_scalar(name, params);
}

std::vector<std::string> catalog_names()
{
	return {"free", "harmonic", "torus", "linear+", "linear-", "toy", "diagonal2"};
}

namespace {

double rel_dev(const Eigen::MatrixXcd& numeric, const Eigen::MatrixXcd& analytic)
{
	return (numeric - analytic).norm() / std::max(1.0, analytic.norm());
}

}  // namespace

double finite_difference_check(const HermitianSymbol& symbol, double t, const PhasePoint& z, double step)
{
	if (step <= 0.0) throw ConfigError("finite_difference_check: step must be positive");
	const int n = 2 * symbol.dim;
	auto shifted = [&](int j, double h) {
		Eigen::VectorXd v = z.flat();
		v[j] += h;
		return PhasePoint::from_flat(v);
	};

	double worst = 0.0;
	const auto grad = symbol.grad(t, z);
	const auto hess = symbol.hess(t, z);
	for (int j = 0; j < n; ++j) {
		const Eigen::MatrixXcd dj =
		    (symbol.eval(t, shifted(j, step)) - symbol.eval(t, shifted(j, -step))) / (2.0 * step);
		worst = std::max(worst, rel_dev(dj, grad[static_cast<std::size_t>(j)]));
		for (int m = 0; m < n; ++m) {
			Eigen::MatrixXcd djm;
			if (j == m) {
				djm = (symbol.eval(t, shifted(j, step)) - 2.0 * symbol.eval(t, z) +
				       symbol.eval(t, shifted(j, -step))) /
				      (step * step);
			} else {
				Eigen::VectorXd v = z.flat();
				auto at = [&](double hj, double hm) {
					Eigen::VectorXd w = v;
					w[j] += hj;
					w[m] += hm;
					return symbol.eval(t, PhasePoint::from_flat(w));
				};
				djm = (at(step, step) - at(step, -step) - at(-step, step) + at(-step, -step)) /
				      (4.0 * step * step);
			}
			worst = std::max(worst, rel_dev(djm, hess[static_cast<std::size_t>(j * n + m)]));
		}
	}

	for (const auto& lvl : symbol.level_fn) {
		const Eigen::VectorXd g = lvl.grad(t, z);
		const Eigen::MatrixXd h = lvl.hess(t, z);
		for (int j = 0; j < n; ++j) {
			const double dj = (lvl.value(t, shifted(j, step)) - lvl.value(t, shifted(j, -step))) / (2.0 * step);
			worst = std::max(worst, std::abs(dj - g[j]) / std::max(1.0, std::abs(g[j])));
			for (int m = j; m < n; ++m) {
				double djm;
				if (j == m) {
					djm = (lvl.value(t, shifted(j, step)) - 2.0 * lvl.value(t, z) +
					       lvl.value(t, shifted(j, -step))) /
					      (step * step);
				} else {
					Eigen::VectorXd v = z.flat();
					auto at = [&](double hj, double hm) {
						Eigen::VectorXd w = v;
						w[j] += hj;
						w[m] += hm;
						return lvl.value(t, PhasePoint::from_flat(w));
					};
					djm = (at(step, step) - at(step, -step) - at(-step, step) + at(-step, -step)) /
					      (4.0 * step * step);
				}
				worst = std::max(worst, std::abs(djm - h(j, m)) / std::max(1.0, std::abs(h(j, m))));
			}
		}
	}
	return worst;
}

}  // namespace hkprop::hamiltonians

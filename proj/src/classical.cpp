#include "hkprop/classical.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace hkprop::classical {

JacobianBlocks JacobianBlocks::identity(int d)
{
	JacobianBlocks jb;
	jb.A = Eigen::MatrixXd::Identity(d, d);
	jb.B = Eigen::MatrixXd::Zero(d, d);
	jb.C = Eigen::MatrixXd::Zero(d, d);
	jb.D = Eigen::MatrixXd::Identity(d, d);
	return jb;
}

JacobianBlocks JacobianBlocks::from_full(const Eigen::MatrixXd& F)
{
	const auto d = F.rows() / 2;
	JacobianBlocks jb;
	jb.A = F.topLeftCorner(d, d);
	jb.B = F.topRightCorner(d, d);
	jb.C = F.bottomLeftCorner(d, d);
	jb.D = F.bottomRightCorner(d, d);
	return jb;
}

Eigen::MatrixXd JacobianBlocks::full() const
{
	const auto d = A.rows();
	Eigen::MatrixXd F(2 * d, 2 * d);
	F.topLeftCorner(d, d) = A;
	F.topRightCorner(d, d) = B;
	F.bottomLeftCorner(d, d) = C;
	F.bottomRightCorner(d, d) = D;
	return F;
}

namespace {

using hamiltonians::FlowKind;
using hamiltonians::ScalarLevel;

TrajectoryRecord propagate_linear(const ScalarLevel& lvl, const PhasePoint& z0,
                                  std::span<const double> times)
{
	const int d = lvl.dim;
	const Eigen::VectorXd g = lvl.lin_g;
	const Eigen::VectorXd gq = g.head(d), gp = g.tail(d);
	const double h0 = g.dot(z0.flat()) + lvl.shift_c;  // conserved

	TrajectoryRecord rec;
	rec.level_tag = lvl.name;
	rec.times.assign(times.begin(), times.end());
	rec.states.reserve(times.size());
	rec.jac.assign(times.size(), JacobianBlocks::identity(d));
	rec.action.reserve(times.size());
	for (double t : times) {
		const double s = t - times[0];
		rec.states.push_back({z0.q + s * gp, z0.p - s * gq});
		rec.action.push_back(s * (z0.p.dot(gp) - h0) - 0.5 * s * s * gq.dot(gp));
	}
	return rec;
}

TrajectoryRecord propagate_quadratic(const ScalarLevel& lvl, const PhasePoint& z0,
                                     std::span<const double> times)
{
	const int d = lvl.dim;
	const Eigen::MatrixXd JQ = symplectic_J(d) * lvl.quad_Q;
	const Eigen::VectorXd v0 = z0.flat();
	const double qp0 = z0.q.dot(z0.p);

	TrajectoryRecord rec;
	rec.level_tag = lvl.name;
	rec.times.assign(times.begin(), times.end());
	for (double t : times) {
		const double s = t - times[0];
		const Eigen::MatrixXd F = (s * JQ).exp();
		const Eigen::VectorXd z = F * v0;
		const PhasePoint zt = PhasePoint::from_flat(z);
		rec.states.push_back(zt);
		rec.jac.push_back(JacobianBlocks::from_full(F));
		// S = (q.p - q0.p0)/2 - c s for homogeneous quadratic parts
		rec.action.push_back(0.5 * (zt.q.dot(zt.p) - qp0) - lvl.shift_c * s);
	}
	return rec;
}

TrajectoryRecord propagate_generic(const ScalarLevel& lvl, const PhasePoint& z0,
                                   std::span<const double> times, const PropagateOptions& opts)
{
	const int d = lvl.dim;
	const int nz = 2 * d;
	const Eigen::MatrixXd J = symplectic_J(d);
	const Eigen::Index n_state = nz + nz * nz + 1;

	Eigen::VectorXd y0(n_state);
	y0.head(nz) = z0.flat();
	Eigen::Map<Eigen::MatrixXd>(y0.data() + nz, nz, nz) = Eigen::MatrixXd::Identity(nz, nz);
	y0[n_state - 1] = 0.0;

	auto rhs = [&](double t, const Eigen::VectorXd& y) {
		const PhasePoint z = PhasePoint::from_flat(y.head(nz));
		const Eigen::VectorXd g = lvl.grad(t, z);
		const Eigen::MatrixXd H = lvl.hess(t, z);
		Eigen::VectorXd dy(n_state);
		dy.head(nz) = J * g;
		const Eigen::Map<const Eigen::MatrixXd> F(y.data() + nz, nz, nz);
		Eigen::Map<Eigen::MatrixXd>(dy.data() + nz, nz, nz) = J * H * F;
		dy[n_state - 1] = z.p.dot(g.tail(d)) - lvl.value(t, z);
		return dy;
	};

	TrajectoryRecord rec;
	rec.level_tag = lvl.name;
	rec.times.assign(times.begin(), times.end());
	rec.states.resize(times.size());
	rec.jac.resize(times.size());
	rec.action.resize(times.size());

	ode::Options oo;
	oo.rtol = opts.rtol;
	oo.atol = opts.atol;
	ode::integrate_at_times<Eigen::VectorXd>(
	    rhs, times, y0,
	    [&](std::size_t i, double, const Eigen::VectorXd& y) {
		    rec.states[i] = PhasePoint::from_flat(y.head(nz));
		    rec.jac[i] = JacobianBlocks::from_full(Eigen::Map<const Eigen::MatrixXd>(y.data() + nz, nz, nz));
		    rec.action[i] = y[n_state - 1];
	    },
	    oo);
	return rec;
}

}  // namespace

TrajectoryRecord propagate(const ScalarLevel& level, const PhasePoint& z0,
                           std::span<const double> times, const PropagateOptions& opts)
{
	if (times.empty()) throw ConfigError("propagate: empty output grid");
	if (!z0.finite()) throw NumericalError("propagate: non-finite initial state");
	if (!opts.force_ode) {
		if (level.kind == FlowKind::linear) return propagate_linear(level, z0, times);
		if (level.kind == FlowKind::quadratic) return propagate_quadratic(level, z0, times);
	}
	return propagate_generic(level, z0, times, opts);
}

double symplectic_defect(const TrajectoryRecord& record)
{
	if (record.size() == 0) throw ConfigError("symplectic_defect: empty record");
	const int d = record.jac.front().dim();
	const Eigen::MatrixXd J = symplectic_J(d);
	double worst = 0.0;
	for (const auto& jb : record.jac) {
		const Eigen::MatrixXd F = jb.full();
		worst = std::max(worst, (F.transpose() * J * F - J).norm());
	}
	return worst;
}

PhasePoint flow(const hamiltonians::ScalarLevel& level, const PhasePoint& z0, double t0, double t1,
                const PropagateOptions& opts)
{
	if (t0 == t1) return z0;
	return propagate(level, z0, t0, t1, 2, opts).states.back();
}

}  // namespace hkprop::classical

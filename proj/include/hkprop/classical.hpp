#pragma once

#include <span>
#include <vector>

#include "hkprop/hamiltonians.hpp"
#include "hkprop/ode.hpp"
#include "hkprop/types.hpp"

namespace hkprop::classical {

/// Blocks of the Jacobian F = dPhi/dz of the flow map, F = [[A, B], [C, D]].
struct JacobianBlocks {
	Eigen::MatrixXd A, B, C, D;

	static JacobianBlocks identity(int d);
	static JacobianBlocks from_full(const Eigen::MatrixXd& F);
	Eigen::MatrixXd full() const;
	int dim() const { return static_cast<int>(A.rows()); }
};

/// Classical trajectory bundle: flow map, Jacobian blocks and action on a
/// shared output time grid.
struct TrajectoryRecord {
	std::vector<double> times;
	std::vector<PhasePoint> states;
	std::vector<JacobianBlocks> jac;
	std::vector<double> action;
	std::string level_tag;

	std::size_t size() const { return times.size(); }
	const PhasePoint& state_at(std::size_t i) const { return states.at(i); }
};

struct PropagateOptions {
	double rtol = 1e-10;
	double atol = 1e-12;
	/// Use the generic ODE path even when a closed-form flow is available.
	bool force_ode = false;
};

/// Integrate the joint system (z, F, S) for one scalar level along the given
/// strictly monotone output grid (times[0] is the initial time). Linear and
/// quadratic catalog levels take a closed-form fast path.
TrajectoryRecord propagate(const hamiltonians::ScalarLevel& level, const PhasePoint& z0,
                           std::span<const double> times, const PropagateOptions& opts = {});

inline TrajectoryRecord propagate(const hamiltonians::ScalarLevel& level, const PhasePoint& z0,
                                  double t0, double t1, int n_out, const PropagateOptions& opts = {})
{
	const auto ts = ode::uniform_times(t0, t1, n_out);
	return propagate(level, z0, std::span<const double>(ts), opts);
}

/// max over record times of || F^T J F - J ||_F
double symplectic_defect(const TrajectoryRecord& record);

/// Flow map only (final state of a propagation).
PhasePoint flow(const hamiltonians::ScalarLevel& level, const PhasePoint& z0, double t0, double t1,
                const PropagateOptions& opts = {});

}  // namespace hkprop::classical

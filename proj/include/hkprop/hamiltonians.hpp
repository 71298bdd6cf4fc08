#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hkprop/types.hpp"

namespace hkprop::hamiltonians {

/// Decomposition H = v*Id + f*(u . sigma) of a 2x2 Hermitian symbol into a
/// scalar mean level v, half-gap f and a unit vector u on the Bloch sphere,
/// together with the first derivatives the transport and crossing machinery
/// needs. grad_* stack as (d/dq, d/dp).
struct ScForm {
	double v = 0.0;
	double f = 0.0;
	Eigen::Vector3d u = Eigen::Vector3d::Zero();
	Eigen::VectorXd grad_v;  // 2d
	Eigen::VectorXd grad_f;  // 2d
	double dt_f = 0.0;
	Eigen::Matrix<double, 3, Eigen::Dynamic> grad_u;  // 3 x 2d
	Eigen::Vector3d dt_u = Eigen::Vector3d::Zero();
};

/// [[u1, u2 + i u3], [u2 - i u3, -u1]]
Eigen::Matrix2cd pauli_form(const Eigen::Vector3d& u);

enum class FlowKind {
	generic,    // integrate numerically
	linear,     // h = g . z + c
	quadratic,  // h = z^T Q z / 2 + c
};

/// One scalar Hamiltonian level with analytic derivatives.
struct ScalarLevel {
	int dim = 1;
	std::string name;
	FlowKind kind = FlowKind::generic;
	std::function<double(double, const PhasePoint&)> value;
	std::function<Eigen::VectorXd(double, const PhasePoint&)> grad;   // 2d
	std::function<Eigen::MatrixXd(double, const PhasePoint&)> hess;  // 2d x 2d

	Eigen::VectorXd lin_g;  // linear: gradient
	Eigen::MatrixXd quad_Q;
	double shift_c = 0.0;
};

struct EigenSystem {
	double h1 = 0.0;
	double h2 = 0.0;
	Eigen::Matrix2cd P1;
	Eigen::Matrix2cd P2;
};

/// A time-dependent Hermitian matrix symbol on phase space with analytic
/// first and second derivatives. levels == 1 wraps a scalar Hamiltonian in
/// a 1x1 matrix; levels == 2 additionally exposes the smooth
/// eigendecomposition through sc_form.
struct HermitianSymbol {
	int dim = 1;
	int levels = 1;
	std::string name;

	std::function<Eigen::MatrixXcd(double, const PhasePoint&)> eval;
	/// 2d entries, stacked (d/dq_1..d/dq_d, d/dp_1..d/dp_d).
	std::function<std::vector<Eigen::MatrixXcd>(double, const PhasePoint&)> grad;
	/// (2d)^2 entries, row-major over the same stacking.
	std::function<std::vector<Eigen::MatrixXcd>(double, const PhasePoint&)> hess;
	std::function<ScForm(double, const PhasePoint&)> sc_form;  // null for scalar symbols

	/// Eigenvectors depend on x only (no p, no t); enables exact pointwise
	/// application of eigenvector fields to grid data.
	bool x_only_eigenvectors = false;

	std::vector<ScalarLevel> level_fn;  // analytic eigenvalue levels, size == levels

	bool has_sc_form() const { return static_cast<bool>(sc_form); }
	const ScalarLevel& level(int index) const { return level_fn.at(static_cast<std::size_t>(index)); }

	/// Smooth eigendecomposition h1 = v - f, h2 = v + f (levels == 2 only).
	EigenSystem eigensystem(double t, const PhasePoint& z) const;
};

/// d=1 two-level symbol with eigenvalues p -+ k q and crossing set {q = 0}.
HermitianSymbol build_toy_model(double k, double theta);

/// Scalar catalog: free (|p|^2/2), harmonic ((|p|^2+|q|^2)/2), torus
/// (p^2/2 + V0 cos q, d=1), linear+ / linear- (p +- k q, d=1).
HermitianSymbol build_scalar(const std::string& name, const std::map<std::string, double>& params = {});

/// Full catalog by name: the scalar entries plus "toy" and "diagonal2"
/// (a constant-eigenbasis gapped pair of harmonic levels).
HermitianSymbol build(const std::string& name, const std::map<std::string, double>& params = {});

std::vector<std::string> catalog_names();

/// Maximum relative deviation of the analytic grad/hess of the symbol (and
/// of each of its levels) from centered finite differences at step `step`.
double finite_difference_check(const HermitianSymbol& symbol, double t, const PhasePoint& z, double step);

}  // namespace hkprop::hamiltonians

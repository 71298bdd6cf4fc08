#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace hkprop {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

/// A point z = (q, p) in 2d-dimensional phase space.
struct PhasePoint {
	Eigen::VectorXd q;
	Eigen::VectorXd p;

	PhasePoint() = default;
	PhasePoint(Eigen::VectorXd q_, Eigen::VectorXd p_) : q(std::move(q_)), p(std::move(p_)) {}
	/// 1-D convenience constructor.
	PhasePoint(double q1, double p1) : q(Eigen::VectorXd::Constant(1, q1)), p(Eigen::VectorXd::Constant(1, p1)) {}

	int dim() const { return static_cast<int>(q.size()); }

	/// Stacked (q, p) vector of length 2d.
	Eigen::VectorXd flat() const
	{
		Eigen::VectorXd z(q.size() + p.size());
		z << q, p;
		return z;
	}

	static PhasePoint from_flat(const Eigen::VectorXd& z)
	{
		const auto d = z.size() / 2;
		return {z.head(d), z.tail(d)};
	}

	bool finite() const { return q.allFinite() && p.allFinite(); }
};

inline double phase_distance(const PhasePoint& a, const PhasePoint& b)
{
	return std::sqrt((a.q - b.q).squaredNorm() + (a.p - b.p).squaredNorm());
}

/// Standard symplectic matrix J = [[0, I], [-I, 0]] of size 2d.
inline Eigen::MatrixXd symplectic_J(int d)
{
	Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * d, 2 * d);
	J.topRightCorner(d, d) = Eigen::MatrixXd::Identity(d, d);
	J.bottomLeftCorner(d, d) = -Eigen::MatrixXd::Identity(d, d);
	return J;
}

struct Error : std::runtime_error {
	using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent user input (configs, parameters).
struct ConfigError : Error {
	using Error::Error;
};

struct NumericalError : Error {
	using Error::Error;
};

/// Adaptive step-size control fell below the representable step.
struct StepUnderflowError : NumericalError {
	StepUnderflowError(const std::string& what, double t_last) : NumericalError(what), last_good_time(t_last) {}
	double last_good_time;
};

/// Branch tracking of a complex square root detected a jump larger than a
/// quarter turn between consecutive grid points; the caller should refine
/// the time grid and retry.
struct BranchContinuityError : NumericalError {
	using NumericalError::NumericalError;
};

/// Eigenvalue gap fell below the configured threshold.
struct GapError : NumericalError {
	using NumericalError::NumericalError;
};

struct NonGenericCrossingError : NumericalError {
	using NumericalError::NumericalError;
};

}  // namespace hkprop

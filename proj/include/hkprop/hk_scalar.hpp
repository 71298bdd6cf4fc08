#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hkprop/classical.hpp"
#include "hkprop/wavepackets.hpp"

namespace hkprop::hk_scalar {

using classical::JacobianBlocks;
using classical::TrajectoryRecord;
using wavepackets::GaussianWavePacket;
using wavepackets::Grid;
using wavepackets::GridFunction;
using wavepackets::SiegelMatrix;

/// Complex square root with the branch chosen by continuity along a time
/// grid. Roots may drift at most a quarter turn in argument per update;
/// faster winding raises BranchContinuityError (refine the grid and retry).
class ContinuousSqrt {
public:
	ContinuousSqrt() = default;

	Complex update(Complex value);
	Complex current() const { return prev_; }

private:
	bool seeded_ = false;
	Complex prev_{1.0, 0.0};
};

/// Moebius transport of the Gaussian width: (C + D G0)(A + B G0)^{-1}.
SiegelMatrix width_transport(const JacobianBlocks& jac, const SiegelMatrix& gamma0);

/// Normalization factor c_{Gamma(t)} / c_{Gamma0} = det^{-1/2}(A + B G0),
/// branch-continuous via the tracker (seed the tracker at the initial time,
/// where the factor is 1).
Complex amplitude_transport(const JacobianBlocks& jac, const SiegelMatrix& gamma0, ContinuousSqrt& tracker);

/// Herman-Kluk prefactor u0 = 2^{-d/2} det^{1/2}(A + D + i(C - B)).
Complex hk_prefactor(const JacobianBlocks& jac, ContinuousSqrt& tracker);

struct TransportOptions {
	classical::PropagateOptions ode;
	int max_refinements = 6;
};

/// Classical transport of one node plus branch-tracked prefactor data.
/// Automatically refines the internal time grid when branch tracking
/// reports a continuity violation; outputs stay on the requested grid.
struct NodeTransport {
	TrajectoryRecord rec;
	std::vector<Complex> u0;                 // if requested
	std::vector<Complex> cfac;               // if thawed data requested
	std::vector<SiegelMatrix> width;         // if thawed data requested
};
NodeTransport transport_node(const hamiltonians::ScalarLevel& level, const PhasePoint& z0,
                             std::span<const double> times, bool want_u0,
                             const std::optional<SiegelMatrix>& thawed_width,
                             const TransportOptions& opts = {});

/// Single-packet thawed Gaussian propagation; exact for quadratic levels.
struct ThawedEvolution {
	TrajectoryRecord rec;
	std::vector<GaussianWavePacket> packets;  // aligned with rec.times
};
ThawedEvolution propagate_thawed(const hamiltonians::ScalarLevel& level, const GaussianWavePacket& packet,
                                 std::span<const double> times, const TransportOptions& opts = {});

struct NodeFailure {
	std::size_t node_index;
	std::string reason;
};

/// Frozen-Gaussian (Herman-Kluk) transport of a node set. `coeffs` are the
/// effective node coefficients, already including quadrature weights and the
/// (2 pi eps)^{-d} frame prefactor.
struct HKBranchTerm {
	PhasePoint node;
	Complex coeff;
	TrajectoryRecord traj;
	std::vector<Complex> u0;
};
struct HKRun {
	double eps = 1.0;
	std::vector<double> times;
	std::vector<HKBranchTerm> terms;
	std::vector<NodeFailure> failures;
	double excluded_coeff_mass = 0.0;
};
HKRun propagate_hk(const hamiltonians::ScalarLevel& level, std::span<const PhasePoint> nodes,
                   const Eigen::VectorXcd& coeffs, double eps, std::span<const double> times,
                   const TransportOptions& opts = {});

/// Sum of frozen Gaussians at one output time.
GridFunction hk_synthesize(const HKRun& run, std::size_t time_index, const Grid& grid);

/// Thawed-sum counterpart of propagate_hk (same nodes, same coefficients,
/// common initial width gamma0).
struct ThawedRun {
	double eps = 1.0;
	std::vector<double> times;
	std::vector<HKBranchTerm> terms;          // u0 unused
	std::vector<std::vector<GaussianWavePacket>> packets;  // [term][time]
	std::vector<NodeFailure> failures;
};
ThawedRun propagate_thawed_sum(const hamiltonians::ScalarLevel& level, std::span<const PhasePoint> nodes,
                               const Eigen::VectorXcd& coeffs, const SiegelMatrix& gamma0, double eps,
                               std::span<const double> times, const TransportOptions& opts = {});
GridFunction thawed_synthesize(const ThawedRun& run, std::size_t time_index, const Grid& grid);

/// L2 distance between the thawed-sum and frozen propagation of the same
/// initial coefficients at one output time.
double thawed_vs_frozen_gap(const hamiltonians::ScalarLevel& level, std::span<const PhasePoint> nodes,
                            const Eigen::VectorXcd& coeffs, double eps, std::span<const double> times,
                            std::size_t time_index, const Grid& grid, const TransportOptions& opts = {});

}  // namespace hkprop::hk_scalar

#include "hkprop/hk_scalar.hpp"

#include <cmath>

namespace hkprop::hk_scalar {

namespace {

Complex det_c(const Eigen::MatrixXcd& m) { return m.determinant(); }

std::vector<double> refine_times(std::span<const double> times, int factor)
{
	std::vector<double> out;
	out.reserve((times.size() - 1) * static_cast<std::size_t>(factor) + 1);
	for (std::size_t i = 0; i + 1 < times.size(); ++i) {
		for (int j = 0; j < factor; ++j)
			out.push_back(times[i] + (times[i + 1] - times[i]) * j / factor);
	}
	out.push_back(times.back());
	return out;
}

}  // namespace

Complex ContinuousSqrt::update(Complex value)
{
	Complex root = std::sqrt(value);
	if (!seeded_) {
		seeded_ = true;
		prev_ = root;
		return root;
	}
	const double a0 = std::arg(prev_);
	auto turn = [a0](Complex r) {
		double d = std::arg(r) - a0;
		while (d > M_PI) d -= 2.0 * M_PI;
		while (d < -M_PI) d += 2.0 * M_PI;
		return std::abs(d);
	};
	if (turn(-root) < turn(root)) root = -root;
	if (turn(root) > M_PI / 4.0)
		throw BranchContinuityError("square-root branch moved more than a quarter turn between grid points");
	prev_ = root;
	return root;
}

SiegelMatrix width_transport(const JacobianBlocks& jac, const SiegelMatrix& gamma0)
{
	const Eigen::MatrixXcd num = jac.C.cast<Complex>() + jac.D.cast<Complex>() * gamma0.mat();
	const Eigen::MatrixXcd den = jac.A.cast<Complex>() + jac.B.cast<Complex>() * gamma0.mat();
	Eigen::JacobiSVD<Eigen::MatrixXcd> svd(den);
	const double cond = svd.singularValues()(0) / svd.singularValues().tail(1)(0);
	if (!(cond < 1e12))
		throw NumericalError("width transport: A + B Gamma0 nearly singular (condition " +
		                     std::to_string(cond) + "); the Jacobian data is corrupt");
	Eigen::MatrixXcd g = num * den.inverse();
	g = (0.5 * (g + g.transpose())).eval();
	return SiegelMatrix(g);
}

Complex amplitude_transport(const JacobianBlocks& jac, const SiegelMatrix& gamma0, ContinuousSqrt& tracker)
{
	const Eigen::MatrixXcd den = jac.A.cast<Complex>() + jac.B.cast<Complex>() * gamma0.mat();
	return 1.0 / tracker.update(det_c(den));
}

Complex hk_prefactor(const JacobianBlocks& jac, ContinuousSqrt& tracker)
{
	const int d = jac.dim();
	const Eigen::MatrixXcd m =
	    (jac.A + jac.D).cast<Complex>() + kI * (jac.C - jac.B).cast<Complex>();
	return std::pow(2.0, -0.5 * d) * tracker.update(det_c(m));
}

NodeTransport transport_node(const hamiltonians::ScalarLevel& level, const PhasePoint& z0,
                             std::span<const double> times, bool want_u0,
                             const std::optional<SiegelMatrix>& thawed_width, const TransportOptions& opts)
{
	int factor = 1;
	for (int attempt = 0; attempt <= opts.max_refinements; ++attempt, factor *= 2) {
		const std::vector<double> fine = refine_times(times, factor);
		TrajectoryRecord rec = classical::propagate(level, z0, fine, opts.ode);
		NodeTransport out;
		try {
			ContinuousSqrt track_u0, track_c;
			std::vector<Complex> u0_f, c_f;
			std::vector<SiegelMatrix> w_f;
			for (std::size_t i = 0; i < rec.size(); ++i) {
				if (want_u0) u0_f.push_back(hk_prefactor(rec.jac[i], track_u0));
				if (thawed_width) {
					c_f.push_back(amplitude_transport(rec.jac[i], *thawed_width, track_c));
					w_f.push_back(width_transport(rec.jac[i], *thawed_width));
				}
			}
			// keep the requested grid only
			for (std::size_t i = 0; i < times.size(); ++i) {
				const std::size_t k = i * static_cast<std::size_t>(factor);
				out.rec.times.push_back(rec.times[k]);
				out.rec.states.push_back(rec.states[k]);
				out.rec.jac.push_back(rec.jac[k]);
				out.rec.action.push_back(rec.action[k]);
				if (want_u0) out.u0.push_back(u0_f[k]);
				if (thawed_width) {
					out.cfac.push_back(c_f[k]);
					out.width.push_back(w_f[k]);
				}
			}
			out.rec.level_tag = rec.level_tag;
			return out;
		} catch (const BranchContinuityError&) {
			if (attempt == opts.max_refinements) throw;
		}
	}
	throw BranchContinuityError("branch tracking failed after maximal refinement");
}

ThawedEvolution propagate_thawed(const hamiltonians::ScalarLevel& level, const GaussianWavePacket& packet,
                                 std::span<const double> times, const TransportOptions& opts)
{
	NodeTransport nt = transport_node(level, packet.center, times, false, packet.width, opts);
	ThawedEvolution ev;
	ev.packets.reserve(times.size());
	for (std::size_t i = 0; i < times.size(); ++i) {
		const Complex amp = packet.amplitude * nt.cfac[i] *
		                    std::exp(kI * nt.rec.action[i] / packet.eps);
		ev.packets.emplace_back(packet.eps, nt.rec.states[i], nt.width[i], amp);
	}
	ev.rec = std::move(nt.rec);
	return ev;
}

HKRun propagate_hk(const hamiltonians::ScalarLevel& level, std::span<const PhasePoint> nodes,
                   const Eigen::VectorXcd& coeffs, double eps, std::span<const double> times,
                   const TransportOptions& opts)
{
	if (static_cast<std::size_t>(coeffs.size()) != nodes.size())
		throw ConfigError("propagate_hk: coefficients not aligned with nodes");
	HKRun run;
	run.eps = eps;
	run.times.assign(times.begin(), times.end());
	run.terms.reserve(nodes.size());
	for (std::size_t j = 0; j < nodes.size(); ++j) {
		try {
			NodeTransport nt = transport_node(level, nodes[j], times, true, std::nullopt, opts);
			run.terms.push_back(HKBranchTerm{nodes[j], coeffs[static_cast<Eigen::Index>(j)],
			                                 std::move(nt.rec), std::move(nt.u0)});
		} catch (const Error& e) {
			run.failures.push_back(NodeFailure{j, e.what()});
			run.excluded_coeff_mass += std::abs(coeffs[static_cast<Eigen::Index>(j)]);
		}
	}
	return run;
}

GridFunction hk_synthesize(const HKRun& run, std::size_t time_index, const Grid& grid)
{
	GridFunction out = GridFunction::zero(grid, run.eps, 1);
	for (const auto& term : run.terms) {
		const Complex scale =
		    term.coeff * term.u0[time_index] * std::exp(kI * term.traj.action[time_index] / run.eps);
		wavepackets::accumulate(out, 0, GaussianWavePacket::standard(run.eps, term.traj.states[time_index]),
		                        scale);
	}
	return out;
}

ThawedRun propagate_thawed_sum(const hamiltonians::ScalarLevel& level, std::span<const PhasePoint> nodes,
                               const Eigen::VectorXcd& coeffs, const SiegelMatrix& gamma0, double eps,
                               std::span<const double> times, const TransportOptions& opts)
{
	ThawedRun run;
	run.eps = eps;
	run.times.assign(times.begin(), times.end());
	for (std::size_t j = 0; j < nodes.size(); ++j) {
		try {
			const auto base = GaussianWavePacket::normalized(eps, nodes[j], gamma0);
			ThawedEvolution ev = propagate_thawed(level, base, times, opts);
			run.terms.push_back(HKBranchTerm{nodes[j], coeffs[static_cast<Eigen::Index>(j)],
			                                 std::move(ev.rec), {}});
			run.packets.push_back(std::move(ev.packets));
		} catch (const Error& e) {
			run.failures.push_back(NodeFailure{j, e.what()});
		}
	}
	return run;
}

GridFunction thawed_synthesize(const ThawedRun& run, std::size_t time_index, const Grid& grid)
{
	GridFunction out = GridFunction::zero(grid, run.eps, 1);
	for (std::size_t j = 0; j < run.terms.size(); ++j)
		wavepackets::accumulate(out, 0, run.packets[j][time_index], run.terms[j].coeff);
	return out;
}

double thawed_vs_frozen_gap(const hamiltonians::ScalarLevel& level, std::span<const PhasePoint> nodes,
                            const Eigen::VectorXcd& coeffs, double eps, std::span<const double> times,
                            std::size_t time_index, const Grid& grid, const TransportOptions& opts)
{
	const HKRun frozen = propagate_hk(level, nodes, coeffs, eps, times, opts);
	const ThawedRun thawed =
	    propagate_thawed_sum(level, nodes, coeffs, SiegelMatrix::standard(grid.dim()), eps, times, opts);
	const GridFunction a = hk_synthesize(frozen, time_index, grid);
	const GridFunction b = thawed_synthesize(thawed, time_index, grid);
	return (a.values - b.values).norm() * std::sqrt(grid.cell_volume());
}

}  // namespace hkprop::hk_scalar

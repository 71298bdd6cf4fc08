#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hkprop/types.hpp"

namespace hkprop::ode {

struct Options {
	double rtol = 1e-10;
	double atol = 1e-12;
	double initial_step = 0.0;  // 0 -> automatic
	std::int64_t max_steps = 200'000'000;
};

namespace detail {

inline double entry_abs(double x) { return std::abs(x); }
inline double entry_abs(const Complex& x) { return std::abs(x); }

/// Weighted RMS error norm used by the step controller.
template <class Vec>
double error_norm(const Vec& err, const Vec& y0, const Vec& y1, double atol, double rtol)
{
	double acc = 0.0;
	for (Eigen::Index i = 0; i < err.size(); ++i) {
		const double sc = atol + rtol * std::max(entry_abs(y0[i]), entry_abs(y1[i]));
		const double e = entry_abs(err[i]) / sc;
		acc += e * e;
	}
	return std::sqrt(acc / static_cast<double>(err.size()));
}

template <class Vec>
bool all_finite(const Vec& y)
{
	for (Eigen::Index i = 0; i < y.size(); ++i) {
		if (!std::isfinite(entry_abs(y[i]))) return false;
	}
	return true;
}

}  // namespace detail

/// Dormand-Prince 5(4) embedded Runge-Kutta pair with adaptive step-size
/// control. Integrates y' = f(t, y) and emits the state exactly at each
/// requested output time (steps are clamped onto the output grid, no
/// interpolation). `times` must be strictly monotone, increasing or
/// decreasing, with times.front() the initial time.
///
/// emit(index, t, y) is called once per output time, including index 0.
template <class Vec, class Rhs, class Emit>
void integrate_at_times(Rhs&& f, std::span<const double> times, const Vec& y0, Emit&& emit,
                        const Options& opt = {})
{
	static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
	static constexpr double a21 = 1.0 / 5;
	static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
	static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
	static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
	                        a54 = -212.0 / 729;
	static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
	                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
	static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
	                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
	// difference between 5th and embedded 4th order weights
	static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
	                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

	if (times.size() < 1) throw ConfigError("integrate_at_times: empty output grid");
	const double dir = times.size() > 1 && times[1] < times[0] ? -1.0 : 1.0;
	for (std::size_t i = 1; i < times.size(); ++i) {
		if (dir * (times[i] - times[i - 1]) <= 0.0)
			throw ConfigError("integrate_at_times: output times not strictly monotone");
	}

	double t = times[0];
	Vec y = y0;
	emit(std::size_t{0}, t, y);
	if (times.size() == 1) return;

	Vec k1 = f(t, y);
	const double span_total = std::abs(times.back() - t);
	double h = opt.initial_step > 0 ? opt.initial_step : std::min(1e-2 * span_total, 1e-2);
	const double h_floor = std::max(span_total, 1.0) * 1e-15;

	Vec k2, k3, k4, k5, k6, k7, ytmp, y5, err;
	std::int64_t steps = 0;
	std::size_t next = 1;

	while (next < times.size()) {
		if (++steps > opt.max_steps) throw StepUnderflowError("ODE step budget exhausted", t);
		const double remaining = std::abs(times[next] - t);
		bool hit_output = false;
		if (h >= remaining) {
			h = remaining;
			hit_output = true;
		}
		const double hs = dir * h;

		ytmp = y + hs * (a21 * k1);
		k2 = f(t + c2 * hs, ytmp);
		ytmp = y + hs * (a31 * k1 + a32 * k2);
		k3 = f(t + c3 * hs, ytmp);
		ytmp = y + hs * (a41 * k1 + a42 * k2 + a43 * k3);
		k4 = f(t + c4 * hs, ytmp);
		ytmp = y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
		k5 = f(t + c5 * hs, ytmp);
		ytmp = y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
		k6 = f(t + hs, ytmp);
		y5 = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
		k7 = f(t + hs, y5);
		err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

		double enorm = detail::all_finite(y5) ? detail::error_norm(err, y, y5, opt.atol, opt.rtol)
		                                      : std::numeric_limits<double>::infinity();
		if (enorm <= 1.0) {
			t = hit_output ? times[next] : t + hs;
			y = std::move(y5);
			k1 = std::move(k7);  // FSAL
			if (hit_output) emit(next++, t, y);
			const double grow = std::isfinite(enorm) && enorm > 0.0
			                        ? std::clamp(0.9 * std::pow(enorm, -0.2), 0.2, 5.0)
			                        : 5.0;
			h = std::max(h, h_floor) * grow;
		} else {
			const double shrink = std::isfinite(enorm) ? std::clamp(0.9 * std::pow(enorm, -0.2), 0.1, 0.9)
			                                           : 0.1;
			h *= shrink;
			if (h < h_floor) throw StepUnderflowError("ODE step size underflow", t);
		}
	}
}

/// Single-shot integration from times.front() to a final time.
template <class Vec, class Rhs>
Vec integrate(Rhs&& f, double t0, double t1, const Vec& y0, const Options& opt = {})
{
	Vec out = y0;
	const double ts[2] = {t0, t1};
	if (t0 == t1) return out;
	integrate_at_times<Vec>(f, std::span<const double>(ts, 2), y0,
	                        [&](std::size_t, double, const Vec& y) { out = y; }, opt);
	return out;
}

/// Uniform grid of n points spanning [t0, t1], endpoints included.
inline std::vector<double> uniform_times(double t0, double t1, int n)
{
	if (n < 1) throw ConfigError("uniform_times: need at least one point");
	std::vector<double> ts(static_cast<std::size_t>(n));
	if (n == 1) {
		ts[0] = t0;
		return ts;
	}
	for (int i = 0; i < n; ++i) ts[static_cast<std::size_t>(i)] = t0 + (t1 - t0) * i / (n - 1);
	ts.back() = t1;
	return ts;
}

}  // namespace hkprop::ode

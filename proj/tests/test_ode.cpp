#include <doctest.h>

#include <cmath>

#include "hkprop/ode.hpp"

using namespace hkprop;

namespace {

Eigen::VectorXd rotation_rhs(double, const Eigen::VectorXd& y)
{
	Eigen::VectorXd dy(2);
	dy[0] = y[1];
	dy[1] = -y[0];
	return dy;
}

}  // namespace

TEST_CASE("dopri5 reproduces the rotation flow to tolerance")
{
	Eigen::VectorXd y0(2);
	y0 << 1.0, 0.0;
	const auto ts = ode::uniform_times(0.0, 10.0, 41);
	double worst = 0.0;
	ode::integrate_at_times<Eigen::VectorXd>(
	    rotation_rhs, ts, y0,
	    [&](std::size_t, double t, const Eigen::VectorXd& y) {
		    worst = std::max(worst, std::abs(y[0] - std::cos(t)));
		    worst = std::max(worst, std::abs(y[1] + std::sin(t)));
	    });
	CHECK(worst < 1e-8);
}

TEST_CASE("dopri5 integrates backward in time")
{
	Eigen::VectorXd y0(2);
	y0 << 0.0, -1.0;  // state at t = pi/2
	const auto y = ode::integrate<Eigen::VectorXd>(rotation_rhs, M_PI / 2, 0.0, y0);
	CHECK(y[0] == doctest::Approx(1.0).epsilon(1e-8));
	CHECK(y[1] == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("complex linear phase accumulates correctly")
{
	// y' = i w y with w = 3
	auto rhs = [](double, const Eigen::VectorXcd& y) { return (Complex(0, 3.0) * y).eval(); };
	Eigen::VectorXcd y0(1);
	y0[0] = 1.0;
	const auto y = ode::integrate<Eigen::VectorXcd>(rhs, 0.0, 2.0, y0);
	CHECK(std::abs(y[0] - std::polar(1.0, 6.0)) < 1e-9);
}

TEST_CASE("NaN producing right-hand sides abort with a step underflow")
{
	auto rhs = [](double t, const Eigen::VectorXd& y) {
		Eigen::VectorXd dy(1);
		dy[0] = t < 0.5 ? y[0] : std::numeric_limits<double>::quiet_NaN();
		return dy;
	};
	Eigen::VectorXd y0 = Eigen::VectorXd::Ones(1);
	CHECK_THROWS_AS(ode::integrate<Eigen::VectorXd>(rhs, 0.0, 1.0, y0), StepUnderflowError);
	try {
		ode::integrate<Eigen::VectorXd>(rhs, 0.0, 1.0, y0);
	} catch (const StepUnderflowError& e) {
		CHECK(e.last_good_time <= 0.5);
		CHECK(e.last_good_time >= 0.0);
	}
}

TEST_CASE("output times are hit exactly")
{
	auto rhs = [](double, const Eigen::VectorXd& y) { return (0.3 * y).eval(); };
	Eigen::VectorXd y0 = Eigen::VectorXd::Ones(1);
	const std::vector<double> ts{0.0, 0.1237, 0.5, 1.7};
	std::vector<double> seen;
	ode::integrate_at_times<Eigen::VectorXd>(
	    rhs, ts, y0, [&](std::size_t, double t, const Eigen::VectorXd& y) {
		    seen.push_back(t);
		    CHECK(y[0] == doctest::Approx(std::exp(0.3 * t)).epsilon(1e-10));
	    });
	CHECK(seen == ts);
}

#include <doctest.h>

#include "hkprop/hamiltonians.hpp"
#include "test_util.hpp"

using namespace hkprop;
using namespace hkprop::hamiltonians;

TEST_CASE("toy model eigenvalues cross at q = 0")
{
	const auto sym = build_toy_model(1.0, 0.5);

	// eval at the crossing point (q, p) = (0, 2): doubly degenerate value 2
	const auto H = sym.eval(0.0, PhasePoint(0.0, 2.0));
	Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(H);
	CHECK(es.eigenvalues()[0] == doctest::Approx(2.0).epsilon(1e-14));
	CHECK(es.eigenvalues()[1] == doctest::Approx(2.0).epsilon(1e-14));
	CHECK(H(0, 0) == Complex(2.0, 0.0));
	CHECK(H(0, 1) == Complex(0.0, 0.0));

	const auto sys = sym.eigensystem(0.0, PhasePoint(1.0, 0.0));
	CHECK(sys.h1 == doctest::Approx(-1.0));
	CHECK(sys.h2 == doctest::Approx(1.0));
}

TEST_CASE("toy model sc decomposition")
{
	const auto sym = build_toy_model(2.0, 0.0);
	const auto sc = sym.sc_form(0.0, PhasePoint(0.5, 0.0));
	CHECK(sc.v == doctest::Approx(0.0));
	CHECK(sc.f == doctest::Approx(1.0));
	CHECK(sc.u.isApprox(Eigen::Vector3d(0, 1, 0)));
	CHECK(sc.u.norm() == doctest::Approx(1.0));
}

TEST_CASE("toy model rejects k = 0")
{
	CHECK_THROWS_AS(build_toy_model(0.0, 0.5), ConfigError);
}

TEST_CASE("scalar catalog values")
{
	const auto harmonic = build_scalar("harmonic");
	auto rng = testutil::rng(7);
	for (int i = 0; i < 4; ++i) {
		const auto z = testutil::random_point(rng, 1);
		CHECK(harmonic.level(0).hess(0.3, z).isApprox(Eigen::MatrixXd::Identity(2, 2)));
	}

	const auto lm = build_scalar("linear-", {{"k", 1.0}});
	const Eigen::VectorXd g = lm.level(0).grad(0.0, PhasePoint(0.4, -0.2));
	CHECK(g[0] == doctest::Approx(-1.0));
	CHECK(g[1] == doctest::Approx(1.0));

	const auto torus = build_scalar("torus", {{"V0", 1.0}});
	CHECK(torus.level(0).value(0.0, PhasePoint(M_PI, 0.0)) == doctest::Approx(-1.0));

	CHECK_THROWS_AS(build_scalar("quartic"), ConfigError);
}

TEST_CASE("finite differences confirm analytic derivatives")
{
	CHECK(finite_difference_check(build_scalar("harmonic"), 0.0, PhasePoint(1.0, 1.0), 1e-4) < 1e-8);
	CHECK(finite_difference_check(build_toy_model(1.0, 0.5), 0.0, PhasePoint(0.3, 0.7), 1e-4) < 1e-6);
	CHECK(finite_difference_check(build_scalar("torus"), 0.0, PhasePoint(0.0, 0.4), 1e-4) < 1e-6);
	CHECK_THROWS_AS(finite_difference_check(build_scalar("torus"), 0.0, PhasePoint(0.0, 0.4), 0.0),
	                ConfigError);
}

TEST_CASE("all catalog symbols evaluate Hermitian and match derivatives")
{
	auto rng = testutil::rng(42);
	for (const auto& name : catalog_names()) {
		const auto sym = build(name);
		double worst_herm = 0.0;
		for (int i = 0; i < 1000; ++i) {
			const double t = testutil::uniform(rng, -1.0, 1.0);
			const auto z = testutil::random_point(rng, sym.dim, 3.0);
			const auto H = sym.eval(t, z);
			worst_herm = std::max(worst_herm, (H - H.adjoint()).norm());
		}
		CHECK_MESSAGE(worst_herm == 0.0, name);
		CHECK_MESSAGE(finite_difference_check(sym, 0.2, testutil::random_point(rng, sym.dim, 1.5), 1e-4) < 1e-6,
		              name);
	}
}

TEST_CASE("eigendecomposition reconstructs two-level symbols")
{
	auto rng = testutil::rng(99);
	for (const auto& name : {"toy", "diagonal2"}) {
		const auto sym = build(name);
		double worst = 0.0;
		for (int i = 0; i < 1000; ++i) {
			const double t = testutil::uniform(rng, -1.0, 1.0);
			auto z = testutil::random_point(rng, 1, 3.0);
			if (std::abs(z.q[0]) < 0.05) z.q[0] += 0.1;  // stay off the toy crossing set
			const auto H = sym.eval(t, z);
			const auto es = sym.eigensystem(t, z);
			// projector algebra
			CHECK((es.P1 + es.P2 - Eigen::Matrix2cd::Identity()).norm() < 1e-14);
			CHECK((es.P1 * es.P2).norm() < 1e-14);
			CHECK((es.P1 * es.P1 - es.P1).norm() < 1e-13);
			const Eigen::Matrix2cd R = es.h1 * es.P1 + es.h2 * es.P2;
			worst = std::max(worst, (H - R).norm() / std::max(1e-30, H.norm()));
		}
		CHECK_MESSAGE(worst < 1e-12, name);
	}
}

TEST_CASE("toy crossing set is exactly q = 0 with gap 2|kq|")
{
	const double k = 1.7;
	const auto sym = build_toy_model(k, 0.9);
	auto rng = testutil::rng(3);
	for (int i = 0; i < 100; ++i) {
		const auto z = testutil::random_point(rng, 1, 4.0);
		const auto sys = sym.eigensystem(0.0, z);
		CHECK(std::abs(sys.h2 - sys.h1) == doctest::Approx(2.0 * std::abs(k * z.q[0])).epsilon(1e-12));
		const auto on = sym.eigensystem(0.0, PhasePoint(0.0, z.p[0]));
		CHECK(std::abs(on.h2 - on.h1) == doctest::Approx(0.0));
	}
}

TEST_CASE("toy crossing is generic: d/dt f + {v, f} = k")
{
	const double k = -1.3, theta = 0.4;
	const auto sym = build_toy_model(k, theta);
	const auto sc = sym.sc_form(0.0, PhasePoint(0.0, 0.8));
	// {v, f} = grad_p v . grad_q f - grad_q v . grad_p f
	const int d = 1;
	const double poisson =
	    sc.grad_v.tail(d).dot(sc.grad_f.head(d)) - sc.grad_v.head(d).dot(sc.grad_f.tail(d));
	CHECK(sc.dt_f + poisson == doctest::Approx(k));
}

TEST_CASE("building twice with equal parameters agrees pointwise")
{
	const auto a = build("toy", {{"k", 1.5}, {"theta", 0.3}});
	const auto b = build("toy", {{"k", 1.5}, {"theta", 0.3}});
	auto rng = testutil::rng(11);
	for (int i = 0; i < 32; ++i) {
		const auto z = testutil::random_point(rng, 1, 2.0);
		CHECK((a.eval(0.1, z) - b.eval(0.1, z)).norm() == 0.0);
	}
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "heom/errors.hpp"
#include "heom/model.hpp"
#include "heom/units.hpp"

using namespace heom;

TEST_CASE("unit constants")
{
	// 2 pi c with c = 2.99792458e-2 cm/ps
	CHECK(units::cm1_to_angular == doctest::Approx(0.1883651567).epsilon(1e-9));
	// k_B / (h c)
	CHECK(units::kB_cm1_per_K == doctest::Approx(0.69503480).epsilon(1e-7));

	for (double x : {1e-6, 0.35, 35.0, 106.1767, 12400.0, -250.0}) {
		const double back = units::to_wavenumber(units::to_angular(x));
		CHECK(std::abs(back - x) <= 1e-12 * std::abs(x));
	}
	// gamma = 106.1767 cm^-1 is a 50 fs bath relaxation time
	CHECK(1.0 / units::to_angular(106.1767) == doctest::Approx(0.05).epsilon(1e-6));
}

TEST_CASE("thermal energy")
{
	CHECK(std::abs(thermal_energy(300.0) - 208.5104) <= 1e-3);
	CHECK(thermal_energy(1.0) == doctest::Approx(0.69503480).epsilon(1e-7));
	CHECK_THROWS_AS(thermal_energy(0.0), invalid_input);
	CHECK_THROWS_AS(thermal_energy(-5.0), invalid_input);
}

TEST_CASE("hamiltonian matrix")
{
	SUBCASE("two-level reference system")
	{
		const auto m = build_hamiltonian_matrix(SystemHamiltonian({0.0, 100.0}, {100.0}));
		real_matrix_t expected(2, 2);
		expected << 0, 100, 100, 100;
		CHECK(m == expected);
	}
	SUBCASE("all zero")
	{
		const auto m = build_hamiltonian_matrix(SystemHamiltonian({0.0, 0.0, 0.0}, {0.0, 0.0}));
		CHECK(m == real_matrix_t::Zero(3, 3));
	}
	SUBCASE("four-site chain is tridiagonal")
	{
		const auto m = build_hamiltonian_matrix(SystemHamiltonian({0.0, -100.0, 50.0, 100.0}, {30.0, -30.0, 100.0}));
		CHECK(m == m.transpose());
		CHECK(m(0, 2) == 0.0);
		CHECK(m(0, 3) == 0.0);
		CHECK(m(1, 3) == 0.0);
		CHECK(m(1, 1) == -100.0);
		CHECK(m(2, 1) == -30.0);
		CHECK(m(3, 2) == 100.0);
	}
	SUBCASE("dimension mismatch")
	{
		CHECK_THROWS_AS(build_hamiltonian_matrix({0.0, 1.0, 2.0}, {1.0}), invalid_input);
		CHECK_THROWS_AS(SystemHamiltonian({0.0, 1.0}, {1.0, 2.0}), invalid_input);
	}
	SUBCASE("site 1 is the energy reference")
	{
		CHECK_THROWS_AS(SystemHamiltonian({5.0, 1.0}, {1.0}), invalid_input);
		CHECK_THROWS_AS(SystemHamiltonian({0.0}, {}), invalid_input);
	}
}

TEST_CASE("labels order")
{
	const SystemHamiltonian h({0.0, -10.0, 20.0}, {1.0, 2.0});
	CHECK(h.labels() == std::vector<double>{-10.0, 20.0, 1.0, 2.0});
}

TEST_CASE("spectral density")
{
	const double lambda = 35.0, gamma = 106.1767;
	CHECK(spectral_density(gamma, lambda, gamma) == doctest::Approx(lambda).epsilon(1e-15));
	CHECK(spectral_density(0.0, lambda, gamma) == 0.0);
	CHECK(spectral_density(-50.0, lambda, gamma) == -spectral_density(50.0, lambda, gamma));

	// dense scan over [0, 5 gamma]: the maximum sits at omega = gamma
	double best = -1.0, at = -1.0;
	for (int k = 0; k <= 500; ++k) {
		const double omega = k * 1e-2 * gamma;
		const double j = spectral_density(omega, lambda, gamma);
		if (j > best) {
			best = j;
			at = omega;
		}
	}
	CHECK(at == doctest::Approx(gamma).epsilon(1e-12));
	CHECK(best == doctest::Approx(lambda).epsilon(1e-12));
}

TEST_CASE("bath spec")
{
	const auto bath = BathSpec::uniform(3, 35.0, 106.1767, 300.0);
	CHECK(bath.is_uniform());
	CHECK(bath.high_temperature_ratio(0) == doctest::Approx(106.1767 / 208.510440));
	CHECK(bath.max_high_temperature_ratio() < 1.0);
	CHECK_FALSE(BathSpec({35.0, 36.0}, {100.0, 100.0}, 300.0).is_uniform());
	CHECK_THROWS_AS(BathSpec::uniform(2, 0.0, 100.0, 300.0), invalid_input);
	CHECK_THROWS_AS(BathSpec::uniform(2, 35.0, -1.0, 300.0), invalid_input);
	CHECK_THROWS_AS(BathSpec::uniform(2, 35.0, 100.0, 0.0), invalid_input);
	CHECK_THROWS_AS(BathSpec({35.0}, {100.0, 100.0}, 300.0), invalid_input);
}

TEST_CASE("density matrix diagnostics")
{
	auto rho = site_population_state(3, 1);
	CHECK(rho(1, 1) == complex_t(1.0));
	CHECK(trace_deviation(rho) == 0.0);
	CHECK(max_hermiticity_deviation(rho) == 0.0);
	rho(0, 1) = complex_t(0.0, 1e-3);
	CHECK(max_hermiticity_deviation(rho) == doctest::Approx(1e-3));
	CHECK_THROWS_AS(site_population_state(2, 2), invalid_input);
}

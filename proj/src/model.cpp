#include "heom/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "heom/errors.hpp"
#include "heom/units.hpp"

namespace heom {

namespace {

void require_finite(const std::vector<double>& values, const char* what)
{
	for (double v : values)
		if (!std::isfinite(v))
			throw invalid_input(std::string(what) + " must be finite");
}

void require_positive(const std::vector<double>& values, const char* what)
{
	for (double v : values)
		if (!(v > 0.0) || !std::isfinite(v))
			throw invalid_input(std::string(what) + " must be strictly positive");
}

} // namespace

SystemHamiltonian::SystemHamiltonian(std::vector<double> energies, std::vector<double> couplings)
	: energies_(std::move(energies)), couplings_(std::move(couplings))
{
	if (energies_.size() < 2)
		throw invalid_input("a system needs at least 2 sites, got " + std::to_string(energies_.size()));
	if (couplings_.size() + 1 != energies_.size())
		throw invalid_input("expected " + std::to_string(energies_.size() - 1) + " nearest-neighbour couplings, got "
		                    + std::to_string(couplings_.size()));
	require_finite(energies_, "site energies");
	require_finite(couplings_, "couplings");
	if (energies_[0] != 0.0)
		throw invalid_input("site energies are relative to site 1, so the first energy must be 0");
}

std::vector<double> SystemHamiltonian::labels() const
{
	std::vector<double> out(energies_.begin() + 1, energies_.end());
	out.insert(out.end(), couplings_.begin(), couplings_.end());
	return out;
}

BathSpec::BathSpec(std::vector<double> lambdas, std::vector<double> gammas, double temperature)
	: lambdas_(std::move(lambdas)), gammas_(std::move(gammas)), temperature_(temperature)
{
	if (lambdas_.empty() || lambdas_.size() != gammas_.size())
		throw invalid_input("bath needs one lambda and one gamma per site");
	require_positive(lambdas_, "reorganization energies");
	require_positive(gammas_, "bath relaxation rates");
	if (!(temperature_ > 0.0) || !std::isfinite(temperature_))
		throw invalid_input("temperature must be strictly positive");
}

BathSpec BathSpec::uniform(std::size_t n_sites, double lambda, double gamma, double temperature)
{
	return BathSpec(std::vector<double>(n_sites, lambda), std::vector<double>(n_sites, gamma), temperature);
}

bool BathSpec::is_uniform() const noexcept
{
	auto all_equal = [](const std::vector<double>& v) {
		return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
	};
	return all_equal(lambdas_) && all_equal(gammas_);
}

double BathSpec::high_temperature_ratio(std::size_t site) const
{
	if (site >= gammas_.size())
		throw invalid_input("site " + std::to_string(site) + " out of range");
	return gammas_[site] / thermal_energy(temperature_);
}

double BathSpec::max_high_temperature_ratio() const
{
	double r = 0.0;
	for (std::size_t j = 0; j < gammas_.size(); ++j)
		r = std::max(r, high_temperature_ratio(j));
	return r;
}

real_matrix_t build_hamiltonian_matrix(const std::vector<double>& energies, const std::vector<double>& couplings)
{
	const auto n = energies.size();
	if (n == 0 || couplings.size() + 1 != n)
		throw invalid_input("dimension mismatch: " + std::to_string(n) + " energies need " + std::to_string(n == 0 ? 0 : n - 1)
		                    + " couplings, got " + std::to_string(couplings.size()));

	real_matrix_t m = real_matrix_t::Zero(n, n);
	for (std::size_t j = 0; j < n; ++j)
		m(j, j) = energies[j];
	for (std::size_t j = 0; j + 1 < n; ++j)
		m(j, j + 1) = m(j + 1, j) = couplings[j];
	return m;
}

real_matrix_t build_hamiltonian_matrix(const SystemHamiltonian& h)
{
	return build_hamiltonian_matrix(h.energies(), h.couplings());
}

double spectral_density(double omega, double lambda, double gamma)
{
	return 2.0 * lambda * gamma * omega / (omega * omega + gamma * gamma);
}

double thermal_energy(double temperature)
{
	if (!(temperature > 0.0))
		throw invalid_input("temperature must be strictly positive, got " + std::to_string(temperature));
	return temperature * units::kB_cm1_per_K;
}

complex_matrix_t site_population_state(std::size_t n_sites, std::size_t site)
{
	if (site >= n_sites)
		throw invalid_input("initial site " + std::to_string(site + 1) + " out of range for " + std::to_string(n_sites) + " sites");
	complex_matrix_t rho = complex_matrix_t::Zero(n_sites, n_sites);
	rho(site, site) = 1.0;
	return rho;
}

double max_hermiticity_deviation(const complex_matrix_t& rho)
{
	return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double trace_deviation(const complex_matrix_t& rho)
{
	return std::abs(rho.trace() - complex_t(1.0, 0.0));
}

} // namespace heom

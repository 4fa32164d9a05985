#ifndef heom_model_hpp
#define heom_model_hpp

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace heom {

using complex_t = std::complex<double>;
using real_matrix_t = Eigen::MatrixXd;
using complex_matrix_t = Eigen::MatrixXcd;

/// Linear-chain excitonic Hamiltonian in cm^-1.
///
/// Site energies are stored relative to site 1, so energies()[0] is always 0.
/// Only nearest-neighbour couplings J_{j,j+1} exist; they are real.
class SystemHamiltonian {
public:
	/// Throws invalid_input if N < 2, couplings.size() != N - 1, energies[0] != 0
	/// or any value is non-finite.
	SystemHamiltonian(std::vector<double> energies, std::vector<double> couplings);

	std::size_t n_sites() const noexcept { return energies_.size(); }
	const std::vector<double>& energies() const noexcept { return energies_; }
	const std::vector<double>& couplings() const noexcept { return couplings_; }

	/// Labels in dataset order: eps_2..eps_N then J_12..J_{N-1,N}.
	std::vector<double> labels() const;

private:
	std::vector<double> energies_;
	std::vector<double> couplings_;
};

/// Per-site Drude-Lorentz bath. lambdas and gammas in cm^-1, temperature in kelvin.
class BathSpec {
public:
	BathSpec(std::vector<double> lambdas, std::vector<double> gammas, double temperature);

	/// Identical bath on every site.
	static BathSpec uniform(std::size_t n_sites, double lambda, double gamma, double temperature);

	std::size_t n_sites() const noexcept { return lambdas_.size(); }
	const std::vector<double>& lambdas() const noexcept { return lambdas_; }
	const std::vector<double>& gammas() const noexcept { return gammas_; }
	double temperature() const noexcept { return temperature_; }

	bool is_uniform() const noexcept;

	// hbar gamma_j / k_B T; the high-temperature hierarchy assumes this is << 1.
	double high_temperature_ratio(std::size_t site) const;
	double max_high_temperature_ratio() const;

private:
	std::vector<double> lambdas_;
	std::vector<double> gammas_;
	double temperature_;
};

// Build the N x N real symmetric site-basis matrix, in cm^-1.
real_matrix_t build_hamiltonian_matrix(const SystemHamiltonian& h);

/// Same as above but from raw vectors, without the site-1 reference requirement.
/// Throws invalid_input on a dimension mismatch.
real_matrix_t build_hamiltonian_matrix(const std::vector<double>& energies, const std::vector<double>& couplings);

// Drude-Lorentz spectral density 2 lambda gamma omega / (omega^2 + gamma^2). All in cm^-1.
double spectral_density(double omega, double lambda, double gamma);

// k_B T in cm^-1. Throws invalid_input for T <= 0.
double thermal_energy(double temperature);

/// Pure state |site><site| (0-based site), the usual initial condition.
complex_matrix_t site_population_state(std::size_t n_sites, std::size_t site);

double max_hermiticity_deviation(const complex_matrix_t& rho);
double trace_deviation(const complex_matrix_t& rho);

} // namespace heom

#endif // heom_model_hpp

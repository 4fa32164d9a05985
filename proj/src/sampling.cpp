#include "heom/sampling.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "heom/errors.hpp"

namespace heom {

void SamplingSpec::validate() const
{
	if (n_sites < 2)
		throw invalid_input("sampling needs at least 2 sites");
	auto check = [](const Range& r, const char* what) {
		if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || !(r.lo < r.hi))
			throw invalid_input(std::string(what) + " range must satisfy lo < hi");
	};
	check(energy_range, "energy");
	check(coupling_range, "coupling");
	if (n_samples == 0)
		throw invalid_input("number of samples must be positive");
}

std::uint64_t mix64(std::uint64_t x) noexcept
{
	x += 0x9e3779b97f4a7c15ULL;
	x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
	x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
	return x ^ (x >> 31);
}

std::uint64_t sample_seed(std::uint64_t seed, std::size_t sample_index) noexcept
{
	return mix64(seed ^ mix64(static_cast<std::uint64_t>(sample_index)));
}

double uniform_in(std::uint64_t bits, const Range& r) noexcept
{
	const double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
	return r.lo + (r.hi - r.lo) * u;
}

SystemHamiltonian sample_hamiltonian(const SamplingSpec& spec, std::size_t sample_index)
{
	spec.validate();
	// mt19937_64's output sequence is fixed by the standard; the distributions are not,
	// hence uniform_in instead of std::uniform_real_distribution.
	std::mt19937_64 engine(sample_seed(spec.seed, sample_index));

	std::vector<double> energies(spec.n_sites, 0.0);
	for (std::size_t j = 1; j < spec.n_sites; ++j)
		energies[j] = uniform_in(engine(), spec.energy_range);
	std::vector<double> couplings(spec.n_sites - 1);
	for (auto& c : couplings)
		c = uniform_in(engine(), spec.coupling_range);
	return SystemHamiltonian(std::move(energies), std::move(couplings));
}

} // namespace heom

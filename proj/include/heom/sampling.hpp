#ifndef heom_sampling_hpp
#define heom_sampling_hpp

#include <cstddef>
#include <cstdint>

#include "heom/model.hpp"

namespace heom {

struct Range {
	double lo;
	double hi;

	bool contains(double x) const noexcept { return x >= lo && x <= hi; }
	bool operator==(const Range&) const = default;
};

/// Uniform sampling of linear-chain Hamiltonians, all values in cm^-1.
struct SamplingSpec {
	std::size_t n_sites = 2;
	Range energy_range{-100.0, 100.0};
	Range coupling_range{-100.0, 100.0};
	std::size_t n_samples = 25000;
	std::uint64_t seed = 0;

	std::size_t n_labels() const noexcept { return 2 * (n_sites - 1); }
	void validate() const;
};

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Per-sample seed; depends only on (seed, sample_index), never on evaluation order.
std::uint64_t sample_seed(std::uint64_t seed, std::size_t sample_index) noexcept;

// Maps 53 random bits onto [r.lo, r.hi) with a platform-independent formula.
double uniform_in(std::uint64_t bits, const Range& r) noexcept;

/// eps_2..eps_N then J_12..J_{N-1,N}, drawn i.i.d. uniform; eps_1 = 0.
SystemHamiltonian sample_hamiltonian(const SamplingSpec& spec, std::size_t sample_index);

} // namespace heom

#endif // heom_sampling_hpp

#ifndef heom_tests_support_hpp
#define heom_tests_support_hpp

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>

#include "heom/model.hpp"

namespace heom::test {

inline complex_matrix_t random_matrix(std::mt19937_64& rng, Eigen::Index n)
{
	std::normal_distribution<double> d;
	complex_matrix_t m(n, n);
	for (Eigen::Index i = 0; i < n; ++i)
		for (Eigen::Index j = 0; j < n; ++j)
			m(i, j) = complex_t(d(rng), d(rng));
	return m;
}

inline complex_matrix_t random_hermitian(std::mt19937_64& rng, Eigen::Index n)
{
	const auto m = random_matrix(rng, n);
	return 0.5 * (m + m.adjoint());
}

// Random density matrix: A A^dagger / tr.
inline complex_matrix_t random_density_matrix(std::mt19937_64& rng, Eigen::Index n)
{
	const auto a = random_matrix(rng, n);
	complex_matrix_t rho = a * a.adjoint();
	rho /= rho.trace();
	rho = 0.5 * (rho + rho.adjoint()).eval();
	return rho;
}

// Explicit |j><j| for the brute-force oracles.
inline complex_matrix_t projector(Eigen::Index n, Eigen::Index j)
{
	complex_matrix_t v = complex_matrix_t::Zero(n, n);
	v(j, j) = 1.0;
	return v;
}

inline double max_abs(const complex_matrix_t& m)
{
	return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline std::filesystem::path scratch_dir(const std::string& name)
{
	const char* base = std::getenv("HEOM_TEST_TMP");
	auto dir = std::filesystem::path(base ? base : std::filesystem::temp_directory_path().string()) / name;
	std::filesystem::remove_all(dir);
	std::filesystem::create_directories(dir);
	return dir;
}

inline std::string slurp(const std::filesystem::path& path)
{
	std::ifstream in(path, std::ios::binary);
	return std::string(std::istreambuf_iterator<char>(in), {});
}

} // namespace heom::test

#endif // heom_tests_support_hpp

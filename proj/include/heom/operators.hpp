#ifndef heom_operators_hpp
#define heom_operators_hpp

#include <cstddef>

#include <Eigen/Dense>

#include "heom/model.hpp"

namespace heom {

using matrix_cref = Eigen::Ref<const complex_matrix_t>;
using matrix_ref = Eigen::Ref<complex_matrix_t>;

/// Bath parameters of one site in the engine's internal units (rad/ps, hbar = 1).
struct SiteBathRates {
	double gamma;       // Drude cutoff
	double commutator;  // 2 lambda k_B T, weight of V^x in Theta
	double anticommutator; // lambda gamma, weight of V^o in Theta
};

SiteBathRates site_bath_rates(const BathSpec& bath, std::size_t site);

// Accumulating kernels, shared by the public operators and the hierarchy generator.
// V_j is the site projector |j><j|, so its (anti)commutators touch only row j and column j.
namespace kernel {

// out += coeff * (H sigma - sigma H)
void add_commutator(const complex_matrix_t& h, matrix_cref sigma, complex_t coeff, matrix_ref out);
// out += coeff * [V_j, sigma]
void add_projector_commutator(std::size_t site, matrix_cref sigma, complex_t coeff, matrix_ref out);
// out += coeff * {V_j, sigma}
void add_projector_anticommutator(std::size_t site, matrix_cref sigma, complex_t coeff, matrix_ref out);

} // namespace kernel

// [H, sigma], with H already in rad/ps.
complex_matrix_t liouvillian_apply(const real_matrix_t& h, const complex_matrix_t& sigma);

// Phi_j sigma = i [V_j, sigma]. `site` is 0-based.
complex_matrix_t phi_apply(std::size_t site, const complex_matrix_t& sigma);

// Theta_j sigma = i 2 lambda_j k_B T [V_j, sigma] + lambda_j gamma_j {V_j, sigma}, in rad/ps units.
complex_matrix_t theta_apply(std::size_t site, const complex_matrix_t& sigma, const BathSpec& bath);
complex_matrix_t theta_apply(std::size_t site, const complex_matrix_t& sigma, const SiteBathRates& rates);

} // namespace heom

#endif // heom_operators_hpp

#include "heom/operators.hpp"

#include <string>

#include "heom/errors.hpp"
#include "heom/units.hpp"

namespace heom {

namespace {

void require_square(const complex_matrix_t& sigma)
{
	if (sigma.rows() != sigma.cols() || sigma.rows() == 0)
		throw invalid_input("operand must be a non-empty square matrix");
}

void require_site(std::size_t site, Eigen::Index dim)
{
	if (site >= static_cast<std::size_t>(dim))
		throw invalid_input("site " + std::to_string(site + 1) + " out of range for dimension " + std::to_string(dim));
}

} // namespace

SiteBathRates site_bath_rates(const BathSpec& bath, std::size_t site)
{
	if (site >= bath.n_sites())
		throw invalid_input("site " + std::to_string(site + 1) + " out of range for bath of " + std::to_string(bath.n_sites()) + " sites");
	const double lambda = units::to_angular(bath.lambdas()[site]);
	const double gamma = units::to_angular(bath.gammas()[site]);
	const double kT = units::to_angular(thermal_energy(bath.temperature()));
	return {gamma, 2.0 * lambda * kT, lambda * gamma};
}

namespace kernel {

void add_commutator(const complex_matrix_t& h, matrix_cref sigma, complex_t coeff, matrix_ref out)
{
	out.noalias() += coeff * (h * sigma);
	out.noalias() -= coeff * (sigma * h);
}

void add_projector_commutator(std::size_t site, matrix_cref sigma, complex_t coeff, matrix_ref out)
{
	const auto j = static_cast<Eigen::Index>(site);
	out.row(j) += coeff * sigma.row(j);
	out.col(j) -= coeff * sigma.col(j);
}

void add_projector_anticommutator(std::size_t site, matrix_cref sigma, complex_t coeff, matrix_ref out)
{
	const auto j = static_cast<Eigen::Index>(site);
	out.row(j) += coeff * sigma.row(j);
	out.col(j) += coeff * sigma.col(j);
}

} // namespace kernel

complex_matrix_t liouvillian_apply(const real_matrix_t& h, const complex_matrix_t& sigma)
{
	require_square(sigma);
	if (h.rows() != sigma.rows() || h.cols() != sigma.cols())
		throw invalid_input("Hamiltonian is " + std::to_string(h.rows()) + "x" + std::to_string(h.cols()) + " but operand is "
		                    + std::to_string(sigma.rows()) + "x" + std::to_string(sigma.cols()));
	complex_matrix_t out = complex_matrix_t::Zero(sigma.rows(), sigma.cols());
	kernel::add_commutator(h.cast<complex_t>(), sigma, 1.0, out);
	return out;
}

complex_matrix_t phi_apply(std::size_t site, const complex_matrix_t& sigma)
{
	require_square(sigma);
	require_site(site, sigma.rows());
	complex_matrix_t out = complex_matrix_t::Zero(sigma.rows(), sigma.cols());
	kernel::add_projector_commutator(site, sigma, complex_t(0.0, 1.0), out);
	return out;
}

complex_matrix_t theta_apply(std::size_t site, const complex_matrix_t& sigma, const BathSpec& bath)
{
	require_square(sigma);
	require_site(site, sigma.rows());
	return theta_apply(site, sigma, site_bath_rates(bath, site));
}

complex_matrix_t theta_apply(std::size_t site, const complex_matrix_t& sigma, const SiteBathRates& rates)
{
	require_square(sigma);
	require_site(site, sigma.rows());
	complex_matrix_t out = complex_matrix_t::Zero(sigma.rows(), sigma.cols());
	kernel::add_projector_commutator(site, sigma, complex_t(0.0, rates.commutator), out);
	kernel::add_projector_anticommutator(site, sigma, rates.anticommutator, out);
	return out;
}

} // namespace heom

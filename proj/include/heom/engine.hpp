#ifndef heom_engine_hpp
#define heom_engine_hpp

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "heom/hierarchy.hpp"
#include "heom/model.hpp"
#include "heom/operators.hpp"

namespace heom {

enum class Integrator { rk4, expm };

std::string_view to_string(Integrator integrator);
// Throws invalid_input for anything but "rk4" / "expm".
Integrator parse_integrator(std::string_view name);

struct HEOMConfig {
	int truncation_depth = 3;
	double dt = 2e-4;            // ps
	std::size_t n_steps = 5000;  // number of recorded samples; the run covers n_steps * dt
	Integrator integrator = Integrator::expm;
	std::size_t initial_site = 0; // 0-based; rho(0) = |site><site|

	// dt = horizon / n_steps.
	static HEOMConfig from_horizon(double horizon_ps, std::size_t n_steps, int depth = 3,
	                               Integrator integrator = Integrator::expm);

	double horizon() const noexcept { return dt * static_cast<double>(n_steps); }
	void validate() const;
};

/// All auxiliary density operators at one instant, stored contiguously in
/// hierarchy order; each ADO is an N x N column-major block.
class HierarchyState {
public:
	using map_t = Eigen::Map<complex_matrix_t>;
	using const_map_t = Eigen::Map<const complex_matrix_t>;

	explicit HierarchyState(std::shared_ptr<const Hierarchy> hierarchy, double time = 0.0);

	// rho in the n = 0 slot, every other ADO zero.
	static HierarchyState from_density_matrix(std::shared_ptr<const Hierarchy> hierarchy, const complex_matrix_t& rho);

	const Hierarchy& hierarchy() const noexcept { return *hierarchy_; }
	const std::shared_ptr<const Hierarchy>& hierarchy_ptr() const noexcept { return hierarchy_; }
	std::size_t block_size() const noexcept { return hierarchy_->n_sites() * hierarchy_->n_sites(); }

	map_t ado(std::size_t pos);
	const_map_t ado(std::size_t pos) const;
	complex_matrix_t rho() const { return ado(0); }

	Eigen::VectorXcd& data() noexcept { return data_; }
	const Eigen::VectorXcd& data() const noexcept { return data_; }

	double time = 0.0;

private:
	std::shared_ptr<const Hierarchy> hierarchy_;
	Eigen::VectorXcd data_;
};

/// Linear generator of the truncated hierarchy for one Hamiltonian and bath.
///
/// For every ADO below the truncation depth:
///   d sigma(n)/dt = -(i L + sum_j n_j gamma_j) sigma(n)
///                   + sum_j [ Phi_j sigma(n_j+) + n_j Theta_j sigma(n_j-) ]
/// and at the deepest tier only the Liouvillian term survives.
class HierarchyGenerator {
public:
	/// hamiltonian_cm1: real symmetric site-basis matrix in cm^-1.
	HierarchyGenerator(const real_matrix_t& hamiltonian_cm1, const BathSpec& bath, int depth);

	const Hierarchy& hierarchy() const noexcept { return *hierarchy_; }
	const std::shared_ptr<const Hierarchy>& hierarchy_ptr() const noexcept { return hierarchy_; }
	std::size_t n_sites() const noexcept { return hierarchy_->n_sites(); }
	std::size_t state_size() const noexcept { return hierarchy_->size() * n_sites() * n_sites(); }

	// out = G in; both of length state_size().
	void apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const;

	// G as a dense matrix, assembled column by column from apply().
	complex_matrix_t dense() const;

	// G maps Hermitian ADOs to Hermitian ADOs, so it also acts on the real coordinates
	// (Re s_aa; Re s_ab, Im s_ab for a < b) of every block. Same size as dense(), but real.
	Eigen::MatrixXd dense_hermitian() const;

	// Real Hermitian coordinates of a state vector; the anti-Hermitian part is dropped.
	Eigen::VectorXd pack_hermitian(const Eigen::VectorXcd& state) const;
	Eigen::VectorXcd unpack_hermitian(const Eigen::VectorXd& coords) const;

private:
	std::shared_ptr<const Hierarchy> hierarchy_;
	complex_matrix_t hamiltonian_; // rad/ps
	std::vector<SiteBathRates> rates_;
	std::vector<double> damping_;  // sum_j n_j gamma_j per ADO
};

/// Time derivative of every ADO. Throws invariant_error if the state's
/// hierarchy does not match the configured depth or the Hamiltonian dimension.
HierarchyState heom_rhs(const HierarchyState& state, const real_matrix_t& hamiltonian_cm1, const BathSpec& bath,
                        const HEOMConfig& config);

struct Propagation {
	std::vector<double> times;          // k * dt, k = 0 .. n_steps-1
	std::vector<complex_matrix_t> rho;  // sigma(0, t_k)
	HierarchyState final_state;         // full hierarchy at n_steps * dt
	std::vector<std::string> warnings;
};

// Classic fixed-step fourth-order Runge-Kutta on the flattened hierarchy.
Propagation propagate_rk4(const complex_matrix_t& initial, const real_matrix_t& hamiltonian_cm1, const BathSpec& bath,
                          const HEOMConfig& config);

// Exact stepping with exp(G dt), computed once per run. Runs on the real Hermitian
// coordinates of the hierarchy, so the initial state is symmetrised first.
Propagation propagate_expm(const complex_matrix_t& initial, const real_matrix_t& hamiltonian_cm1, const BathSpec& bath,
                           const HEOMConfig& config);

// Dispatches on config.integrator.
Propagation propagate(const complex_matrix_t& initial, const real_matrix_t& hamiltonian_cm1, const BathSpec& bath,
                      const HEOMConfig& config);

// Starts from |initial_site><initial_site|.
Propagation propagate(const SystemHamiltonian& h, const BathSpec& bath, const HEOMConfig& config);

// Throws invalid_input unless rho is square, Hermitian to 1e-10 and has unit trace to 1e-8.
void validate_density_matrix(const complex_matrix_t& rho);

inline constexpr double hermiticity_tolerance = 1e-10;
inline constexpr double trace_tolerance = 1e-8;

} // namespace heom

#endif // heom_engine_hpp

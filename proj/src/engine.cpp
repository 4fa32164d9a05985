#include "heom/engine.hpp"

#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "heom/errors.hpp"
#include "heom/units.hpp"

namespace heom {

std::string_view to_string(Integrator integrator)
{
	return integrator == Integrator::rk4 ? "rk4" : "expm";
}

Integrator parse_integrator(std::string_view name)
{
	if (name == "rk4")
		return Integrator::rk4;
	if (name == "expm")
		return Integrator::expm;
	throw invalid_input("unknown integrator '" + std::string(name) + "' (expected rk4 or expm)");
}

HEOMConfig HEOMConfig::from_horizon(double horizon_ps, std::size_t n_steps, int depth, Integrator integrator)
{
	if (n_steps == 0)
		throw invalid_input("number of steps must be positive");
	HEOMConfig config;
	config.truncation_depth = depth;
	config.n_steps = n_steps;
	config.dt = horizon_ps / static_cast<double>(n_steps);
	config.integrator = integrator;
	config.validate();
	return config;
}

void HEOMConfig::validate() const
{
	if (truncation_depth < 1)
		throw invalid_input("truncation depth must be at least 1");
	if (n_steps == 0)
		throw invalid_input("number of steps must be positive");
	if (!(dt >= 0.0) || !std::isfinite(dt))
		throw invalid_input("time step must be finite and non-negative");
}

// ---------------------------------------------------------------------------

HierarchyState::HierarchyState(std::shared_ptr<const Hierarchy> hierarchy, double t)
	: time(t), hierarchy_(std::move(hierarchy)),
	  data_(Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(hierarchy_->size() * block_size())))
{
}

HierarchyState HierarchyState::from_density_matrix(std::shared_ptr<const Hierarchy> hierarchy, const complex_matrix_t& rho)
{
	const auto n = static_cast<Eigen::Index>(hierarchy->n_sites());
	if (rho.rows() != n || rho.cols() != n)
		throw invalid_input("density matrix dimension does not match the hierarchy");
	HierarchyState state(std::move(hierarchy));
	state.ado(0) = rho;
	return state;
}

HierarchyState::map_t HierarchyState::ado(std::size_t pos)
{
	const auto n = static_cast<Eigen::Index>(hierarchy_->n_sites());
	return map_t(data_.data() + pos * block_size(), n, n);
}

HierarchyState::const_map_t HierarchyState::ado(std::size_t pos) const
{
	const auto n = static_cast<Eigen::Index>(hierarchy_->n_sites());
	return const_map_t(data_.data() + pos * block_size(), n, n);
}

// ---------------------------------------------------------------------------

namespace {

void require_symmetric(const real_matrix_t& h)
{
	if (h.rows() != h.cols() || h.rows() == 0)
		throw invalid_input("Hamiltonian must be a non-empty square matrix");
	if (!h.allFinite())
		throw invalid_input("Hamiltonian entries must be finite");
	if (h != h.transpose())
		throw invalid_input("Hamiltonian must be real symmetric");
}

} // namespace

HierarchyGenerator::HierarchyGenerator(const real_matrix_t& hamiltonian_cm1, const BathSpec& bath, int depth)
{
	require_symmetric(hamiltonian_cm1);
	const auto n = static_cast<std::size_t>(hamiltonian_cm1.rows());
	if (bath.n_sites() != n)
		throw invalid_input("bath has " + std::to_string(bath.n_sites()) + " sites but the Hamiltonian has " + std::to_string(n));
	if (depth < 1)
		throw invalid_input("truncation depth must be at least 1");

	hierarchy_ = std::make_shared<const Hierarchy>(n, depth);
	hamiltonian_ = (hamiltonian_cm1 * units::cm1_to_angular).cast<complex_t>();
	for (std::size_t j = 0; j < n; ++j)
		rates_.push_back(site_bath_rates(bath, j));

	damping_.resize(hierarchy_->size());
	for (std::size_t p = 0; p < hierarchy_->size(); ++p) {
		double sum = 0.0;
		for (std::size_t j = 0; j < n; ++j)
			sum += hierarchy_->index(p).n[j] * rates_[j].gamma;
		damping_[p] = sum;
	}
}

void HierarchyGenerator::apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const
{
	const auto size = static_cast<Eigen::Index>(state_size());
	if (in.size() != size)
		throw invariant_error("state vector has " + std::to_string(in.size()) + " entries, hierarchy expects "
		                      + std::to_string(size));
	out.setZero(size);

	const auto n = n_sites();
	const auto dim = static_cast<Eigen::Index>(n);
	const auto block = n * n;
	const int depth = hierarchy_->depth();
	const complex_t i(0.0, 1.0);

	auto slot = [&](std::size_t pos) { return Eigen::Map<const complex_matrix_t>(in.data() + pos * block, dim, dim); };

	for (std::size_t p = 0; p < hierarchy_->size(); ++p) {
		const auto& idx = hierarchy_->index(p);
		const auto sigma = slot(p);
		Eigen::Map<complex_matrix_t> d(out.data() + p * block, dim, dim);

		kernel::add_commutator(hamiltonian_, sigma, -i, d);
		if (idx.depth() == depth)
			continue;

		d -= damping_[p] * sigma;
		for (std::size_t j = 0; j < n; ++j) {
			const auto up = hierarchy_->raised(p, j);
			if (up == Hierarchy::none)
				throw invariant_error("missing raised neighbour below the truncation depth");
			kernel::add_projector_commutator(j, slot(static_cast<std::size_t>(up)), i, d);

			const auto down = hierarchy_->lowered(p, j);
			if (down == Hierarchy::none)
				continue;
			const double nj = idx.n[j];
			const auto lower = slot(static_cast<std::size_t>(down));
			kernel::add_projector_commutator(j, lower, complex_t(0.0, nj * rates_[j].commutator), d);
			kernel::add_projector_anticommutator(j, lower, nj * rates_[j].anticommutator, d);
		}
	}
}

complex_matrix_t HierarchyGenerator::dense() const
{
	const auto size = static_cast<Eigen::Index>(state_size());
	complex_matrix_t g(size, size);
	Eigen::VectorXcd unit = Eigen::VectorXcd::Zero(size);
	Eigen::VectorXcd column(size);
	for (Eigen::Index c = 0; c < size; ++c) {
		unit[c] = 1.0;
		apply(unit, column);
		g.col(c) = column;
		unit[c] = 0.0;
	}
	return g;
}

Eigen::VectorXd HierarchyGenerator::pack_hermitian(const Eigen::VectorXcd& state) const
{
	const auto n = n_sites();
	const auto block = n * n;
	Eigen::VectorXd coords(static_cast<Eigen::Index>(state_size()));
	Eigen::Index q = 0;
	for (std::size_t p = 0; p < hierarchy_->size(); ++p) {
		const complex_t* s = state.data() + p * block;
		for (std::size_t a = 0; a < n; ++a) {
			coords[q++] = s[a + a * n].real();
			for (std::size_t b = a + 1; b < n; ++b) {
				// average (a,b) with conj(b,a); column-major storage
				const complex_t v = 0.5 * (s[a + b * n] + std::conj(s[b + a * n]));
				coords[q++] = v.real();
				coords[q++] = v.imag();
			}
		}
	}
	return coords;
}

Eigen::VectorXcd HierarchyGenerator::unpack_hermitian(const Eigen::VectorXd& coords) const
{
	const auto n = n_sites();
	const auto block = n * n;
	Eigen::VectorXcd state(static_cast<Eigen::Index>(state_size()));
	Eigen::Index q = 0;
	for (std::size_t p = 0; p < hierarchy_->size(); ++p) {
		complex_t* s = state.data() + p * block;
		for (std::size_t a = 0; a < n; ++a) {
			s[a + a * n] = coords[q++];
			for (std::size_t b = a + 1; b < n; ++b) {
				const complex_t v(coords[q], coords[q + 1]);
				q += 2;
				s[a + b * n] = v;
				s[b + a * n] = std::conj(v);
			}
		}
	}
	return state;
}

Eigen::MatrixXd HierarchyGenerator::dense_hermitian() const
{
	const auto size = static_cast<Eigen::Index>(state_size());
	Eigen::MatrixXd g(size, size);
	Eigen::VectorXd unit = Eigen::VectorXd::Zero(size);
	Eigen::VectorXcd column(size);
	for (Eigen::Index c = 0; c < size; ++c) {
		unit[c] = 1.0;
		apply(unpack_hermitian(unit), column);
		g.col(c) = pack_hermitian(column);
		unit[c] = 0.0;
	}
	return g;
}

HierarchyState heom_rhs(const HierarchyState& state, const real_matrix_t& hamiltonian_cm1, const BathSpec& bath,
                        const HEOMConfig& config)
{
	config.validate();
	if (state.hierarchy().depth() != config.truncation_depth)
		throw invariant_error("state hierarchy has depth " + std::to_string(state.hierarchy().depth()) + " but config asks for "
		                      + std::to_string(config.truncation_depth));
	if (static_cast<Eigen::Index>(state.hierarchy().n_sites()) != hamiltonian_cm1.rows())
		throw invariant_error("state hierarchy site count does not match the Hamiltonian");

	const HierarchyGenerator generator(hamiltonian_cm1, bath, config.truncation_depth);
	HierarchyState derivative(state.hierarchy_ptr(), state.time);
	generator.apply(state.data(), derivative.data());
	return derivative;
}

// ---------------------------------------------------------------------------

void validate_density_matrix(const complex_matrix_t& rho)
{
	if (rho.rows() != rho.cols() || rho.rows() == 0)
		throw invalid_input("density matrix must be a non-empty square matrix");
	if (!rho.allFinite())
		throw invalid_input("density matrix entries must be finite");
	if (max_hermiticity_deviation(rho) > hermiticity_tolerance)
		throw invalid_input("density matrix is not Hermitian");
	if (trace_deviation(rho) > trace_tolerance)
		throw invalid_input("density matrix trace differs from 1");
}

namespace {

struct Run {
	HierarchyGenerator generator;
	Propagation result;
	HierarchyState state;
};

Run start_run(const complex_matrix_t& initial, const real_matrix_t& hamiltonian_cm1, const BathSpec& bath,
              const HEOMConfig& config)
{
	config.validate();
	validate_density_matrix(initial);
	HierarchyGenerator generator(hamiltonian_cm1, bath, config.truncation_depth);
	if (static_cast<std::size_t>(initial.rows()) != generator.n_sites())
		throw invalid_input("initial density matrix dimension does not match the Hamiltonian");

	auto state = HierarchyState::from_density_matrix(generator.hierarchy_ptr(), initial);
	Propagation result{{}, {}, state, {}};
	result.times.reserve(config.n_steps);
	result.rho.reserve(config.n_steps);

	if (const double ratio = bath.max_high_temperature_ratio(); ratio >= 1.0) {
		std::ostringstream msg;
		msg << "high-temperature condition violated: hbar*gamma/(k_B*T) = " << ratio << " >= 1";
		result.warnings.push_back(msg.str());
	}
	return {std::move(generator), std::move(result), std::move(state)};
}

// Leading block of the Hermitian coordinate vector, i.e. sigma(0).
complex_matrix_t rho_from_coords(const Eigen::VectorXd& x, std::size_t n)
{
	complex_matrix_t rho(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
	Eigen::Index q = 0;
	for (Eigen::Index a = 0; a < rho.rows(); ++a) {
		rho(a, a) = x[q++];
		for (Eigen::Index b = a + 1; b < rho.cols(); ++b) {
			rho(a, b) = complex_t(x[q], x[q + 1]);
			rho(b, a) = complex_t(x[q], -x[q + 1]);
			q += 2;
		}
	}
	return rho;
}

void record(Propagation& result, complex_matrix_t rho, std::size_t step, double dt)
{
	if (!rho.allFinite())
		throw divergence_error(step, "non-finite density matrix during propagation");
	result.times.push_back(static_cast<double>(step) * dt);
	result.rho.push_back(std::move(rho));
}

void finish(Run& run, Eigen::VectorXcd&& y, const HEOMConfig& config)
{
	if (!y.allFinite())
		throw divergence_error(config.n_steps, "non-finite auxiliary density operators at the end of propagation");
	run.state.data() = std::move(y);
	run.state.time = config.horizon();
	run.result.final_state = std::move(run.state);
}

} // namespace

Propagation propagate_rk4(const complex_matrix_t& initial, const real_matrix_t& hamiltonian_cm1, const BathSpec& bath,
                          const HEOMConfig& config)
{
	auto run = start_run(initial, hamiltonian_cm1, bath, config);
	const auto& g = run.generator;
	const auto size = static_cast<Eigen::Index>(g.state_size());
	const double dt = config.dt;

	Eigen::VectorXcd y = run.state.data();
	Eigen::VectorXcd k1(size), k2(size), k3(size), k4(size), tmp(size);

	for (std::size_t step = 0; step < config.n_steps; ++step) {
		const auto dim = static_cast<Eigen::Index>(g.n_sites());
		record(run.result, Eigen::Map<const complex_matrix_t>(y.data(), dim, dim), step, dt);

		g.apply(y, k1);
		tmp = y + (0.5 * dt) * k1;
		g.apply(tmp, k2);
		tmp = y + (0.5 * dt) * k2;
		g.apply(tmp, k3);
		tmp = y + dt * k3;
		g.apply(tmp, k4);
		y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
	}

	finish(run, std::move(y), config);
	return std::move(run.result);
}

Propagation propagate_expm(const complex_matrix_t& initial, const real_matrix_t& hamiltonian_cm1, const BathSpec& bath,
                           const HEOMConfig& config)
{
	auto run = start_run(initial, hamiltonian_cm1, bath, config);
	const auto& g = run.generator;

	const Eigen::MatrixXd generator = g.dense_hermitian();
	if (generator.rows() != static_cast<Eigen::Index>(g.state_size()) || generator.cols() != generator.rows())
		throw invariant_error("generator assembly produced a matrix of the wrong dimension");
	const Eigen::MatrixXd step_operator = (generator * config.dt).exp();
	if (!step_operator.allFinite())
		throw divergence_error(0, "matrix exponential of the generator is not finite");

	Eigen::VectorXd x = g.pack_hermitian(run.state.data());
	Eigen::VectorXd next(x.size());
	for (std::size_t step = 0; step < config.n_steps; ++step) {
		record(run.result, rho_from_coords(x, g.n_sites()), step, config.dt);
		next.noalias() = step_operator * x;
		x.swap(next);
	}
	Eigen::VectorXcd y = g.unpack_hermitian(x);

	finish(run, std::move(y), config);
	return std::move(run.result);
}

Propagation propagate(const complex_matrix_t& initial, const real_matrix_t& hamiltonian_cm1, const BathSpec& bath,
                      const HEOMConfig& config)
{
	return config.integrator == Integrator::rk4 ? propagate_rk4(initial, hamiltonian_cm1, bath, config)
	                                             : propagate_expm(initial, hamiltonian_cm1, bath, config);
}

Propagation propagate(const SystemHamiltonian& h, const BathSpec& bath, const HEOMConfig& config)
{
	return propagate(site_population_state(h.n_sites(), config.initial_site), build_hamiltonian_matrix(h), bath, config);
}

} // namespace heom

#include "heom/features.hpp"

#include <cmath>

#include "heom/errors.hpp"

namespace heom {

std::string_view to_string(CoherenceChannel channel)
{
	switch (channel) {
	case CoherenceChannel::real: return "real";
	case CoherenceChannel::imag: return "imag";
	case CoherenceChannel::abs: return "abs";
	}
	return "real";
}

CoherenceChannel parse_coherence_channel(std::string_view name)
{
	if (name == "real")
		return CoherenceChannel::real;
	if (name == "imag")
		return CoherenceChannel::imag;
	if (name == "abs")
		return CoherenceChannel::abs;
	throw invalid_input("unknown coherence channel '" + std::string(name) + "' (expected real, imag or abs)");
}

std::vector<std::string> Trajectory::column_names() const
{
	std::vector<std::string> names;
	for (std::size_t j = 1; j <= n_sites; ++j)
		names.push_back("p_" + std::to_string(j));
	for (std::size_t j = 1; j < n_sites; ++j)
		names.push_back("c_" + std::to_string(j));
	return names;
}

Trajectory extract_features(const std::vector<complex_matrix_t>& rho_series, const std::vector<double>& times,
                            CoherenceChannel channel)
{
	if (rho_series.empty())
		throw invalid_input("cannot extract features from an empty series");
	if (times.size() != rho_series.size())
		throw invalid_input("time grid and density-matrix series differ in length");

	const auto n = static_cast<std::size_t>(rho_series.front().rows());
	if (n < 2)
		throw invalid_input("features need at least 2 sites");

	Trajectory t;
	t.n_sites = n;
	t.times = times;
	t.features.resize(static_cast<Eigen::Index>(rho_series.size()), static_cast<Eigen::Index>(feature_count(n)));

	for (std::size_t k = 0; k < rho_series.size(); ++k) {
		const auto& rho = rho_series[k];
		if (static_cast<std::size_t>(rho.rows()) != n || static_cast<std::size_t>(rho.cols()) != n)
			throw invalid_input("density matrix " + std::to_string(k) + " has the wrong dimension");
		auto row = t.features.row(static_cast<Eigen::Index>(k));
		for (std::size_t j = 0; j < n; ++j)
			row(j) = rho(j, j).real();
		for (std::size_t j = 0; j + 1 < n; ++j) {
			const complex_t c = rho(j, j + 1);
			double value = c.real();
			if (channel == CoherenceChannel::imag)
				value = c.imag();
			else if (channel == CoherenceChannel::abs)
				value = std::abs(c);
			row(n + j) = value;
		}
	}
	return t;
}

TrajectoryCheck check_trajectory(const Trajectory& trajectory)
{
	TrajectoryCheck check;
	const auto n = static_cast<Eigen::Index>(trajectory.n_sites);
	check.rows = static_cast<std::size_t>(trajectory.features.rows());
	for (Eigen::Index k = 0; k < trajectory.features.rows(); ++k) {
		const auto row = trajectory.features.row(k);
		double sum = 0.0;
		bool populations_ok = true;
		for (Eigen::Index j = 0; j < n; ++j) {
			const double p = row(j);
			sum += p;
			if (!(p >= -population_tolerance && p <= 1.0 + population_tolerance))
				populations_ok = false;
		}
		if (!(std::abs(sum - 1.0) <= population_tolerance))
			++check.bad_row_sums;
		if (!populations_ok)
			++check.bad_populations;
		for (Eigen::Index j = n; j < row.size(); ++j)
			if (!(row(j) >= -1.0 && row(j) <= 1.0)) {
				++check.bad_coherences;
				break;
			}
	}
	return check;
}

} // namespace heom

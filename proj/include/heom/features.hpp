#ifndef heom_features_hpp
#define heom_features_hpp

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "heom/model.hpp"

namespace heom {

// Which scalar of rho_{j,j+1} becomes the coherence feature.
enum class CoherenceChannel { real, imag, abs };

std::string_view to_string(CoherenceChannel channel);
CoherenceChannel parse_coherence_channel(std::string_view name);

using feature_matrix_t = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Feature time series of one simulation: columns p_1..p_N, c_1..c_{N-1}.
struct Trajectory {
	std::size_t n_sites = 0;
	std::vector<double> times; // ps
	feature_matrix_t features; // n_steps x (2N - 1)

	std::size_t n_steps() const noexcept { return times.size(); }
	std::size_t n_features() const noexcept { return 2 * n_sites - 1; }
	// p_1..p_N, c_1..c_{N-1}
	std::vector<std::string> column_names() const;
};

inline std::size_t feature_count(std::size_t n_sites) { return 2 * n_sites - 1; }

/// Throws invalid_input for an empty series or mismatched lengths/dimensions.
Trajectory extract_features(const std::vector<complex_matrix_t>& rho_series, const std::vector<double>& times,
                            CoherenceChannel channel = CoherenceChannel::real);

struct TrajectoryCheck {
	std::size_t rows = 0;
	std::size_t bad_row_sums = 0;     // |sum_j p_j - 1| > 1e-8
	std::size_t bad_populations = 0;  // p_j outside [-1e-8, 1 + 1e-8]
	std::size_t bad_coherences = 0;   // c_j outside [-1, 1] or non-finite

	bool ok() const noexcept { return bad_row_sums == 0 && bad_populations == 0 && bad_coherences == 0; }
};

TrajectoryCheck check_trajectory(const Trajectory& trajectory);

inline constexpr double population_tolerance = 1e-8;

} // namespace heom

#endif // heom_features_hpp

#include "heom/csv.hpp"

#include <array>
#include <charconv>

namespace heom::csv {

std::string format(double value)
{
	std::array<char, 32> buffer{};
	const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
	return ec == std::errc{} ? std::string(buffer.data(), end) : std::string("nan");
}

void write_row(std::ostream& out, const std::vector<std::string>& fields)
{
	for (std::size_t k = 0; k < fields.size(); ++k) {
		if (k > 0)
			out << ',';
		const auto& f = fields[k];
		if (f.find_first_of(",\"\r\n") == std::string::npos) {
			out << f;
			continue;
		}
		out << '"';
		for (char c : f) {
			if (c == '"')
				out << '"';
			out << c;
		}
		out << '"';
	}
	out << "\r\n";
}

void write_trajectory(std::ostream& out, const Trajectory& trajectory, std::size_t rows)
{
	std::vector<std::string> fields{"time_ps"};
	for (auto& name : trajectory.column_names())
		fields.push_back(std::move(name));
	write_row(out, fields);

	const auto n_rows = rows == 0 ? trajectory.n_steps() : std::min(rows, trajectory.n_steps());
	for (std::size_t k = 0; k < n_rows; ++k) {
		fields.assign(1, format(trajectory.times[k]));
		const auto row = trajectory.features.row(static_cast<Eigen::Index>(k));
		for (Eigen::Index j = 0; j < row.size(); ++j)
			fields.push_back(format(row(j)));
		write_row(out, fields);
	}
}

} // namespace heom::csv

#ifndef heom_csv_hpp
#define heom_csv_hpp

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "heom/features.hpp"

namespace heom::csv {

// Shortest decimal string that parses back to exactly `value`.
std::string format(double value);

// One CRLF-terminated record; fields containing separators or quotes are quoted.
void write_row(std::ostream& out, const std::vector<std::string>& fields);

// time_ps, p_1..p_N, c_1..c_{N-1}; first `rows` rows (all if rows is 0).
void write_trajectory(std::ostream& out, const Trajectory& trajectory, std::size_t rows = 0);

} // namespace heom::csv

#endif // heom_csv_hpp

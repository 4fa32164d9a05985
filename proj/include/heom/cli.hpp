#ifndef heom_cli_hpp
#define heom_cli_hpp

#include <ostream>
#include <string>
#include <vector>

namespace heom::cli {

enum exit_code : int {
	success = 0,
	runtime_failure = 1,
	usage_error = 2,
};

/// Runs one heomctl invocation. args[0] is the program name.
/// Subcommands: simulate, gen-dataset, inspect, export.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace heom::cli

#endif // heom_cli_hpp

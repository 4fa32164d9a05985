#ifndef heom_errors_hpp
#define heom_errors_hpp

#include <cstddef>
#include <stdexcept>
#include <string>

namespace heom {

// Bad arguments supplied by the caller (dimensions, ranges, flags).
class invalid_input : public std::invalid_argument {
public:
	using std::invalid_argument::invalid_argument;
};

// Broken internal consistency, e.g. a hierarchy layout that does not match the config.
class invariant_error : public std::logic_error {
public:
	using std::logic_error::logic_error;
};

class divergence_error : public std::runtime_error {
public:
	divergence_error(std::size_t step, const std::string& what)
		: std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

	std::size_t step() const noexcept { return step_; }

private:
	std::size_t step_;
};

class corruption_error : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

class unsupported_format : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

} // namespace heom

#endif // heom_errors_hpp

#include <iostream>
#include <string>
#include <vector>

#include "heom/cli.hpp"

int main(int argc, char** argv)
{
	return heom::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}

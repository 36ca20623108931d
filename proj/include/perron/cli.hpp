#ifndef PERRON_CLI_HPP
#define PERRON_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace perron::cli {

/// Exit codes: 0 success, 2 validation error, 3 domain error, 4 precision
/// or guard exhaustion, 64 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace perron::cli

#endif

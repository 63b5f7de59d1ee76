#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace chorefair::cli {

// Exit codes: 0 success or predicate holds, 1 predicate fails, 2 error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Lower-case hex SHA-256 of `bytes`.
std::string sha256_hex(const std::string& bytes);

} // namespace chorefair::cli

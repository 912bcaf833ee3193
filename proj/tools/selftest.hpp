#pragma once

#include <ostream>
#include <string>

namespace qhdc::cli {

/// Fast invariant suite. `fault` is empty or "s0-sign". Returns the number of failures.
int run_selftest(const std::string& fault, std::ostream& out);

}  // namespace qhdc::cli

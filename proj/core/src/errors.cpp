#include "opexp/errors.hpp"

#include <sstream>

namespace opexp {

namespace {

std::string scientific(double v)
{
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

} // namespace

DimensionMismatch::DimensionMismatch(const std::string& where, std::ptrdiff_t lhs,
                                     std::ptrdiff_t rhs)
    : InvalidArgument(where + ": dimension mismatch (" + std::to_string(lhs) + " vs " +
                      std::to_string(rhs) + ")")
{
}

TruncationError::TruncationError(const std::string& what, double tail_mass,
                                 std::ptrdiff_t suggested_dim)
    : NumericalGuard(what + " (tail mass " + scientific(tail_mass) + ", try dim >= " +
                     std::to_string(suggested_dim) + ")"),
      tail_mass_(tail_mass),
      suggested_dim_(suggested_dim)
{
}

} // namespace opexp

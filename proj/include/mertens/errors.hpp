#ifndef MERTENS_ERRORS_HPP
#define MERTENS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mertens {

// Caller violated an operation's precondition (bad modulus, residue not
// coprime, parity mismatch, ...).
class PreconditionError : public std::invalid_argument {
 public:
  explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

// No truncation schedule meets the requested error budget.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical safety check fired: logarithm branch risk, a vanishing
// theta series, an L-value too close to zero for the error ledger.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mertens

#endif  // MERTENS_ERRORS_HPP

#pragma once

#include <stdexcept>
#include <string>

namespace plike {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Input data that cannot support the requested statistic (e.g. zero variance).
class DegenerateInputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An iterative routine hit its iteration cap before meeting its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Likelihood ratio whose denominator is too small to divide by safely.
class OverflowGuardError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A histogram slice selected no records.
class EmptySliceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Simulation work exceeding the configured sample budget.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed CSV or data file contents.
class DataFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace plike

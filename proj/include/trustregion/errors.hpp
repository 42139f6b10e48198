#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace trustregion {

/// Invalid input: domain violations, malformed configuration, missing files.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A caller-side contract is not met (e.g. a trust interval that does not
/// solve the balancing system handed to the transport builder).
class PreconditionError : public InputError {
public:
    using InputError::InputError;
};

/// A numerical routine could not reach its stopping criterion.
/// Carries the last residuals it observed.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, std::vector<double> residuals = {})
        : std::runtime_error(what), residuals_(std::move(residuals)) {}

    const std::vector<double>& residuals() const noexcept { return residuals_; }

private:
    std::vector<double> residuals_;
};

} // namespace trustregion

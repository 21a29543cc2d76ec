#ifndef MATPOINTS_ERRORS_HPP
#define MATPOINTS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace matpoints {

enum class errc {
    not_prime,
    prime_too_small,
    field_too_large,
    division_by_zero,
    zero_has_no_log,
    rounding_failure,
    bad_parameter,
    singular_curve,
    hasse_violation,
    inexact_division,
    non_polynomial_result,
    parts_sum_mismatch,
    non_integral_coefficient,
    non_terminating,
    pole_in_denominator,
    work_budget_exceeded,
    no_consistent_convention,
    invalid_argument,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::not_prime: return "NotPrime";
        case errc::prime_too_small: return "PrimeTooSmall";
        case errc::field_too_large: return "FieldTooLarge";
        case errc::division_by_zero: return "DivisionByZero";
        case errc::zero_has_no_log: return "ZeroHasNoLog";
        case errc::rounding_failure: return "RoundingFailure";
        case errc::bad_parameter: return "BadParameter";
        case errc::singular_curve: return "SingularCurve";
        case errc::hasse_violation: return "HasseViolation";
        case errc::inexact_division: return "InexactDivision";
        case errc::non_polynomial_result: return "NonPolynomialResult";
        case errc::parts_sum_mismatch: return "PartsSumMismatch";
        case errc::non_integral_coefficient: return "NonIntegralCoefficient";
        case errc::non_terminating: return "NonTerminating";
        case errc::pole_in_denominator: return "PoleInDenominator";
        case errc::work_budget_exceeded: return "WorkBudgetExceeded";
        case errc::no_consistent_convention: return "NoConsistentConvention";
        case errc::invalid_argument: return "InvalidArgument";
    }
    return "UnknownError";
}

/// All library failures are thrown as this type; the CLI maps codes to exit
/// statuses and a one-line stderr message.
class error : public std::runtime_error {
public:
    error(errc code, const std::string& detail)
        : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}
    errc code() const { return code_; }

private:
    errc code_;
};

} // namespace matpoints

#endif

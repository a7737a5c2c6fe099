#pragma once

#include <stdexcept>
#include <string>

namespace dmod {

// Typed domain errors. Anything not on this list is a plain logic error
// (a bug), not a property of the input.
enum class errc {
    not_a_unit,
    integer_residue,
    invalid_ramified_data,
    unsupported_ramification,
    inconsistent_rank,
    insufficient_precision,
    no_relation_found,
    resonance,
    use_bookkeeping,
    wrong_slope_sector,
    integral_lambda,
    inconsistent_type,
    no_singularities,
    regular_connection,
    insufficient_depth,
    bad_input,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::not_a_unit: return "NotAUnit";
        case errc::integer_residue: return "IntegerResidue";
        case errc::invalid_ramified_data: return "InvalidRamifiedData";
        case errc::unsupported_ramification: return "UnsupportedRamification";
        case errc::inconsistent_rank: return "InconsistentRank";
        case errc::insufficient_precision: return "InsufficientPrecision";
        case errc::no_relation_found: return "NoRelationFound";
        case errc::resonance: return "Resonance";
        case errc::use_bookkeeping: return "UseBookkeeping";
        case errc::wrong_slope_sector: return "WrongSlopeSector";
        case errc::integral_lambda: return "IntegralLambda";
        case errc::inconsistent_type: return "InconsistentType";
        case errc::no_singularities: return "NoSingularities";
        case errc::regular_connection: return "RegularConnection";
        case errc::insufficient_depth: return "InsufficientDepth";
        case errc::bad_input: return "BadInput";
    }
    return "UnknownError";
}

class domain_error : public std::runtime_error {
public:
    domain_error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    errc code() const { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) {
    throw domain_error(code, what);
}

}  // namespace dmod

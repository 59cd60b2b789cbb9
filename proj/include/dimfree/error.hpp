#ifndef DIMFREE_ERROR_HPP
#define DIMFREE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace dimfree {

enum class Errc {
    ShapeMismatch,
    IndexOutOfRange,
    NonHermitian,
    DecompositionFailure,
    NegativeArgument,
    NonPositiveArgument,
    DomainViolation,
    PartitionMismatch,
    OptimizerDidNotConverge,
    EmptyInput,
    WeightError,
    BadSubset,
    TooManySubsets,
    ZeroMuB,
    Disconnected,
    NotAFractionalCover,
    ParseError,
};

inline const char* errc_name(Errc c) {
    switch (c) {
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::NonHermitian: return "NonHermitian";
    case Errc::DecompositionFailure: return "DecompositionFailure";
    case Errc::NegativeArgument: return "NegativeArgument";
    case Errc::NonPositiveArgument: return "NonPositiveArgument";
    case Errc::DomainViolation: return "DomainViolation";
    case Errc::PartitionMismatch: return "PartitionMismatch";
    case Errc::OptimizerDidNotConverge: return "OptimizerDidNotConverge";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::WeightError: return "WeightError";
    case Errc::BadSubset: return "BadSubset";
    case Errc::TooManySubsets: return "TooManySubsets";
    case Errc::ZeroMuB: return "ZeroMuB";
    case Errc::Disconnected: return "Disconnected";
    case Errc::NotAFractionalCover: return "NotAFractionalCover";
    case Errc::ParseError: return "ParseError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

namespace detail {

inline void require(bool ok, Errc code, const std::string& msg) {
    if (!ok) throw Error(code, msg);
}

} // namespace detail

} // namespace dimfree

#endif

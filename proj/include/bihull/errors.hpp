#ifndef BIHULL_ERRORS_HPP
#define BIHULL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bihull {

enum class Errc {
    DuplicateEdge,
    IndexOutOfRange,
    ZeroWeight,
    NotACycle,
    DimensionMismatch,
    BadAlpha,
    Overlap,
    EvenD,
    TooSmall,
    BadIndex,
    BadClass,
    MalformedProblem,
    InfeasibleAtX,
    TooLarge,
    DegenerateGap,
    SharedTooMuch,
    TooMuch,
    BadWeights,
    BadPartition,
    MalformedInstance,
    IoFailure,
    ParseError,
};

/// Library error carrying a machine-checkable kind next to the message.
class Error : public std::runtime_error {
public:
    Error(Errc kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Errc kind() const { return kind_; }

private:
    Errc kind_;
};

[[noreturn]] inline void fail(Errc kind, const std::string& what) { throw Error(kind, what); }

}  // namespace bihull

#endif

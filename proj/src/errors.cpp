#include "bifree/errors.hpp"

namespace bifree {

const char* to_string(Precondition p)
{
    switch (p) {
    case Precondition::zero_first_moment_a:
        return "zero first moment of the left face";
    case Precondition::zero_first_moment_b:
        return "zero first moment of the right face";
    case Precondition::zero_mixed_moment:
        return "zero mixed moment";
    case Precondition::not_factoring:
        return "two-band moments do not factor";
    case Precondition::word_too_long:
        return "word exceeds enumeration bound";
    }
    return "unknown precondition";
}

namespace {

std::string describe(Precondition kind, const std::vector<std::string>& failures)
{
    std::string msg = std::string("precondition failed (") + to_string(kind) + ")";
    for (std::size_t i = 0; i < failures.size(); ++i)
        msg += (i == 0 ? ": " : ", ") + failures[i];
    return msg;
}

} // namespace

PreconditionError::PreconditionError(Precondition kind, std::vector<std::string> failures)
    : Error(describe(kind, failures)), kind_(kind), failures_(std::move(failures))
{
}

} // namespace bifree

#pragma once

#include <stdexcept>
#include <string>

namespace chorefair {

// Base for every error the library raises. name() is the stable identifier
// the CLI prints (e.g. "WrongAgentCount").
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& message)
        : std::runtime_error(message), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

#define CHOREFAIR_DEFINE_ERROR(Type)                                            \
    class Type : public Error {                                                \
    public:                                                                    \
        explicit Type(const std::string& message) : Error(#Type, message) {}   \
    }

CHOREFAIR_DEFINE_ERROR(ParseError);
CHOREFAIR_DEFINE_ERROR(StructureError);
CHOREFAIR_DEFINE_ERROR(NormalizationError);
CHOREFAIR_DEFINE_ERROR(NotNormalized);
CHOREFAIR_DEFINE_ERROR(InvalidPermutation);
CHOREFAIR_DEFINE_ERROR(BudgetExceeded);
CHOREFAIR_DEFINE_ERROR(NoFairAllocation);
CHOREFAIR_DEFINE_ERROR(WrongAgentCount);
CHOREFAIR_DEFINE_ERROR(ParameterError);
CHOREFAIR_DEFINE_ERROR(PlugContractError);

#undef CHOREFAIR_DEFINE_ERROR

} // namespace chorefair

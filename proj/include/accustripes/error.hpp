#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace accustripes {

enum class ErrorCode {
    EmptyInput,
    NonFiniteValue,
    TooLarge,
    TooFewValues,
    OutOfRange,
    DegenerateRange,
    SingleBin,
    InsufficientData,
    GapTooLarge,
    InvalidSize,
    InvalidArgument,
    MismatchedInputs,
    MissingDensity,
    Io,
    Parse,
    Network,
};

const char* toString(ErrorCode code) noexcept;

//! Every failure in the core is reported through this exception type.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::optional<std::size_t> index = std::nullopt)
        : std::runtime_error(message), m_Code(code), m_Index(index) {}

    ErrorCode code() const noexcept { return m_Code; }

    //! Offending element for NonFiniteValue.
    std::optional<std::size_t> index() const noexcept { return m_Index; }

private:
    ErrorCode m_Code;
    std::optional<std::size_t> m_Index;
};

} // namespace accustripes

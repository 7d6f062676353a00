#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace superint {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ContextError : Error { using Error::Error; };
struct ParityError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct UnknownIdentifier : Error { using Error::Error; };
struct NonInvertibleJet : Error { using Error::Error; };
struct PoleError : Error { using Error::Error; };
struct ParameterError : Error { using Error::Error; };
struct DivergenceError : Error { using Error::Error; };
struct RefusalError : Error { using Error::Error; };
struct UnsupportedError : Error { using Error::Error; };
struct QuadratureError : Error { using Error::Error; };

struct SyntaxError : Error {
    SyntaxError(const std::string& msg, std::size_t offset)
        : Error(msg + " at offset " + std::to_string(offset)), offset(offset) {}
    std::size_t offset;
};

}  // namespace superint

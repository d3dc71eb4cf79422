#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace igame {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct InsufficientData : Error {
    using Error::Error;
};

struct DegenerateRegression : Error {
    using Error::Error;
};

struct MissingInput : Error {
    using Error::Error;
};

struct NonFiniteState : Error {
    explicit NonFiniteState(const std::string& what, std::size_t node_index = 0)
        : Error(what), node(node_index) {}
    std::size_t node;
};

struct SingularCoupling : Error {
    SingularCoupling(const std::string& what, std::size_t node_index, std::size_t channel_index)
        : Error(what), node(node_index), channel(channel_index) {}
    std::size_t node;
    std::size_t channel;
};

struct EmptyCandidateSet : Error {
    using Error::Error;
};

struct LengthMismatch : Error {
    using Error::Error;
};

struct MixedRepresentation : Error {
    using Error::Error;
};

struct EmptyCodebook : Error {
    using Error::Error;
};

struct NonHermitianSpec : Error {
    using Error::Error;
};

struct BadConfig : Error {
    using Error::Error;
};

struct ParseError : Error {
    explicit ParseError(const std::string& what, std::size_t row_number = 0)
        : Error(what), row(row_number) {}
    std::size_t row;
};

}  // namespace igame

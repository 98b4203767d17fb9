#pragma once

#include <stdexcept>
#include <string>

namespace extann {

struct RegimeError : std::runtime_error {
    explicit RegimeError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonConstantError : std::runtime_error {
    explicit NonConstantError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotInvertibleError : std::runtime_error {
    explicit NotInvertibleError(const std::string& msg) : std::runtime_error(msg) {}
};

struct QuadratureError : std::runtime_error {
    explicit QuadratureError(const std::string& msg) : std::runtime_error(msg) {}
};

struct GridTooSmall : std::runtime_error {
    explicit GridTooSmall(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegenerateCell : std::runtime_error {
    DegenerateCell(const std::string& msg, int i_, int j_)
        : std::runtime_error(msg), i(i_), j(j_) {}
    int i;
    int j;
};

struct RejectedPerturbation : std::runtime_error {
    explicit RejectedPerturbation(const std::string& msg) : std::runtime_error(msg) {}
};

struct SlopeSaturated : std::runtime_error {
    explicit SlopeSaturated(const std::string& msg) : std::runtime_error(msg) {}
};

struct DivergentProfile : std::runtime_error {
    explicit DivergentProfile(const std::string& msg) : std::runtime_error(msg) {}
};

struct InconclusiveConvergence : std::runtime_error {
    explicit InconclusiveConvergence(const std::string& msg) : std::runtime_error(msg) {}
};

struct PlateauPlacementError : std::runtime_error {
    explicit PlateauPlacementError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SeamMismatch : std::runtime_error {
    explicit SeamMismatch(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace extann

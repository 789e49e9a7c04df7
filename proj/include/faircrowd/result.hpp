#pragma once

#include <cassert>
#include <optional>
#include <utility>

namespace faircrowd {

// Every failure a caller is expected to handle, across all modules. Rejection
// verdicts (contract asserts, proof checks, malformed encodings) are values,
// not exceptions; exceptions are reserved for programmer errors.
enum class Err {
    // group math
    NotInRange,
    DegenerateOperand,
    // pvas
    UnsupportedParameter,
    DataOutOfBounds,
    DimensionMismatch,
    EmptyInput,
    // sigma
    WitnessMismatch,
    InvalidProof,
    // codec
    MalformedEncoding,
    VersionMismatch,
    SecretFieldPresent,
    // contract
    WrongState,
    TooLate,
    TooEarly,
    OutOfWindow,
    InsufficientFunds,
    NonpositiveDeposit,
    AlreadyAccepted,
    NotAccepted,
    AlreadyUploaded,
    Unfulfillable,
    SharesMismatch,
    UnknownTask,
    BadSchedule,
    // chain
    ReplayDivergence,
    // cli / ingest
    NonNumericCell,
    BoundsExceeded,
    UnknownColumn,
    ScenarioInvalid,
};

inline const char* err_name(Err e) {
    switch (e) {
        case Err::NotInRange: return "NotInRange";
        case Err::DegenerateOperand: return "DegenerateOperand";
        case Err::UnsupportedParameter: return "UnsupportedParameter";
        case Err::DataOutOfBounds: return "DataOutOfBounds";
        case Err::DimensionMismatch: return "DimensionMismatch";
        case Err::EmptyInput: return "EmptyInput";
        case Err::WitnessMismatch: return "WitnessMismatch";
        case Err::InvalidProof: return "InvalidProof";
        case Err::MalformedEncoding: return "MalformedEncoding";
        case Err::VersionMismatch: return "VersionMismatch";
        case Err::SecretFieldPresent: return "SecretFieldPresent";
        case Err::WrongState: return "WrongState";
        case Err::TooLate: return "TooLate";
        case Err::TooEarly: return "TooEarly";
        case Err::OutOfWindow: return "OutOfWindow";
        case Err::InsufficientFunds: return "InsufficientFunds";
        case Err::NonpositiveDeposit: return "NonpositiveDeposit";
        case Err::AlreadyAccepted: return "AlreadyAccepted";
        case Err::NotAccepted: return "NotAccepted";
        case Err::AlreadyUploaded: return "AlreadyUploaded";
        case Err::Unfulfillable: return "Unfulfillable";
        case Err::SharesMismatch: return "SharesMismatch";
        case Err::UnknownTask: return "UnknownTask";
        case Err::BadSchedule: return "BadSchedule";
        case Err::ReplayDivergence: return "ReplayDivergence";
        case Err::NonNumericCell: return "NonNumericCell";
        case Err::BoundsExceeded: return "BoundsExceeded";
        case Err::UnknownColumn: return "UnknownColumn";
        case Err::ScenarioInvalid: return "ScenarioInvalid";
    }
    return "Unknown";
}

// Minimal expected-like result. C++20, so no std::expected yet.
template <class T>
class Res {
public:
    Res(T value) : value_(std::move(value)) {}  // NOLINT: implicit by design
    Res(Err err) : err_(err) {}                 // NOLINT

    bool ok() const { return value_.has_value(); }
    explicit operator bool() const { return ok(); }
    T& value() {
        assert(ok());
        return *value_;
    }
    const T& value() const {
        assert(ok());
        return *value_;
    }
    T& operator*() { return value(); }
    const T& operator*() const { return value(); }
    T* operator->() { return &value(); }
    const T* operator->() const { return &value(); }
    Err error() const {
        assert(!ok());
        return *err_;
    }

private:
    std::optional<T> value_;
    std::optional<Err> err_;
};

template <>
class Res<void> {
public:
    Res() = default;
    Res(Err err) : err_(err) {}  // NOLINT
    static Res ok_value() { return Res(); }

    bool ok() const { return !err_.has_value(); }
    explicit operator bool() const { return ok(); }
    Err error() const {
        assert(!ok());
        return *err_;
    }

private:
    std::optional<Err> err_;
};

}  // namespace faircrowd

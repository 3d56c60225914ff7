#pragma once

#include <stdexcept>
#include <string>

namespace bocskit {

enum class Err {
    DivisionByZero,
    FieldMismatch,
    IdempotentMismatch,
    EmptyPartition,
    TranslationDefectMismatch,
    AlgebraMismatch,
    StasheffViolation,
    TriangularityViolation,
    TruncationMismatch,
    ModuleMismatch,
    NotInvertible,
    NotABocsMorphism,
    NotAHomotopy,
    NotIdempotent,
    NotAcyclic,
    ChainMapDefect,
    NotComposableToZero,
    NotExactOnComponents,
    NotQuasiIso,
    NotAnAlgMorphism,
    NotAComplex,
    TruncationTooSmall,
    FormulationMismatch,
    GenerationFailed,
    ParseError,
    UnknownTarget,
};

const char* err_name(Err e);

class BocsError : public std::runtime_error {
public:
    BocsError(Err kind, const std::string& what)
        : std::runtime_error(std::string(err_name(kind)) + ": " + what), kind_(kind) {}
    Err kind() const { return kind_; }

private:
    Err kind_;
};

/* Result of an identity check; `witness` locates the first failure. */
struct CheckResult {
    bool ok = true;
    std::string witness;

    static CheckResult pass() { return {true, {}}; }
    static CheckResult fail(std::string w) { return {false, std::move(w)}; }
    explicit operator bool() const { return ok; }
};

} // namespace bocskit

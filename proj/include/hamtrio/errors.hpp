#pragma once

#include <stdexcept>
#include <string>

namespace hamtrio {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define HAMTRIO_ERROR(Name)                                                  \
    class Name : public Error {                                              \
    public:                                                                  \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
    }

HAMTRIO_ERROR(JetOrderExceeded);
HAMTRIO_ERROR(NotHomogeneous);
HAMTRIO_ERROR(PoleAtPoint);
HAMTRIO_ERROR(NegativeRadicand);
HAMTRIO_ERROR(DimensionMismatch);
HAMTRIO_ERROR(NotGraded);
HAMTRIO_ERROR(SingularJacobian);
HAMTRIO_ERROR(DegenerateMetric);
HAMTRIO_ERROR(DegeneratePencil);
HAMTRIO_ERROR(NotSkewAdjoint);
HAMTRIO_ERROR(NotOnVariety);
HAMTRIO_ERROR(AnsatzTooSmall);
HAMTRIO_ERROR(NoMatch);
HAMTRIO_ERROR(NotACasimir);
HAMTRIO_ERROR(SemisimplicityFailure);
HAMTRIO_ERROR(DivisionByZero);
HAMTRIO_ERROR(UnknownName);
HAMTRIO_ERROR(InputUnreadable);

#undef HAMTRIO_ERROR

/// Syntax error with a 1-based source position.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line, int column)
        : Error("ParseError at " + std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

}  // namespace hamtrio

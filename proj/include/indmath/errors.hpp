#pragma once

#include <stdexcept>
#include <string>

namespace indmath {

// Exit codes used by the CLI; one code per error class so scripted callers
// can tell failures apart.
enum class ErrorCode : int {
    Ok = 0,
    Usage = 2,
    FileNotFound = 10,
    ParseError = 11,
    UnitHeaderMismatch = 12,
    UnsupportedFormat = 13,
    CorruptHeader = 14,
    InvalidGeometry = 15,
    ImageTooSmall = 16,
    InvalidArgument = 17,
    DimensionMismatch = 18,
    IterationLimit = 19,
    NotConverged = 20,
    EmptyScenario = 21,
    IoFailure = 22,
    Internal = 99,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

struct InvalidJoint : Error {
    explicit InvalidJoint(const std::string& what)
        : Error(ErrorCode::InvalidGeometry, what) {}
};

struct DegenerateAngle : Error {
    explicit DegenerateAngle(const std::string& what)
        : Error(ErrorCode::InvalidGeometry, what) {}
};

struct ImageTooSmall : Error {
    explicit ImageTooSmall(const std::string& what)
        : Error(ErrorCode::ImageTooSmall, what) {}
};

struct NonPositiveWind : Error {
    explicit NonPositiveWind(const std::string& what)
        : Error(ErrorCode::InvalidArgument, what) {}
};

struct NonPositiveDownwind : Error {
    explicit NonPositiveDownwind(const std::string& what)
        : Error(ErrorCode::InvalidArgument, what) {}
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& what)
        : Error(ErrorCode::DimensionMismatch, what) {}
};

struct IterationLimit : Error {
    explicit IterationLimit(const std::string& what)
        : Error(ErrorCode::IterationLimit, what) {}
};

struct GridMismatch : Error {
    explicit GridMismatch(const std::string& what)
        : Error(ErrorCode::DimensionMismatch, what) {}
};

struct EmptyScenario : Error {
    explicit EmptyScenario(const std::string& what)
        : Error(ErrorCode::EmptyScenario, what) {}
};

struct FileNotFound : Error {
    explicit FileNotFound(const std::string& what)
        : Error(ErrorCode::FileNotFound, what) {}
};

// Carries the location of the offending cell so diagnostics can name the
// file, line and field.
class ParseError : public Error {
  public:
    ParseError(std::string file, int line, std::string field,
               const std::string& what)
        : Error(ErrorCode::ParseError,
                file + ":" + std::to_string(line) + ": field '" + field +
                    "': " + what),
          file_(std::move(file)), line_(line), field_(std::move(field)) {}
    const std::string& file() const { return file_; }
    int line() const { return line_; }
    const std::string& field() const { return field_; }

  private:
    std::string file_;
    int line_;
    std::string field_;
};

struct UnitHeaderMismatch : Error {
    explicit UnitHeaderMismatch(const std::string& what)
        : Error(ErrorCode::UnitHeaderMismatch, what) {}
};

struct UnsupportedFormat : Error {
    explicit UnsupportedFormat(const std::string& what)
        : Error(ErrorCode::UnsupportedFormat, what) {}
};

struct CorruptHeader : Error {
    explicit CorruptHeader(const std::string& what)
        : Error(ErrorCode::CorruptHeader, what) {}
};

struct IoFailure : Error {
    explicit IoFailure(const std::string& what)
        : Error(ErrorCode::IoFailure, what) {}
};

}  // namespace indmath

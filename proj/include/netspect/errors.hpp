// Exception hierarchy shared by all netspect modules.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace netspect {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// -- input / ingestion -------------------------------------------------------

struct ParseError : Error {
    std::size_t row = 0;  // 1-based, 0 = unknown
    std::size_t col = 0;
    ParseError(const std::string& msg, std::size_t row_ = 0, std::size_t col_ = 0)
        : Error(row_ ? msg + " (row " + std::to_string(row_) +
                           (col_ ? ", col " + std::to_string(col_) : "") + ")"
                     : msg),
          row(row_), col(col_) {}
};

struct CalendarError : Error { using Error::Error; };
struct DegeneratePanel : Error { using Error::Error; };
struct UnknownTone : Error { using Error::Error; };
struct MissingTickerSector : Error { using Error::Error; };
struct AlignmentError : Error { using Error::Error; };

// -- numerics ----------------------------------------------------------------

struct RankDeficientFactors : Error { using Error::Error; };
struct EmptyWindow : Error { using Error::Error; };
struct EmptyHypergraph : Error { using Error::Error; };
struct EmptyGraph : Error { using Error::Error; };
struct CollinearDesign : Error { using Error::Error; };
struct DegenerateSample : Error { using Error::Error; };
struct InvalidCovariance : Error { using Error::Error; };
struct TooLarge : Error { using Error::Error; };
struct Singular : Error { using Error::Error; };
struct MissingResults : Error { using Error::Error; };

struct NonConvergence : Error {
    int iterations = 0;
    double residual = 0.0;
    NonConvergence(const std::string& msg, int iterations_, double residual_)
        : Error(msg + " (iterations=" + std::to_string(iterations_) +
                ", residual=" + std::to_string(residual_) + ")"),
          iterations(iterations_), residual(residual_) {}
};

}  // namespace netspect

#pragma once

#include <stdexcept>
#include <string>

namespace sonoloc {

// Bad argument values (non-positive rates, malformed geometry, ...).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Signal shorter than one analysis window.
class TooShortInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class RateMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class OutOfRangeWindow : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Fusion requires a heatmap that went through normalize_heatmap.
class NotNormalized : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class EmptyCluster : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed or unreadable files.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace sonoloc

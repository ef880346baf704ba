#pragma once

#include <stdexcept>
#include <string>

namespace geosynth {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ShapeMismatch : Error {
    using Error::Error;
};
struct EmptyRaster : Error {
    using Error::Error;
};
struct EmptyReference : Error {
    using Error::Error;
};
struct ZeroVector : Error {
    using Error::Error;
};
struct LengthMismatch : Error {
    using Error::Error;
};
struct LayoutInfeasible : Error {
    using Error::Error;
};
struct EmptyDataset : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};

} // namespace geosynth

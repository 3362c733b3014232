#pragma once

#include <stdexcept>
#include <string>

namespace semcomm {

// Base of every domain error raised by the library. The CLI maps these to
// exit code 1; anything else escaping a command is a bug.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched dimensions, rectangles out of bounds, undersized images.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Keypoint too close to the image border for its sampling patch.
class BoundsError : public Error {
 public:
  using Error::Error;
};

// Malformed, truncated, corrupted, or unsupported-version file/wire data.
class FormatError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

// Fewer than three points, or all points collinear.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

// A segmenter was selected without the input it needs.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Segmentation found no foreground pixel.
class NoForegroundError : public Error {
 public:
  using Error::Error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class SizeError : public Error {
 public:
  using Error::Error;
};

}  // namespace semcomm

#pragma once

#include <stdexcept>
#include <string>

namespace fragmenta {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The source image cannot cover the requested puzzle grid.
class ImageTooSmall : public Error {
 public:
  using Error::Error;
};

/// File system or codec failure; the message carries the offending path.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed manifest, config, assembly or CSV content.
class DataError : public Error {
 public:
  using Error::Error;
};

/// No decodable image was found in the corpus directory.
class EmptyCorpus : public Error {
 public:
  using Error::Error;
};

}  // namespace fragmenta

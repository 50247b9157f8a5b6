#pragma once

#include <stdexcept>
#include <string>

namespace fdgmaa {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The KKT system of an equality-constrained least-squares problem could not
/// be solved to the required constraint accuracy.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

/// The graph behind a Laplacian is (numerically) disconnected.
class NotConnected : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Nonpositive or inconsistent problem sizes.
class InvalidDims : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Schedule parameters that cannot produce a valid schedule.
class InvalidParams : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// An iterative solver hit its iteration cap before reaching tolerance.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// A runtime descent certificate failed beyond its numerical slack.
class CertificateViolation : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace fdgmaa

#pragma once

#include <stdexcept>
#include <string>

namespace forkscope {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text (edge lists, CSV, configuration, tool output).
class ParseError : public Error {
  public:
    using Error::Error;
};

/// Input that parses but violates a structural rule of the history graph.
class GraphError : public Error {
  public:
    using Error::Error;
};

/// File system or subprocess failure.
class IoError : public Error {
  public:
    using Error::Error;
};

/// Caller-supplied argument outside an operation's contract.
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

}  // namespace forkscope

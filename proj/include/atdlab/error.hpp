#pragma once

#include <stdexcept>
#include <string>

namespace atdlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rule pack failed to parse or validate; the message names the offending entry.
class PackError : public Error {
 public:
  using Error::Error;
};

/// Caller supplied input that violates an operation's precondition.
class InputError : public Error {
 public:
  using Error::Error;
};

/// No clause of the body carries a request-core verb.
class NoHeadActError : public Error {
 public:
  using Error::Error;
};

/// A template needs a slot the caller did not provide.
class SlotError : public Error {
 public:
  using Error::Error;
};

/// Text does not agree with the edits recorded for it.
class RecordMismatchError : public Error {
 public:
  using Error::Error;
};

/// Quoted text matches neither the original nor the transformed form.
class LedgerError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace atdlab

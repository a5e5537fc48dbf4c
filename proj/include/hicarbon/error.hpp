#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace hicarbon {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A value violates a documented range or structural invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A technology node name did not resolve against the database.
class UnknownNodeError : public ValidationError {
 public:
  explicit UnknownNodeError(const std::string& node)
      : ValidationError("unknown technology node '" + node + "'"), node_(node) {}
  const std::string& node() const noexcept { return node_; }

 private:
  std::string node_;
};

/// The configuration cannot be physically realized (e.g. a required
/// bridge link between dies that do not share an edge).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Re-throws any hicarbon error raised by `fn` with `stage` prefixed to
/// the message, preserving the error category.
template <typename Fn>
decltype(auto) with_stage(const char* stage, Fn&& fn) {
  auto prefix = [stage](const std::exception& e) {
    return std::string(stage) + ": " + e.what();
  };
  try {
    return std::forward<Fn>(fn)();
  } catch (const InfeasibleError& e) {
    throw InfeasibleError(prefix(e));
  } catch (const UnknownNodeError& e) {
    throw ValidationError(prefix(e));
  } catch (const ValidationError& e) {
    throw ValidationError(prefix(e));
  } catch (const ParseError& e) {
    throw ParseError(prefix(e));
  } catch (const Error& e) {
    throw Error(prefix(e));
  }
}

}  // namespace hicarbon

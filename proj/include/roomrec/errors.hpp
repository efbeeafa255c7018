#pragma once

#include <stdexcept>
#include <string>

namespace roomrec {

// Malformed input file (bad JSON, wrong schema, unreadable image).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Structurally valid input violating an invariant (dangling id, negative
// area, empty label set). The message names the offending record.
class IntegrityError : public std::runtime_error {
 public:
  explicit IntegrityError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad arguments or configuration; the CLI maps this to exit code 2.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace roomrec

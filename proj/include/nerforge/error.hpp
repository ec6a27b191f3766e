#ifndef NERFORGE_ERROR_HPP
#define NERFORGE_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nerforge {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input at a known line (1-based).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message,
             const std::string& file = {})
      : Error((file.empty() ? std::string() : file + ":") + "line " +
              std::to_string(line) + ": " + message),
        line_(line),
        message_(message) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t line_;
  std::string message_;
};

}  // namespace nerforge

#endif  // NERFORGE_ERROR_HPP

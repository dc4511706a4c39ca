#pragma once

#include <stdexcept>
#include <string>

namespace wsum {

// A theorem hypothesis (premise or density condition) that the inputs do not
// satisfy. The message names the hypothesis.
class PreconditionError : public std::invalid_argument {
 public:
  PreconditionError(std::string hypothesis, const std::string& detail)
      : std::invalid_argument(hypothesis + ": " + detail),
        hypothesis_(std::move(hypothesis)) {}

  const std::string& hypothesis() const noexcept { return hypothesis_; }

 private:
  std::string hypothesis_;
};

// Malformed distribution/mode/weight/grid string. position is a 0-based
// character offset into the offending input.
class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& input, std::size_t position, const std::string& what)
      : std::invalid_argument("cannot parse '" + input + "' at position " +
                              std::to_string(position) + ": " + what),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace wsum

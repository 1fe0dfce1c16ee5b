// Extensible KMT term parser. The KAT skeleton (+, ;, *, ~, parentheses,
// true/false) is fixed; atoms are handed to the active theory's parse hooks,
// call-style by head identifier and otherwise as raw token runs.
//
// SPDX-License-Identifier: MIT
#pragma once

#include <stdexcept>
#include <string>

#include "kmt/theory.hpp"

namespace kmt {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)),
        pos_(pos) {}
  size_t pos() const { return pos_; }

 private:
  size_t pos_;
};

TermId parse_term(const std::string& src, Theory& th);

}  // namespace kmt

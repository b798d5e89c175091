#pragma once

#include <stdexcept>
#include <string>

namespace pmq {

/// A key or letter lies outside the (k, m) key space.
class RangeError : public std::out_of_range {
 public:
  explicit RangeError(const std::string& what) : std::out_of_range(what) {}
};

/// A requested structure or enumeration exceeds its configured resource limit.
class SizeError : public std::length_error {
 public:
  explicit SizeError(const std::string& what) : std::length_error(what) {}
};

/// Pattern and trie disagree on length or alphabet.
class ShapeError : public std::invalid_argument {
 public:
  explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace pmq

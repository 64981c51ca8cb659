#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sparsebp {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed model, potential or parameter set.
class InvalidModel : public Error {
 public:
  using Error::Error;
};

/// A sum-product message (or belief) with no strictly positive entry.
class DegenerateMessage : public Error {
 public:
  DegenerateMessage(const std::string& what, std::size_t from = 0, std::size_t to = 0)
      : Error(what), from_(from), to_(to) {}
  std::size_t from() const { return from_; }
  std::size_t to() const { return to_; }

 private:
  std::size_t from_;
  std::size_t to_;
};

/// The fast max-sum update was asked to run on a potential with an entry below fbar.
class UnsafePotential : public Error {
 public:
  using Error::Error;
};

/// Exact enumeration refused: the joint state space exceeds the guard.
class StateSpaceTooLarge : public Error {
 public:
  using Error::Error;
};

}  // namespace sparsebp

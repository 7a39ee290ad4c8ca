#pragma once

#include <stdexcept>
#include <string>

namespace pql {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed net, unknown node, illegal firing.
class ModelError : public Error {
 public:
  using Error::Error;
};

// Exploration hit the configured state (or event) budget.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded() : Error("state budget exceeded") {}
};

class PnmlError : public Error {
 public:
  using Error::Error;
};

class EvaluationError : public Error {
 public:
  using Error::Error;
};

// Anything wrong with the on-disk store.
class StoreError : public Error {
 public:
  using Error::Error;
};

}  // namespace pql

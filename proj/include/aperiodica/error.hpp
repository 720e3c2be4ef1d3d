#pragma once

#include <stdexcept>
#include <string>

namespace aperiodica {

/// Requested combination is valid input but not handled by this toolkit
/// (e.g. a dual lattice for a p-adic internal space).
class unsupported_error : public std::runtime_error {
 public:
  explicit unsupported_error(const std::string& what) : std::runtime_error(what) {}
};

/// A lattice or dual-lattice search exceeded its node budget.
class budget_exceeded : public std::runtime_error {
 public:
  explicit budget_exceeded(const std::string& what) : std::runtime_error(what) {}
};

class convergence_error : public std::runtime_error {
 public:
  explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace aperiodica

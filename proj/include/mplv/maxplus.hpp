#pragma once

// Max-plus semiring (R ∪ {ε}, max, +) over tick-scaled integers.
//
//   a ⊕ b = max(a, b)        ε ⊕ a = a
//   a ⊗ b = a + b            ε ⊗ a = ε

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mplv/fixed.hpp"

namespace mplv {

class MaxPlus {
 public:
  constexpr MaxPlus() = default;  // ε

  static constexpr MaxPlus epsilon() { return MaxPlus(); }
  static constexpr MaxPlus finite(Ticks v) {
    MaxPlus m;
    m.finite_ = true;
    m.value_ = v;
    return m;
  }

  constexpr bool is_finite() const { return finite_; }
  constexpr bool is_epsilon() const { return !finite_; }
  // Precondition: is_finite().
  Ticks value() const;

  friend constexpr bool operator==(const MaxPlus&, const MaxPlus&) = default;

 private:
  bool finite_ = false;
  Ticks value_ = 0;
};

MaxPlus oplus(MaxPlus a, MaxPlus b);
MaxPlus otimes(MaxPlus a, MaxPlus b);

// Square n×n matrix over the max-plus semiring, row-major.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n) : n_(n), entries_(n * n) {}

  // Convenience constructor: rows in (possibly fractional) units, nullopt = ε.
  static Matrix from_units(const std::vector<std::vector<std::optional<double>>>& rows, Scale scale = {});
  static Matrix identity(std::size_t n);

  std::size_t dim() const { return n_; }
  MaxPlus& operator()(std::size_t i, std::size_t j) { return entries_[i * n_ + j]; }
  const MaxPlus& operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }

  // Column indices of the finite entries of row i, ascending.
  std::vector<std::size_t> finite_columns(std::size_t i) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<MaxPlus> entries_;
};

Matrix multiply(const Matrix& a, const Matrix& b);
Matrix power(const Matrix& a, std::size_t r);  // r >= 1
// Adds the scalar to every finite entry.
Matrix shift(const Matrix& a, Ticks delta);

// x(k+1) = A ⊗ x(k). Requires a regular matrix and a point of matching size.
Point mat_vec(const Matrix& a, std::span<const Ticks> x);

bool is_regular(const Matrix& a);
// Strongly connected precedence graph with at least one circuit.
bool is_irreducible(const Matrix& a);

// Maximum cycle mean of the precedence graph (Karp), exact. Requires an
// irreducible matrix.
Rational eigenvalue(const Matrix& a);

struct SpectralProfile {
  Rational lambda;
  std::size_t transient = 0;
  std::size_t cyclicity = 0;
};

struct TransientLimits {
  std::size_t max_transient = 5000;
  std::size_t max_cyclicity = 64;
};

// Smallest (k0, c) with A^(k+c) = λc ⊗ A^k for all k >= k0. Requires an
// irreducible matrix; throws when the search limits are exhausted.
SpectralProfile transient_cyclicity(const Matrix& a, TransientLimits limits = {});

// True iff A^(k+c) equals A^k with λc added to each finite entry.
bool transient_identity_holds(const Matrix& a_k, const Matrix& a_k_plus_c, const Rational& lambda, std::size_t c);

}  // namespace mplv

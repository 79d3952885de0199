#pragma once

#include <span>
#include <string>
#include <vector>

#include "tropivol/zbar.hpp"

namespace tropivol {

/// Dense integer matrix with arbitrary-precision entries, row-major.
class IntMatrix {
 public:
  IntMatrix() : rows_(0), cols_(0) {}
  IntMatrix(int rows, int cols);
  IntMatrix(int rows, int cols, std::vector<Int> entries);
  static IntMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Int& at(int i, int j) { return e_[static_cast<size_t>(i) * cols_ + j]; }
  const Int& at(int i, int j) const { return e_[static_cast<size_t>(i) * cols_ + j]; }

  IntMatrix transposed() const;
  bool is_square() const { return rows_ == cols_; }
  bool is_identity() const;
  bool is_zero() const;

  /// Exact determinant (Bareiss); square matrices only.
  Int determinant() const;

  /// Exact inverse of a matrix with determinant ±1.
  IntMatrix inverse_unimodular() const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix& a, const IntMatrix& b);

  std::vector<Int> apply(std::span<const Int> x) const;  // matrix * column vector

  std::string str() const;

 private:
  int rows_, cols_;
  std::vector<Int> e_;
};

/// u * m * v = diag(d) with u, v unimodular, d[i] >= 0 and d[i] | d[i+1].
struct SmithResult {
  std::vector<Int> diag;  // length min(rows, cols)
  IntMatrix u;            // rows x rows
  IntMatrix v;            // cols x cols
};

/// Smith normal form. Pivot selection is deterministic: smallest nonzero
/// absolute value, ties broken by row-major position.
SmithResult smith_normal_form(const IntMatrix& m);

struct CokernelInvariants {
  std::vector<Int> torsion;  // invariant factors > 1, in divisor-chain order
  int free_rank = 0;
};

/// Invariants of coker(m : Z^cols -> Z^rows).
CokernelInvariants cokernel_invariants(const IntMatrix& m);

/// Columns form a Z-basis of {x : m x = 0}; the basis lattice is saturated.
/// Returns a cols x 0 matrix when the kernel is trivial.
IntMatrix kernel_basis(const IntMatrix& m);

/// A finite group acting on Z^rank by explicitly enumerated matrices.
/// The element list must contain the identity, be closed under product,
/// and consist of matrices of determinant ±1; this is validated, not
/// completed. Generators must appear in the element list.
class GroupAction {
 public:
  GroupAction(int rank, std::vector<IntMatrix> generators, std::vector<IntMatrix> elements);

  /// Convenience: enumerate the closure of the generators (bounded breadth-
  /// first product walk, identity first) and validate as above.
  static GroupAction from_generators(int rank, std::vector<IntMatrix> generators,
                                     int max_order = 512);

  int rank() const { return rank_; }
  const std::vector<IntMatrix>& generators() const { return generators_; }
  const std::vector<IntMatrix>& elements() const { return elements_; }
  int identity_index() const { return identity_index_; }

  /// Index of the element equal to elements[i] * elements[j].
  int product_index(int i, int j) const;

  /// Whether the listed elements are closed under product, compared by
  /// matrix value (robust for non-faithful actions with repeated matrices).
  bool subset_closed(std::span<const int> subgroup) const;

 private:
  int rank_;
  std::vector<IntMatrix> generators_;
  std::vector<IntMatrix> elements_;
  int identity_index_;
};

/// dim over Q of the common fixed space of the listed elements.
/// The index list must be closed under product (a subgroup); violations are
/// rejected with a closure error.
int fixed_space_rank(const GroupAction& action, std::span<const int> subgroup);

}  // namespace tropivol

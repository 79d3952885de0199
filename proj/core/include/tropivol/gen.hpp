#pragma once

#include <random>
#include <string>

#include "tropivol/conductor.hpp"
#include "tropivol/motivic.hpp"
#include "tropivol/vfcells.hpp"

namespace tropivol::gen {

using Rng = std::mt19937_64;

ZBar random_zbar(Rng& rng, long lo, long hi, int inf_percent);

/// Random valued-field cell with n coordinates and r extra integer
/// parameters; order sets are bounded boxes with optional extra inequalities
/// and congruences (coefficients <= max_coeff), centers lie in R, ac depths
/// <= max_depth. Suitable for the truncation oracle.
VFCell random_cell(Rng& rng, int n, int r, int max_depth, int max_coeff);

DefinableSet random_defset(Rng& rng, int n, int r, int max_cells, int max_depth, int max_coeff);

/// Random affine form over the given arity; offsets are small integers, or
/// ±inf with probability inf_percent.
AffineForm random_form(Rng& rng, int arity, int inf_percent);

/// A dimensional function whose pieces are the cells of a.
DimFunction random_dimfn_on(Rng& rng, const DefinableSet& a, int inf_percent);

/// Coordinatewise affine map with nonzero scales (monomials or binomials)
/// and small offsets.
AffineMap random_affine_map(Rng& rng, int n);

/// Random Γ-equivariant exact sequence of Galois lattices with a tame
/// filtration, Γ one of Z/2, Z/3, S3; the middle is a conjugated direct sum.
ExactSequence random_exact_sequence(Rng& rng);

/// Random Poincaré polynomial of degree 2g with positive leading coefficient.
PoincareElement random_fiber_poly(Rng& rng, int g);

/// Renders a corpus of documents for the given kind
/// (cells | integrals | products | maps | sequences).
std::string corpus(const std::string& kind, int count, unsigned long seed);

}  // namespace tropivol::gen

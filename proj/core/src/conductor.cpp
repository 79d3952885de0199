#include "tropivol/conductor.hpp"

#include <algorithm>
#include <stdexcept>

namespace tropivol {

namespace {

bool same_index_set(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> x = a, y = b;
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return x == y;
}

bool subset_of(const std::vector<int>& a, const std::vector<int>& b) {
  for (int i : a)
    if (std::find(b.begin(), b.end(), i) == b.end()) return false;
  return true;
}

// dim over Q of the common fixed space of a list of n x n matrices.
int fixed_rank_of(const std::vector<IntMatrix>& mats, int n) {
  std::vector<IntMatrix> blocks;
  for (const auto& m : mats) {
    IntMatrix d = m - IntMatrix::identity(n);
    if (!d.is_zero()) blocks.push_back(std::move(d));
  }
  if (blocks.empty()) return n;
  IntMatrix stacked(static_cast<int>(blocks.size()) * n, n);
  for (size_t b = 0; b < blocks.size(); ++b)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) stacked.at(static_cast<int>(b) * n + i, j) = blocks[b].at(i, j);
  return kernel_basis(stacked).cols();
}

// Saturation of the column lattice of m inside Z^rows, via the double
// integer-orthogonal complement.
IntMatrix saturate_columns(const IntMatrix& m) {
  IntMatrix ortho = kernel_basis(m.transposed());
  return kernel_basis(ortho.transposed());
}

void enforce_denominator(const Rat& c, long e, const char* who) {
  Rat scaled = c * Rat(e);
  scaled.canonicalize();
  if (scaled.get_den() != 1)
    throw std::invalid_argument(std::string(who) +
                                ": denominator does not divide the ramification index");
}

}  // namespace

RamifiedGaloisModule::RamifiedGaloisModule(GroupAction action,
                                           std::vector<std::vector<int>> filtration)
    : action_(std::move(action)), filtration_(std::move(filtration)) {
  if (filtration_.empty())
    throw std::invalid_argument("RamifiedGaloisModule: empty filtration");
  std::vector<int> full;
  for (size_t i = 0; i < action_.elements().size(); ++i) full.push_back(static_cast<int>(i));
  if (!same_index_set(filtration_.front(), full))
    throw std::invalid_argument("RamifiedGaloisModule: G0 must be the full group");
  const auto& last = filtration_.back();
  if (last.size() != 1 || last.front() < 0 ||
      last.front() >= static_cast<int>(action_.elements().size()) ||
      !action_.elements()[static_cast<size_t>(last.front())].is_identity())
    throw std::invalid_argument("RamifiedGaloisModule: the chain must end at the trivial group");
  for (size_t i = 0; i < filtration_.size(); ++i) {
    const auto& level = filtration_[i];
    if (level.empty())
      throw std::invalid_argument("RamifiedGaloisModule: empty filtration level");
    if (!action_.subset_closed(level))
      throw std::invalid_argument(
          "RamifiedGaloisModule: filtration level not closed under product");
    if (i > 0 && !subset_of(level, filtration_[i - 1]))
      throw std::invalid_argument("RamifiedGaloisModule: filtration does not descend");
  }
}

RamifiedGaloisModule RamifiedGaloisModule::tame(GroupAction action) {
  std::vector<int> full;
  for (size_t i = 0; i < action.elements().size(); ++i) full.push_back(static_cast<int>(i));
  std::vector<int> trivial{action.identity_index()};
  return RamifiedGaloisModule(std::move(action), {full, trivial});
}

Rat artin_conductor(const RamifiedGaloisModule& v) {
  const int n = v.rank();
  const Int g0(static_cast<long>(v.filtration().front().size()));
  Rat total(0);
  for (const auto& level : v.filtration()) {
    int fixed = fixed_space_rank(v.action(), level);
    Rat term(Int(static_cast<long>(level.size())) * Int(n - fixed), g0);
    term.canonicalize();
    total += term;
  }
  total.canonicalize();
  return total;
}

ConductorValue torus_conductor(const RamifiedGaloisModule& cochar) {
  Rat c = artin_conductor(cochar) / 2;
  c.canonicalize();
  if (c < 0) throw std::logic_error("torus_conductor: negative conductor");
  enforce_denominator(c, cochar.ramification_index(), "torus_conductor");
  return ConductorValue{std::move(c)};
}

TraceDecomposition trace_decomposition(const RamifiedGaloisModule& x) {
  const int n = x.rank();
  IntMatrix tr(n, n);
  for (const auto& g : x.action().elements()) tr = tr + g;

  TraceDecomposition out;
  out.b_part_basis = kernel_basis(tr);
  CokernelInvariants split = cokernel_invariants(out.b_part_basis);
  out.split_rank = split.free_rank;
  out.split_torsion = split.torsion;

  // Characters of the maximal split subtorus: X / ker(tr), realized by the
  // saturation of im(tr) inside X.
  out.split_generators = saturate_columns(tr);

  // X / (ker(tr) + X^Γ): the kernel of the comparison isogeny.
  IntMatrix fixed;
  {
    std::vector<IntMatrix> blocks;
    for (const auto& m : x.action().elements()) {
      IntMatrix d = m - IntMatrix::identity(n);
      if (!d.is_zero()) blocks.push_back(std::move(d));
    }
    if (blocks.empty()) {
      fixed = IntMatrix::identity(n);
    } else {
      IntMatrix stacked(static_cast<int>(blocks.size()) * n, n);
      for (size_t b = 0; b < blocks.size(); ++b)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            stacked.at(static_cast<int>(b) * n + i, j) = blocks[b].at(i, j);
      fixed = kernel_basis(stacked);
    }
  }
  IntMatrix joint(n, out.b_part_basis.cols() + fixed.cols());
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < out.b_part_basis.cols(); ++c) joint.at(i, c) = out.b_part_basis.at(i, c);
    for (int c = 0; c < fixed.cols(); ++c)
      joint.at(i, out.b_part_basis.cols() + c) = fixed.at(i, c);
  }
  out.isogeny_cokernel = cokernel_invariants(joint).torsion;
  return out;
}

ConductorValue chai_combine(const ConductorValue& c_t, const ConductorValue& c_a, long gamma) {
  Rat total = c_t.value + c_a.value + Rat(gamma);
  total.canonicalize();
  if (total < 0)
    throw std::invalid_argument("chai_combine: negative total conductor (inconsistent data)");
  return ConductorValue{std::move(total)};
}

AdditivityResult additivity_check(const ExactSequence& seq) {
  const int n1 = seq.sub.rank();
  const int n2 = seq.mid.rank();
  if (seq.injection.rows() != n2 || seq.injection.cols() != n1)
    throw std::invalid_argument("additivity_check: injection shape mismatch");
  if (seq.sub.action().elements().size() != seq.mid.action().elements().size())
    throw std::invalid_argument("additivity_check: group orders differ");
  if (seq.sub.filtration().size() != seq.mid.filtration().size())
    throw std::invalid_argument("additivity_check: filtration lengths differ");
  for (size_t i = 0; i < seq.sub.filtration().size(); ++i)
    if (!same_index_set(seq.sub.filtration()[i], seq.mid.filtration()[i]))
      throw std::invalid_argument("additivity_check: filtrations differ");

  // Γ-equivariance of the injection, element by element.
  for (size_t g = 0; g < seq.mid.action().elements().size(); ++g) {
    IntMatrix lhs = seq.mid.action().elements()[g] * seq.injection;
    IntMatrix rhs = seq.injection * seq.sub.action().elements()[g];
    if (!(lhs == rhs))
      throw std::invalid_argument("additivity_check: injection is not Γ-equivariant");
  }

  // Exactness: the quotient must be free, i.e. the image is saturated.
  SmithResult s = smith_normal_form(seq.injection);
  int rank = 0;
  for (const auto& d : s.diag)
    if (d != 0) {
      ++rank;
      if (d != 1)
        throw std::invalid_argument(
            "additivity_check: injection image is not saturated (quotient has torsion)");
    }
  if (rank != n1) throw std::invalid_argument("additivity_check: matrix is not injective");

  AdditivityResult out;
  out.c_sub = torus_conductor(seq.sub).value;
  out.c_mid = torus_conductor(seq.mid).value;

  // Quotient identification: coordinates n1..n2 of u·x, with the action
  // induced blockwise from u·g·u^{-1}. The induced action need not be
  // faithful, so the conductor is evaluated directly on the blocks.
  const int n3 = n2 - n1;
  if (n3 == 0) {
    out.c_quot = Rat(0);
  } else {
    IntMatrix uinv = s.u.inverse_unimodular();
    std::vector<IntMatrix> blocks;
    for (const auto& g : seq.mid.action().elements()) {
      IntMatrix m = s.u * g * uinv;
      for (int i = n1; i < n2; ++i)
        for (int j = 0; j < n1; ++j)
          if (m.at(i, j) != 0)
            throw std::logic_error("additivity_check: image is not action-stable");
      IntMatrix block(n3, n3);
      for (int i = 0; i < n3; ++i)
        for (int j = 0; j < n3; ++j) block.at(i, j) = m.at(n1 + i, n1 + j);
      blocks.push_back(std::move(block));
    }
    const Int g0(static_cast<long>(seq.mid.filtration().front().size()));
    Rat artin(0);
    for (const auto& level : seq.mid.filtration()) {
      std::vector<IntMatrix> mats;
      for (int idx : level) mats.push_back(blocks[static_cast<size_t>(idx)]);
      int fixed = fixed_rank_of(mats, n3);
      Rat term(Int(static_cast<long>(level.size())) * Int(n3 - fixed), g0);
      term.canonicalize();
      artin += term;
    }
    out.c_quot = artin / 2;
    out.c_quot.canonicalize();
    enforce_denominator(out.c_quot, seq.mid.ramification_index(), "additivity_check");
  }

  Rat sum = out.c_sub + out.c_quot;
  sum.canonicalize();
  out.equal = (out.c_mid == sum);
  return out;
}

}  // namespace tropivol

#pragma once

#include <string>

#include "nilcsp/hull.hpp"

namespace nilcsp {

// Marshall Hall basic commutators of the free nilpotent Lie ring of rank n
// and class c. Element i is either a letter (weight 1) or the bracket
// [left, right] of two earlier elements with left > right.
struct HallElement {
  std::size_t weight;
  int left = -1;
  int right = -1;
  std::size_t letter = 0;
};

class FreeNilpotent {
 public:
  FreeNilpotent(std::size_t n, unsigned c);

  std::size_t rank() const { return n_; }
  unsigned nilpotency_class() const { return c_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<HallElement>& hall_basis() const { return basis_; }
  const AlgebraPtr& algebra() const { return algebra_; }
  std::string label(std::size_t i) const;

  // the group generated by exp(x_1), ..., exp(x_n)
  GenGroup psi() const;
  // logs of the group basic commutators: a filtered generating set of psi
  GenGroup psi_malcev() const;
  // indices of the top-weight elements, which span the center
  std::vector<std::size_t> top_layer() const;

 private:
  std::size_t n_;
  unsigned c_;
  std::vector<HallElement> basis_;
  AlgebraPtr algebra_;
};

// A word in the generators x_1..x_n: (generator index, exponent) pairs.
using Word = std::vector<std::pair<std::size_t, long>>;

struct CenterData {
  std::vector<QVector> algebra_center;  // basis of z(L)
  Lattice hull_center;                  // z(L) intersected with the hull lattice
  Lattice group_center;                 // log Z(Psi)
};
// Throws Error if z(L) differs from the top layer.
CenterData center(const FreeNilpotent& f, const LatticeGroup& hull);

// The Lie endomorphism of L determined by the images of x_1..x_n (rows of
// the result are the images of the Hall basis elements).
QMatrix extend_generator_images(const FreeNilpotent& f, const std::vector<QVector>& images);

// A(Psi): automorphisms x_i -> x_i u_i with u_i in Z(Psi), c >= 2.
// Backward: tuple of central logs to the Lie automorphism. Throws InvalidInput
// on a non-central u_i or one outside Z(Psi).
QMatrix a_backward(const FreeNilpotent& f, const std::vector<QVector>& u);
// Forward: Lie automorphism to the tuple. Throws InvalidInput if A is not
// in A(Psi).
std::vector<QVector> a_forward(const FreeNilpotent& f, const QMatrix& A);

GroupElement evaluate_word(const FreeNilpotent& f, const Word& w);
// exponent sums: row i is the image of x_i in Z^n
ZMatrix abelianized_matrix(std::size_t n, const std::vector<Word>& words);

struct LiftedAutomorphism {
  QMatrix lie;                     // Lie automorphism of the class c+1 algebra
  std::vector<QVector> images;     // logs of the images of x_i at class c+1
  bool restricts = false;          // truncation to class c recovers the input
};
// Reuses the generator-image words of an automorphism of Psi_{n,c} at class
// c+1. Throws InvalidInput if the words do not define an automorphism.
LiftedAutomorphism aut_restriction(const FreeNilpotent& lower, const FreeNilpotent& upper,
                                   const std::vector<Word>& words);

// Witt's formula (1/w) sum_{d | w} mu(d) n^{w/d}.
std::size_t witt_dimension(std::size_t n, std::size_t w);

}  // namespace nilcsp

#pragma once

#include <string>
#include <vector>

#include "nilcsp/rational.hpp"

namespace nilcsp {

// log(exp X exp Y) truncated at total degree `order`, in Dynkin form:
// a sum of coeff * [a1, [a2, ..., [a_{n-1}, a_n]]] over words in {x, y}.
// The word coefficients are obtained from the truncated free associative
// algebra and then passed through the Dynkin-Specht-Wever projection.
class BchSeries {
 public:
  struct Term {
    std::string word;  // letters '0' (x) and '1' (y)
    Rational coeff;
  };

  explicit BchSeries(unsigned order);

  unsigned order() const { return order_; }
  const std::vector<Term>& terms() const { return terms_; }

  // Evaluates the series on x, y of any vector-like type V given a bracket
  // functor and a zero test. Right-normed brackets are shared through a
  // suffix trie, and branches whose bracket vanishes are cut.
  template <class V, class Bracket, class IsZero, class Axpy>
  V evaluate(const V& x, const V& y, Bracket bracket, IsZero is_zero, Axpy axpy) const {
    V acc = x;
    axpy(acc, Rational(1), y);
    for (int root = 0; root < 2; ++root) walk(nodes_[0].child[root], root == 0 ? x : y, x, y,
                                              acc, bracket, is_zero, axpy);
    return acc;
  }

 private:
  struct Node {
    int child[2] = {-1, -1};
    Rational coeff = 0;  // coefficient of the word spelled root..here, reversed
  };

  template <class V, class Bracket, class IsZero, class Axpy>
  void walk(int node, const V& theta, const V& x, const V& y, V& acc, Bracket& bracket,
            IsZero& is_zero, Axpy& axpy) const {
    if (node < 0) return;
    const Node& n = nodes_[node];
    if (n.coeff != 0 && depth_[node] >= 2) axpy(acc, n.coeff, theta);
    for (int a = 0; a < 2; ++a) {
      if (n.child[a] < 0) continue;
      V next = bracket(a == 0 ? x : y, theta);
      if (is_zero(next)) continue;
      walk(n.child[a], next, x, y, acc, bracket, is_zero, axpy);
    }
  }

  unsigned order_;
  std::vector<Term> terms_;
  std::vector<Node> nodes_;
  std::vector<unsigned> depth_;
};

}  // namespace nilcsp

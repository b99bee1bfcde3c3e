#include "nilcsp/bch.hpp"

#include <map>

namespace nilcsp {

namespace {

using Series = std::map<std::string, Rational>;  // truncated free associative algebra

Series multiply(const Series& a, const Series& b, unsigned order) {
  Series r;
  for (const auto& [wa, ca] : a)
    for (const auto& [wb, cb] : b) {
      if (wa.size() + wb.size() > order) continue;
      Rational& slot = r[wa + wb];
      slot += ca * cb;
    }
  for (auto it = r.begin(); it != r.end();)
    it = it->second == 0 ? r.erase(it) : std::next(it);
  return r;
}

}  // namespace

BchSeries::BchSeries(unsigned order) : order_(order) {
  // W = exp(x) exp(y) - 1
  Series w;
  for (unsigned a = 0; a <= order; ++a)
    for (unsigned b = 0; a + b <= order; ++b) {
      if (a + b == 0) continue;
      Rational c(1);
      c /= Rational(factorial(a) * factorial(b));
      w[std::string(a, '0') + std::string(b, '1')] += c;
    }
  // log(1 + W)
  Series logw, power = w;
  for (unsigned n = 1; n <= order; ++n) {
    Rational c(n % 2 == 1 ? 1 : -1, n);
    for (const auto& [word, coeff] : power) logw[word] += c * coeff;
    power = multiply(power, w, order);
  }
  for (const auto& [word, coeff] : logw) {
    if (coeff == 0 || word.size() < 2) continue;
    Rational c = coeff / Rational(word.size());
    terms_.push_back({word, c});
  }
  // trie over reversed words: the path root -> node spells a_n, a_{n-1}, ...
  nodes_.push_back(Node{});
  depth_.push_back(0);
  for (const auto& t : terms_) {
    int cur = 0;
    for (auto it = t.word.rbegin(); it != t.word.rend(); ++it) {
      int a = *it - '0';
      if (nodes_[cur].child[a] < 0) {
        nodes_[cur].child[a] = static_cast<int>(nodes_.size());
        unsigned d = depth_[cur] + 1;
        nodes_.push_back(Node{});
        depth_.push_back(d);
      }
      cur = nodes_[cur].child[a];
    }
    nodes_[cur].coeff += t.coeff;
  }
}

}  // namespace nilcsp

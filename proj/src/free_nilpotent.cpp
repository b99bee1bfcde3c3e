#include "nilcsp/free_nilpotent.hpp"

#include <algorithm>
#include <map>

#include "nilcsp/automorphism.hpp"
#include "nilcsp/normal_forms.hpp"

namespace nilcsp {

namespace {

// truncated free associative algebra on letters 0..n-1, words as strings
using Assoc = std::map<std::string, Integer>;

Assoc commutator(const Assoc& a, const Assoc& b, std::size_t max_len) {
  Assoc r;
  for (const auto& [wa, ca] : a)
    for (const auto& [wb, cb] : b) {
      if (wa.size() + wb.size() > max_len) continue;
      r[wa + wb] += ca * cb;
      r[wb + wa] -= ca * cb;
    }
  for (auto it = r.begin(); it != r.end();) it = it->second == 0 ? r.erase(it) : std::next(it);
  return r;
}

int mobius(std::size_t n) {
  int mu = 1;
  for (std::size_t p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      mu = -mu;
    }
  if (n > 1) mu = -mu;
  return mu;
}

}  // namespace

std::size_t witt_dimension(std::size_t n, std::size_t w) {
  if (w == 0) return 0;
  long long total = 0;
  for (std::size_t d = 1; d <= w; ++d) {
    if (w % d) continue;
    long long p = 1;
    for (std::size_t i = 0; i < w / d; ++i) p *= static_cast<long long>(n);
    total += mobius(d) * p;
  }
  return static_cast<std::size_t>(total / static_cast<long long>(w));
}

FreeNilpotent::FreeNilpotent(std::size_t n, unsigned c) : n_(n), c_(c) {
  if (n == 0 || c == 0) throw InvalidInput("free nilpotent group needs n >= 1 and c >= 1");
  if (n > 9) throw InvalidInput("rank above 9 is not supported");
  for (std::size_t i = 0; i < n; ++i) basis_.push_back({1, -1, -1, i});
  for (std::size_t w = 2; w <= c; ++w) {
    const std::size_t existing = basis_.size();
    for (std::size_t u = 0; u < existing; ++u)
      for (std::size_t v = 0; v < u; ++v) {
        if (basis_[u].weight + basis_[v].weight != w) continue;
        if (basis_[u].weight > 1 && static_cast<std::size_t>(basis_[u].right) > v) continue;
        basis_.push_back({w, static_cast<int>(u), static_cast<int>(v), 0});
      }
  }
  const std::size_t k = basis_.size();
  std::vector<Assoc> poly(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (basis_[i].weight == 1)
      poly[i][std::string(1, static_cast<char>('a' + basis_[i].letter))] = 1;
    else
      poly[i] = commutator(poly[basis_[i].left], poly[basis_[i].right], c);
  }
  // words of each weight index the coordinates used to solve for brackets
  std::vector<std::map<std::string, std::size_t>> words(c + 1);
  std::vector<std::vector<std::size_t>> by_weight(c + 1);
  for (std::size_t i = 0; i < k; ++i) {
    by_weight[basis_[i].weight].push_back(i);
    for (const auto& [w, coeff] : poly[i]) words[basis_[i].weight].emplace(w, 0);
  }
  std::vector<QMatrix> sys(c + 1);
  for (std::size_t w = 1; w <= c; ++w) {
    std::size_t col = 0;
    for (auto& [word, idx] : words[w]) idx = col++;
    sys[w] = QMatrix(by_weight[w].size(), col);
    for (std::size_t r = 0; r < by_weight[w].size(); ++r)
      for (const auto& [word, coeff] : poly[by_weight[w][r]]) sys[w](r, words[w].at(word)) = coeff;
  }
  std::vector<Bracket> brackets;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      std::size_t w = basis_[i].weight + basis_[j].weight;
      if (w > c) continue;
      Assoc br = commutator(poly[i], poly[j], c);
      if (br.empty()) continue;
      QVector rhs = zero_vector(sys[w].cols());
      for (const auto& [word, coeff] : br) {
        auto it = words[w].find(word);
        if (it == words[w].end()) throw Error("Hall expansion left the word space");
        rhs[it->second] = coeff;
      }
      auto sol = solve_left(sys[w], rhs);
      if (!sol) throw Error("bracket of Hall elements not in their span");
      QVector v = zero_vector(k);
      for (std::size_t r = 0; r < by_weight[w].size(); ++r) v[by_weight[w][r]] = (*sol)[r];
      brackets.push_back({i, j, v});
    }
  algebra_ = std::make_shared<const LieAlgebra>(LieAlgebra::from_brackets(k, c, brackets));
}

std::string FreeNilpotent::label(std::size_t i) const {
  const auto& h = basis_.at(i);
  if (h.weight == 1) return "x" + std::to_string(h.letter + 1);
  return "[" + label(h.left) + "," + label(h.right) + "]";
}

GenGroup FreeNilpotent::psi() const {
  GenGroup g{algebra_, {}, false};
  for (std::size_t i = 0; i < n_; ++i) g.generators.push_back(unit_vector(dim(), i));
  return g;
}

GenGroup FreeNilpotent::psi_malcev() const {
  GenGroup g{algebra_, {}, true};
  std::vector<GroupElement> elems;
  for (std::size_t i = 0; i < dim(); ++i) {
    const auto& h = basis_[i];
    if (h.weight == 1)
      elems.push_back({algebra_, unit_vector(dim(), i)});
    else
      elems.push_back(group_commutator(elems[h.left], elems[h.right]));
    g.generators.push_back(elems.back().log);
  }
  return g;
}

std::vector<std::size_t> FreeNilpotent::top_layer() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < dim(); ++i)
    if (basis_[i].weight == c_) out.push_back(i);
  return out;
}

CenterData center(const FreeNilpotent& f, const LatticeGroup& hull) {
  const LieAlgebra& L = *f.algebra();
  const std::size_t k = f.dim(), n = f.rank();
  QMatrix M(k, k * n);
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t i = 0; i < n; ++i) {
      const QVector& b = L.structure(r, i);
      for (std::size_t j = 0; j < k; ++j) M(r, i * k + j) = b[j];
    }
  CenterData out;
  out.algebra_center = left_nullspace(M);
  std::vector<QVector> top;
  for (std::size_t i : f.top_layer()) top.push_back(unit_vector(k, i));
  if (row_space_basis(out.algebra_center, k) != row_space_basis(top, k))
    throw Error("center of the free nilpotent algebra is not the top layer");
  out.hull_center = intersect_subspace(hull.lattice(), out.algebra_center);
  // top-weight group commutators have the top Hall elements as logs
  std::vector<QVector> logs;
  GenGroup malcev = f.psi_malcev();
  for (std::size_t i : f.top_layer()) logs.push_back(malcev.generators[i]);
  out.group_center = Lattice::span(k, logs);
  if (!is_sublattice(out.group_center, out.hull_center))
    throw Error("center of Psi is not inside the center of the hull");
  return out;
}

QMatrix extend_generator_images(const FreeNilpotent& f, const std::vector<QVector>& images) {
  const std::size_t k = f.dim();
  if (images.size() != f.rank()) throw DimensionMismatch("need one image per generator");
  QMatrix A(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto& h = f.hall_basis()[i];
    QVector row = h.weight == 1 ? images[h.letter]
                                : f.algebra()->bracket(A.row_vector(h.left), A.row_vector(h.right));
    if (row.size() != k) throw DimensionMismatch("generator image has the wrong dimension");
    for (std::size_t j = 0; j < k; ++j) A(i, j) = row[j];
  }
  return A;
}

namespace {

std::optional<ZVector> center_coordinates(const FreeNilpotent& f, const QVector& u) {
  auto top = f.top_layer();
  ZVector z;
  for (std::size_t j = 0; j < f.dim(); ++j) {
    bool is_top = std::find(top.begin(), top.end(), j) != top.end();
    if (!is_top && u[j] != 0) return std::nullopt;
    if (is_top) {
      if (u[j].get_den() != 1) return std::nullopt;
      z.push_back(u[j].get_num());
    }
  }
  return z;
}

void require_a_group(const FreeNilpotent& f) {
  if (f.nilpotency_class() < 2) throw InvalidInput("A(Psi) needs class at least 2");
}

}  // namespace

QMatrix a_backward(const FreeNilpotent& f, const std::vector<QVector>& u) {
  require_a_group(f);
  if (u.size() != f.rank()) throw DimensionMismatch("need one central element per generator");
  std::vector<QVector> images;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i].size() != f.dim()) throw DimensionMismatch("central element has the wrong dimension");
    if (!center_coordinates(f, u[i])) {
      for (std::size_t j = 0; j < f.rank(); ++j)
        if (!is_zero(f.algebra()->bracket(u[i], unit_vector(f.dim(), j))))
          throw InvalidInput("u_" + std::to_string(i + 1) + " is not central");
      throw InvalidInput("u_" + std::to_string(i + 1) + " is not in the center of Psi");
    }
    images.push_back(add(unit_vector(f.dim(), i), u[i]));
  }
  QMatrix A = extend_generator_images(f, images);
  if (!is_lie_aut(*f.algebra(), A).ok) throw Error("x_i -> x_i u_i is not a Lie automorphism");
  return A;
}

std::vector<QVector> a_forward(const FreeNilpotent& f, const QMatrix& A) {
  require_a_group(f);
  if (A.rows() != f.dim() || A.cols() != f.dim()) throw DimensionMismatch("automorphism has the wrong size");
  if (!is_lie_aut(*f.algebra(), A).ok) throw InvalidInput("not a Lie automorphism");
  std::vector<QVector> u;
  for (std::size_t i = 0; i < f.rank(); ++i) {
    QVector d = sub(A.row_vector(i), unit_vector(f.dim(), i));
    if (!center_coordinates(f, d))
      throw InvalidInput("image of x_" + std::to_string(i + 1) + " is not x_i times an element of Z(Psi)");
    u.push_back(d);
  }
  return u;
}

GroupElement evaluate_word(const FreeNilpotent& f, const Word& w) {
  GroupElement g = group_identity(f.algebra());
  for (auto [gen, e] : w) {
    if (gen >= f.rank()) throw InvalidInput("word uses generator " + std::to_string(gen + 1));
    g = group_mul(g, group_pow({f.algebra(), unit_vector(f.dim(), gen)}, Rational(e)));
  }
  return g;
}

ZMatrix abelianized_matrix(std::size_t n, const std::vector<Word>& words) {
  if (words.size() != n) throw DimensionMismatch("need one word per generator");
  ZMatrix M(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (auto [gen, e] : words[i]) {
      if (gen >= n) throw InvalidInput("word uses generator " + std::to_string(gen + 1));
      M(i, gen) += e;
    }
  return M;
}

LiftedAutomorphism aut_restriction(const FreeNilpotent& lower, const FreeNilpotent& upper,
                                   const std::vector<Word>& words) {
  if (lower.rank() != upper.rank() || upper.nilpotency_class() != lower.nilpotency_class() + 1)
    throw InvalidInput("aut_restriction needs Psi_{n,c} and Psi_{n,c+1}");
  // generating modulo the derived subgroup is equivalent to generating, and
  // a surjective endomorphism of a f.g. nilpotent group is an automorphism
  Integer det = integer_determinant(abelianized_matrix(lower.rank(), words));
  if (abs(det) != 1) throw InvalidInput("generator images do not generate modulo the derived subgroup");
  LiftedAutomorphism out;
  std::vector<QVector> low;
  for (const auto& w : words) {
    out.images.push_back(evaluate_word(upper, w).log);
    low.push_back(evaluate_word(lower, w).log);
  }
  out.lie = extend_generator_images(upper, out.images);
  if (!is_lie_aut(*upper.algebra(), out.lie).ok) throw Error("lifted map is not a Lie automorphism");
  out.restricts = true;
  for (std::size_t i = 0; i < words.size(); ++i)
    out.restricts = out.restricts &&
                    QVector(out.images[i].begin(), out.images[i].begin() + lower.dim()) == low[i];
  return out;
}

}  // namespace nilcsp

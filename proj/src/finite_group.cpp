#include "nilcsp/finite_group.hpp"

#include <algorithm>
#include <deque>
#include <memory>
#include <numeric>
#include <random>

namespace nilcsp {

FiniteGroup FiniteGroup::from_table(std::vector<std::vector<Element>> table) {
  const std::size_t n = table.size();
  if (n == 0) throw InvalidInput("empty Cayley table");
  FiniteGroup g;
  g.order_ = n;
  g.table_.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (table[i].size() != n) throw InvalidInput("Cayley table is not square");
    std::vector<bool> seen(n, false);
    for (auto x : table[i]) {
      if (x >= n) throw InvalidInput("Cayley table entry out of range");
      if (seen[x]) throw InvalidInput("Cayley table row " + std::to_string(i) + " repeats an element");
      seen[x] = true;
      g.table_.push_back(x);
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<bool> seen(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      auto x = table[i][j];
      if (seen[x]) throw InvalidInput("Cayley table column " + std::to_string(j) + " repeats an element");
      seen[x] = true;
    }
  }
  bool found = false;
  for (std::size_t e = 0; e < n && !found; ++e) {
    bool ok = true;
    for (std::size_t x = 0; x < n && ok; ++x) ok = table[e][x] == x && table[x][e] == x;
    if (ok) {
      g.identity_ = static_cast<Element>(e);
      found = true;
    }
  }
  if (!found) throw InvalidInput("Cayley table has no identity");
  g.inverse_.resize(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (table[a][b] == g.identity_) g.inverse_[a] = static_cast<Element>(b);
  return g;
}

FiniteGroup FiniteGroup::from_law(std::size_t order, Element identity, MulFn mul, InvFn inv) {
  if (order == 0 || identity >= order) throw InvalidInput("bad group order or identity");
  FiniteGroup g;
  g.order_ = order;
  g.identity_ = identity;
  g.mul_ = std::move(mul);
  g.inv_ = std::move(inv);
  return g;
}

FiniteGroup FiniteGroup::cyclic(std::size_t n) {
  std::vector<std::vector<Element>> t(n, std::vector<Element>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) t[a][b] = static_cast<Element>((a + b) % n);
  return from_table(std::move(t));
}

FiniteGroup FiniteGroup::symmetric(std::size_t n) {
  if (n == 0 || n > 5) throw InvalidInput("symmetric group degree must be in [1, 5]");
  std::vector<std::vector<int>> perms;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  const std::size_t N = perms.size();
  std::vector<std::vector<Element>> t(N, std::vector<Element>(N));
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b) {
      std::vector<int> c(n);
      for (std::size_t i = 0; i < n; ++i) c[i] = perms[a][perms[b][i]];  // a after b
      t[a][b] = static_cast<Element>(std::lower_bound(perms.begin(), perms.end(), c) - perms.begin());
    }
  return from_table(std::move(t));
}

FiniteGroup FiniteGroup::dihedral(std::size_t n) {
  const std::size_t N = 2 * n;
  std::vector<std::vector<Element>> t(N, std::vector<Element>(N));
  for (std::size_t x = 0; x < N; ++x)
    for (std::size_t y = 0; y < N; ++y) {
      std::size_t a = x % n, b = x / n, c = y % n, d = y / n;
      std::size_t r = b == 0 ? (a + c) % n : (a + n - c) % n;
      t[x][y] = static_cast<Element>(r + n * ((b + d) % 2));
    }
  return from_table(std::move(t));
}

FiniteGroup FiniteGroup::direct_product(const FiniteGroup& a, const FiniteGroup& b) {
  const std::size_t na = a.order(), nb = b.order();
  auto A = std::make_shared<FiniteGroup>(a);
  auto B = std::make_shared<FiniteGroup>(b);
  FiniteGroup g = from_law(
      na * nb, static_cast<Element>(a.identity() + na * b.identity()),
      [A, B, na](Element x, Element y) {
        return static_cast<Element>(A->mul(x % na, y % na) + na * B->mul(x / na, y / na));
      },
      [A, B, na](Element x) { return static_cast<Element>(A->inv(x % na) + na * B->inv(x / na)); });
  if (na * nb <= 4096) return g.materialized();
  return g;
}

Element FiniteGroup::pow(Element a, long long e) const {
  if (e < 0) {
    a = inv(a);
    e = -e;
  }
  Element r = identity_, base = a;
  while (e > 0) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
    e >>= 1;
  }
  return r;
}

std::size_t FiniteGroup::element_order(Element a) const {
  std::size_t k = 1;
  Element x = a;
  while (x != identity_) {
    x = mul(x, a);
    if (++k > order_) throw Error("element order exceeds group order");
  }
  return k;
}

FiniteGroup FiniteGroup::materialized(std::size_t cap) const {
  if (has_table()) return *this;
  if (order_ > cap) throw CapExceeded("group of order " + std::to_string(order_) + " is too large to tabulate");
  FiniteGroup g;
  g.order_ = order_;
  g.identity_ = identity_;
  g.table_.resize(order_ * order_);
  g.inverse_.resize(order_);
  for (std::size_t a = 0; a < order_; ++a) {
    g.inverse_[a] = inv(static_cast<Element>(a));
    for (std::size_t b = 0; b < order_; ++b)
      g.table_[a * order_ + b] = mul(static_cast<Element>(a), static_cast<Element>(b));
  }
  return g;
}

std::vector<std::vector<Element>> FiniteGroup::cayley() const {
  std::vector<std::vector<Element>> t(order_, std::vector<Element>(order_));
  for (std::size_t a = 0; a < order_; ++a)
    for (std::size_t b = 0; b < order_; ++b)
      t[a][b] = mul(static_cast<Element>(a), static_cast<Element>(b));
  return t;
}

AxiomReport check_group_axioms(const FiniteGroup& g, std::uint64_t seed,
                               std::size_t exhaustive_limit, std::size_t samples) {
  AxiomReport rep;
  const std::size_t n = g.order();
  auto fail = [&](Element a, Element b, Element c) {
    rep.ok = false;
    rep.failure = "associativity fails on (" + std::to_string(a) + ", " + std::to_string(b) +
                  ", " + std::to_string(c) + ")";
  };
  for (std::size_t a = 0; a < n; ++a) {
    Element x = static_cast<Element>(a);
    if (g.mul(x, g.inv(x)) != g.identity() || g.mul(g.identity(), x) != x ||
        g.mul(x, g.identity()) != x) {
      rep.ok = false;
      rep.failure = "identity or inverse fails at " + std::to_string(a);
      return rep;
    }
  }
  if (n <= exhaustive_limit) {
    rep.exhaustive = true;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        Element ab = g.mul(static_cast<Element>(a), static_cast<Element>(b));
        for (std::size_t c = 0; c < n; ++c)
          if (g.mul(ab, static_cast<Element>(c)) !=
              g.mul(static_cast<Element>(a), g.mul(static_cast<Element>(b), static_cast<Element>(c)))) {
            fail(static_cast<Element>(a), static_cast<Element>(b), static_cast<Element>(c));
            return rep;
          }
      }
    return rep;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t s = 0; s < samples; ++s) {
    Element a = static_cast<Element>(pick(rng)), b = static_cast<Element>(pick(rng)),
            c = static_cast<Element>(pick(rng));
    if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c))) {
      fail(a, b, c);
      return rep;
    }
  }
  return rep;
}

std::vector<bool> subgroup_closure(const FiniteGroup& g, const std::vector<Element>& gens) {
  std::vector<bool> in(g.order(), false);
  std::vector<Element> queue{g.identity()};
  in[g.identity()] = true;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Element x = queue[head];
    for (Element s : gens) {
      Element y = g.mul(x, s);
      if (!in[y]) {
        in[y] = true;
        queue.push_back(y);
      }
    }
  }
  return in;
}

std::vector<Element> members(const std::vector<bool>& bitmap) {
  std::vector<Element> out;
  for (std::size_t i = 0; i < bitmap.size(); ++i)
    if (bitmap[i]) out.push_back(static_cast<Element>(i));
  return out;
}

bool is_normal(const FiniteGroup& g, const std::vector<bool>& sub,
               const std::vector<Element>& generators_of_g) {
  auto elems = members(sub);
  for (Element x : generators_of_g) {
    Element xi = g.inv(x);
    for (Element h : elems)
      if (!sub[g.mul(g.mul(xi, h), x)]) return false;
  }
  return true;
}

std::vector<bool> normal_closure(const FiniteGroup& g, const std::vector<Element>& gens,
                                 const std::vector<Element>& generators_of_g) {
  std::vector<Element> cur = gens;
  for (;;) {
    auto sub = subgroup_closure(g, cur);
    bool grew = false;
    for (Element x : generators_of_g) {
      Element xi = g.inv(x);
      for (std::size_t i = 0; i < cur.size(); ++i) {
        Element c = g.mul(g.mul(xi, cur[i]), x);
        if (!sub[c]) {
          cur.push_back(c);
          sub = subgroup_closure(g, cur);
          grew = true;
        }
      }
    }
    if (!grew) return sub;
  }
}

std::vector<bool> power_subgroup(const FiniteGroup& g, long long t) {
  std::vector<Element> gens;
  std::vector<bool> seen(g.order(), false);
  for (std::size_t a = 0; a < g.order(); ++a) {
    Element p = g.pow(static_cast<Element>(a), t);
    if (!seen[p]) {
      seen[p] = true;
      gens.push_back(p);
    }
  }
  // the power subgroup is generated by all t-th powers; trim generators
  // that are already in the running closure to keep BFS cheap
  std::vector<Element> used;
  std::vector<bool> cur = subgroup_closure(g, {});
  for (Element p : gens)
    if (!cur[p]) {
      used.push_back(p);
      cur = subgroup_closure(g, used);
    }
  return cur;
}

Quotient quotient_group(const FiniteGroup& g, const std::vector<bool>& normal_sub) {
  const std::size_t n = g.order();
  auto elems = members(normal_sub);
  auto data = std::make_shared<Quotient>();
  data->coset_of.assign(n, static_cast<Element>(-1));
  for (std::size_t a = 0; a < n; ++a) {
    if (data->coset_of[a] != static_cast<Element>(-1)) continue;
    Element id = static_cast<Element>(data->representative.size());
    data->representative.push_back(static_cast<Element>(a));
    for (Element h : elems) data->coset_of[g.mul(static_cast<Element>(a), h)] = id;
  }
  const std::size_t q = data->representative.size();
  auto G = std::make_shared<FiniteGroup>(g);
  auto Q = std::shared_ptr<const Quotient>(data);
  FiniteGroup qg = FiniteGroup::from_law(
      q, data->coset_of[g.identity()],
      [G, Q](Element a, Element b) {
        return Q->coset_of[G->mul(Q->representative[a], Q->representative[b])];
      },
      [G, Q](Element a) { return Q->coset_of[G->inv(Q->representative[a])]; });
  Quotient out;
  out.coset_of = data->coset_of;
  out.representative = data->representative;
  out.group = q <= 2048 ? qg.materialized() : qg;
  return out;
}

std::vector<Element> generating_set(const FiniteGroup& g) {
  const std::size_t n = g.order();
  std::vector<std::pair<std::size_t, Element>> by_order;
  for (std::size_t a = 0; a < n; ++a)
    by_order.emplace_back(g.element_order(static_cast<Element>(a)), static_cast<Element>(a));
  std::stable_sort(by_order.begin(), by_order.end(),
                   [](auto& x, auto& y) { return x.first > y.first; });
  std::vector<Element> gens;
  std::vector<bool> cur = subgroup_closure(g, gens);
  std::size_t size = 1;
  while (size < n) {
    // add the element giving the largest subgroup
    Element best = 0;
    std::size_t best_size = 0;
    for (auto [ord, a] : by_order) {
      if (cur[a]) continue;
      auto trial = gens;
      trial.push_back(a);
      auto t = subgroup_closure(g, trial);
      std::size_t s = static_cast<std::size_t>(std::count(t.begin(), t.end(), true));
      if (s > best_size) {
        best_size = s;
        best = a;
        if (s == n) break;
      }
      if (n > 256) break;  // large groups: take the first candidate
    }
    gens.push_back(best);
    cur = subgroup_closure(g, gens);
    size = static_cast<std::size_t>(std::count(cur.begin(), cur.end(), true));
  }
  return gens;
}

std::optional<std::vector<Element>> extend_homomorphism(const FiniteGroup& g,
                                                        const std::vector<Element>& gens,
                                                        const std::vector<Element>& images,
                                                        const FiniteGroup& h) {
  if (gens.size() != images.size()) throw InvalidInput("generator and image counts differ");
  const Element unset = static_cast<Element>(-1);
  std::vector<Element> phi(g.order(), unset);
  phi[g.identity()] = h.identity();
  std::vector<Element> queue{g.identity()};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Element x = queue[head];
    for (std::size_t i = 0; i < gens.size(); ++i) {
      Element y = g.mul(x, gens[i]);
      Element val = h.mul(phi[x], images[i]);
      if (phi[y] == unset) {
        phi[y] = val;
        queue.push_back(y);
      } else if (phi[y] != val) {
        return std::nullopt;
      }
    }
  }
  if (queue.size() != g.order()) throw InvalidInput("elements do not generate the group");
  return phi;
}

bool is_bijective(const std::vector<Element>& map, std::size_t order) {
  if (map.size() != order) return false;
  std::vector<bool> seen(order, false);
  for (auto x : map) {
    if (x >= order || seen[x]) return false;
    seen[x] = true;
  }
  return true;
}

std::vector<std::vector<Element>> automorphisms(const FiniteGroup& g, std::size_t cap) {
  auto gens = generating_set(g);
  std::vector<std::vector<Element>> candidates(gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i) {
    std::size_t ord = g.element_order(gens[i]);
    for (std::size_t a = 0; a < g.order(); ++a)
      if (g.element_order(static_cast<Element>(a)) == ord) candidates[i].push_back(static_cast<Element>(a));
  }
  std::vector<std::vector<Element>> out;
  std::vector<std::size_t> idx(gens.size(), 0);
  if (gens.empty()) return {std::vector<Element>{g.identity()}};
  for (;;) {
    std::vector<Element> imgs(gens.size());
    for (std::size_t i = 0; i < gens.size(); ++i) imgs[i] = candidates[i][idx[i]];
    auto phi = extend_homomorphism(g, gens, imgs, g);
    if (phi && is_bijective(*phi, g.order())) {
      out.push_back(std::move(*phi));
      if (out.size() > cap) throw CapExceeded("too many automorphisms");
    }
    std::size_t i = 0;
    while (i < gens.size() && ++idx[i] == candidates[i].size()) idx[i++] = 0;
    if (i == gens.size()) break;
  }
  return out;
}

CongruenceQuotient::CongruenceQuotient(LatticeGroupPtr delta, std::int64_t scale)
    : delta_(std::move(delta)), s_(scale), k_(delta_->dim()) {
  if (s_ <= 0) throw InvalidInput("scale must be positive");
  if (k_ > 32) throw InvalidInput("quotients are limited to 32 coordinates");
  if (!is_congruence_scale(*delta_, s_))
    throw InvalidInput("scale " + std::to_string(s_) + " is not a congruence scale");
  long double size = 1;
  for (std::size_t i = 0; i < k_; ++i) size *= static_cast<long double>(s_);
  if (size > 4.0e9L) throw CapExceeded("quotient of order " + std::to_string(static_cast<double>(size)) + " is too large");
  order_ = 1;
  for (std::size_t i = 0; i < k_; ++i) order_ *= static_cast<std::size_t>(s_);
}

Element CongruenceQuotient::encode(const std::int64_t* c) const {
  std::uint64_t code = 0;
  for (std::size_t i = k_; i-- > 0;) code = code * static_cast<std::uint64_t>(s_) + static_cast<std::uint64_t>(mod_i64(c[i], s_));
  return static_cast<Element>(code);
}

void CongruenceQuotient::decode(Element e, std::int64_t* c) const {
  std::uint64_t code = e;
  for (std::size_t i = 0; i < k_; ++i) {
    c[i] = static_cast<std::int64_t>(code % static_cast<std::uint64_t>(s_));
    code /= static_cast<std::uint64_t>(s_);
  }
}

Element CongruenceQuotient::encode(const ZVector& v) const {
  std::vector<std::int64_t> c(k_);
  for (std::size_t i = 0; i < k_; ++i) c[i] = to_i64(mod_floor(v[i], Integer(s_)));
  return encode(c.data());
}

ZVector CongruenceQuotient::decode(Element e) const {
  std::vector<std::int64_t> c(k_);
  decode(e, c.data());
  ZVector v(k_);
  for (std::size_t i = 0; i < k_; ++i) v[i] = static_cast<long>(c[i]);
  return v;
}

Element CongruenceQuotient::mul(Element a, Element b) const {
  std::int64_t x[32], y[32], z[32];
  decode(a, x);
  decode(b, y);
  delta_->law().multiply_mod(x, y, s_, z);
  return encode(z);
}

Element CongruenceQuotient::inv(Element a) const {
  std::int64_t x[32];
  decode(a, x);
  for (std::size_t i = 0; i < k_; ++i) x[i] = mod_i64(-x[i], s_);
  return encode(x);
}

FiniteGroup CongruenceQuotient::group() const {
  auto self = std::make_shared<CongruenceQuotient>(*this);
  FiniteGroup g = FiniteGroup::from_law(
      order_, 0, [self](Element a, Element b) { return self->mul(a, b); },
      [self](Element a) { return self->inv(a); });
  return order_ <= 1024 ? g.materialized() : g;
}

}  // namespace nilcsp

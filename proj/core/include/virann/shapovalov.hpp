#pragma once

// Exact Verma-module arithmetic on the partition basis. Everything here is
// templated on the coefficient field so the same code runs in double and in
// boost::multiprecision::cpp_rational.

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "virann/partition.hpp"

namespace virann {

using Rational = boost::multiprecision::cpp_rational;

template <class Scalar>
using Combination = std::map<PartitionLabel, Scalar>;

template <class Scalar>
using Table = std::vector<std::vector<Scalar>>;

namespace detail {

template <class Scalar>
void accumulate(Combination<Scalar>& into, const PartitionLabel& key, const Scalar& value) {
  if (value == Scalar(0)) return;
  auto [it, inserted] = into.try_emplace(key, value);
  if (!inserted) {
    it->second += value;
    if (it->second == Scalar(0)) into.erase(it);
  }
}

template <class Scalar>
Scalar central(const Scalar& c, int m) {
  return c * Scalar(m * m * m - m) / Scalar(12);
}

}  // namespace detail

// Memoized action of single generators L_n on partition-basis vectors.
template <class Scalar>
class VermaAction {
 public:
  VermaAction(Scalar c, Scalar h) : c_(std::move(c)), h_(std::move(h)) {}

  const Scalar& c() const { return c_; }
  const Scalar& h() const { return h_; }

  // L_n L_{-lambda} v as a combination of partition-basis vectors.
  const Combination<Scalar>& apply(int n, const PartitionLabel& lambda) {
    auto key = std::make_pair(n, lambda);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Combination<Scalar> out = compute(n, lambda);
    return memo_.emplace(std::move(key), std::move(out)).first->second;
  }

  Combination<Scalar> apply(int n, const Combination<Scalar>& vec) {
    Combination<Scalar> out;
    for (const auto& [lab, coef] : vec) {
      const auto& img = apply(n, lab);
      for (const auto& [l2, c2] : img) detail::accumulate(out, l2, Scalar(coef * c2));
    }
    return out;
  }

  // Shapovalov form <L_{-lambda} v, L_{-mu} v>.
  Scalar inner(const PartitionLabel& lambda, const PartitionLabel& mu) {
    if (lambda.level() != mu.level()) return Scalar(0);
    Combination<Scalar> vec{{mu, Scalar(1)}};
    for (int p : lambda.parts) vec = apply(p, vec);
    auto it = vec.find(PartitionLabel{});
    return it == vec.end() ? Scalar(0) : it->second;
  }

 private:
  Combination<Scalar> compute(int n, const PartitionLabel& lambda) {
    Combination<Scalar> out;
    const int level = lambda.level();
    if (n == 0) {
      detail::accumulate(out, lambda, Scalar(h_ + Scalar(level)));
      return out;
    }
    if (lambda.parts.empty()) {
      if (n < 0) out.emplace(PartitionLabel{{-n}}, Scalar(1));
      return out;
    }
    const int a = lambda.parts.front();
    if (n < 0 && -n >= a) {
      PartitionLabel p = lambda;
      p.parts.insert(p.parts.begin(), -n);
      out.emplace(std::move(p), Scalar(1));
      return out;
    }
    if (n > level) return out;
    // L_n L_{-a} X = L_{-a} L_n X + (n+a) L_{n-a} X + central * X
    PartitionLabel rest{std::vector<int>(lambda.parts.begin() + 1, lambda.parts.end())};
    Combination<Scalar> inner_img = apply(n, rest);
    for (const auto& [lab, coef] : inner_img) {
      const auto& img = apply(-a, lab);
      for (const auto& [l2, c2] : img) detail::accumulate(out, l2, Scalar(coef * c2));
    }
    const auto& shifted = apply(n - a, rest);
    for (const auto& [lab, coef] : shifted) detail::accumulate(out, lab, Scalar(Scalar(n + a) * coef));
    if (n == a) detail::accumulate(out, rest, detail::central(c_, n));
    return out;
  }

  Scalar c_;
  Scalar h_;
  std::map<std::pair<int, PartitionLabel>, Combination<Scalar>> memo_;
};

namespace detail {

// Straightens one word by swapping the rightmost descent.
template <class Scalar>
Combination<Scalar> rewrite_words(std::span<const int> word, const Scalar& c, const Scalar& h) {
  std::map<std::vector<int>, Scalar> pending;
  Combination<Scalar> done;
  auto push = [&](std::vector<int> w, const Scalar& coef) {
    if (coef == Scalar(0)) return;
    auto [it, inserted] = pending.try_emplace(std::move(w), coef);
    if (!inserted) {
      it->second += coef;
      if (it->second == Scalar(0)) pending.erase(it);
    }
  };
  push(std::vector<int>(word.begin(), word.end()), Scalar(1));

  while (!pending.empty()) {
    auto node = pending.extract(pending.begin());
    std::vector<int> w = std::move(node.key());
    Scalar coef = std::move(node.mapped());
    if (w.empty()) {
      accumulate(done, PartitionLabel{}, coef);
      continue;
    }
    if (w.back() > 0) continue;
    if (w.back() == 0) {
      w.pop_back();
      push(std::move(w), Scalar(coef * h));
      continue;
    }
    int i = static_cast<int>(w.size()) - 2;
    while (i >= 0 && w[i] <= w[i + 1]) --i;
    if (i < 0) {
      PartitionLabel lab;
      for (int x : w) lab.parts.push_back(-x);
      accumulate(done, lab, coef);
      continue;
    }
    const int m = w[i];
    const int n = w[i + 1];
    std::vector<int> swapped = w;
    std::swap(swapped[i], swapped[i + 1]);
    push(std::move(swapped), coef);
    std::vector<int> merged;
    merged.reserve(w.size() - 1);
    merged.insert(merged.end(), w.begin(), w.begin() + i);
    merged.push_back(m + n);
    merged.insert(merged.end(), w.begin() + i + 2, w.end());
    push(merged, Scalar(coef * Scalar(m - n)));
    if (m + n == 0) {
      merged.erase(merged.begin() + i);
      push(std::move(merged), Scalar(coef * central(c, m)));
    }
  }
  return done;
}


}  // namespace detail

// Rewrites L_{w_0} ... L_{w_{k-1}} v into ordered lowering words by repeated
// use of the commutation relation, L_m v = 0 (m > 0) and L_0 v = h v.
// Generators are applied right to left; each step straightens a single
// leading mode against an ordered word. Independent of VermaAction.
template <class Scalar>
Combination<Scalar> normal_order_reduce(std::span<const int> word, const Scalar& c, const Scalar& h) {
  std::map<std::pair<int, PartitionLabel>, Combination<Scalar>> memo;
  Combination<Scalar> state{{PartitionLabel{}, Scalar(1)}};
  for (auto g = word.rbegin(); g != word.rend(); ++g) {
    Combination<Scalar> next;
    for (const auto& [lab, coef] : state) {
      auto key = std::make_pair(*g, lab);
      auto it = memo.find(key);
      if (it == memo.end()) {
        std::vector<int> w{*g};
        for (int p : lab.parts) w.push_back(-p);
        it = memo.emplace(std::move(key), detail::rewrite_words<Scalar>(w, c, h)).first;
      }
      for (const auto& [l2, c2] : it->second) detail::accumulate(next, l2, Scalar(coef * c2));
    }
    state = std::move(next);
  }
  return state;
}

// <L_{-lambda} v, L_{-mu} v> through the word rewriter.
template <class Scalar>
Scalar shapovalov_by_reduction(const PartitionLabel& lambda, const PartitionLabel& mu, const Scalar& c,
                               const Scalar& h) {
  std::vector<int> word;
  for (auto it = lambda.parts.rbegin(); it != lambda.parts.rend(); ++it) word.push_back(*it);
  for (int p : mu.parts) word.push_back(-p);
  auto res = normal_order_reduce<Scalar>(word, c, h);
  auto it = res.find(PartitionLabel{});
  return it == res.end() ? Scalar(0) : it->second;
}

// Gram matrix of the Shapovalov form at one level, partition basis order.
template <class Scalar>
Table<Scalar> gram_table(const Scalar& c, const Scalar& h, int level) {
  auto basis = partitions_of(level);
  VermaAction<Scalar> action(c, h);
  Table<Scalar> g(basis.size(), std::vector<Scalar>(basis.size(), Scalar(0)));
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) g[i][j] = action.inner(basis[i], basis[j]);
  return g;
}

}  // namespace virann

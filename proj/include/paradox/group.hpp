#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "paradox/dyadic.hpp"

namespace paradox {

// A free-group word. Letter +i is the i-th generator (1-based), -i its inverse.
using FreeWord = boost::container::small_vector<std::int32_t, 12>;
using IntVector = boost::container::small_vector<std::int64_t, 4>;

// The affine map x -> 2^log2a * x + b.
struct Affine {
  std::int64_t log2a = 0;
  Dyadic b;

  friend bool operator==(const Affine&, const Affine&) = default;
};

/// A group element in canonical normal form. Which alternative is active
/// is determined by the owning group; elements never mix across groups.
class Elem {
 public:
  using Rep = std::variant<FreeWord, IntVector, Affine>;

  Elem() = default;
  explicit Elem(FreeWord w) : rep_(std::move(w)) {}
  explicit Elem(IntVector v) : rep_(std::move(v)) {}
  explicit Elem(Affine a) : rep_(std::move(a)) {}

  const Rep& rep() const { return rep_; }
  const FreeWord& word() const { return std::get<FreeWord>(rep_); }
  const IntVector& vec() const { return std::get<IntVector>(rep_); }
  const Affine& affine() const { return std::get<Affine>(rep_); }

  friend bool operator==(const Elem&, const Elem&) = default;
  // Total order used for ordered containers; unrelated to the shortlex ball order.
  friend bool operator<(const Elem& x, const Elem& y);

  std::size_t hash() const;

 private:
  Rep rep_;
};

struct ElemHash {
  std::size_t operator()(const Elem& g) const { return g.hash(); }
};

enum class GroupKind { Free, Zn, DyadicAffine };

class Window;

/// One of the supported finitely generated groups together with its
/// canonical symmetric generating set, which fixes the word metric.
class Group {
 public:
  static Group free(int rank);
  static Group zn(int dim);
  // The subgroup <2x, x+1> of the affine group of the line.
  static Group dyadic_affine();
  // "free:k", "zn:d" or "bs12".
  static Group parse(std::string_view spec);

  GroupKind kind() const { return kind_; }
  int rank() const { return rank_; }
  std::string spec() const;

  Elem identity() const;
  Elem mul(const Elem& g, const Elem& h) const;
  Elem inv(const Elem& g) const;
  Elem pow(const Elem& g, std::int64_t n) const;
  bool is_identity(const Elem& g) const;

  // Symmetric generating set in canonical order: g1, g1^-1, g2, g2^-1, ...
  const std::vector<Elem>& generators() const { return *generators_; }

  bool owns(const Elem& g) const;
  void require_owns(const Elem& g) const;

  Elem parse_elem(std::string_view text, std::size_t offset = 0) const;
  std::string format(const Elem& g) const;
  std::vector<Elem> parse_elem_list(std::string_view text) const;

  // Word length with respect to generators(); nullopt if it exceeds max_radius.
  std::optional<int> word_length(const Elem& g, int max_radius = 64) const;

  Window ball(int radius) const;

  friend bool operator==(const Group& x, const Group& y) {
    return x.kind_ == y.kind_ && x.rank_ == y.rank_;
  }

 private:
  Group(GroupKind kind, int rank);

  GroupKind kind_ = GroupKind::Zn;
  int rank_ = 1;
  std::shared_ptr<const std::vector<Elem>> generators_;
};

/// Lazily enumerates a group in shortlex order (word length, then
/// lexicographic on generator indices), i.e. the canonical ball order.
class ShortlexEnumerator {
 public:
  explicit ShortlexEnumerator(Group group);

  struct Item {
    Elem elem;
    int length;
  };

  // Returns the next element; never ends (all supported groups are infinite).
  Item next();
  std::size_t produced() const { return produced_; }

 private:
  Group group_;
  std::vector<Item> order_;
  std::unordered_map<Elem, std::size_t, ElemHash> seen_;
  std::size_t expand_cursor_ = 0;
  std::size_t produced_ = 0;
};

/// Finite ordered set of pairwise distinct elements on which everything is
/// checked. Ball windows carry their radius; explicit windows a declared one
/// that bounds semigroup-membership budgets.
class Window {
 public:
  Window(Group group, std::vector<Elem> elements, int radius, bool is_ball = false);

  const Group& group() const { return data_->group; }
  int radius() const { return data_->radius; }
  bool is_ball() const { return data_->is_ball; }
  std::span<const Elem> elements() const& { return data_->elements; }
  // A span into a temporary window would dangle (e.g. in a range-for).
  std::span<const Elem> elements() const&& = delete;
  std::size_t size() const { return data_->elements.size(); }
  const Elem& operator[](std::size_t i) const { return data_->elements[i]; }

  bool contains(const Elem& g) const { return data_->index.count(g) != 0; }
  std::optional<std::size_t> index_of(const Elem& g) const;

  // Default semigroup-membership budget: radius plus slack.
  int budget(int slack = 4) const { return data_->radius + slack; }

 private:
  struct Data {
    Group group;
    std::vector<Elem> elements;
    std::unordered_map<Elem, std::size_t, ElemHash> index;
    int radius;
    bool is_ball;
  };
  std::shared_ptr<const Data> data_;
};

// All elements expressible as positive words of length <= max_len in gens,
// in breadth-first order (duplicates dropped). Radius is 1 + the max
// generator length times max_len.
Window positive_words_window(const Group& group, std::span<const Elem> gens, int max_len);

}  // namespace paradox

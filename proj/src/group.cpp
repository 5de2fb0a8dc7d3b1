#include "paradox/group.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <functional>
#include <unordered_set>

#include "paradox/errors.hpp"

namespace paradox {

namespace {

// Free generators are named a, b, c, d, f, g, ...; "e" is reserved for the identity.
constexpr std::string_view kLetters = "abcdfghijklmnopqrstuvwxyz";

std::size_t combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string_view strip(std::string_view s, std::size_t& offset) {
  while (!s.empty() && is_space(s.front())) {
    s.remove_prefix(1);
    ++offset;
  }
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Splits "(x,y,...)" into its top-level comma-separated fields.
std::vector<std::pair<std::string_view, std::size_t>> tuple_fields(std::string_view s,
                                                                  std::size_t offset) {
  s = strip(s, offset);
  if (s.size() < 2 || s.front() != '(' || s.back() != ')') {
    throw ParseError("expected a parenthesized tuple, got '" + std::string(s) + "'", offset);
  }
  std::vector<std::pair<std::string_view, std::size_t>> fields;
  std::size_t start = 1;
  int depth = 0;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == ',' && depth == 0) {
      fields.emplace_back(s.substr(start, i - start), offset + start);
      start = i + 1;
    }
  }
  fields.emplace_back(s.substr(start, s.size() - 1 - start), offset + start);
  return fields;
}

std::int64_t parse_int64(std::string_view s, std::size_t offset) {
  s = strip(s, offset);
  if (s.empty()) throw ParseError("expected an integer", offset);
  std::size_t i = 0;
  bool negative = false;
  if (s[0] == '-' || s[0] == '+') {
    negative = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) throw ParseError("expected digits", offset + i);
  std::int64_t v = 0;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
      throw ParseError(std::string("unexpected character '") + s[i] + "'", offset + i);
    }
    if (v > (INT64_MAX - 9) / 10) throw ParseError("integer out of range", offset);
    v = v * 10 + (s[i] - '0');
  }
  return negative ? -v : v;
}

void push_reduced(FreeWord& w, std::int32_t letter) {
  if (!w.empty() && w.back() == -letter) {
    w.pop_back();
  } else {
    w.push_back(letter);
  }
}

}  // namespace

bool operator<(const Elem& x, const Elem& y) {
  if (x.rep_.index() != y.rep_.index()) return x.rep_.index() < y.rep_.index();
  return std::visit(
      [&](const auto& a) -> bool {
        using T = std::decay_t<decltype(a)>;
        const auto& b = std::get<T>(y.rep_);
        if constexpr (std::is_same_v<T, Affine>) {
          if (a.log2a != b.log2a) return a.log2a < b.log2a;
          return a.b < b.b;
        } else {
          if (a.size() != b.size()) return a.size() < b.size();
          return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
        }
      },
      x.rep_);
}

std::size_t Elem::hash() const {
  return std::visit(
      [](const auto& a) -> std::size_t {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, Affine>) {
          return combine(std::hash<std::int64_t>{}(a.log2a), a.b.hash());
        } else {
          std::size_t h = a.size();
          for (auto v : a) h = combine(h, std::hash<std::int64_t>{}(v));
          return h;
        }
      },
      rep_);
}

Group::Group(GroupKind kind, int rank) : kind_(kind), rank_(rank) {
  auto gens = std::make_shared<std::vector<Elem>>();
  switch (kind) {
    case GroupKind::Free:
      for (int i = 1; i <= rank; ++i) {
        gens->emplace_back(FreeWord{i});
        gens->emplace_back(FreeWord{-i});
      }
      break;
    case GroupKind::Zn:
      for (int i = 0; i < rank; ++i) {
        IntVector v(static_cast<std::size_t>(rank), 0);
        v[static_cast<std::size_t>(i)] = 1;
        gens->emplace_back(v);
        v[static_cast<std::size_t>(i)] = -1;
        gens->emplace_back(v);
      }
      break;
    case GroupKind::DyadicAffine:
      gens->emplace_back(Affine{1, Dyadic(0)});
      gens->emplace_back(Affine{-1, Dyadic(0)});
      gens->emplace_back(Affine{0, Dyadic(1)});
      gens->emplace_back(Affine{0, Dyadic(-1)});
      break;
  }
  generators_ = std::move(gens);
}

Group Group::free(int rank) {
  if (rank < 1 || rank > static_cast<int>(kLetters.size())) {
    throw Error("free group rank must be in [1, " + std::to_string(kLetters.size()) + "]");
  }
  return Group(GroupKind::Free, rank);
}

Group Group::zn(int dim) {
  if (dim < 1 || dim > 64) throw Error("zn dimension must be in [1, 64]");
  return Group(GroupKind::Zn, dim);
}

Group Group::dyadic_affine() { return Group(GroupKind::DyadicAffine, 2); }

Group Group::parse(std::string_view spec) {
  std::size_t offset = 0;
  spec = strip(spec, offset);
  if (spec == "bs12") return dyadic_affine();
  const auto colon = spec.find(':');
  if (colon != std::string_view::npos) {
    const auto head = spec.substr(0, colon);
    const auto n = parse_int64(spec.substr(colon + 1), offset + colon + 1);
    if (head == "free") return free(static_cast<int>(n));
    if (head == "zn") return zn(static_cast<int>(n));
  }
  throw ParseError("unknown group spec '" + std::string(spec) + "' (expected free:k, zn:d or bs12)",
                   offset);
}

std::string Group::spec() const {
  switch (kind_) {
    case GroupKind::Free: return "free:" + std::to_string(rank_);
    case GroupKind::Zn: return "zn:" + std::to_string(rank_);
    case GroupKind::DyadicAffine: return "bs12";
  }
  return {};
}

Elem Group::identity() const {
  switch (kind_) {
    case GroupKind::Free: return Elem(FreeWord{});
    case GroupKind::Zn: return Elem(IntVector(static_cast<std::size_t>(rank_), 0));
    case GroupKind::DyadicAffine: return Elem(Affine{0, Dyadic(0)});
  }
  return {};
}

bool Group::owns(const Elem& g) const {
  switch (kind_) {
    case GroupKind::Free: {
      const auto* w = std::get_if<FreeWord>(&g.rep());
      if (w == nullptr) return false;
      return std::all_of(w->begin(), w->end(),
                         [&](std::int32_t l) { return l != 0 && std::abs(l) <= rank_; });
    }
    case GroupKind::Zn: {
      const auto* v = std::get_if<IntVector>(&g.rep());
      return v != nullptr && v->size() == static_cast<std::size_t>(rank_);
    }
    case GroupKind::DyadicAffine: return std::holds_alternative<Affine>(g.rep());
  }
  return false;
}

void Group::require_owns(const Elem& g) const {
  if (!owns(g)) throw GroupMismatch("element does not belong to group " + spec());
}

Elem Group::mul(const Elem& g, const Elem& h) const {
  switch (kind_) {
    case GroupKind::Free: {
      require_owns(g);
      require_owns(h);
      FreeWord w = g.word();
      for (auto l : h.word()) push_reduced(w, l);
      return Elem(std::move(w));
    }
    case GroupKind::Zn: {
      // Checked inline: this is the hot path of every window sweep.
      const auto* v = std::get_if<IntVector>(&g.rep());
      const auto* u = std::get_if<IntVector>(&h.rep());
      const auto n = static_cast<std::size_t>(rank_);
      if (v == nullptr || u == nullptr || v->size() != n || u->size() != n) {
        throw GroupMismatch("element does not belong to group " + spec());
      }
      IntVector out(n, boost::container::default_init);
      for (std::size_t i = 0; i < n; ++i) out[i] = (*v)[i] + (*u)[i];
      return Elem(std::move(out));
    }
    case GroupKind::DyadicAffine: {
      require_owns(g);
      require_owns(h);
      // (a1,b1)(a2,b2) = (a1 a2, a1 b2 + b1): composition x -> g(h(x)).
      const auto& x = g.affine();
      const auto& y = h.affine();
      return Elem(Affine{x.log2a + y.log2a, y.b.shifted(x.log2a) + x.b});
    }
  }
  return {};
}

Elem Group::inv(const Elem& g) const {
  require_owns(g);
  switch (kind_) {
    case GroupKind::Free: {
      FreeWord w;
      const auto& src = g.word();
      for (auto it = src.rbegin(); it != src.rend(); ++it) w.push_back(-*it);
      return Elem(std::move(w));
    }
    case GroupKind::Zn: {
      IntVector v = g.vec();
      for (auto& x : v) x = -x;
      return Elem(std::move(v));
    }
    case GroupKind::DyadicAffine: {
      const auto& x = g.affine();
      return Elem(Affine{-x.log2a, (-x.b).shifted(-x.log2a)});
    }
  }
  return {};
}

Elem Group::pow(const Elem& g, std::int64_t n) const {
  Elem base = n < 0 ? inv(g) : g;
  std::int64_t k = n < 0 ? -n : n;
  Elem result = identity();
  while (k > 0) {
    if (k & 1) result = mul(result, base);
    base = mul(base, base);
    k >>= 1;
  }
  return result;
}

bool Group::is_identity(const Elem& g) const { return g == identity(); }

Elem Group::parse_elem(std::string_view text, std::size_t offset) const {
  std::string_view s = strip(text, offset);
  switch (kind_) {
    case GroupKind::Free: {
      FreeWord w;
      if (s == "e" || s.empty()) return Elem(w);
      std::size_t i = 0;
      while (i < s.size()) {
        if (is_space(s[i])) {
          ++i;
          continue;
        }
        const auto pos = kLetters.find(s[i]);
        if (pos == std::string_view::npos || static_cast<int>(pos) >= rank_) {
          throw ParseError(std::string("unknown generator '") + s[i] + "' for " + spec(), offset + i);
        }
        const auto letter = static_cast<std::int32_t>(pos + 1);
        ++i;
        std::int64_t power = 1;
        if (i < s.size() && s[i] == '^') {
          std::size_t j = i + 1;
          if (j < s.size() && (s[j] == '-' || s[j] == '+')) ++j;
          while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
          power = parse_int64(s.substr(i + 1, j - i - 1), offset + i + 1);
          i = j;
        }
        for (std::int64_t k = 0; k < std::abs(power); ++k) {
          push_reduced(w, power < 0 ? -letter : letter);
        }
      }
      return Elem(std::move(w));
    }
    case GroupKind::Zn: {
      IntVector v;
      if (!s.empty() && s.front() != '(') {
        if (rank_ != 1) throw ParseError("expected a tuple of " + std::to_string(rank_) + " integers", offset);
        v.push_back(parse_int64(s, offset));
        return Elem(std::move(v));
      }
      for (const auto& [field, pos] : tuple_fields(s, offset)) v.push_back(parse_int64(field, pos));
      if (v.size() != static_cast<std::size_t>(rank_)) {
        throw ParseError("expected " + std::to_string(rank_) + " coordinates", offset);
      }
      return Elem(std::move(v));
    }
    case GroupKind::DyadicAffine: {
      const auto fields = tuple_fields(s, offset);
      if (fields.size() != 2) throw ParseError("expected (a,b)", offset);
      const Dyadic a = Dyadic::parse(fields[0].first, fields[0].second);
      const Dyadic b = Dyadic::parse(fields[1].first, fields[1].second);
      // a must be 2^k: numerator 1 with any exponent, or a positive power of two.
      const BigInt& num = a.numerator();
      if (num <= 0 || (num & (num - 1)) != 0) {
        throw ParseError("slope must be a power of two", fields[0].second);
      }
      std::int64_t k = a.exponent() > 0 ? -a.exponent()
                                         : static_cast<std::int64_t>(boost::multiprecision::msb(num));
      return Elem(Affine{k, b});
    }
  }
  return {};
}

std::string Group::format(const Elem& g) const {
  require_owns(g);
  switch (kind_) {
    case GroupKind::Free: {
      const auto& w = g.word();
      if (w.empty()) return "e";
      std::string out;
      for (auto l : w) {
        if (!out.empty()) out += ' ';
        out += kLetters[static_cast<std::size_t>(std::abs(l) - 1)];
        if (l < 0) out += "^-1";
      }
      return out;
    }
    case GroupKind::Zn: {
      std::string out = "(";
      const auto& v = g.vec();
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
      }
      return out + ")";
    }
    case GroupKind::DyadicAffine: {
      const auto& x = g.affine();
      return "(" + Dyadic::pow2(x.log2a).to_string() + "," + x.b.to_string() + ")";
    }
  }
  return {};
}

std::vector<Elem> Group::parse_elem_list(std::string_view text) const {
  std::vector<Elem> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i < text.size() && text[i] == '(') ++depth;
    if (i < text.size() && text[i] == ')') --depth;
    if (i == text.size() || (text[i] == ',' && depth == 0)) {
      std::size_t off = start;
      auto piece = strip(text.substr(start, i - start), off);
      if (piece.empty()) throw ParseError("empty element in list", off);
      out.push_back(parse_elem(piece, off));
      start = i + 1;
    }
  }
  return out;
}

std::optional<int> Group::word_length(const Elem& g, int max_radius) const {
  require_owns(g);
  switch (kind_) {
    case GroupKind::Free: {
      const auto n = static_cast<int>(g.word().size());
      return n <= max_radius ? std::optional<int>(n) : std::nullopt;
    }
    case GroupKind::Zn: {
      std::int64_t n = 0;
      for (auto x : g.vec()) n += std::abs(x);
      return n <= max_radius ? std::optional<int>(static_cast<int>(n)) : std::nullopt;
    }
    case GroupKind::DyadicAffine: {
      ShortlexEnumerator en(*this);
      for (;;) {
        auto item = en.next();
        if (item.length > max_radius) return std::nullopt;
        if (item.elem == g) return item.length;
      }
    }
  }
  return std::nullopt;
}

Window Group::ball(int radius) const {
  if (radius < 0) throw Error("ball radius must be nonnegative");
  ShortlexEnumerator en(*this);
  std::vector<Elem> elems;
  for (;;) {
    auto item = en.next();
    if (item.length > radius) break;
    elems.push_back(std::move(item.elem));
  }
  return Window(*this, std::move(elems), radius, true);
}

ShortlexEnumerator::ShortlexEnumerator(Group group) : group_(std::move(group)) {
  Elem e = group_.identity();
  seen_.emplace(e, 0);
  order_.push_back({std::move(e), 0});
}

ShortlexEnumerator::Item ShortlexEnumerator::next() {
  // Breadth-first expansion by right multiplication with generators in
  // canonical order yields shortlex order of minimal words.
  while (produced_ >= order_.size()) {
    const Item parent = order_[expand_cursor_++];
    for (const auto& s : group_.generators()) {
      Elem child = group_.mul(parent.elem, s);
      if (seen_.emplace(child, order_.size()).second) {
        order_.push_back({std::move(child), parent.length + 1});
      }
    }
  }
  return order_[produced_++];
}

Window::Window(Group group, std::vector<Elem> elements, int radius, bool is_ball) {
  auto data = std::make_shared<Data>(Data{std::move(group), std::move(elements), {}, radius, is_ball});
  data->index.reserve(data->elements.size());
  for (std::size_t i = 0; i < data->elements.size(); ++i) {
    data->group.require_owns(data->elements[i]);
    if (!data->index.emplace(data->elements[i], i).second) {
      throw InvariantViolation("window elements must be pairwise distinct; duplicate " +
                               data->group.format(data->elements[i]));
    }
  }
  data_ = std::move(data);
}

std::optional<std::size_t> Window::index_of(const Elem& g) const {
  auto it = data_->index.find(g);
  if (it == data_->index.end()) return std::nullopt;
  return it->second;
}

Window positive_words_window(const Group& group, std::span<const Elem> gens, int max_len) {
  std::vector<Elem> out;
  std::unordered_set<Elem, ElemHash> seen;
  std::vector<Elem> frontier{group.identity()};
  seen.insert(frontier.front());
  out.push_back(frontier.front());
  int gen_len = 1;
  for (const auto& g : gens) gen_len = std::max(gen_len, group.word_length(g, 32).value_or(32));
  for (int len = 1; len <= max_len; ++len) {
    std::vector<Elem> next;
    for (const auto& w : frontier) {
      for (const auto& g : gens) {
        Elem x = group.mul(w, g);
        if (seen.insert(x).second) {
          out.push_back(x);
          next.push_back(std::move(x));
        }
      }
    }
    frontier = std::move(next);
  }
  return Window(group, std::move(out), gen_len * max_len, false);
}

}  // namespace paradox

#include "paradox/window_cache.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "paradox/certificate.hpp"
#include "paradox/errors.hpp"

namespace paradox {

namespace {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return b > std::numeric_limits<std::uint64_t>::max() - a ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

// Element lines joined with newlines, the same text window_digest hashes.
std::string element_lines(const Window& w) {
  std::string out;
  for (const auto& x : w.elements()) {
    out += w.group().format(x);
    out += '\n';
  }
  return out;
}

std::string file_name(const Group& g, int radius) {
  std::string spec = g.spec();
  for (char& c : spec) {
    if (c == ':') c = '-';
  }
  return spec + "-ball-" + std::to_string(radius) + ".txt";
}

}  // namespace

std::uint64_t ball_size_bound(const Group& g, int radius) {
  if (radius < 0) return 0;
  const auto gens = static_cast<std::uint64_t>(g.generators().size());
  // Spheres grow by at most a factor gens - 1 after the first step.
  std::uint64_t total = 1;
  std::uint64_t sphere = 1;
  for (int r = 1; r <= radius; ++r) {
    sphere = saturating_mul(sphere, r == 1 ? gens : gens - 1);
    total = saturating_add(total, sphere);
  }
  return total;
}

Window cached_ball(const Group& g, int radius) {
  const char* dir = std::getenv("PARADOX_CACHE_DIR");
  if (dir == nullptr || *dir == '\0') return g.ball(radius);
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return g.ball(radius);
  const fs::path path = fs::path(dir) / file_name(g, radius);
  const std::string header_prefix = "paradox-window-cache v1 " + g.spec() + " " + std::to_string(radius) + " ";

  if (std::ifstream in(path); in) {
    std::string header;
    std::getline(in, header);
    std::stringstream rest;
    rest << in.rdbuf();
    const std::string body = rest.str();
    if (header == header_prefix + sha256_hex(g.spec() + "\n" + body)) {
      try {
        std::vector<Elem> elems;
        std::istringstream lines(body);
        for (std::string line; std::getline(lines, line);) elems.push_back(g.parse_elem(line));
        return Window(g, std::move(elems), radius, true);
      } catch (const Error&) {
        // A damaged entry falls through to recomputation.
      }
    }
  }

  Window w = g.ball(radius);
  const std::string body = element_lines(w);
  std::ofstream out(path, std::ios::trunc);
  if (out) out << header_prefix << sha256_hex(g.spec() + "\n" + body) << '\n' << body;
  return w;
}

}  // namespace paradox

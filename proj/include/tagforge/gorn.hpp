#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "tagforge/error.hpp"

namespace tagforge {

// Gorn address: the root is "0", the i-th child of a node at address a is
// "a.i" (children numbered from 1). Stored as the list of child ordinals,
// so the root is the empty path. Readers accept the leading-0 form ("0.2.2")
// and the bare form ("2.2"); writers always emit the canonical leading-0 form.
struct GornAddress {
  std::vector<int> path;  // child ordinals, each >= 1; empty = root

  static GornAddress root() { return {}; }

  static GornAddress parse(std::string_view text) {
    if (text.empty()) throw Error(Errc::BadAddress, "empty address");
    std::vector<int> out;
    std::size_t pos = 0, index = 0;
    while (pos <= text.size()) {
      std::size_t dot = text.find('.', pos);
      std::string_view part = text.substr(
          pos, dot == std::string_view::npos ? std::string_view::npos
                                             : dot - pos);
      if (part.empty())
        throw Error(Errc::BadAddress,
                    "empty component in '" + std::string(text) + "'");
      long value = 0;
      for (char ch : part) {
        if (ch < '0' || ch > '9')
          throw Error(Errc::BadAddress,
                      "non-digit in '" + std::string(text) + "'");
        value = value * 10 + (ch - '0');
        if (value > 1'000'000)
          throw Error(Errc::BadAddress,
                      "component too large in '" + std::string(text) + "'");
      }
      if (part.size() > 1 && part.front() == '0')
        throw Error(Errc::BadAddress,
                    "leading zero in '" + std::string(text) + "'");
      if (value == 0) {
        // A zero component is only the optional root marker, first position.
        if (index != 0)
          throw Error(Errc::BadAddress,
                      "zero component in '" + std::string(text) + "'");
      } else {
        out.push_back(static_cast<int>(value));
      }
      ++index;
      if (dot == std::string_view::npos) break;
      pos = dot + 1;
      if (pos > text.size()) break;
    }
    return GornAddress{std::move(out)};
  }

  // Canonical rendering, always with the leading root marker: "0", "0.2.2".
  std::string str() const {
    std::string out = "0";
    for (int ordinal : path) {
      out += '.';
      out += std::to_string(ordinal);
    }
    return out;
  }

  bool is_root() const { return path.empty(); }
  int depth() const { return static_cast<int>(path.size()); }

  GornAddress child(int ordinal) const {
    if (ordinal < 1)
      throw Error(Errc::BadAddress,
                  "child ordinal must be >= 1, got " + std::to_string(ordinal));
    GornAddress a = *this;
    a.path.push_back(ordinal);
    return a;
  }

  GornAddress parent() const {
    if (is_root()) throw Error(Errc::NoSuchAddress, "root has no parent");
    GornAddress a = *this;
    a.path.pop_back();
    return a;
  }

  // True if this address lies on the path from the root to `other`
  // (inclusive of equality).
  bool is_prefix_of(const GornAddress& other) const {
    if (path.size() > other.path.size()) return false;
    for (std::size_t i = 0; i < path.size(); ++i)
      if (path[i] != other.path[i]) return false;
    return true;
  }

  // Lexicographic order on ordinal paths: "0" < "0.1" < "0.1.1" < "0.2".
  auto operator<=>(const GornAddress&) const = default;
};

}  // namespace tagforge

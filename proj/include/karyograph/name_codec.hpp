#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "karyograph/band_atlas.hpp"
#include "karyograph/errors.hpp"
#include "karyograph/iscn_parser.hpp"

namespace karyograph {

/// An identifier-safe karyotype name: leading 'k', with ISCN separators
/// rewritten ("," and ";" to "_", "(" and ")" to "!").
struct SafeName {
  std::string text;

  friend auto operator<=>(const SafeName&, const SafeName&) = default;
};

inline bool is_safe_name(std::string_view text) {
  if (text.empty() || text.front() != 'k') return false;
  for (char ch : text.substr(1)) {
    bool ok = (ch >= '0' && ch <= '9') || (ch >= 'a' && ch <= 'z') || ch == 'X' ||
              ch == 'Y' || ch == 'N' || ch == '.' || ch == '+' || ch == '-' ||
              ch == '_' || ch == '!';
    if (!ok) return false;
  }
  return true;
}

/// Rewrites an ISCN string to a SafeName: prefix 'k', ';' and ',' to '_',
/// '(' and ')' to '!', all other characters unchanged.
inline SafeName mangle(std::string_view iscn) {
  std::string out = "k";
  out.reserve(iscn.size() + 1);
  for (char ch : iscn) {
    switch (ch) {
      case ';':
      case ',': out += '_'; break;
      case '(':
      case ')': out += '!'; break;
      default: out += ch;
    }
  }
  return SafeName{std::move(out)};
}

/// Recovers the unique ISCN string behind a SafeName. '_' may stand for ','
/// or ';', so every assignment is enumerated and checked against the grammar
/// and atlas; '!' alternates '(' ')' since short-system parentheses never
/// nest. No preimage or several preimages is an error, never a guess.
inline std::string demangle(const SafeName& name, const BandAtlas& atlas) {
  if (!is_safe_name(name.text)) {
    throw CodecError("not a well-formed safe name: " + name.text);
  }
  std::string_view body = std::string_view(name.text).substr(1);

  std::vector<std::size_t> underscores;
  std::string religated(body);
  bool open = true;
  for (std::size_t i = 0; i < religated.size(); ++i) {
    if (religated[i] == '!') {
      religated[i] = open ? '(' : ')';
      open = !open;
    } else if (religated[i] == '_') {
      underscores.push_back(i);
    }
  }
  if (!open) {
    throw CodecError("no grammatical preimage of " + name.text + ": unbalanced '!'");
  }

  constexpr std::size_t kMaxAmbiguous = 16;
  if (underscores.size() > kMaxAmbiguous) {
    throw CodecError("too many ambiguous characters in " + name.text);
  }

  std::vector<std::string> preimages;
  const std::size_t combinations = std::size_t{1} << underscores.size();
  for (std::size_t mask = 0; mask < combinations; ++mask) {
    std::string candidate = religated;
    for (std::size_t bit = 0; bit < underscores.size(); ++bit) {
      candidate[underscores[bit]] = (mask >> bit) & 1 ? ';' : ',';
    }
    if (parse_karyotype(candidate, atlas).ok()) {
      preimages.push_back(std::move(candidate));
    }
  }

  if (preimages.empty()) {
    throw CodecError("no grammatical preimage of " + name.text);
  }
  if (preimages.size() > 1) {
    std::string message = "ambiguous safe name " + name.text + "; preimages:";
    for (const std::string& s : preimages) message += " " + s;
    throw CodecError(message);
  }
  return preimages.front();
}

}  // namespace karyograph

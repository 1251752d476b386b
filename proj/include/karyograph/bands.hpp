#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "karyograph/errors.hpp"

namespace karyograph {

/// Chromosome identity: autosomes 1-22, the sex chromosomes X and Y, or N for
/// an unknown sex chromosome. N is only meaningful in the 46,XN base karyotype
/// and in event targets synthesized for it; it never carries atlas bands.
class ChromosomeId {
 public:
  static ChromosomeId autosome(int number) {
    if (number < 1 || number > 22) {
      throw Error("autosome number out of range: " + std::to_string(number));
    }
    return ChromosomeId(number);
  }
  static ChromosomeId x() { return ChromosomeId(kX); }
  static ChromosomeId y() { return ChromosomeId(kY); }
  static ChromosomeId unknown_sex() { return ChromosomeId(kN); }

  static std::optional<ChromosomeId> parse(std::string_view text) {
    if (text == "X") return x();
    if (text == "Y") return y();
    if (text == "N") return unknown_sex();
    if (text.empty() || text.size() > 2) return std::nullopt;
    int value = 0;
    for (char ch : text) {
      if (ch < '0' || ch > '9') return std::nullopt;
      value = value * 10 + (ch - '0');
    }
    if (value < 1 || value > 22) return std::nullopt;
    return autosome(value);
  }

  bool is_autosome() const { return code_ <= 22; }
  bool is_sex() const { return code_ == kX || code_ == kY; }
  bool is_x() const { return code_ == kX; }
  bool is_y() const { return code_ == kY; }
  bool is_unknown_sex() const { return code_ == kN; }

  /// "1".."22", "X", "Y", or "N".
  std::string label() const {
    switch (code_) {
      case kX: return "X";
      case kY: return "Y";
      case kN: return "N";
      default: return std::to_string(code_);
    }
  }

  friend auto operator<=>(const ChromosomeId&, const ChromosomeId&) = default;

 private:
  static constexpr int kX = 23;
  static constexpr int kY = 24;
  static constexpr int kN = 25;

  explicit ChromosomeId(int code) : code_(code) {}

  int code_;
};

enum class Arm : std::uint8_t { P, Q };

inline char arm_letter(Arm arm) { return arm == Arm::P ? 'p' : 'q'; }

inline std::optional<Arm> arm_from_letter(char ch) {
  if (ch == 'p') return Arm::P;
  if (ch == 'q') return Arm::Q;
  return std::nullopt;
}

/// Banding resolution: the number of bands visible per haploid set.
enum class Resolution : std::uint16_t {
  R300 = 300,
  R400 = 400,
  R550 = 550,
  R700 = 700,
  R850 = 850,
};

inline constexpr std::array<Resolution, 5> kAllResolutions = {
    Resolution::R300, Resolution::R400, Resolution::R550, Resolution::R700,
    Resolution::R850};

inline int resolution_bands(Resolution r) { return static_cast<int>(r); }

inline std::optional<Resolution> resolution_from_int(int value) {
  for (Resolution r : kAllResolutions) {
    if (static_cast<int>(r) == value) return r;
  }
  return std::nullopt;
}

enum class BandSpecial : std::uint8_t {
  None,        // ordinary stained band
  Centromere,  // p10 / q10 face
  Telomere,    // pter / qter
  WholeArm,    // bare arm reference such as "1q"
};

/// A cytogenetic location: chromosome, arm, then either band digits (region
/// digit, band digit, optional sub-band digits) or a structural special.
struct BandAddress {
  ChromosomeId chromosome;
  Arm arm;
  std::vector<std::uint8_t> digits;
  BandSpecial special;

  BandAddress(ChromosomeId chrom, Arm a, std::vector<std::uint8_t> d = {},
              BandSpecial s = BandSpecial::None)
      : chromosome(chrom), arm(a), digits(std::move(d)), special(s) {
    if (special == BandSpecial::Centromere) {
      digits = {1, 0};
    } else if (special != BandSpecial::None) {
      digits.clear();
    }
  }

  static BandAddress centromere(ChromosomeId chrom, Arm a) {
    return BandAddress(chrom, a, {}, BandSpecial::Centromere);
  }
  static BandAddress telomere(ChromosomeId chrom, Arm a) {
    return BandAddress(chrom, a, {}, BandSpecial::Telomere);
  }
  static BandAddress whole_arm(ChromosomeId chrom, Arm a) {
    return BandAddress(chrom, a, {}, BandSpecial::WholeArm);
  }

  bool is_centromere() const { return special == BandSpecial::Centromere; }
  bool is_telomere() const { return special == BandSpecial::Telomere; }
  bool is_whole_arm() const { return special == BandSpecial::WholeArm; }

  /// Arm-local text without the chromosome: "q42.12", "q10", "qter", "q".
  std::string arm_text() const {
    std::string out(1, arm_letter(arm));
    if (special == BandSpecial::Telomere) {
      out += "ter";
      return out;
    }
    for (std::size_t i = 0; i < digits.size(); ++i) {
      if (i == 2) out += '.';  // sub-band digits follow a single dot
      out += static_cast<char>('0' + digits[i]);
    }
    return out;
  }

  /// Full text: "1q42.12", "Xp10", "Yqter".
  std::string text() const { return chromosome.label() + arm_text(); }

  friend auto operator<=>(const BandAddress&, const BandAddress&) = default;
};

namespace detail {

struct BandParseOutcome {
  std::optional<BandAddress> address;
  std::size_t error_position = 0;
  std::string error_message;
};

/// Core band-text parser. Accepts an optional embedded chromosome; falls back
/// to `context` when the text starts directly with the arm letter.
inline BandParseOutcome parse_band_text(std::string_view text,
                                        std::optional<ChromosomeId> context) {
  BandParseOutcome out;
  auto fail = [&](std::size_t pos, std::string message) -> BandParseOutcome& {
    out.error_position = pos;
    out.error_message = std::move(message);
    return out;
  };

  if (text.empty()) {
    return fail(0, "empty band text");
  }

  std::size_t pos = 0;
  std::optional<ChromosomeId> chrom;

  // Optional chromosome: one or two leading digits, or X / Y.
  if (text[pos] >= '0' && text[pos] <= '9') {
    std::size_t len = 1;
    if (pos + 1 < text.size() && text[pos + 1] >= '0' && text[pos + 1] <= '9') {
      len = 2;
    }
    chrom = ChromosomeId::parse(text.substr(pos, len));
    if (!chrom) {
      return fail(pos, "invalid chromosome '" + std::string(text.substr(pos, len)) + "'");
    }
    pos += len;
  } else if (text[pos] == 'X' || text[pos] == 'Y') {
    chrom = text[pos] == 'X' ? ChromosomeId::x() : ChromosomeId::y();
    ++pos;
  } else {
    chrom = context;
  }
  if (!chrom) {
    return fail(0, "band text must name a chromosome");
  }

  if (pos >= text.size()) {
    return fail(pos == 0 ? 0 : pos - 1, "missing arm letter");
  }
  std::optional<Arm> arm = arm_from_letter(text[pos]);
  if (!arm) {
    return fail(pos, std::string("expected arm letter 'p' or 'q', found '") + text[pos] + "'");
  }
  ++pos;

  std::string_view rest = text.substr(pos);
  if (rest.empty()) {
    out.address = BandAddress::whole_arm(*chrom, *arm);
    return out;
  }
  if (rest == "ter") {
    out.address = BandAddress::telomere(*chrom, *arm);
    return out;
  }

  std::vector<std::uint8_t> digits;
  std::size_t i = 0;
  while (i < rest.size() && rest[i] >= '0' && rest[i] <= '9') {
    digits.push_back(static_cast<std::uint8_t>(rest[i] - '0'));
    ++i;
  }
  if (digits.empty()) {
    return fail(pos, "expected region digit");
  }
  if (digits.size() == 1) {
    return fail(pos + i, "band digit missing after region digit");
  }
  if (digits.size() > 2) {
    return fail(pos + 2, "expected '.' before sub-band digits");
  }
  if (i < rest.size() && rest[i] == '.') {
    if (digits[0] == 1 && digits[1] == 0) {
      return fail(pos + i, "centromere p10/q10 has no sub-bands");
    }
    ++i;
    std::size_t sub_start = i;
    while (i < rest.size() && rest[i] >= '0' && rest[i] <= '9') {
      digits.push_back(static_cast<std::uint8_t>(rest[i] - '0'));
      ++i;
    }
    std::size_t sub_len = i - sub_start;
    if (sub_len == 0) {
      return fail(pos + sub_start, "expected sub-band digits after '.'");
    }
    if (sub_len > 2) {
      return fail(pos + sub_start + 2, "at most two sub-band digits are allowed");
    }
  }
  if (i < rest.size()) {
    return fail(pos + i, std::string("unexpected character '") + rest[i] + "' in band text");
  }

  BandSpecial special = BandSpecial::None;
  if (digits.size() == 2 && digits[0] == 1 && digits[1] == 0) {
    special = BandSpecial::Centromere;
  }
  out.address = BandAddress(*chrom, *arm, std::move(digits), special);
  return out;
}

}  // namespace detail

/// Parses band text that embeds its chromosome, e.g. "1q42.12".
inline BandAddress parse_band(std::string_view text) {
  auto outcome = detail::parse_band_text(text, std::nullopt);
  if (!outcome.address) {
    throw SyntaxError(outcome.error_position, outcome.error_message);
  }
  return *outcome.address;
}

/// Parses band text with a fallback chromosome, so bare "q10" resolves
/// against `context`.
inline BandAddress parse_band(std::string_view text, ChromosomeId context) {
  auto outcome = detail::parse_band_text(text, context);
  if (!outcome.address) {
    throw SyntaxError(outcome.error_position, outcome.error_message);
  }
  return *outcome.address;
}

}  // namespace karyograph

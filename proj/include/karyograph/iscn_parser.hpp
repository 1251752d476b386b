#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "karyograph/band_atlas.hpp"
#include "karyograph/bands.hpp"
#include "karyograph/karyotype_model.hpp"

namespace karyograph {

enum class TokenKind {
  Count,
  SexDesignator,
  Plus,
  Minus,
  EventName,
  OpenParen,
  CloseParen,
  Semicolon,
  Comma,
  BandText,
};

struct IscnToken {
  TokenKind kind;
  std::string lexeme;
  std::size_t position;
};

enum class Severity { Error, Warning };

struct ParseDiagnostic {
  std::size_t position;
  std::string message;
  Severity severity = Severity::Error;
};

struct TokenizeResult {
  std::vector<IscnToken> tokens;
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return diagnostics.empty(); }
};

/// Splits an ISCN short-system string into tokens. Lexemes concatenate back
/// to the input; any unrecognized character stops the scan with an error.
inline TokenizeResult tokenize_iscn(std::string_view text) {
  TokenizeResult out;
  std::size_t pos = 0;
  int depth = 0;
  int commas = 0;
  bool sex_seen = false;

  auto is_digit = [](char ch) { return ch >= '0' && ch <= '9'; };
  auto is_lower = [](char ch) { return ch >= 'a' && ch <= 'z'; };
  auto is_sex_letter = [](char ch) { return ch == 'X' || ch == 'Y' || ch == 'N'; };

  if (pos < text.size() && is_digit(text[pos])) {
    std::size_t start = pos;
    while (pos < text.size() && is_digit(text[pos])) ++pos;
    out.tokens.push_back({TokenKind::Count, std::string(text.substr(start, pos - start)), start});
  } else {
    out.diagnostics.push_back({0, "expected chromosome count", Severity::Error});
    return out;
  }

  while (pos < text.size()) {
    char ch = text[pos];
    if (ch == ',') {
      out.tokens.push_back({TokenKind::Comma, ",", pos});
      ++commas;
      ++pos;
    } else if (ch == ';') {
      out.tokens.push_back({TokenKind::Semicolon, ";", pos});
      ++pos;
    } else if (ch == '+') {
      out.tokens.push_back({TokenKind::Plus, "+", pos});
      ++pos;
    } else if (ch == '-') {
      out.tokens.push_back({TokenKind::Minus, "-", pos});
      ++pos;
    } else if (ch == '(') {
      out.tokens.push_back({TokenKind::OpenParen, "(", pos});
      ++depth;
      ++pos;
    } else if (ch == ')') {
      if (depth == 0) {
        out.diagnostics.push_back({pos, "unmatched ')'", Severity::Error});
        return out;
      }
      out.tokens.push_back({TokenKind::CloseParen, ")", pos});
      --depth;
      ++pos;
    } else if (depth > 0) {
      std::size_t start = pos;
      while (pos < text.size() &&
             (is_digit(text[pos]) || is_lower(text[pos]) || text[pos] == '.' ||
              text[pos] == 'X' || text[pos] == 'Y')) {
        ++pos;
      }
      if (pos == start) {
        out.diagnostics.push_back(
            {pos, std::string("unexpected character '") + ch + "'", Severity::Error});
        return out;
      }
      out.tokens.push_back({TokenKind::BandText, std::string(text.substr(start, pos - start)), start});
    } else if (is_sex_letter(ch) || is_digit(ch)) {
      std::size_t start = pos;
      bool all_sex = true;
      while (pos < text.size() && (is_sex_letter(text[pos]) || is_digit(text[pos]))) {
        if (!is_sex_letter(text[pos])) all_sex = false;
        ++pos;
      }
      std::string lexeme(text.substr(start, pos - start));
      bool designator_slot = commas == 1 && !sex_seen;
      if (designator_slot && all_sex) {
        out.tokens.push_back({TokenKind::SexDesignator, std::move(lexeme), start});
        sex_seen = true;
      } else {
        out.tokens.push_back({TokenKind::BandText, std::move(lexeme), start});
      }
    } else if (is_lower(ch)) {
      std::size_t start = pos;
      while (pos < text.size() && is_lower(text[pos])) ++pos;
      out.tokens.push_back({TokenKind::EventName, std::string(text.substr(start, pos - start)), start});
    } else {
      out.diagnostics.push_back(
          {pos, std::string("unexpected character '") + ch + "'", Severity::Error});
      return out;
    }
  }
  return out;
}

struct ParseResult {
  std::optional<Karyotype> karyotype;
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return karyotype.has_value(); }
};

namespace detail {

struct BandListItem {
  BandAddress address;
  std::size_t position;
};

// Consumes one or two arm-local band texts ("q21q31", "p14", "qter").
inline bool split_band_list(std::string_view text, std::size_t base_position,
                            ChromosomeId chrom, std::vector<BandListItem>& out,
                            std::vector<ParseDiagnostic>& diagnostics) {
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != 'p' && text[i] != 'q') {
      diagnostics.push_back({base_position + i,
                             std::string("expected band starting with 'p' or 'q', found '") +
                                 text[i] + "'",
                             Severity::Error});
      return false;
    }
    std::size_t j = i + 1;
    if (text.substr(j, 3) == "ter") {
      j += 3;
    } else {
      while (j < text.size() && ((text[j] >= '0' && text[j] <= '9') || text[j] == '.')) ++j;
    }
    auto outcome = parse_band_text(text.substr(i, j - i), chrom);
    if (!outcome.address) {
      diagnostics.push_back({base_position + i + outcome.error_position,
                             outcome.error_message, Severity::Error});
      return false;
    }
    out.push_back({*outcome.address, base_position + i});
    i = j;
  }
  if (out.empty()) {
    diagnostics.push_back({base_position, "empty breakpoint list", Severity::Error});
    return false;
  }
  if (out.size() > 2) {
    diagnostics.push_back({out[2].position, "at most two breakpoints per list", Severity::Error});
    return false;
  }
  return true;
}

// Orientation of a same-arm breakpoint pair: true when the first breakpoint
// is strictly more proximal, nullopt when the pair does not order (different
// arms, identical bands, containment overlap).
inline std::optional<bool> first_is_proximal(const BandAddress& a, const BandAddress& b) {
  if (a.arm != b.arm) return std::nullopt;
  if (a.is_telomere() || b.is_telomere()) {
    if (a.is_telomere() && b.is_telomere()) return std::nullopt;
    return b.is_telomere();
  }
  std::size_t n = std::min(a.digits.size(), b.digits.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a.digits[i] != b.digits[i]) return a.digits[i] < b.digits[i];
  }
  return std::nullopt;
}

}  // namespace detail

/// Parses one ISCN short-system string against an atlas. Produces either a
/// Karyotype or error diagnostics with character offsets; the chromosome
/// count and sex designator are cross-checked against the events.
inline ParseResult parse_karyotype(std::string_view text, const BandAtlas& atlas) {
  ParseResult result;
  auto fail = [&](std::size_t pos, std::string message) {
    if (pos >= text.size() && !text.empty()) pos = text.size() - 1;
    result.diagnostics.push_back({pos, std::move(message), Severity::Error});
  };

  // Surrounding whitespace is tolerated and stripped; offsets refer to the
  // original string.
  std::size_t begin = text.find_first_not_of(" \t");
  std::size_t end = text.find_last_not_of(" \t");
  if (begin == std::string_view::npos) {
    fail(0, "empty karyotype string");
    return result;
  }
  std::string_view body = text.substr(begin, end - begin + 1);

  TokenizeResult tokens = tokenize_iscn(body);
  if (!tokens.ok()) {
    for (ParseDiagnostic d : tokens.diagnostics) {
      d.position += begin;
      result.diagnostics.push_back(std::move(d));
    }
    return result;
  }

  const std::vector<IscnToken>& toks = tokens.tokens;
  std::size_t cursor = 0;
  auto peek = [&]() -> const IscnToken* {
    return cursor < toks.size() ? &toks[cursor] : nullptr;
  };
  auto take = [&](TokenKind kind) -> const IscnToken* {
    const IscnToken* tok = peek();
    if (tok && tok->kind == kind) {
      ++cursor;
      return tok;
    }
    return nullptr;
  };
  auto here = [&]() -> std::size_t {
    if (cursor < toks.size()) return begin + toks[cursor].position;
    return begin + (toks.empty() ? 0 : toks.back().position + toks.back().lexeme.size());
  };

  const IscnToken* count_tok = take(TokenKind::Count);
  if (!count_tok) {
    fail(here(), "expected chromosome count");
    return result;
  }
  if (count_tok->lexeme.size() > 3) {
    fail(begin + count_tok->position, "implausible chromosome count");
    return result;
  }
  int modal = std::stoi(count_tok->lexeme);

  if (!take(TokenKind::Comma)) {
    fail(here(), "expected ',' after chromosome count");
    return result;
  }
  const IscnToken* sex_tok = take(TokenKind::SexDesignator);
  if (!sex_tok) {
    fail(here(), "expected sex designator (letters X, Y, N)");
    return result;
  }

  std::vector<AbnormalityEvent> events;
  auto push_event = [&](AbnormalityEvent event) {
    if (!events.empty() && events.back().same_shape(event)) {
      events.back().multiplicity += event.multiplicity;
    } else {
      events.push_back(std::move(event));
    }
  };

  auto parse_term_chromosome = [&](const IscnToken& tok) -> std::optional<ChromosomeId> {
    auto chrom = ChromosomeId::parse(tok.lexeme);
    if (!chrom) {
      fail(begin + tok.position, "invalid chromosome '" + tok.lexeme + "'");
      return std::nullopt;
    }
    if (chrom->is_unknown_sex()) {
      fail(begin + tok.position, "chromosome N is not allowed here");
      return std::nullopt;
    }
    return chrom;
  };

  while (peek()) {
    if (!take(TokenKind::Comma)) {
      fail(here(), "expected ',' before next term");
      return result;
    }
    const IscnToken* tok = peek();
    if (!tok) {
      fail(here(), "expected term after ','");
      return result;
    }

    if (tok->kind == TokenKind::Plus || tok->kind == TokenKind::Minus) {
      bool gain = tok->kind == TokenKind::Plus;
      ++cursor;
      const IscnToken* chrom_tok = take(TokenKind::BandText);
      if (!chrom_tok) {
        fail(here(), "expected chromosome after sign");
        return result;
      }
      auto chrom = parse_term_chromosome(*chrom_tok);
      if (!chrom) return result;
      AbnormalityEvent event;
      event.kind = gain ? EventKind::Addition : EventKind::Deletion;
      event.target = *chrom;
      push_event(std::move(event));
      continue;
    }

    if (tok->kind != TokenKind::EventName) {
      fail(begin + tok->position, "expected event or gain/loss term");
      return result;
    }
    ++cursor;
    const std::string& name = tok->lexeme;
    std::size_t name_pos = begin + tok->position;

    static const std::vector<std::string> kKnown = {"del", "add", "dup", "trp", "qdp",
                                                    "inv", "ins", "t", "fis"};
    if (std::find(kKnown.begin(), kKnown.end(), name) == kKnown.end()) {
      fail(name_pos, "unknown event '" + name + "'");
      return result;
    }

    if (!take(TokenKind::OpenParen)) {
      fail(here(), "expected '(' after event name");
      return result;
    }
    std::vector<ChromosomeId> chroms;
    while (true) {
      const IscnToken* chrom_tok = take(TokenKind::BandText);
      if (!chrom_tok) {
        fail(here(), "expected chromosome");
        return result;
      }
      auto chrom = parse_term_chromosome(*chrom_tok);
      if (!chrom) return result;
      chroms.push_back(*chrom);
      if (take(TokenKind::Semicolon)) continue;
      break;
    }
    if (!take(TokenKind::CloseParen)) {
      fail(here(), "expected ')' after chromosome list");
      return result;
    }
    if (chroms.size() > 2) {
      fail(name_pos, "at most two chromosomes per event");
      return result;
    }

    if (!take(TokenKind::OpenParen)) {
      fail(here(), "expected '(' before breakpoint list");
      return result;
    }
    std::vector<std::vector<detail::BandListItem>> lists;
    while (true) {
      const IscnToken* band_tok = take(TokenKind::BandText);
      if (!band_tok) {
        fail(here(), "expected breakpoint band");
        return result;
      }
      if (lists.size() >= chroms.size()) {
        fail(begin + band_tok->position, "more breakpoint lists than chromosomes");
        return result;
      }
      std::vector<detail::BandListItem> items;
      if (!detail::split_band_list(band_tok->lexeme, begin + band_tok->position,
                                   chroms[lists.size()], items, result.diagnostics)) {
        return result;
      }
      lists.push_back(std::move(items));
      if (take(TokenKind::Semicolon)) continue;
      break;
    }
    if (!take(TokenKind::CloseParen)) {
      fail(here(), "expected ')' after breakpoint list");
      return result;
    }
    if (lists.size() != chroms.size()) {
      fail(name_pos, "expected one breakpoint list per chromosome");
      return result;
    }

    // Atlas validation for every breakpoint.
    for (const auto& list : lists) {
      for (const detail::BandListItem& item : list) {
        if (item.address.is_whole_arm()) {
          if (atlas.strata(item.address.chromosome, item.address.arm).empty()) {
            fail(item.position, "chromosome " + item.address.chromosome.label() + " arm " +
                                    std::string(1, arm_letter(item.address.arm)) +
                                    " has no bands in atlas");
            return result;
          }
        } else if (!atlas.has_band(item.address)) {
          fail(item.position, "band " + item.address.text() + " not in atlas");
          return result;
        }
      }
    }

    auto arity_error = [&](const std::string& message) {
      fail(name_pos, name + ": " + message);
    };

    AbnormalityEvent event;
    if (name == "del" || name == "add" || name == "inv" || name == "dup" ||
        name == "trp" || name == "qdp" || name == "fis") {
      if (chroms.size() != 1) {
        arity_error("takes exactly one chromosome");
        return result;
      }
      const auto& bands = lists[0];
      if (name == "del") {
        event.kind = EventKind::Deletion;
        event.deletion_style =
            bands.size() == 1 ? DeletionStyle::Terminal : DeletionStyle::Interstitial;
      } else if (name == "add") {
        if (bands.size() != 1) {
          arity_error("takes exactly one breakpoint");
          return result;
        }
        event.kind = EventKind::Addition;
      } else if (name == "fis") {
        if (bands.size() != 1) {
          arity_error("takes exactly one breakpoint");
          return result;
        }
        if (!bands[0].address.is_centromere()) {
          fail(bands[0].position, "fission breakpoint must be a centromere face (p10 or q10)");
          return result;
        }
        event.kind = EventKind::Fission;
      } else {
        if (bands.size() != 2) {
          arity_error("takes exactly two breakpoints");
          return result;
        }
        if (name == "inv") {
          event.kind = EventKind::Inversion;
        } else if (name == "trp") {
          event.kind = EventKind::Triplication;
        } else if (name == "qdp") {
          event.kind = EventKind::Quadruplication;
        } else {
          auto proximal = detail::first_is_proximal(bands[0].address, bands[1].address);
          event.kind = !proximal              ? EventKind::Duplication
                       : *proximal            ? EventKind::DirectDuplication
                                              : EventKind::InverseDuplication;
        }
      }
      for (const auto& item : bands) event.breakpoints.push_back(item.address);
    } else if (name == "t") {
      if (chroms.size() != 2) {
        arity_error("takes two chromosomes");
        return result;
      }
      if (lists[0].size() != 1 || lists[1].size() != 1) {
        arity_error("takes one breakpoint per chromosome");
        return result;
      }
      event.kind = EventKind::Translocation;
      event.breakpoints = {lists[0][0].address, lists[1][0].address};
    } else {  // ins
      if (chroms.size() != 2) {
        arity_error("takes two chromosomes (receptor;donor)");
        return result;
      }
      if (lists[0].size() != 1 || lists[1].size() != 2) {
        arity_error("takes one receptor breakpoint and two donor breakpoints");
        return result;
      }
      auto proximal = detail::first_is_proximal(lists[1][0].address, lists[1][1].address);
      event.kind = !proximal              ? EventKind::Insertion
                   : *proximal            ? EventKind::DirectInsertion
                                          : EventKind::InverseInsertion;
      event.breakpoints = {lists[0][0].address, lists[1][0].address, lists[1][1].address};
    }
    push_event(std::move(event));
  }

  // Base inference: the designator plus explicit sex-chromosome losses must
  // reconstruct a two-chromosome base; a lone X or Y implies an inferred loss.
  int dx = 0, dy = 0, dn = 0;
  int last_rank = 0;
  for (char ch : sex_tok->lexeme) {
    int rank = ch == 'X' ? 1 : ch == 'Y' ? 2 : 3;
    if (rank < last_rank) {
      fail(begin + sex_tok->position,
           "sex designator letters must be ordered X, Y, N: '" + sex_tok->lexeme + "'");
      return result;
    }
    last_rank = rank;
    if (ch == 'X') ++dx;
    if (ch == 'Y') ++dy;
    if (ch == 'N') ++dn;
  }
  int lost_x = 0, lost_y = 0;
  for (const AbnormalityEvent& event : events) {
    if (event.kind == EventKind::Deletion && event.target) {
      if (event.target->is_x()) lost_x += event.multiplicity;
      if (event.target->is_y()) lost_y += event.multiplicity;
    }
  }
  int base_x = dx + lost_x;
  int base_y = dy + lost_y;

  std::optional<BaseKaryotype> base;
  std::optional<AbnormalityEvent> inferred;
  std::size_t sex_pos = begin + sex_tok->position;
  if (dn > 0) {
    if (dn == 1 && base_x == 1 && base_y == 0) {
      base = BaseKaryotype::K46XN;
    }
  } else if (base_x == 2 && base_y == 0) {
    base = BaseKaryotype::K46XX;
  } else if (base_x == 1 && base_y == 1) {
    base = BaseKaryotype::K46XY;
  } else if (base_x == 1 && base_y == 0) {
    base = BaseKaryotype::K46XN;
    inferred = AbnormalityEvent{EventKind::Deletion, 1, ChromosomeId::unknown_sex(),
                                {}, std::nullopt, EventOrigin::Inferred};
  } else if (base_x == 0 && base_y == 1) {
    base = BaseKaryotype::K46XY;
    inferred = AbnormalityEvent{EventKind::Deletion, 1, ChromosomeId::x(),
                                {}, std::nullopt, EventOrigin::Inferred};
  }
  if (!base) {
    fail(sex_pos, "cannot infer a 46,XX / 46,XY / 46,XN base from sex designator '" +
                      sex_tok->lexeme + "'; write sex-chromosome gains and losses explicitly");
    return result;
  }
  if (inferred) events.push_back(*inferred);

  Karyotype karyotype{*base, std::move(events), std::string(text)};
  int expected = chromosome_count(karyotype);
  if (expected != modal) {
    fail(begin + count_tok->position,
         "chromosome count " + std::to_string(modal) + " inconsistent with events (expected " +
             std::to_string(expected) + ")");
    return result;
  }

  result.karyotype = std::move(karyotype);
  return result;
}

namespace detail {

inline std::string event_token(EventKind kind) {
  switch (kind) {
    case EventKind::Addition: return "add";
    case EventKind::Deletion: return "del";
    case EventKind::Duplication:
    case EventKind::DirectDuplication:
    case EventKind::InverseDuplication: return "dup";
    case EventKind::Fission: return "fis";
    case EventKind::Insertion:
    case EventKind::DirectInsertion:
    case EventKind::InverseInsertion: return "ins";
    case EventKind::Inversion: return "inv";
    case EventKind::Quadruplication: return "qdp";
    case EventKind::Translocation: return "t";
    default: return "trp";
  }
}

inline std::string render_term(const AbnormalityEvent& event) {
  if (event.target) {
    return (event.kind == EventKind::Addition ? "+" : "-") + event.target->label();
  }
  std::string out = event_token(event.kind);
  const auto& bps = event.breakpoints;
  bool two_chrom = event.kind == EventKind::Translocation ||
                   event.kind == EventKind::Insertion ||
                   event.kind == EventKind::DirectInsertion ||
                   event.kind == EventKind::InverseInsertion;
  out += '(';
  out += bps[0].chromosome.label();
  if (two_chrom) {
    out += ';';
    out += bps[1].chromosome.label();
  }
  out += ")(";
  if (event.kind == EventKind::Translocation) {
    out += bps[0].arm_text();
    out += ';';
    out += bps[1].arm_text();
  } else if (two_chrom) {
    out += bps[0].arm_text();
    out += ';';
    out += bps[1].arm_text();
    out += bps[2].arm_text();
  } else {
    for (const BandAddress& bp : bps) out += bp.arm_text();
  }
  out += ')';
  return out;
}

}  // namespace detail

/// Renders a karyotype back to its canonical ISCN short-system string.
/// parse_karyotype(serialize_karyotype(k)) is structurally equal to k.
inline std::string serialize_karyotype(const Karyotype& k) {
  int nx = 0, ny = 0, nn = 0;
  for (ChromosomeId chrom : base_sex_complement(k.base)) {
    if (chrom.is_x()) ++nx;
    if (chrom.is_y()) ++ny;
    if (chrom.is_unknown_sex()) ++nn;
  }
  for (const AbnormalityEvent& event : k.events) {
    if (event.kind != EventKind::Deletion || !event.target) continue;
    for (int i = 0; i < event.multiplicity; ++i) {
      if (event.target->is_x() && nx > 0) --nx;
      if (event.target->is_y() && ny > 0) --ny;
      if (event.target->is_unknown_sex() && nn > 0) --nn;
    }
  }

  std::string out = std::to_string(chromosome_count(k));
  out += ',';
  out.append(static_cast<std::size_t>(nx), 'X');
  out.append(static_cast<std::size_t>(ny), 'Y');
  out.append(static_cast<std::size_t>(nn), 'N');
  for (const AbnormalityEvent& event : k.events) {
    if (event.origin == EventOrigin::Inferred) continue;
    std::string term = detail::render_term(event);
    for (int i = 0; i < event.multiplicity; ++i) {
      out += ',';
      out += term;
    }
  }
  return out;
}

}  // namespace karyograph

#pragma once

#include <algorithm>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "karyograph/band_atlas.hpp"
#include "karyograph/errors.hpp"
#include "karyograph/iscn_parser.hpp"
#include "karyograph/karyotype_model.hpp"
#include "karyograph/name_codec.hpp"

namespace karyograph {

struct CorpusEntry {
  SafeName name;
  Karyotype karyotype;
};

/// Line-by-line corpus read that keeps per-line outcomes, so callers can
/// report every failure instead of stopping at the first.
struct CorpusLoadReport {
  struct Line {
    int number = 0;
    std::string text;
    SafeName name;
    ParseResult result;
  };
  std::vector<Line> lines;
  std::vector<std::string> duplicate_names;

  bool all_ok() const {
    if (!duplicate_names.empty()) return false;
    return std::all_of(lines.begin(), lines.end(),
                       [](const Line& line) { return line.result.ok(); });
  }
};

inline CorpusLoadReport read_corpus(std::istream& in, const BandAtlas& atlas) {
  CorpusLoadReport report;
  std::set<std::string> seen;
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::string_view view = raw;
    std::size_t begin = view.find_first_not_of(" \t");
    if (begin == std::string_view::npos) continue;
    std::size_t end = view.find_last_not_of(" \t");
    std::string text(view.substr(begin, end - begin + 1));
    if (text.front() == '#') continue;

    CorpusLoadReport::Line line;
    line.number = number;
    line.text = text;
    line.name = mangle(text);
    line.result = parse_karyotype(text, atlas);
    if (!seen.insert(line.name.text).second) {
      report.duplicate_names.push_back(line.name.text);
    }
    report.lines.push_back(std::move(line));
  }
  return report;
}

/// An ordered, uniquely named collection of parsed karyotypes.
class Corpus {
 public:
  static Corpus load(std::istream& in, const BandAtlas& atlas) {
    CorpusLoadReport report = read_corpus(in, atlas);
    if (!report.duplicate_names.empty()) {
      throw CorpusError("duplicate corpus entry: " + report.duplicate_names.front());
    }
    Corpus corpus;
    for (CorpusLoadReport::Line& line : report.lines) {
      if (!line.result.ok()) {
        const ParseDiagnostic& d = line.result.diagnostics.front();
        throw CorpusError("corpus line " + std::to_string(line.number) + " (" + line.text +
                          "): " + d.message);
      }
      corpus.entries_.push_back(CorpusEntry{std::move(line.name),
                                            std::move(*line.result.karyotype)});
    }
    return corpus;
  }

  static Corpus load_string(std::string_view text, const BandAtlas& atlas) {
    std::istringstream in{std::string(text)};
    return load(in, atlas);
  }

  static Corpus load_file(const std::string& path, const BandAtlas& atlas) {
    std::ifstream in(path);
    if (!in) {
      throw Error("cannot open corpus file: " + path);
    }
    return load(in, atlas);
  }

  const std::vector<CorpusEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<CorpusEntry> entries_;
};

/// Entries with at least one event targeting `chrom` or holding a breakpoint
/// on it, in corpus order.
inline std::vector<SafeName> query_abnormal_in(const Corpus& corpus, ChromosomeId chrom,
                                               const BandAtlas& atlas) {
  (void)atlas;  // chromosome membership needs no band lookup
  if (chrom.is_unknown_sex()) {
    throw Error("abnormal-in query target must be a concrete chromosome, not N");
  }
  std::vector<SafeName> out;
  for (const CorpusEntry& entry : corpus.entries()) {
    bool hit = false;
    for (const AbnormalityEvent& event : entry.karyotype.events) {
      if (event.target && *event.target == chrom) hit = true;
      for (const BandAddress& bp : event.breakpoints) {
        if (bp.chromosome == chrom) hit = true;
      }
      if (hit) break;
    }
    if (hit) out.push_back(entry.name);
  }
  return out;
}

/// Entries whose observed copy number of `band` exceeds its baseline.
/// Entries with an undeterminable baseline (sex-chromosome bands under a
/// 46,XN base) never qualify.
inline std::vector<SafeName> query_copy_gain(const Corpus& corpus, const BandAddress& band,
                                             const BandAtlas& atlas) {
  atlas.info(band);  // reject unknown bands up front
  std::vector<SafeName> out;
  for (const CorpusEntry& entry : corpus.entries()) {
    try {
      CopyNumberReport report = copy_number(entry.karyotype, band, atlas);
      if (report.observed > report.baseline) out.push_back(entry.name);
    } catch (const UndeterminedBaselineError&) {
    }
  }
  return out;
}

/// Entries whose affected-band set intersects `band` at the finest stratum.
inline std::vector<SafeName> query_affects(const Corpus& corpus, const BandAddress& band,
                                           const BandAtlas& atlas) {
  const BandAtlas::BandInfo& known = atlas.info(band);
  std::vector<BandAddress> descendants = atlas.finest_descendants(known.address);
  std::vector<SafeName> out;
  for (const CorpusEntry& entry : corpus.entries()) {
    std::set<BandAddress> affected = affected_bands(entry.karyotype, atlas);
    bool hit = std::any_of(descendants.begin(), descendants.end(),
                           [&](const BandAddress& d) { return affected.count(d) > 0; });
    if (hit) out.push_back(entry.name);
  }
  return out;
}

}  // namespace karyograph

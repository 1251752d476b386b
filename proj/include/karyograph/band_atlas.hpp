#pragma once

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "karyograph/bands.hpp"
#include "karyograph/errors.hpp"

namespace karyograph {

enum class Proximity { MoreProximal, Equal, MoreDistal };

/// The ordered, resolution-stratified, containment-structured set of valid
/// bands. Immutable after load; loading fails on any invariant violation, so
/// a loaded atlas can be trusted by every consumer.
class BandAtlas {
 public:
  struct BandInfo {
    BandAddress address;
    std::vector<Resolution> resolutions;  // ascending
    int order_index = 0;                  // position at the finest listed stratum
    std::optional<std::string> parent;    // containment-forest parent text
    std::vector<std::string> children;    // proximal order
  };

  using ArmKey = std::pair<ChromosomeId, Arm>;

  static BandAtlas load(std::istream& in);

  static BandAtlas load_string(std::string_view text) {
    std::istringstream in{std::string(text)};
    return load(in);
  }

  static BandAtlas load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
      throw Error("cannot open atlas file: " + path);
    }
    return load(in);
  }

  bool has_band(const BandAddress& address) const {
    return bands_.count(address.text()) > 0;
  }

  bool has_band_text(const std::string& text) const { return bands_.count(text) > 0; }

  const BandInfo& info(const BandAddress& address) const {
    auto it = bands_.find(address.text());
    if (it == bands_.end()) {
      throw UnknownBandError("band not in atlas: " + address.text());
    }
    return it->second;
  }

  /// True iff `child` lies in the containment subtree of `parent`; reflexive.
  bool contains(const BandAddress& parent, const BandAddress& child) const {
    const BandInfo& p = info(parent);
    const BandInfo& c = info(child);
    return overlaps_downward(p.address, c.address);
  }

  /// Orders two addresses on the same chromosome arm by distance from the
  /// centromere. Overlapping addresses (equal, or one containing the other)
  /// compare Equal. Purely digit-based; atlas membership is not required.
  Proximity compare_proximity(const BandAddress& a, const BandAddress& b) const {
    if (a.chromosome != b.chromosome || a.arm != b.arm) {
      throw IncomparableError("bands on different chromosome arms are not comparable: " +
                              a.text() + " vs " + b.text());
    }
    if (a.is_whole_arm() || b.is_whole_arm()) return Proximity::Equal;
    if (a.is_telomere() && b.is_telomere()) return Proximity::Equal;
    if (a.is_telomere()) return Proximity::MoreDistal;
    if (b.is_telomere()) return Proximity::MoreProximal;
    const auto& da = a.digits;
    const auto& db = b.digits;
    std::size_t n = std::min(da.size(), db.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (da[i] < db[i]) return Proximity::MoreProximal;
      if (da[i] > db[i]) return Proximity::MoreDistal;
    }
    return Proximity::Equal;  // identical or one is a prefix of the other
  }

  /// All bands at stratum `res` that intersect `band`: the unique ancestor
  /// when coarsening, the descendant set when refining, the band itself at
  /// its own stratum. Empty when the arm has no such stratum.
  std::vector<BandAddress> resolve(const BandAddress& band, Resolution res) const {
    const BandInfo& known = info(band);
    std::vector<BandAddress> out;
    for (const BandAddress& candidate : stratum(band.chromosome, band.arm, res)) {
      if (overlaps(known.address, candidate)) out.push_back(candidate);
    }
    return out;
  }

  /// Immediate subdivisions in the containment forest, proximal order.
  std::vector<BandAddress> children(const BandAddress& band) const {
    const BandInfo& entry = info(band);
    std::vector<BandAddress> out;
    out.reserve(entry.children.size());
    for (const std::string& text : entry.children) {
      out.push_back(bands_.at(text).address);
    }
    return out;
  }

  std::optional<BandAddress> parent(const BandAddress& band) const {
    const BandInfo& entry = info(band);
    if (!entry.parent) return std::nullopt;
    return bands_.at(*entry.parent).address;
  }

  /// Ordered proximal-to-distal band list for one (chromosome, arm, resolution);
  /// empty when the stratum is absent.
  const std::vector<BandAddress>& stratum(ChromosomeId chrom, Arm arm, Resolution res) const {
    static const std::vector<BandAddress> kEmpty;
    auto it = strata_.find(ArmKey{chrom, arm});
    if (it == strata_.end()) return kEmpty;
    auto jt = it->second.find(res);
    if (jt == it->second.end()) return kEmpty;
    return jt->second;
  }

  /// Resolutions present for one arm, ascending.
  std::vector<Resolution> strata(ChromosomeId chrom, Arm arm) const {
    std::vector<Resolution> out;
    auto it = strata_.find(ArmKey{chrom, arm});
    if (it == strata_.end()) return out;
    for (const auto& [res, bands] : it->second) out.push_back(res);
    return out;
  }

  std::optional<Resolution> finest(ChromosomeId chrom, Arm arm) const {
    auto present = strata(chrom, arm);
    if (present.empty()) return std::nullopt;
    return present.back();
  }

  /// Finest-stratum bands of `band`'s arm that intersect it.
  std::vector<BandAddress> finest_descendants(const BandAddress& band) const {
    const BandInfo& known = info(band);
    auto res = finest(band.chromosome, band.arm);
    if (!res) return {};
    return resolve(known.address, *res);
  }

  /// Linear pter-to-qter layout of one chromosome with each arm at its finest
  /// stratum: reversed p list followed by the q list.
  std::vector<BandAddress> finest_bands(ChromosomeId chrom) const {
    std::vector<BandAddress> out;
    if (auto res = finest(chrom, Arm::P)) {
      const auto& p = stratum(chrom, Arm::P, *res);
      out.assign(p.rbegin(), p.rend());
    }
    if (auto res = finest(chrom, Arm::Q)) {
      const auto& q = stratum(chrom, Arm::Q, *res);
      out.insert(out.end(), q.begin(), q.end());
    }
    return out;
  }

  /// Chromosomes with at least one band, ascending (1..22, X, Y).
  std::vector<ChromosomeId> chromosomes() const {
    std::vector<ChromosomeId> out;
    for (const auto& [key, unused] : strata_) {
      if (out.empty() || !(out.back() == key.first)) out.push_back(key.first);
    }
    return out;
  }

  const std::map<std::string, BandInfo>& bands() const { return bands_; }

  std::size_t distinct_band_count() const { return bands_.size(); }

 private:
  // Intersection test between two addresses on the same arm. Telomeres match
  // only telomeres; otherwise digit prefixes decide (the centromere's fixed
  // digits 1,0 make it behave like an ordinary minimal band).
  static bool overlaps(const BandAddress& a, const BandAddress& b) {
    if (a.chromosome != b.chromosome || a.arm != b.arm) return false;
    if (a.is_telomere() || b.is_telomere()) {
      return a.is_telomere() && b.is_telomere();
    }
    return is_prefix(a.digits, b.digits) || is_prefix(b.digits, a.digits);
  }

  // One-directional form: does `outer` contain `inner`?
  static bool overlaps_downward(const BandAddress& outer, const BandAddress& inner) {
    if (outer.chromosome != inner.chromosome || outer.arm != inner.arm) return false;
    if (outer.is_telomere() || inner.is_telomere()) {
      return outer.is_telomere() && inner.is_telomere();
    }
    return is_prefix(outer.digits, inner.digits);
  }

  static bool is_prefix(const std::vector<std::uint8_t>& prefix,
                        const std::vector<std::uint8_t>& full) {
    if (prefix.size() > full.size()) return false;
    return std::equal(prefix.begin(), prefix.end(), full.begin());
  }

  // Proximal-to-distal sort key within one arm: telomere last, digits
  // lexicographic otherwise (q10 sorts first because 1,0 precedes 1,1).
  static bool proximal_less(const BandAddress& a, const BandAddress& b) {
    bool ta = a.is_telomere();
    bool tb = b.is_telomere();
    if (ta != tb) return tb;
    if (ta && tb) return false;
    return a.digits < b.digits;
  }

  std::map<std::string, BandInfo> bands_;
  std::map<ArmKey, std::map<Resolution, std::vector<BandAddress>>> strata_;
};

inline BandAtlas BandAtlas::load(std::istream& in) {
  BandAtlas atlas;

  struct Row {
    int line_number;
    BandAddress address;
    std::vector<Resolution> resolutions;
    int order_index;
  };
  std::vector<Row> rows;

  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view view = line;
    if (view.empty() || view.front() == '#') continue;

    auto where = [&] { return "atlas line " + std::to_string(line_number) + ": "; };

    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      std::size_t tab = view.find('\t', start);
      if (tab == std::string_view::npos) {
        fields.push_back(view.substr(start));
        break;
      }
      fields.push_back(view.substr(start, tab - start));
      start = tab + 1;
    }
    if (fields.size() != 5) {
      throw AtlasError(where() + "expected 5 tab-separated fields, found " +
                       std::to_string(fields.size()));
    }

    auto chrom = ChromosomeId::parse(fields[0]);
    if (!chrom || chrom->is_unknown_sex()) {
      throw AtlasError(where() + "invalid chromosome '" + std::string(fields[0]) + "'");
    }
    std::optional<Arm> arm;
    if (fields[1].size() == 1) arm = arm_from_letter(fields[1][0]);
    if (!arm) {
      throw AtlasError(where() + "invalid arm '" + std::string(fields[1]) + "'");
    }

    BandAddress address = [&] {
      try {
        return parse_band(fields[2]);
      } catch (const SyntaxError& e) {
        throw AtlasError(where() + "bad band text '" + std::string(fields[2]) + "': " + e.what());
      }
    }();
    if (address.is_whole_arm()) {
      throw AtlasError(where() + "whole-arm address '" + std::string(fields[2]) +
                       "' is not a band");
    }
    if (!(address.chromosome == *chrom) || address.arm != *arm) {
      throw AtlasError(where() + "band text '" + std::string(fields[2]) +
                       "' disagrees with chromosome/arm columns");
    }

    std::vector<Resolution> resolutions;
    {
      std::string_view rest = fields[3];
      while (!rest.empty()) {
        std::size_t comma = rest.find(',');
        std::string_view item = rest.substr(0, comma);
        int value = 0;
        bool numeric = !item.empty();
        for (char ch : item) {
          if (ch < '0' || ch > '9') { numeric = false; break; }
          value = value * 10 + (ch - '0');
        }
        std::optional<Resolution> res =
            numeric ? resolution_from_int(value) : std::nullopt;
        if (!res) {
          throw AtlasError(where() + "unknown resolution value '" + std::string(item) + "'");
        }
        if (std::find(resolutions.begin(), resolutions.end(), *res) != resolutions.end()) {
          throw AtlasError(where() + "duplicate resolution " + std::to_string(value));
        }
        resolutions.push_back(*res);
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
      }
      if (resolutions.empty()) {
        throw AtlasError(where() + "empty resolution list");
      }
      std::sort(resolutions.begin(), resolutions.end());
    }

    int order_index = -1;
    {
      std::string_view item = fields[4];
      bool numeric = !item.empty();
      int value = 0;
      for (char ch : item) {
        if (ch < '0' || ch > '9') { numeric = false; break; }
        value = value * 10 + (ch - '0');
      }
      if (!numeric) {
        throw AtlasError(where() + "invalid order index '" + std::string(item) + "'");
      }
      order_index = value;
    }

    std::string text = address.text();
    if (atlas.bands_.count(text) > 0) {
      throw AtlasError(where() + "duplicate band " + text);
    }
    atlas.bands_.emplace(text, BandInfo{address, resolutions, order_index, std::nullopt, {}});
    rows.push_back(Row{line_number, address, resolutions, order_index});
  }

  // Assemble strata and sort proximal to distal.
  for (const Row& row : rows) {
    for (Resolution res : row.resolutions) {
      atlas.strata_[ArmKey{row.address.chromosome, row.address.arm}][res].push_back(row.address);
    }
  }
  for (auto& [key, by_res] : atlas.strata_) {
    for (auto& [res, list] : by_res) {
      std::sort(list.begin(), list.end(), proximal_less);
    }
  }

  // Order-index cross-check at each band's finest listed stratum.
  for (const auto& [text, entry] : atlas.bands_) {
    Resolution finest_listed = entry.resolutions.back();
    const auto& list = atlas.stratum(entry.address.chromosome, entry.address.arm, finest_listed);
    auto it = std::find(list.begin(), list.end(), entry.address);
    int position = static_cast<int>(it - list.begin());
    if (position != entry.order_index) {
      throw AtlasError("out-of-order proximity index for " + text + ": file says " +
                       std::to_string(entry.order_index) + ", proximal order gives " +
                       std::to_string(position));
    }
  }

  // Stratum-ancestor checks: every band needs exactly one ancestor at every
  // coarser stratum of its arm, a listing at every intermediate stratum it
  // spans, and at least one descendant at every finer stratum.
  for (const auto& [text, entry] : atlas.bands_) {
    const BandAddress& band = entry.address;
    Resolution coarsest_listed = entry.resolutions.front();
    Resolution finest_listed = entry.resolutions.back();
    for (Resolution res : atlas.strata(band.chromosome, band.arm)) {
      bool listed = std::find(entry.resolutions.begin(), entry.resolutions.end(), res) !=
                    entry.resolutions.end();
      if (res < coarsest_listed) {
        int ancestors = 0;
        for (const BandAddress& candidate : atlas.stratum(band.chromosome, band.arm, res)) {
          if (overlaps_downward(candidate, band)) ++ancestors;
        }
        if (ancestors == 0) {
          throw AtlasError("orphan band " + text + ": no ancestor at resolution " +
                           std::to_string(resolution_bands(res)));
        }
        if (ancestors > 1) {
          throw AtlasError("band " + text + " has " + std::to_string(ancestors) +
                           " ancestors at resolution " + std::to_string(resolution_bands(res)));
        }
      } else if (res > finest_listed) {
        bool covered = false;
        for (const BandAddress& candidate : atlas.stratum(band.chromosome, band.arm, res)) {
          if (overlaps_downward(band, candidate)) { covered = true; break; }
        }
        if (!covered) {
          throw AtlasError("band " + text + " vanishes at resolution " +
                           std::to_string(resolution_bands(res)));
        }
      } else if (!listed) {
        throw AtlasError("band " + text + " skips intermediate resolution " +
                         std::to_string(resolution_bands(res)));
      }
    }
  }

  // Containment forest: parent is the longest proper digit prefix present.
  for (auto& [text, entry] : atlas.bands_) {
    const BandAddress& band = entry.address;
    if (band.is_telomere()) continue;
    for (std::size_t len = band.digits.size(); len-- > 1;) {
      BandAddress candidate(band.chromosome, band.arm,
                            std::vector<std::uint8_t>(band.digits.begin(),
                                                      band.digits.begin() + len));
      auto it = atlas.bands_.find(candidate.text());
      if (it != atlas.bands_.end()) {
        std::size_t extension = band.digits.size() - len;
        if (extension > 2) {
          throw AtlasError("band " + text + " is not an immediate subdivision of " +
                           candidate.text());
        }
        entry.parent = candidate.text();
        it->second.children.push_back(text);
        break;
      }
    }
  }
  for (auto& [text, entry] : atlas.bands_) {
    std::sort(entry.children.begin(), entry.children.end(),
              [&](const std::string& a, const std::string& b) {
                return proximal_less(atlas.bands_.at(a).address, atlas.bands_.at(b).address);
              });

    // Sibling numbering: first extension digits are 1..k; within a shared
    // first digit, second digits are 1..m.
    if (entry.children.empty()) continue;
    std::size_t parent_len = entry.address.digits.size();
    std::set<int> firsts;
    std::map<int, std::set<int>> seconds;
    for (const std::string& child_text : entry.children) {
      const auto& child = atlas.bands_.at(child_text).address;
      int first = child.digits[parent_len];
      firsts.insert(first);
      if (child.digits.size() == parent_len + 2) {
        seconds[first].insert(child.digits[parent_len + 1]);
      }
    }
    auto contiguous_from_one = [](const std::set<int>& values) {
      int expected = 1;
      for (int v : values) {
        if (v != expected) return false;
        ++expected;
      }
      return true;
    };
    if (!contiguous_from_one(firsts)) {
      throw AtlasError("sub-bands of " + text + " are not numbered contiguously from 1");
    }
    for (const auto& [first, group] : seconds) {
      if (!contiguous_from_one(group)) {
        throw AtlasError("sub-bands of " + text + " are not numbered contiguously from 1");
      }
    }
  }

  return atlas;
}

}  // namespace karyograph

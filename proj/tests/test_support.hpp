#pragma once

// Shared fixtures for the karyograph test suites: bundled data loading and
// the guaranteed-invalid atlas mutation generator used by the invariant
// property tests.

#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "karyograph/band_atlas.hpp"
#include "karyograph/iscn_parser.hpp"

namespace testsupport {

inline std::string data_path(const std::string& name) {
  return std::string(KARYOGRAPH_DATA_DIR) + "/" + name;
}

inline std::string golden_path(const std::string& name) {
  return std::string(KARYOGRAPH_GOLDEN_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline const karyograph::BandAtlas& desk_atlas() {
  static const karyograph::BandAtlas atlas =
      karyograph::BandAtlas::load_file(data_path("desk_atlas.tsv"));
  return atlas;
}

inline std::vector<std::string> desk_corpus_lines() {
  std::ifstream in(data_path("desk_corpus.iscn"));
  if (!in) throw std::runtime_error("cannot open desk corpus");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    lines.push_back(line);
  }
  return lines;
}

inline karyograph::Karyotype parse_or_fail(const std::string& text) {
  karyograph::ParseResult result = karyograph::parse_karyotype(text, desk_atlas());
  if (!result.ok()) {
    std::string message = "parse failed for '" + text + "':";
    for (const auto& d : result.diagnostics) message += " " + d.message;
    throw std::runtime_error(message);
  }
  return *result.karyotype;
}

// --- atlas mutation generator ------------------------------------------------

struct AtlasRow {
  std::size_t line_index;  // into the raw line vector
  std::string chrom, arm, text, resolutions, order_index;
};

struct AtlasFileModel {
  std::vector<std::string> lines;
  std::vector<AtlasRow> rows;

  static AtlasFileModel parse(const std::string& content) {
    AtlasFileModel model;
    std::istringstream in(content);
    std::string line;
    while (std::getline(in, line)) model.lines.push_back(line);
    for (std::size_t i = 0; i < model.lines.size(); ++i) {
      const std::string& l = model.lines[i];
      if (l.empty() || l.front() == '#') continue;
      std::vector<std::string> fields;
      std::size_t start = 0;
      while (true) {
        std::size_t tab = l.find('\t', start);
        fields.push_back(l.substr(start, tab == std::string::npos ? tab : tab - start));
        if (tab == std::string::npos) break;
        start = tab + 1;
      }
      if (fields.size() != 5) throw std::runtime_error("bad atlas fixture line");
      model.rows.push_back(AtlasRow{i, fields[0], fields[1], fields[2], fields[3], fields[4]});
    }
    return model;
  }

  std::string render_with(const AtlasRow& row) const {
    std::vector<std::string> out = lines;
    out[row.line_index] =
        row.chrom + "\t" + row.arm + "\t" + row.text + "\t" + row.resolutions + "\t" + row.order_index;
    std::string joined;
    for (const std::string& l : out) {
      joined += l;
      joined += '\n';
    }
    return joined;
  }

  bool has_digit_relative(const AtlasRow& candidate) const {
    // parent: another row whose text is the candidate minus its trailing
    // digits; descendant: another row extending the candidate's digits.
    for (const AtlasRow& other : rows) {
      if (other.text == candidate.text) continue;
      if (candidate.text.size() > other.text.size() &&
          candidate.text.compare(0, other.text.size(), other.text) == 0 &&
          other.text.find("ter") == std::string::npos) {
        return true;  // other is a digit-prefix parent
      }
      if (other.text.size() > candidate.text.size() &&
          other.text.compare(0, candidate.text.size(), candidate.text) == 0) {
        return true;  // other extends candidate
      }
    }
    return false;
  }
};

/// Produces file content that violates exactly one atlas invariant: duplicate
/// band text, scrambled order index, unknown resolution, arm or chromosome
/// column disagreeing with the band text, or a renamed sub-band that breaks
/// sibling numbering / stratum ancestry.
inline std::string mutated_atlas_content(const AtlasFileModel& model, std::mt19937& rng) {
  auto pick_row = [&]() -> const AtlasRow& {
    std::uniform_int_distribution<std::size_t> dist(0, model.rows.size() - 1);
    return model.rows[dist(rng)];
  };

  while (true) {
    std::uniform_int_distribution<int> kind_dist(0, 5);
    int kind = kind_dist(rng);
    AtlasRow row = pick_row();
    switch (kind) {
      case 0: {  // duplicate band text
        const AtlasRow& donor = pick_row();
        if (donor.text == row.text) continue;
        row.text = donor.text;
        return model.render_with(row);
      }
      case 1: {  // out-of-order proximity index
        std::uniform_int_distribution<int> bump(1, 3);
        row.order_index = std::to_string(std::stoi(row.order_index) + bump(rng));
        return model.render_with(row);
      }
      case 2: {  // unknown resolution value
        row.resolutions = rng() % 2 == 0 ? "999" : row.resolutions + ",999";
        return model.render_with(row);
      }
      case 3: {  // arm column disagrees with the band text
        row.arm = row.arm == "p" ? "q" : "p";
        return model.render_with(row);
      }
      case 4: {  // chromosome column disagrees with the band text
        if (row.chrom == "X") {
          row.chrom = "Y";
        } else if (row.chrom == "Y") {
          row.chrom = "X";
        } else {
          row.chrom = std::to_string(std::stoi(row.chrom) % 22 + 1);
        }
        return model.render_with(row);
      }
      default: {  // rename a sub-band digit to 9
        bool is_subband = row.text.find('.') != std::string::npos;
        char last = row.text.back();
        if (!is_subband || last < '0' || last > '9' || last == '9') continue;
        if (!model.has_digit_relative(row)) continue;
        row.text.back() = '9';
        return model.render_with(row);
      }
    }
  }
}

}  // namespace testsupport

// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Tolerances and runtime budgets are pinned in code.

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "karyograph/band_atlas.hpp"
#include "karyograph/iscn_parser.hpp"
#include "karyograph/karyotype_model.hpp"
#include "karyograph/name_codec.hpp"
#include "karyograph/ontology_export.hpp"
#include "karyograph/query_engine.hpp"
#include "oracle.hpp"
#include "test_support.hpp"

using namespace karyograph;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool condition, const std::string& message) {
    if (!condition && pass) {
      pass = false;
      detail = message;
    }
  }
};

using Criterion = std::function<void(Outcome&)>;

double run_timed(const Criterion& criterion, Outcome& outcome) {
  auto start = std::chrono::steady_clock::now();
  criterion(outcome);
  auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(stop - start).count();
}

std::vector<std::string> corpus_lines() { return testsupport::desk_corpus_lines(); }

const BandAtlas& atlas() { return testsupport::desk_atlas(); }

const Corpus& corpus() {
  static const Corpus c =
      Corpus::load_file(testsupport::data_path("desk_corpus.iscn"), atlas());
  return c;
}

// 1. Corpus round trip, all 13 event kinds, < 1 s.
void criterion_round_trip(Outcome& out) {
  auto lines = corpus_lines();
  out.require(lines.size() >= 20, "corpus has fewer than 20 entries");
  std::set<EventKind> kinds;
  for (const std::string& line : lines) {
    ParseResult result = parse_karyotype(line, atlas());
    out.require(result.ok(), "corpus entry failed to parse: " + line);
    if (!result.ok()) return;
    for (const AbnormalityEvent& event : result.karyotype->events) kinds.insert(event.kind);
    std::string serialized = serialize_karyotype(*result.karyotype);
    out.require(serialized == line,
                "round trip broke: " + line + " -> " + serialized);
    ParseResult again = parse_karyotype(serialized, atlas());
    out.require(again.ok() && structurally_equal(*again.karyotype, *result.karyotype),
                "reparse not structurally equal: " + line);
  }
  out.require(kinds.size() == kAllEventKinds.size(),
              "corpus covers only " + std::to_string(kinds.size()) + " of 13 event kinds");
}

// 2. Paper example fidelity.
void criterion_paper_examples(Outcome& out) {
  ParseResult male = parse_karyotype("45,X,-Y", atlas());
  out.require(male.ok(), "45,X,-Y failed to parse");
  if (male.ok()) {
    const Karyotype& k = *male.karyotype;
    out.require(k.base == BaseKaryotype::K46XY, "45,X,-Y base is not 46,XY");
    out.require(k.events.size() == 1 && k.events[0].kind == EventKind::Deletion &&
                    k.events[0].target && k.events[0].target->is_y() &&
                    k.events[0].breakpoints.empty(),
                "45,X,-Y is not one whole-Y deletion");
    out.require(classify_sex(k) == SexClass::Male, "45,X,-Y not classified Male");
  }

  ParseResult turner = parse_karyotype("45,X", atlas());
  out.require(turner.ok(), "45,X failed to parse");
  if (turner.ok()) {
    const Karyotype& k = *turner.karyotype;
    out.require(k.base == BaseKaryotype::K46XN, "45,X base is not 46,XN");
    out.require(k.events.size() == 1 && k.events[0].kind == EventKind::Deletion &&
                    k.events[0].target && k.events[0].target->is_unknown_sex() &&
                    k.events[0].multiplicity == 1,
                "45,X is not one deletion of an unknown sex chromosome");
    out.require(classify_sex(k) == SexClass::Undetermined, "45,X not Undetermined");
  }

  ParseResult female = parse_karyotype("46,XX", atlas());
  out.require(female.ok() && classify_sex(*female.karyotype) == SexClass::Female,
              "46,XX not classified Female");
}

// 3. Mangling rules, demangle round trip, zero collisions.
void criterion_mangling(Outcome& out) {
  out.require(mangle("45,X").text == "k45_X", "mangle(45,X) != k45_X");
  std::set<std::string> names;
  for (const std::string& line : corpus_lines()) {
    SafeName name = mangle(line);
    out.require(names.insert(name.text).second, "mangle collision on " + name.text);
    std::string back;
    try {
      back = demangle(name, atlas());
    } catch (const Error& e) {
      out.require(false, std::string("demangle failed: ") + e.what());
      return;
    }
    out.require(back == line, "demangle(mangle) broke: " + line + " -> " + back);
  }
}

// 4. Atlas invariants, errata regressions, >= 50 killing mutations.
void criterion_atlas_invariants(Outcome& out) {
  const BandAtlas& a = atlas();
  out.require(a.has_band(parse_band("Xq12")), "Xq12 missing");
  const auto& yq112 = a.info(parse_band("Yq11.2"));
  out.require(std::find(yq112.resolutions.begin(), yq112.resolutions.end(),
                        Resolution::R300) != yq112.resolutions.end(),
              "Yq11.2 missing at the 300-band resolution");

  auto content = testsupport::read_file(testsupport::data_path("desk_atlas.tsv"));
  auto model = testsupport::AtlasFileModel::parse(content);
  std::mt19937 rng(19710401);
  for (int i = 0; i < 50; ++i) {
    std::string mutated = testsupport::mutated_atlas_content(model, rng);
    bool failed = false;
    try {
      BandAtlas::load_string(mutated);
    } catch (const AtlasError&) {
      failed = true;
    }
    out.require(failed, "mutation #" + std::to_string(i) + " loaded successfully");
  }
}

// 5. Sub-band structure around 1q42.
void criterion_subband_structure(Outcome& out) {
  const BandAtlas& a = atlas();
  auto texts = [](const std::vector<BandAddress>& bands) {
    std::vector<std::string> out_texts;
    for (const BandAddress& band : bands) out_texts.push_back(band.text());
    return out_texts;
  };
  out.require(texts(a.children(parse_band("1q42"))) ==
                  std::vector<std::string>{"1q42.1", "1q42.2", "1q42.3"},
              "children(1q42) wrong");
  out.require(texts(a.children(parse_band("1q42.1"))) ==
                  std::vector<std::string>{"1q42.11", "1q42.12", "1q42.13"},
              "children(1q42.1) wrong");
  out.require(a.compare_proximity(parse_band("1q42.1"), parse_band("1q42.2")) ==
                  Proximity::MoreProximal,
              "1q42.1 not more proximal than 1q42.2");
}

// 6. Oracle equivalence on the full corpus x every desk-atlas band, < 10 s.
void criterion_oracle_equivalence(Outcome& out) {
  const BandAtlas& a = atlas();
  const Corpus& c = corpus();

  for (const auto& entry : c.entries()) {
    std::set<std::string> expected = oracle::affected(entry.karyotype, a);
    std::set<std::string> actual;
    for (const BandAddress& band : affected_bands(entry.karyotype, a)) {
      actual.insert(band.text());
    }
    out.require(actual == expected, "affected_bands mismatch for " + entry.name.text);

    for (const auto& [text, info] : a.bands()) {
      auto expected_count = oracle::copy_number(entry.karyotype, info.address, a);
      std::optional<CopyNumberReport> report;
      try {
        report = copy_number(entry.karyotype, info.address, a);
      } catch (const UndeterminedBaselineError&) {
      }
      out.require(report.has_value() == expected_count.has_value(),
                  "undetermined-baseline disagreement: " + entry.name.text + " x " + text);
      if (report && expected_count) {
        out.require(report->baseline == expected_count->baseline &&
                        report->observed == expected_count->observed,
                    "copy_number mismatch: " + entry.name.text + " x " + text);
      }
      if (!out.pass) return;
    }
  }

  auto names = [](const std::vector<SafeName>& list) {
    std::vector<std::string> out_names;
    for (const SafeName& name : list) out_names.push_back(name.text);
    return out_names;
  };
  for (int n = 1; n <= 22; ++n) {
    ChromosomeId chrom = ChromosomeId::autosome(n);
    out.require(names(query_abnormal_in(c, chrom, a)) == oracle::scan_abnormal_in(c, chrom),
                "abnormal-in mismatch on chromosome " + chrom.label());
  }
  for (ChromosomeId chrom : {ChromosomeId::x(), ChromosomeId::y()}) {
    out.require(names(query_abnormal_in(c, chrom, a)) == oracle::scan_abnormal_in(c, chrom),
                "abnormal-in mismatch on chromosome " + chrom.label());
  }
  for (const auto& [text, info] : a.bands()) {
    out.require(names(query_copy_gain(c, info.address, a)) ==
                    oracle::scan_copy_gain(c, info.address, a),
                "copy-gain mismatch on " + text);
    out.require(names(query_affects(c, info.address, a)) ==
                    oracle::scan_affects(c, info.address, a),
                "affects mismatch on " + text);
    if (!out.pass) return;
  }
}

// 7. Balanced events: copy numbers unchanged, affected grows by the span.
void criterion_balanced_property(Outcome& out) {
  const BandAtlas& a = atlas();
  std::mt19937 rng(46);

  auto pick_chromosome = [&](const std::set<std::string>& used) {
    static const std::vector<std::string> pool = {"1", "2", "5", "X"};
    while (true) {
      const std::string& label = pool[rng() % pool.size()];
      if (used.count(label) == 0) return *ChromosomeId::parse(label);
    }
  };
  auto pick_band = [&](ChromosomeId chrom) {
    std::vector<BandAddress> candidates;
    for (const auto& [text, info] : a.bands()) {
      if (info.address.chromosome == chrom && !info.address.is_telomere() &&
          !info.address.is_centromere()) {
        candidates.push_back(info.address);
      }
    }
    return candidates[rng() % candidates.size()];
  };

  for (int trial = 0; trial < 100; ++trial) {
    std::set<std::string> used;
    Karyotype k;
    k.base = rng() % 2 == 0 ? BaseKaryotype::K46XX : BaseKaryotype::K46XY;
    int n_events = static_cast<int>(rng() % 3);
    for (int i = 0; i < n_events; ++i) {
      ChromosomeId chrom = pick_chromosome(used);
      used.insert(chrom.label());
      AbnormalityEvent event;
      switch (rng() % 3) {
        case 0:
          event.kind = rng() % 2 == 0 ? EventKind::Addition : EventKind::Deletion;
          event.target = chrom;
          break;
        case 1:
          event.kind = EventKind::Deletion;
          event.breakpoints = {pick_band(chrom)};
          event.deletion_style = DeletionStyle::Terminal;
          break;
        default:
          event.kind = EventKind::Duplication;
          event.breakpoints = {pick_band(chrom), pick_band(chrom)};
          break;
      }
      k.events.push_back(event);
    }

    AbnormalityEvent balanced;
    switch (rng() % 4) {
      case 0: {
        ChromosomeId chrom = pick_chromosome(used);
        used.insert(chrom.label());
        balanced.kind = EventKind::Inversion;
        balanced.breakpoints = {pick_band(chrom), pick_band(chrom)};
        break;
      }
      case 1: {
        ChromosomeId x = pick_chromosome(used);
        used.insert(x.label());
        ChromosomeId y = pick_chromosome(used);
        used.insert(y.label());
        balanced.kind = EventKind::Translocation;
        balanced.breakpoints = {pick_band(x), pick_band(y)};
        break;
      }
      case 2: {
        ChromosomeId receptor = pick_chromosome(used);
        used.insert(receptor.label());
        ChromosomeId donor = pick_chromosome(used);
        used.insert(donor.label());
        balanced.kind = EventKind::Insertion;
        balanced.breakpoints = {pick_band(receptor), pick_band(donor), pick_band(donor)};
        break;
      }
      default: {
        ChromosomeId chrom = pick_chromosome(used);
        used.insert(chrom.label());
        balanced.kind = EventKind::Fission;
        balanced.breakpoints = {BandAddress::centromere(chrom, Arm::P)};
        break;
      }
    }

    Karyotype extended = k;
    extended.events.push_back(balanced);
    Karyotype span_only{k.base, {balanced}, ""};

    std::set<BandAddress> before = affected_bands(k, a);
    std::set<BandAddress> after = affected_bands(extended, a);
    std::set<BandAddress> span = affected_bands(span_only, a);
    std::set<BandAddress> expected = before;
    expected.insert(span.begin(), span.end());
    out.require(after == expected, "trial " + std::to_string(trial) +
                                       ": affected set is not before + span");
    out.require(after.size() > before.size(),
                "trial " + std::to_string(trial) + ": affected set did not grow");

    for (const auto& [text, info] : a.bands()) {
      CopyNumberReport base_report = copy_number(k, info.address, a);
      CopyNumberReport ext_report = copy_number(extended, info.address, a);
      out.require(base_report.baseline == ext_report.baseline &&
                      base_report.observed == ext_report.observed,
                  "trial " + std::to_string(trial) + ": copy number changed at " + text);
      if (!out.pass) return;
    }
  }
}

// 8. OWL export: determinism, entity closure, golden file, count formula, < 1 s.
void criterion_owl_export(Outcome& out) {
  const BandAtlas& a = atlas();
  const Corpus& c = corpus();

  std::string first = export_ontology_string(a, c);
  std::string second = export_ontology_string(a, c);
  out.require(first == second, "export is not byte-identical across runs");

  std::set<std::string> declared;
  std::vector<std::string> lines;
  {
    std::istringstream in(first);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    std::regex decl(R"(Declaration\((?:Class|ObjectProperty)\(<([^>]+)>\)\))");
    for (const std::string& l : lines) {
      std::smatch m;
      if (std::regex_match(l, m, decl)) declared.insert(m[1]);
    }
  }
  std::regex reference(R"(<([^>]+)>)");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    for (std::sregex_iterator it(lines[i].begin(), lines[i].end(), reference), end; it != end;
         ++it) {
      if (declared.count((*it)[1]) == 0) {
        out.require(false, "undeclared entity reference: " + std::string((*it)[1]));
        return;
      }
    }
  }

  Corpus single = Corpus::load_string("45,X\n", a);
  std::string document = export_ontology_string(a, single);
  std::string golden = testsupport::read_file(testsupport::golden_path("k45_X.ofn"));
  out.require(document == golden, "45,X document does not match the golden file");

  std::size_t class_declarations = 0;
  for (const std::string& line : lines) {
    if (line.rfind("Declaration(Class(", 0) == 0) ++class_declarations;
  }
  std::set<std::string> file_bands;
  {
    std::istringstream in(testsupport::read_file(testsupport::data_path("desk_atlas.tsv")));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line.front() == '#') continue;
      std::size_t first_tab = line.find('\t');
      std::size_t second_tab = line.find('\t', first_tab + 1);
      std::size_t third_tab = line.find('\t', second_tab + 1);
      file_bands.insert(line.substr(second_tab + 1, third_tab - second_tab - 1));
    }
  }
  out.require(class_declarations ==
                  skeleton_class_count() + file_bands.size() + corpus_lines().size(),
              "class count formula violated: " + std::to_string(class_declarations) +
                  " declared vs " + std::to_string(skeleton_class_count()) + "+" +
                  std::to_string(file_bands.size()) + "+" +
                  std::to_string(corpus_lines().size()));
}

// 9. Count consistency.
void criterion_count_consistency(Outcome& out) {
  for (const std::string& line : corpus_lines()) {
    ParseResult result = parse_karyotype(line, atlas());
    out.require(result.ok(), "corpus entry failed to parse: " + line);
    if (!result.ok()) return;
    int modal = std::stoi(line.substr(0, line.find(',')));
    out.require(chromosome_count(*result.karyotype) == modal,
                "chromosome_count != modal number for " + line);
  }
  ParseResult bad = parse_karyotype("47,XY", atlas());
  out.require(!bad.ok(), "47,XY was accepted");
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    Criterion criterion;
    double budget_seconds;  // 0 = no budget
  };
  const std::vector<Entry> entries = {
      {"corpus round trip (all 13 event kinds)", criterion_round_trip, 1.0},
      {"paper example fidelity (45,X,-Y / 45,X / 46,XX)", criterion_paper_examples, 0.0},
      {"mangling rules and demangle round trip", criterion_mangling, 0.0},
      {"atlas invariants and errata regressions", criterion_atlas_invariants, 0.0},
      {"sub-band structure around 1q42", criterion_subband_structure, 0.0},
      {"oracle equivalence (copy number, affected bands, queries)",
       criterion_oracle_equivalence, 10.0},
      {"balanced events preserve copy number", criterion_balanced_property, 0.0},
      {"OWL export determinism, closure, golden file, class count", criterion_owl_export, 1.0},
      {"chromosome count consistency", criterion_count_consistency, 0.0},
  };

  int failures = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    Outcome outcome;
    double seconds = 0.0;
    try {
      seconds = run_timed(entries[i].criterion, outcome);
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    if (entries[i].budget_seconds > 0 && seconds > entries[i].budget_seconds) {
      outcome.pass = false;
      outcome.detail = "runtime " + std::to_string(seconds) + "s exceeds budget";
    }
    std::ostringstream line;
    line << "[" << i + 1 << "] " << (outcome.pass ? "PASS" : "FAIL") << " "
         << entries[i].name;
    if (entries[i].budget_seconds > 0) {
      line << " (" << std::fixed << seconds << "s)";
    }
    if (!outcome.pass) line << " - " << outcome.detail;
    std::cout << line.str() << "\n";
    if (!outcome.pass) ++failures;
  }
  std::cout << "ACCEPTANCE: " << entries.size() - failures << "/" << entries.size()
            << " criteria passed\n";
  return failures == 0 ? 0 : 1;
}

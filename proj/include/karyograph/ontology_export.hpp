#pragma once

#include <algorithm>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "karyograph/band_atlas.hpp"
#include "karyograph/bands.hpp"
#include "karyograph/errors.hpp"
#include "karyograph/karyotype_model.hpp"
#include "karyograph/name_codec.hpp"
#include "karyograph/query_engine.hpp"

namespace karyograph {

inline constexpr const char* kOntologyIri = "http://www.purl.org/ontolink/karyotype/";

/// Entity reference as a full IRI; mangled names carry '!' and '+', which
/// are legal IRI characters but not legal in abbreviated prefixed names.
inline std::string entity_iri(const std::string& name) {
  return "<" + std::string(kOntologyIri) + name + ">";
}

/// Band class name in the Hu<chrom>Band<arm><digits> style, sub-band dots
/// rendered as underscores: 2p21 -> Hu2Bandp21, 1q42.1 -> Hu1Bandq42_1.
inline std::string band_class_name(const BandAddress& band) {
  std::string text = band.arm_text();
  for (char& ch : text) {
    if (ch == '.') ch = '_';
  }
  return "Hu" + band.chromosome.label() + "Band" + text;
}

/// HumanChromosome1..22 / X / Y; the unknown sex chromosome maps to the
/// HumanSexChromosome class itself.
inline std::string chromosome_class_name(ChromosomeId chrom) {
  if (chrom.is_unknown_sex()) return "HumanSexChromosome";
  return "HumanChromosome" + chrom.label();
}

inline std::string base_class_name(BaseKaryotype base) {
  switch (base) {
    case BaseKaryotype::K46XX: return "k46_XX";
    case BaseKaryotype::K46XY: return "k46_XY";
    default: return "k46_XN";
  }
}

/// The fixed (non-band, non-corpus) class inventory.
inline const std::vector<std::string>& skeleton_classes() {
  static const std::vector<std::string> classes = [] {
    std::vector<std::string> out = {
        "Karyotype", "ISCNExampleKaryotype", "NamedKaryotype",
        "k46_XX", "k46_XY", "k46_XN",
        "MaleKaryotype", "FemaleKaryotype",
        "Event", "ChromosomeBand",
        "HumanChromosome", "HumanAutosome", "HumanSexChromosome",
    };
    for (EventKind kind : kAllEventKinds) out.push_back(event_kind_name(kind));
    for (int n = 1; n <= 22; ++n) out.push_back("HumanChromosome" + std::to_string(n));
    out.push_back("HumanChromosomeX");
    out.push_back("HumanChromosomeY");
    return out;
  }();
  return classes;
}

inline std::size_t skeleton_class_count() { return skeleton_classes().size(); }

inline const std::vector<std::string>& skeleton_properties() {
  static const std::vector<std::string> properties = {
      "derivedFrom", "hasEvent", "hasBreakPoint", "isBandOf"};
  return properties;
}

/// An event-axiom template: `exactly n hasEvent (Kind and hasBreakPoint some
/// B1 ...)` awaiting multiplicity and breakpoint arguments.
struct AxiomPattern {
  std::string name;
  EventKind kind;
};

inline AxiomPattern pattern_for(EventKind kind) {
  std::string name = event_kind_name(kind);
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return AxiomPattern{std::move(name), kind};
}

/// Expands a pattern for one event into a functional-syntax class expression.
inline std::string expand_pattern(const AxiomPattern& pattern, const AbnormalityEvent& event) {
  if (pattern.kind != event.kind) {
    throw Error("pattern '" + pattern.name + "' does not match event kind " +
                event_kind_name(event.kind));
  }
  std::size_t bp_count = event.breakpoints.size();
  bool arity_ok = false;
  switch (event.kind) {
    case EventKind::Addition:
      arity_ok = (event.target && bp_count == 0) || (!event.target && bp_count == 1);
      break;
    case EventKind::Deletion:
      arity_ok = (event.target && bp_count == 0) ||
                 (!event.target && (bp_count == 1 || bp_count == 2));
      break;
    case EventKind::Fission:
      arity_ok = !event.target && bp_count == 1;
      break;
    case EventKind::Translocation:
      arity_ok = !event.target && bp_count == 2;
      break;
    case EventKind::Insertion:
    case EventKind::DirectInsertion:
    case EventKind::InverseInsertion:
      arity_ok = !event.target && bp_count == 3;
      break;
    default:  // duplication family, inversion, triplication, quadruplication
      arity_ok = !event.target && bp_count == 2;
      break;
  }
  if (!arity_ok) {
    throw Error("arity mismatch between pattern '" + pattern.name + "' and event");
  }

  std::string expression = "ObjectIntersectionOf(" + entity_iri(event_kind_name(event.kind));
  if (event.target) {
    expression += " ObjectSomeValuesFrom(" + entity_iri("hasBreakPoint") + " " +
                  entity_iri(chromosome_class_name(*event.target)) + ")";
  }
  for (const BandAddress& bp : event.breakpoints) {
    expression += " ObjectSomeValuesFrom(" + entity_iri("hasBreakPoint") + " " +
                  entity_iri(band_class_name(bp)) + ")";
  }
  expression += ")";
  return "ObjectExactCardinality(" + std::to_string(event.multiplicity) + " " +
         entity_iri("hasEvent") + " " + expression + ")";
}

/// Emits the whole model as OWL functional syntax: atlas band classes with
/// containment and isBandOf axioms, the event hierarchy, base karyotypes and
/// the male/female equivalences, and one pattern-expanded class per corpus
/// entry. Deterministic: declarations and axioms are emitted sorted.
inline void export_ontology(const BandAtlas& atlas, const Corpus& corpus, std::ostream& out) {
  std::vector<std::string> declarations;
  std::vector<std::string> axioms;

  for (const std::string& name : skeleton_classes()) {
    declarations.push_back("Declaration(Class(" + entity_iri(name) + "))");
  }
  for (const std::string& name : skeleton_properties()) {
    declarations.push_back("Declaration(ObjectProperty(" + entity_iri(name) + "))");
  }

  auto subclass = [&](const std::string& sub, const std::string& super) {
    axioms.push_back("SubClassOf(" + entity_iri(sub) + " " + entity_iri(super) + ")");
  };
  subclass("ISCNExampleKaryotype", "Karyotype");
  subclass("NamedKaryotype", "Karyotype");
  subclass("MaleKaryotype", "NamedKaryotype");
  subclass("FemaleKaryotype", "NamedKaryotype");
  subclass("k46_XX", "Karyotype");
  subclass("k46_XY", "Karyotype");
  subclass("k46_XN", "Karyotype");
  for (const char* sex : {"Female", "Male"}) {
    std::string base = sex == std::string("Female") ? "k46_XX" : "k46_XY";
    axioms.push_back("EquivalentClasses(" + entity_iri(std::string(sex) + "Karyotype") +
                     " ObjectUnionOf(" + entity_iri(base) + " ObjectSomeValuesFrom(" +
                     entity_iri("derivedFrom") + " " + entity_iri(base) + ")))");
  }

  for (EventKind kind : kAllEventKinds) {
    std::string parent = "Event";
    if (kind == EventKind::DirectDuplication || kind == EventKind::InverseDuplication) {
      parent = "Duplication";
    }
    if (kind == EventKind::DirectInsertion || kind == EventKind::InverseInsertion) {
      parent = "Insertion";
    }
    subclass(event_kind_name(kind), parent);
  }

  subclass("HumanAutosome", "HumanChromosome");
  subclass("HumanSexChromosome", "HumanChromosome");
  for (int n = 1; n <= 22; ++n) {
    subclass("HumanChromosome" + std::to_string(n), "HumanAutosome");
  }
  subclass("HumanChromosomeX", "HumanSexChromosome");
  subclass("HumanChromosomeY", "HumanSexChromosome");

  // One class per atlas band, containment following the band forest.
  for (const auto& [text, info] : atlas.bands()) {
    std::string name = band_class_name(info.address);
    declarations.push_back("Declaration(Class(" + entity_iri(name) + "))");
    std::string parent = info.parent
                             ? band_class_name(atlas.bands().at(*info.parent).address)
                             : "ChromosomeBand";
    subclass(name, parent);
    axioms.push_back("SubClassOf(" + entity_iri(name) + " ObjectSomeValuesFrom(" +
                     entity_iri("isBandOf") + " " +
                     entity_iri(chromosome_class_name(info.address.chromosome)) + "))");
  }

  // Whole-arm breakpoints are representable in events but are not atlas
  // bands; declare their classes on demand.
  std::set<std::string> extra_bands;

  for (const CorpusEntry& entry : corpus.entries()) {
    if (!is_safe_name(entry.name.text)) {
      throw Error("corpus entry has unusable name: " + entry.name.text);
    }
    const std::string& name = entry.name.text;
    declarations.push_back("Declaration(Class(" + entity_iri(name) + "))");
    subclass(name, "ISCNExampleKaryotype");
    axioms.push_back("SubClassOf(" + entity_iri(name) + " ObjectSomeValuesFrom(" +
                     entity_iri("derivedFrom") + " " +
                     entity_iri(base_class_name(entry.karyotype.base)) + "))");
    for (const AbnormalityEvent& event : entry.karyotype.events) {
      axioms.push_back("SubClassOf(" + entity_iri(name) + " " +
                       expand_pattern(pattern_for(event.kind), event) + ")");
      for (const BandAddress& bp : event.breakpoints) {
        if (!atlas.has_band(bp)) extra_bands.insert(band_class_name(bp));
      }
    }
  }
  for (const std::string& name : extra_bands) {
    declarations.push_back("Declaration(Class(" + entity_iri(name) + "))");
    subclass(name, "ChromosomeBand");
  }

  std::sort(declarations.begin(), declarations.end());
  std::sort(axioms.begin(), axioms.end());

  out << "Ontology(<" << kOntologyIri << ">\n";
  for (const std::string& line : declarations) out << line << "\n";
  for (const std::string& line : axioms) out << line << "\n";
  out << ")\n";
  if (!out) {
    throw Error("ontology export failed: output stream in error state");
  }
}

inline std::string export_ontology_string(const BandAtlas& atlas, const Corpus& corpus) {
  std::ostringstream out;
  export_ontology(atlas, corpus, out);
  return out.str();
}

}  // namespace karyograph

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "karyograph/band_atlas.hpp"
#include "karyograph/bands.hpp"
#include "karyograph/errors.hpp"

namespace karyograph {

/// The normal karyotype an observed karyotype is described against.
enum class BaseKaryotype { K46XX, K46XY, K46XN };

inline std::string base_label(BaseKaryotype base) {
  switch (base) {
    case BaseKaryotype::K46XX: return "46,XX";
    case BaseKaryotype::K46XY: return "46,XY";
    default: return "46,XN";
  }
}

/// Sex chromosomes of a base karyotype, X first.
inline std::vector<ChromosomeId> base_sex_complement(BaseKaryotype base) {
  switch (base) {
    case BaseKaryotype::K46XX: return {ChromosomeId::x(), ChromosomeId::x()};
    case BaseKaryotype::K46XY: return {ChromosomeId::x(), ChromosomeId::y()};
    default: return {ChromosomeId::x(), ChromosomeId::unknown_sex()};
  }
}

enum class SexClass { Male, Female, Undetermined };

inline std::string sex_label(SexClass sex) {
  switch (sex) {
    case SexClass::Male: return "Male";
    case SexClass::Female: return "Female";
    default: return "Undetermined";
  }
}

/// The thirteen change-event kinds.
enum class EventKind {
  Addition,
  Deletion,
  Duplication,
  DirectDuplication,
  InverseDuplication,
  Fission,
  Insertion,
  DirectInsertion,
  InverseInsertion,
  Inversion,
  Quadruplication,
  Translocation,
  Triplication,
};

inline constexpr std::array<EventKind, 13> kAllEventKinds = {
    EventKind::Addition,        EventKind::Deletion,
    EventKind::Duplication,     EventKind::DirectDuplication,
    EventKind::InverseDuplication, EventKind::Fission,
    EventKind::Insertion,       EventKind::DirectInsertion,
    EventKind::InverseInsertion, EventKind::Inversion,
    EventKind::Quadruplication, EventKind::Translocation,
    EventKind::Triplication,
};

inline std::string event_kind_name(EventKind kind) {
  switch (kind) {
    case EventKind::Addition: return "Addition";
    case EventKind::Deletion: return "Deletion";
    case EventKind::Duplication: return "Duplication";
    case EventKind::DirectDuplication: return "DirectDuplication";
    case EventKind::InverseDuplication: return "InverseDuplication";
    case EventKind::Fission: return "Fission";
    case EventKind::Insertion: return "Insertion";
    case EventKind::DirectInsertion: return "DirectInsertion";
    case EventKind::InverseInsertion: return "InverseInsertion";
    case EventKind::Inversion: return "Inversion";
    case EventKind::Quadruplication: return "Quadruplication";
    case EventKind::Translocation: return "Translocation";
    default: return "Triplication";
  }
}

/// True iff `specific` is `general` or one of its listed specializations.
inline bool event_subsumes(EventKind general, EventKind specific) {
  if (general == specific) return true;
  if (general == EventKind::Duplication) {
    return specific == EventKind::DirectDuplication ||
           specific == EventKind::InverseDuplication;
  }
  if (general == EventKind::Insertion) {
    return specific == EventKind::DirectInsertion ||
           specific == EventKind::InverseInsertion;
  }
  return false;
}

enum class DeletionStyle { Terminal, Interstitial };

/// Whether the event was written as a term in the ISCN string or synthesized
/// from the count and sex designator (the 45,X sex-chromosome loss).
enum class EventOrigin { Explicit, Inferred };

/// One change from the base karyotype.
struct AbnormalityEvent {
  EventKind kind;
  int multiplicity = 1;
  std::optional<ChromosomeId> target;       // whole-chromosome events only
  std::vector<BandAddress> breakpoints;     // 0-3 entries, 1-2 chromosomes
  std::optional<DeletionStyle> deletion_style;
  EventOrigin origin = EventOrigin::Explicit;

  friend bool operator==(const AbnormalityEvent&, const AbnormalityEvent&) = default;

  /// Equality ignoring multiplicity, used when merging repeated terms.
  bool same_shape(const AbnormalityEvent& other) const {
    return kind == other.kind && target == other.target &&
           breakpoints == other.breakpoints &&
           deletion_style == other.deletion_style && origin == other.origin;
  }
};

/// A parsed karyotype: base reference plus ordered change events.
struct Karyotype {
  BaseKaryotype base;
  std::vector<AbnormalityEvent> events;
  std::string source_text;
};

/// Structural identity: base and events, ignoring the original text.
inline bool structurally_equal(const Karyotype& a, const Karyotype& b) {
  return a.base == b.base && a.events == b.events;
}

/// Sex by derivation history: the base alone decides, never the resulting
/// chromosome content. 45,X,-Y is Male; 45,X is Undetermined.
inline SexClass classify_sex(const Karyotype& k) {
  switch (k.base) {
    case BaseKaryotype::K46XX: return SexClass::Female;
    case BaseKaryotype::K46XY: return SexClass::Male;
    default: return SexClass::Undetermined;
  }
}

/// 46 plus whole-chromosome gains, minus whole-chromosome losses, plus one
/// per centric fission.
inline int chromosome_count(const Karyotype& k) {
  int count = 46;
  for (const AbnormalityEvent& event : k.events) {
    if (event.kind == EventKind::Fission) {
      count += event.multiplicity;
    } else if (event.target) {
      if (event.kind == EventKind::Addition) count += event.multiplicity;
      if (event.kind == EventKind::Deletion) count -= event.multiplicity;
    }
  }
  return count;
}

struct CopyNumberReport {
  BandAddress band;
  int baseline = 0;
  int observed = 0;
};

namespace detail {

/// Linear pter-to-qter coordinates of one chromosome at per-arm finest strata.
struct ChromosomeLayout {
  ChromosomeId chromosome;
  std::vector<BandAddress> linear;
  std::size_t p_size = 0;  // linear[0..p_size) is the reversed p arm

  static ChromosomeLayout build(const BandAtlas& atlas, ChromosomeId chrom) {
    ChromosomeLayout layout{chrom, atlas.finest_bands(chrom), 0};
    for (const BandAddress& band : layout.linear) {
      if (band.arm == Arm::P) ++layout.p_size;
    }
    return layout;
  }

  // Extent [lo, hi] of the positions intersecting `band`; nullopt when none.
  std::optional<std::pair<std::size_t, std::size_t>> block(const BandAddress& band) const {
    std::optional<std::size_t> lo, hi;
    for (std::size_t i = 0; i < linear.size(); ++i) {
      if (intersects(band, linear[i])) {
        if (!lo) lo = i;
        hi = i;
      }
    }
    if (!lo) return std::nullopt;
    return std::make_pair(*lo, *hi);
  }

  std::pair<std::size_t, std::size_t> arm_extent(Arm arm) const {
    if (arm == Arm::P) return {0, p_size == 0 ? 0 : p_size - 1};
    return {p_size, linear.empty() ? 0 : linear.size() - 1};
  }

  static bool intersects(const BandAddress& a, const BandAddress& b) {
    if (a.chromosome != b.chromosome || a.arm != b.arm) return false;
    if (a.is_whole_arm()) return true;
    if (a.is_telomere() || b.is_telomere()) return a.is_telomere() && b.is_telomere();
    auto prefix = [](const std::vector<std::uint8_t>& p, const std::vector<std::uint8_t>& f) {
      return p.size() <= f.size() && std::equal(p.begin(), p.end(), f.begin());
    };
    return prefix(a.digits, b.digits) || prefix(b.digits, a.digits);
  }
};

/// Per-band copy delta and affected flags one event induces on a layout.
struct EventFootprint {
  std::vector<int> delta;      // sized like layout.linear
  std::vector<bool> affected;  // idem
};

inline void mark(EventFootprint& fp, std::size_t lo, std::size_t hi, int delta) {
  for (std::size_t i = lo; i <= hi && i < fp.affected.size(); ++i) {
    fp.affected[i] = true;
    fp.delta[i] += delta;
  }
}

/// Copy-number weight of one extra event application, per contained band.
inline int kind_copy_delta(EventKind kind) {
  switch (kind) {
    case EventKind::Duplication:
    case EventKind::DirectDuplication:
    case EventKind::InverseDuplication:
      return 1;
    case EventKind::Triplication:
      return 2;
    case EventKind::Quadruplication:
      return 3;
    default:
      return 0;
  }
}

/// Applies one event to the layout of `layout.chromosome`. Breakpoints on
/// other chromosomes are ignored here; callers visit every chromosome the
/// event references.
inline EventFootprint event_footprint(const ChromosomeLayout& layout,
                                      const AbnormalityEvent& event) {
  EventFootprint fp;
  fp.delta.assign(layout.linear.size(), 0);
  fp.affected.assign(layout.linear.size(), false);
  if (layout.linear.empty()) return fp;
  const int n = event.multiplicity;

  if (event.target) {
    if (*event.target == layout.chromosome && event.target->is_unknown_sex() == false) {
      int delta = 0;
      if (event.kind == EventKind::Addition) delta = n;
      if (event.kind == EventKind::Deletion) delta = -n;
      mark(fp, 0, layout.linear.size() - 1, delta);
    }
    return fp;
  }

  std::vector<const BandAddress*> local;
  for (const BandAddress& bp : event.breakpoints) {
    if (bp.chromosome == layout.chromosome) local.push_back(&bp);
  }
  if (local.empty()) return fp;

  auto block_of = [&](const BandAddress& bp) {
    auto b = layout.block(bp);
    if (!b) {
      throw UnknownBandError("breakpoint " + bp.text() + " has no finest-stratum extent");
    }
    return *b;
  };

  switch (event.kind) {
    case EventKind::Deletion: {
      if (event.deletion_style == DeletionStyle::Terminal) {
        auto [lo, hi] = block_of(*local[0]);
        auto [arm_lo, arm_hi] = layout.arm_extent(local[0]->arm);
        if (local[0]->arm == Arm::P) {
          mark(fp, arm_lo, hi, -n);  // distal on p runs toward pter at index 0
        } else {
          mark(fp, lo, arm_hi, -n);
        }
      } else {
        auto a = block_of(*local[0]);
        auto b = block_of(*local[1]);
        mark(fp, std::min(a.first, b.first), std::max(a.second, b.second), -n);
      }
      break;
    }
    case EventKind::Addition: {
      // Unknown material replaces everything distal to the breakpoint; the
      // breakpoint band itself stays and is merely affected.
      auto [lo, hi] = block_of(*local[0]);
      auto [arm_lo, arm_hi] = layout.arm_extent(local[0]->arm);
      mark(fp, lo, hi, 0);
      if (local[0]->arm == Arm::P) {
        if (lo > arm_lo) mark(fp, arm_lo, lo - 1, -n);
      } else {
        if (hi < arm_hi) mark(fp, hi + 1, arm_hi, -n);
      }
      break;
    }
    case EventKind::Duplication:
    case EventKind::DirectDuplication:
    case EventKind::InverseDuplication:
    case EventKind::Triplication:
    case EventKind::Quadruplication:
    case EventKind::Inversion: {
      auto a = block_of(*local[0]);
      auto b = block_of(*local[1]);
      mark(fp, std::min(a.first, b.first), std::max(a.second, b.second),
           n * kind_copy_delta(event.kind));
      break;
    }
    case EventKind::Translocation: {
      for (const BandAddress* bp : local) {
        auto [lo, hi] = block_of(*bp);
        mark(fp, lo, hi, 0);
      }
      break;
    }
    case EventKind::Insertion:
    case EventKind::DirectInsertion:
    case EventKind::InverseInsertion: {
      // breakpoints[0] is the receptor, [1] and [2] bound the donor segment.
      if (event.breakpoints[0].chromosome == layout.chromosome) {
        auto [lo, hi] = block_of(event.breakpoints[0]);
        mark(fp, lo, hi, 0);
      }
      if (event.breakpoints.size() >= 3 &&
          event.breakpoints[1].chromosome == layout.chromosome) {
        auto a = block_of(event.breakpoints[1]);
        auto b = block_of(event.breakpoints[2]);
        mark(fp, std::min(a.first, b.first), std::max(a.second, b.second), 0);
      }
      break;
    }
    case EventKind::Fission: {
      // Centric fission touches both centromere faces regardless of which
      // face the string names.
      for (std::size_t i = 0; i < layout.linear.size(); ++i) {
        if (layout.linear[i].is_centromere()) mark(fp, i, i, 0);
      }
      break;
    }
  }
  return fp;
}

/// Baseline copies of a chromosome in the base karyotype. Sex-chromosome
/// queries under 46,XN are unanswerable: the unknown chromosome may or may
/// not carry the band.
inline int baseline_copies(BaseKaryotype base, ChromosomeId chrom) {
  if (chrom.is_autosome()) return 2;
  if (base == BaseKaryotype::K46XN) {
    throw UndeterminedBaselineError(
        "baseline for " + chrom.label() +
        " bands is undetermined under base 46,XN");
  }
  auto complement = base_sex_complement(base);
  return static_cast<int>(std::count(complement.begin(), complement.end(), chrom));
}

}  // namespace detail

/// Copy number of `band` under `k`: baseline from the base karyotype, then
/// each event's per-band delta. A band's observed count is the number of
/// complete copies, i.e. the minimum over its finest-stratum descendants.
inline CopyNumberReport copy_number(const Karyotype& k, const BandAddress& band,
                                    const BandAtlas& atlas) {
  const BandAtlas::BandInfo& known = atlas.info(band);
  int baseline = detail::baseline_copies(k.base, band.chromosome);

  auto layout = detail::ChromosomeLayout::build(atlas, band.chromosome);
  std::vector<int> total(layout.linear.size(), 0);
  for (const AbnormalityEvent& event : k.events) {
    auto fp = detail::event_footprint(layout, event);
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += fp.delta[i];
  }

  std::optional<int> min_delta;
  for (std::size_t i = 0; i < layout.linear.size(); ++i) {
    if (detail::ChromosomeLayout::intersects(known.address, layout.linear[i])) {
      if (!min_delta || total[i] < *min_delta) min_delta = total[i];
    }
  }
  int observed = baseline + (min_delta ? *min_delta : 0);
  if (observed < 0) observed = 0;
  return CopyNumberReport{known.address, baseline, observed};
}

/// Every finest-stratum band an event of `k` touches: all bands of a
/// whole-chromosome target, breakpoint bands, and the interval between
/// same-chromosome breakpoint pairs. Balanced events contribute their spans
/// even though copy number is unchanged.
inline std::set<BandAddress> affected_bands(const Karyotype& k, const BandAtlas& atlas) {
  std::set<BandAddress> out;
  std::set<ChromosomeId> touched;
  for (const AbnormalityEvent& event : k.events) {
    if (event.target && !event.target->is_unknown_sex()) touched.insert(*event.target);
    for (const BandAddress& bp : event.breakpoints) touched.insert(bp.chromosome);
  }
  for (ChromosomeId chrom : touched) {
    auto layout = detail::ChromosomeLayout::build(atlas, chrom);
    for (const AbnormalityEvent& event : k.events) {
      auto fp = detail::event_footprint(layout, event);
      for (std::size_t i = 0; i < layout.linear.size(); ++i) {
        if (fp.affected[i]) out.insert(layout.linear[i]);
      }
    }
  }
  return out;
}

}  // namespace karyograph
